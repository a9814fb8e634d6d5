"""Indexed vector sequences and (analysis, synthesis) pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, IndexOutOfRange, InvalidSequence
from .linalg import DEFAULT_TOL, dtype_for, field_of, numerical_rank

PERIODIC = "periodic"
EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class VectorSequence:
    """A sequence ``f_0, f_1, ...`` built from a finite list of generators.

    With ``extension="periodic"`` the term at ``n`` is ``generators[n % len]``;
    with ``extension="explicit"`` only the first ``len`` terms exist.
    ``generators`` is stored as a read-only ``(len, dim)`` array.
    """

    generators: np.ndarray
    extension: str = PERIODIC

    def __post_init__(self):
        g = np.asarray(self.generators)
        if g.ndim != 2 or g.shape[0] == 0 or g.shape[1] == 0:
            raise InvalidSequence(f"generators must be a non-empty (count, dim) array, got {g.shape}")
        if self.extension not in (PERIODIC, EXPLICIT):
            raise InvalidSequence(f"unknown extension {self.extension!r}")
        g = np.array(g, dtype=dtype_for(field_of(g)))
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)

    @classmethod
    def periodic(cls, vectors) -> "VectorSequence":
        return cls(np.asarray(vectors), PERIODIC)

    @classmethod
    def explicit(cls, vectors) -> "VectorSequence":
        return cls(np.asarray(vectors), EXPLICIT)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def field(self) -> str:
        return field_of(self.generators)

    @property
    def is_periodic(self) -> bool:
        return self.extension == PERIODIC

    def __len__(self):
        return self.generators.shape[0]

    def term_at(self, n: int) -> np.ndarray:
        if n < 0:
            raise IndexOutOfRange(f"negative index {n}")
        if self.is_periodic:
            return self.generators[n % len(self)]
        if n >= len(self):
            raise IndexOutOfRange(f"index {n} beyond explicit sequence of length {len(self)}")
        return self.generators[n]

    def terms(self, count: int) -> np.ndarray:
        """First ``count`` terms stacked as rows."""
        if count < 1:
            raise ValueError("count must be >= 1")
        if self.is_periodic:
            idx = np.arange(count) % len(self)
            return self.generators[idx]
        if count > len(self):
            raise IndexOutOfRange(f"requested {count} terms of explicit sequence of length {len(self)}")
        return self.generators[:count]

    def map(self, op: np.ndarray) -> "VectorSequence":
        """Apply an operator to every generator, keeping the extension."""
        op = np.asarray(op)
        return VectorSequence(self.generators @ op.T, self.extension)

    def __eq__(self, other):
        if not isinstance(other, VectorSequence):
            return NotImplemented
        return (
            self.extension == other.extension
            and self.generators.shape == other.generators.shape
            and bool(np.array_equal(self.generators, other.generators))
        )

    __hash__ = None


def term_at(seq: VectorSequence, n: int) -> np.ndarray:
    return seq.term_at(n)


@dataclass(frozen=True, eq=False)
class SequencePair:
    """Ordered pair: ``analysis`` supplies inner products, ``synthesis`` updates."""

    analysis: VectorSequence
    synthesis: VectorSequence

    def __post_init__(self):
        a, s = self.analysis, self.synthesis
        if a.dim != s.dim:
            raise DimensionMismatch(f"pair members differ in dimension: {a.dim} vs {s.dim}")
        if a.field != s.field:
            raise FieldMismatch(f"pair members differ in field: {a.field} vs {s.field}")
        if a.extension != s.extension:
            raise InvalidSequence("pair members must share an extension policy")
        if len(a) != len(s):
            raise InvalidSequence(f"pair members differ in generator count: {len(a)} vs {len(s)}")

    @classmethod
    def from_arrays(cls, phi, psi, extension: str = PERIODIC) -> "SequencePair":
        return cls(VectorSequence(np.asarray(phi), extension), VectorSequence(np.asarray(psi), extension))

    @property
    def phi(self) -> VectorSequence:
        return self.analysis

    @property
    def psi(self) -> VectorSequence:
        return self.synthesis

    @property
    def dim(self) -> int:
        return self.analysis.dim

    @property
    def field(self) -> str:
        return self.analysis.field

    @property
    def extension(self) -> str:
        return self.analysis.extension

    @property
    def is_periodic(self) -> bool:
        return self.analysis.is_periodic

    def __len__(self):
        return len(self.analysis)

    def reversed(self) -> "SequencePair":
        return SequencePair(self.synthesis, self.analysis)

    def __eq__(self, other):
        if not isinstance(other, SequencePair):
            return NotImplemented
        return self.analysis == other.analysis and self.synthesis == other.synthesis

    __hash__ = None


def self_pair(e: VectorSequence) -> SequencePair:
    return SequencePair(e, e)


@dataclass(frozen=True)
class ValidationReport:
    normalization_ok: bool
    normalization_deviation: float
    unit_norms_ok: bool | None
    unit_norm_deviation: float | None
    linearly_dense: bool
    analysis_rank: int
    synthesis_rank: int
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.normalization_ok and self.linearly_dense and self.unit_norms_ok is not False


CLASSICAL = "classical"
DUAL = "dual"


def validate(pair: SequencePair, mode: str = DUAL, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the standing hypotheses of the (dual) Kaczmarz iteration.

    Report-only: violations become flags and warnings, never exceptions.
    Checks run over one generator period (or over the whole explicit list).
    """
    if mode not in (CLASSICAL, DUAL):
        raise ValueError(f"unknown mode {mode!r}")
    phi = pair.analysis.generators
    psi = pair.synthesis.generators
    warnings = []

    products = np.einsum("nd,nd->n", phi, psi.conj())
    norm_dev = float(np.max(np.abs(products - 1.0)))
    norm_ok = norm_dev <= tol
    if not norm_ok:
        worst = int(np.argmax(np.abs(products - 1.0)))
        warnings.append(f"<phi_n, psi_n> != 1: worst at n={worst}, deviation {norm_dev:.3g}")

    unit_ok = None
    unit_dev = None
    if mode == CLASSICAL:
        norms = np.linalg.norm(phi, axis=1)
        if pair.analysis is not pair.synthesis:
            norms = np.concatenate([norms, np.linalg.norm(psi, axis=1)])
        unit_dev = float(np.max(np.abs(norms - 1.0)))
        unit_ok = unit_dev <= tol
        if not unit_ok:
            warnings.append(f"non-unit vectors: worst norm deviation {unit_dev:.3g}")

    rank_phi = numerical_rank(phi.T, tol)
    rank_psi = numerical_rank(psi.T, tol)
    dense = rank_phi == pair.dim and rank_psi == pair.dim
    if not dense:
        warnings.append(f"not linearly dense: ranks {rank_phi}, {rank_psi} < dim {pair.dim}")

    return ValidationReport(norm_ok, norm_dev, unit_ok, unit_dev, dense, rank_phi, rank_psi, warnings)


def validate_sequence(e: VectorSequence, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Classical-mode validation of a single sequence."""
    return validate(self_pair(e), CLASSICAL, tol)
