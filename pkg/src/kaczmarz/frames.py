"""Frame diagnostics at finite sections.

All quantities are computed on the first ``K`` (or ``M``) terms of a
sequence. For periodic sequences or sequences with geometrically decaying
tails the section is a faithful stand-in for the infinite object; the
``tail`` indicator on :class:`FrameBounds` helps judge that.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularOperator
from .linalg import DEFAULT_TOL, PsdVerdict, check_compatible, is_psd, op_norm
from .sequences import EXPLICIT, SequencePair, VectorSequence

# Grammian orientations: entry (m, n) is <psi_m, phi_n> or <phi_m, psi_n>.
PSI_PHI = "psi_phi"
PHI_PSI = "phi_psi"


def analysis_coeffs(seq: VectorSequence, x, K: int) -> np.ndarray:
    """``(<x, f_0>, ..., <x, f_{K-1}>)``."""
    x = np.asarray(x)
    check_compatible(x, seq.generators)
    return seq.terms(K).conj() @ x


def synthesis_apply(seq: VectorSequence, coeffs) -> np.ndarray:
    """``sum_n c_n f_n`` over as many terms as there are coefficients."""
    c = np.asarray(coeffs)
    if c.ndim != 1:
        raise DimensionMismatch("coefficients must be a 1-D array")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    return c @ seq.terms(c.size)


def frame_operator_partial(seq: VectorSequence, K: int) -> np.ndarray:
    """``S_K = sum_{n<K} f_n f_n^*``."""
    f = seq.terms(K)
    s = f.T @ f.conj()
    return 0.5 * (s + s.conj().T)


def _section_operator(f: np.ndarray) -> np.ndarray:
    s = f.T @ f.conj()
    return 0.5 * (s + s.conj().T)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    parseval: bool
    bessel: bool
    section: int
    tail: float

    @property
    def A(self):
        return self.lower

    @property
    def B(self):
        return self.upper


def frame_bounds(seq: VectorSequence, K: int, tol: float = DEFAULT_TOL) -> FrameBounds:
    """Optimal frame bounds of the first ``K`` terms.

    ``tail`` is ``||S_{2K} - S_K||``, clipped to the available terms for
    explicit sequences.
    """
    f = seq.terms(K)
    s = _section_operator(f)
    w = np.linalg.eigvalsh(s)
    lower = max(float(w[0]), 0.0)
    upper = float(w[-1])
    far = 2 * K if seq.is_periodic else min(2 * K, len(seq))
    if far > K:
        rest = seq.terms(far)[K:]
        tail = op_norm(_section_operator(rest))
    else:
        tail = 0.0
    parseval = abs(lower - 1.0) <= tol and abs(upper - 1.0) <= tol
    return FrameBounds(lower, upper, parseval, True, K, tail)


def canonical_dual(seq: VectorSequence, K: int, tol: float = DEFAULT_TOL) -> VectorSequence:
    """``S_K^{-1} f_n`` for ``n < K`` as an explicit sequence."""
    f = seq.terms(K)
    s = _section_operator(f)
    w = np.linalg.eigvalsh(s)
    if w[0] <= tol * max(1.0, w[-1]):
        raise SingularOperator(
            f"frame operator of the first {K} terms is singular (min eigenvalue {w[0]:.3e})"
        )
    dual = np.linalg.solve(s, f.T).T
    return VectorSequence(dual, EXPLICIT)


@dataclass(frozen=True)
class DualityReport:
    dual_pair: bool
    biorthogonal: bool
    dual_defect: float
    biorthogonality_defect: float

    @property
    def max_defect(self) -> float:
        return max(self.dual_defect, self.biorthogonality_defect)


def duality_check(f: VectorSequence, g: VectorSequence, K: int, tol: float = DEFAULT_TOL) -> DualityReport:
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    ft = f.terms(K)
    gt = g.terms(K)
    recon = gt.T @ ft.conj()
    dual_defect = op_norm(recon - np.eye(f.dim))
    cross = ft @ gt.conj().T  # (m, n) -> <f_m, g_n>
    bio_defect = float(np.max(np.abs(cross - np.eye(K))))
    return DualityReport(dual_defect <= tol, bio_defect <= tol, dual_defect, bio_defect)


@dataclass(frozen=True)
class GrammianSection:
    entries: np.ndarray
    orientation: str = PSI_PHI

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def transposed(self) -> "GrammianSection":
        other = PHI_PSI if self.orientation == PSI_PHI else PSI_PHI
        return GrammianSection(self.entries.conj().T, other)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "n", "re", "im"])
            for m in range(self.size):
                for n in range(self.size):
                    v = complex(self.entries[m, n])
                    w.writerow([m, n, repr(v.real), repr(v.imag)])


def mixed_grammian(pair: SequencePair, M: int, orientation: str = PSI_PHI) -> GrammianSection:
    """Leading ``M x M`` block of the mixed Grammian.

    ``orientation="psi_phi"`` gives entries ``<psi_m, phi_n>``;
    ``"phi_psi"`` gives ``<phi_m, psi_n>``, its conjugate transpose.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    phi = pair.analysis.terms(M)
    psi = pair.synthesis.terms(M)
    if orientation == PSI_PHI:
        g = psi @ phi.conj().T
    elif orientation == PHI_PSI:
        g = phi @ psi.conj().T
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return GrammianSection(g, orientation)


@dataclass(frozen=True)
class GrammianVerdict:
    positive: bool
    failing_order: int | None = None
    witness: np.ndarray | None = None
    min_eigenvalue: float | None = None

    def __bool__(self):
        return self.positive


def grammian_positive(section: GrammianSection, tol: float = DEFAULT_TOL) -> GrammianVerdict:
    """Positivity of every leading principal block.

    Returns the smallest failing order ``k`` together with a witness ``u`` of
    length ``k`` with ``Re <G_k u, u> < 0``.
    """
    g = section.entries
    lowest = None
    for k in range(1, section.size + 1):
        v: PsdVerdict = is_psd(g[:k, :k], tol)
        lowest = v.min_eigenvalue if lowest is None else min(lowest, v.min_eigenvalue)
        if not v.positive:
            return GrammianVerdict(False, k, v.witness, v.min_eigenvalue)
    return GrammianVerdict(True, None, None, lowest)

