"""Constructing pairs from operators and sequences, and the augmented iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classic import IterationTrace, auxiliary_h, run_classic
from .errors import (
    IdentityViolation,
    InvalidSequence,
    NoPositiveOperator,
    NotAlmostEffective,
    SingularOperator,
    SpanDeficiency,
)
from .frames import PHI_PSI, frame_operator_partial, grammian_positive, mixed_grammian
from .linalg import (
    DEFAULT_TOL,
    as_operator,
    check_compatible,
    hermitian_defect,
    hermitian_part,
    numerical_rank,
    positive_sqrt,
    pseudo_inverse,
    scaled_tol,
)
from .sequences import EXPLICIT, SequencePair, VectorSequence, validate_sequence

IDENTITY_TOL = 1e-10


def _checked_inverse(t: np.ndarray, tol: float) -> np.ndarray:
    s = np.linalg.svd(t, compute_uv=False)
    if s[-1] <= tol * (1.0 + s[0]):
        raise SingularOperator(f"operator is singular (smallest singular value {s[-1]:.3e})")
    return np.linalg.inv(t)


def transform_pair(pair: SequencePair, T, tol: float = DEFAULT_TOL) -> SequencePair:
    """``(phi_n, psi_n) -> (T phi_n, (T^{-1})^* psi_n)``.

    Effectiveness of the pair is invariant under this map, and
    ``<phi_n, psi_n>`` is preserved.
    """
    t = as_operator(T)
    check_compatible(t[0], pair.analysis.generators)
    t_inv = _checked_inverse(t, tol)
    return SequencePair(pair.analysis.map(t), pair.synthesis.map(t_inv.conj().T))


def pair_from_effective(e: VectorSequence, T, tol: float = DEFAULT_TOL) -> SequencePair:
    """``(T e_n, (T^{-1})^* e_n)``; symmetric effective exactly when ``e`` is effective."""
    report = validate_sequence(e, tol)
    if not report.ok:
        raise InvalidSequence("; ".join(report.warnings))
    return transform_pair(SequencePair(e, e), T, tol)


def lift_half_power(phi: VectorSequence, T, tol: float = DEFAULT_TOL) -> VectorSequence:
    """``e_n = T^{1/2} phi_n`` for a positive ``T``."""
    root = positive_sqrt(as_operator(T), tol)
    check_compatible(root[0], phi.generators)
    return phi.map(root)


@dataclass(frozen=True)
class RecoveredOperator:
    T: np.ndarray
    hermitian_defect: float
    psd_min_eig: float
    mapping_defect: float
    section: int

    @property
    def invertible(self) -> bool:
        return self.psd_min_eig > 0.0


def recover_T(pair: SequencePair, M: int, tol: float = DEFAULT_TOL) -> RecoveredOperator:
    """Find the positive ``T`` with ``T phi_n = psi_n`` from the first ``M`` terms.

    Existence is decided by positivity of the mixed Grammian with entries
    ``<phi_m, psi_n>``. The operator itself is the least-deviation solution
    ``Psi Phi^+`` of the synthesis matrices, which is exact when one exists.
    Raises :class:`NoPositiveOperator` when no such operator exists and
    :class:`SpanDeficiency` when the section does not span.
    """
    if M < pair.dim:
        raise SpanDeficiency(f"section M={M} is smaller than the dimension {pair.dim}")
    phi = pair.analysis.terms(M).T  # dim x M
    psi = pair.synthesis.terms(M).T
    for name, mat in (("analysis", phi), ("synthesis", psi)):
        rank = numerical_rank(mat, tol)
        if rank < pair.dim:
            raise SpanDeficiency(f"first {M} {name} vectors span only {rank} of {pair.dim} dimensions")

    verdict = grammian_positive(mixed_grammian(pair, M, PHI_PSI), tol)
    if not verdict.positive:
        raise NoPositiveOperator(
            f"mixed Grammian is not positive (leading block of order {verdict.failing_order} fails)",
            verdict,
        )

    t = psi @ pseudo_inverse(phi, tol)
    mapping = float(np.max(np.linalg.norm(t @ phi - psi, axis=0)))
    herm = hermitian_defect(t)
    scale = scaled_tol(t, tol) * max(1.0, float(np.max(np.linalg.norm(phi, axis=0))))
    if mapping > scale:
        raise NoPositiveOperator(f"no operator maps phi_n to psi_n (defect {mapping:.3e})", verdict)
    if herm > scaled_tol(t, tol):
        raise NoPositiveOperator(f"relating operator is not Hermitian (defect {herm:.3e})", verdict)
    t = hermitian_part(t)
    lam = float(np.linalg.eigvalsh(t)[0])
    if lam < -scaled_tol(t, tol):
        raise NoPositiveOperator(f"relating operator is not positive (eigenvalue {lam:.3e})", verdict)
    return RecoveredOperator(t, herm, lam, mapping, M)


def synthesis_dual_from_almost_effective(e: VectorSequence, K: int, tol: float = DEFAULT_TOL) -> VectorSequence:
    """Reconstruction sequence ``psi_n = S^{-1} h_n`` for an almost effective ``e``.

    ``S`` is the frame operator of the first ``K`` auxiliary vectors, so
    ``x = sum_{n<K} <x, h_n> psi_n`` holds exactly at the section.
    """
    h = auxiliary_h(e, K)
    s = frame_operator_partial(h, K)
    lower = float(np.linalg.eigvalsh(s)[0])
    if lower <= tol:
        raise NotAlmostEffective(f"auxiliary lower frame bound {lower:.3e} at section {K} is not positive")
    return VectorSequence(np.linalg.solve(s, h.generators.T).T, EXPLICIT)


@dataclass(frozen=True, eq=False)
class AugmentedRun:
    classic_trace: IterationTrace
    augmented_trace: IterationTrace
    psi_used: VectorSequence
    identity_defect: float


def run_augmented(e: VectorSequence, psi: VectorSequence, x, steps: int, tol: float = DEFAULT_TOL) -> AugmentedRun:
    """Augmented dual Kaczmarz run.

    The classical iterates ``x_n`` are kept as a state variable and
    ``y_n = y_{n-1} + <x - x_{n-1}, e_n> psi_n`` with ``y_0 = <x, e_0> psi_0``.
    Every coefficient is checked against ``<x, h_n>``; a mismatch beyond
    ``1e-10 * max(1, ||x||)`` raises :class:`IdentityViolation`.
    """
    x = np.asarray(x)
    check_compatible(x, psi.generators)
    classic = run_classic(e, x, steps, tol)
    e_terms = e.terms(steps)
    psi_terms = psi.terms(steps)
    prev = np.vstack([np.zeros_like(classic.iterates[:1]), classic.iterates[:-1]])
    coeffs = np.einsum("nd,nd->n", x[None, :] - prev, e_terms.conj())

    h = auxiliary_h(e, steps).generators
    defect = float(np.max(np.abs(coeffs - h.conj() @ x)))
    if defect > IDENTITY_TOL * max(1.0, float(np.linalg.norm(x))):
        raise IdentityViolation(f"<x - x_(n-1), e_n> != <x, h_n> (defect {defect:.3e})")

    y = np.empty((steps, x.size), dtype=np.result_type(coeffs, psi_terms))
    yn = np.zeros(x.size, dtype=y.dtype)
    for n in range(steps):
        yn = yn + coeffs[n] * psi_terms[n]
        y[n] = yn
    misfit = (x[None, :] - y) @ e.generators.conj().T
    augmented = IterationTrace(y, x.copy(), tol, np.linalg.norm(misfit, axis=1))
    return AugmentedRun(classic, augmented, psi, defect)


def biorthogonal_pair(basis: VectorSequence, tol: float = DEFAULT_TOL) -> SequencePair:
    """Pair a basis with its biorthogonal dual, ``<phi_m, psi_n> = delta_{mn}``."""
    b = basis.generators
    if b.shape[0] != b.shape[1]:
        raise InvalidSequence(f"a basis of dimension {basis.dim} needs {basis.dim} generators, got {b.shape[0]}")
    s = np.linalg.svd(b, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise InvalidSequence("basis generators are linearly dependent")
    dual = np.linalg.inv(b).conj().T
    return SequencePair(basis, VectorSequence(dual, basis.extension))


def relating_operator(T) -> np.ndarray:
    """Positive operator relating the pair produced by :func:`pair_from_effective`.

    For ``(T e_n, (T^{-1})^* e_n)`` the synthesis vectors are
    ``(T T^*)^{-1}`` applied to the analysis vectors.
    """
    t = as_operator(T)
    return hermitian_part(np.linalg.inv(t @ t.conj().T))

