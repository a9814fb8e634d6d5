"""Classical Kaczmarz iteration and its diagnostics.

The iteration, the auxiliary recursion and the triangular sections are
written once for a general (analysis, synthesis) pair; the classical case is
the pair ``(e, e)``. :mod:`kaczmarz.dual` reuses the private helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPeriodic
from .frames import frame_bounds
from .linalg import DEFAULT_TOL, check_compatible, orth
from .sequences import EXPLICIT, VectorSequence, validate_sequence

# A period map with spectral radius within this margin of 1 is not effective.
RADIUS_MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Iterates ``x_0 .. x_{steps-1}`` of a Kaczmarz-type run.

    ``residual_norms[n]`` is the norm of the data misfit
    ``(<x - x_n, f_k>)_k`` over the measurement generators ``f_k`` (one
    period, or the whole explicit list).
    """

    iterates: np.ndarray
    target: np.ndarray
    tol: float
    residual_norms: np.ndarray
    error_norms: np.ndarray = field(init=False)

    def __post_init__(self):
        errs = self.target[None, :] - self.iterates
        object.__setattr__(self, "error_norms", np.linalg.norm(errs, axis=1))

    @property
    def steps(self) -> int:
        return self.iterates.shape[0]

    @property
    def errors(self) -> np.ndarray:
        """``eps_n = x - x_n`` as rows."""
        return self.target[None, :] - self.iterates

    @property
    def final_error(self) -> float:
        return float(self.error_norms[-1])

    @property
    def converged(self) -> bool:
        return self.final_error <= self.tol


def _iterate(phi: np.ndarray, psi: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``x_n = x_{n-1} + <x - x_{n-1}, phi_n> psi_n`` starting from ``x_{-1} = 0``."""
    steps, dim = phi.shape
    out = np.empty((steps, dim), dtype=np.result_type(phi, psi, x))
    xn = np.zeros(dim, dtype=out.dtype)
    for n in range(steps):
        xn = xn + np.vdot(phi[n], x - xn) * psi[n]
        out[n] = xn
    return out


def _trace(phi_seq: VectorSequence, psi_seq: VectorSequence, x, steps: int, tol: float) -> IterationTrace:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = np.asarray(x)
    check_compatible(x, phi_seq.generators)
    check_compatible(x, psi_seq.generators)
    if x.ndim != 1:
        raise ValueError("x must be a vector")
    iterates = _iterate(phi_seq.terms(steps), psi_seq.terms(steps), x)
    misfit = (x[None, :] - iterates) @ phi_seq.generators.conj().T
    return IterationTrace(iterates, x.copy(), tol, np.linalg.norm(misfit, axis=1))


def run_classic(e: VectorSequence, x, steps: int, tol: float = DEFAULT_TOL) -> IterationTrace:
    """Kaczmarz iterates ``x_0 = <x, e_0> e_0``, ``x_n = x_{n-1} + <x - x_{n-1}, e_n> e_n``."""
    return _trace(e, e, x, steps, tol)


def _aux_recursion(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``g_0 = a_0``, ``g_n = a_n - sum_{k<n} <a_n, b_k> g_k``."""
    coeff = a @ b.conj().T  # (n, k) -> <a_n, b_k>
    g = np.empty_like(a, dtype=np.result_type(a, b))
    for n in range(a.shape[0]):
        g[n] = a[n] - coeff[n, :n] @ g[:n]
    return g


def auxiliary_h(e: VectorSequence, K: int) -> VectorSequence:
    """First ``K`` terms of the auxiliary sequence ``h`` of ``e``."""
    t = e.terms(K)
    return VectorSequence(_aux_recursion(t, t), EXPLICIT)


@dataclass(frozen=True)
class TriangularSection:
    """Leading ``K x K`` block of ``I + M`` (or ``I + N``) and of its inverse."""

    lower_block: np.ndarray
    inverse_block: np.ndarray

    @property
    def size(self) -> int:
        return self.lower_block.shape[0]

    @property
    def strict_lower(self) -> np.ndarray:
        """``M`` (or ``N``)."""
        return self.lower_block - np.eye(self.size)

    @property
    def strict_inverse(self) -> np.ndarray:
        """``U`` (or ``V``)."""
        return self.inverse_block - np.eye(self.size)


def _triangular_section(a: np.ndarray, b: np.ndarray) -> TriangularSection:
    K = a.shape[0]
    coeff = a @ b.conj().T
    lower = np.tril(coeff, -1) + np.eye(K, dtype=coeff.dtype)
    # Leading blocks of a unit-lower-triangular inverse are the inverses of the
    # leading blocks, so the finite section is exact.
    inv = solve_triangular(lower, np.eye(K, dtype=coeff.dtype), lower=True, unit_diagonal=True)
    inv = np.tril(inv)
    np.fill_diagonal(inv, 1.0)
    return TriangularSection(lower, inv)


def triangular_M_U(e: VectorSequence, K: int) -> TriangularSection:
    t = e.terms(K)
    return _triangular_section(t, t)


def _period_map(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """``prod_{k=m-1..0} (I - psi_k phi_k^*)``; the first generator acts first."""
    dim = phi.shape[1]
    eye = np.eye(dim, dtype=np.result_type(phi, psi))
    p = eye.copy()
    for k in range(phi.shape[0]):
        p = (eye - np.outer(psi[k], phi[k].conj())) @ p
    return p


def _reachable_radius(p: np.ndarray, seed: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[float, int]:
    """Spectral radius of ``p`` on the smallest invariant subspace containing range(seed).

    Returns ``(radius, subspace_dimension)``.
    """
    q = orth(seed, tol)
    while q.shape[1] > 0:
        grown = orth(np.hstack([q, p @ q]), tol)
        if grown.shape[1] == q.shape[1]:
            break
        q = grown
    if q.shape[1] == 0:
        return 0.0, 0
    restricted = q.conj().T @ p @ q
    return float(np.max(np.abs(np.linalg.eigvals(restricted)))), q.shape[1]


def _pair_radius(phi: np.ndarray, psi: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    p = _period_map(phi, psi)
    dim = phi.shape[1]
    first = np.eye(dim) - np.outer(psi[0], phi[0].conj())
    return _reachable_radius(p, first, tol)[0]


@dataclass(frozen=True)
class EffectivenessVerdict:
    effective: bool
    period_map_radius: float
    reliable: bool
    warnings: list[str] = field(default_factory=list)


def periodic_effectiveness_oracle(e: VectorSequence, tol: float = DEFAULT_TOL) -> EffectivenessVerdict:
    """Decide effectiveness of a periodic sequence from its one-period error map.

    The verdict is marked unreliable when ``e`` fails classical validation
    (non-unit vectors or not linearly dense); a sequence that is not dense
    is never effective.
    """
    if not e.is_periodic:
        raise NotPeriodic("the spectral oracle needs a periodic sequence")
    report = validate_sequence(e, tol)
    g = e.generators
    radius = _pair_radius(g, g, tol)
    effective = radius < 1.0 - RADIUS_MARGIN and report.linearly_dense
    return EffectivenessVerdict(effective, radius, report.ok, list(report.warnings))


@dataclass(frozen=True)
class AlmostEffectiveBound:
    lower: float
    b_bound: float
    almost_effective: bool
    section: int

    @property
    def A(self):
        return self.lower


def almost_effective_bound(e: VectorSequence, K: int, tol: float = DEFAULT_TOL) -> AlmostEffectiveBound:
    """Section-``K`` estimate of the almost-effectiveness constant.

    ``lower`` is the lower frame bound ``A`` of the first ``K`` auxiliary
    vectors; the limiting squared error is then at most ``(1 - A) ||x||^2``.
    """
    fb = frame_bounds(auxiliary_h(e, K), K, tol)
    a = fb.lower
    return AlmostEffectiveBound(a, 1.0 - a, a > tol, K)
