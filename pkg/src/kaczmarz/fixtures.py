"""Concrete sequences and pairs: the worked examples plus seeded random generators."""

from __future__ import annotations

import numpy as np

from .linalg import COMPLEX, REAL
from .sequences import EXPLICIT, PERIODIC, SequencePair, VectorSequence

SQRT_HALF = np.sqrt(0.5)


def asymmetric_pair() -> SequencePair:
    """Periodic pair in R^2 that is effective but not effective when reversed."""
    phi = [[1.0, -1.0], [1.0, 1.0], [0.5, -0.5]]
    psi = [[1.0, 0.0], [1.0, 0.0], [1.5, -0.5]]
    return SequencePair.from_arrays(phi, psi, PERIODIC)


def nonpositive_grammian_pair() -> SequencePair:
    """Symmetric effective pair in R^2 whose mixed Grammian is not positive."""
    phi = [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    psi = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    return SequencePair.from_arrays(phi, psi, PERIODIC)


def negated_basis_pair(dim: int, extension: str = EXPLICIT) -> SequencePair:
    """``(delta_n, -delta_n)``: both members effective, the pair reproduces ``-x``."""
    eye = np.eye(dim)
    return SequencePair.from_arrays(eye, -eye, extension)


def standard_basis(dim: int, extension: str = PERIODIC, field: str = REAL) -> VectorSequence:
    dtype = np.complex128 if field == COMPLEX else np.float64
    return VectorSequence(np.eye(dim, dtype=dtype), extension)


def two_direction_sequence() -> VectorSequence:
    """``e_0 = (1, 0)``, ``e_1 = (1, 1)/sqrt(2)``, repeated; per-period contraction 1/2."""
    return VectorSequence.periodic([[1.0, 0.0], [SQRT_HALF, SQRT_HALF]])


def skew_basis() -> VectorSequence:
    return VectorSequence.periodic([[1.0, 0.0], [1.0, 1.0]])


def stalled_sequence(sin_angle: float = 0.6, length: int = 40) -> VectorSequence:
    """``(1, 0)`` followed by a single repeated direction at the given angle.

    The iteration stops improving after two steps. The auxiliary frame has
    lower bound ``sin_angle**2``, so the sequence is almost effective but not
    effective for ``0 < sin_angle < 1``.
    """
    cos_angle = np.sqrt(1.0 - sin_angle**2)
    rows = [[1.0, 0.0]] + [[cos_angle, sin_angle]] * (length - 1)
    return VectorSequence.explicit(rows)


def plane_sequence(alpha: float = np.pi / 4, periods: int = 60) -> VectorSequence:
    """Almost effective, not effective sequence in R^3.

    ``e_0 = (1, 0, 0)`` followed by ``periods`` sweeps through three unit
    vectors spanning the plane orthogonal to ``w = (cos a, sin a, 0)``. The
    error component along ``w`` left after the first step is never removed,
    so the limiting squared error is at most ``sin(a)^2 ||x||^2`` and the
    auxiliary lower frame bound tends to ``cos(a)^2``.
    """
    w = np.array([np.cos(alpha), np.sin(alpha), 0.0])
    u = np.array([-np.sin(alpha), np.cos(alpha), 0.0])
    v = np.array([0.0, 0.0, 1.0])
    sweep = [u, (u + 2 * v) / np.sqrt(5.0), (2 * u - v) / np.sqrt(5.0)]
    assert all(abs(s @ w) < 1e-15 for s in sweep)
    rows = [np.array([1.0, 0.0, 0.0])] + sweep * periods
    return VectorSequence.explicit(np.array(rows))


# ---------------------------------------------------------------- random


def _normal(rng: np.random.Generator, shape, field: str) -> np.ndarray:
    z = rng.standard_normal(shape)
    if field == COMPLEX:
        z = z + 1j * rng.standard_normal(shape)
    return z


def random_vector(rng, dim: int, field: str = REAL) -> np.ndarray:
    return _normal(rng, dim, field)


def random_unit_sequence(rng, dim: int, count: int, field: str = REAL, extension: str = PERIODIC) -> VectorSequence:
    z = _normal(rng, (count, dim), field)
    return VectorSequence(z / np.linalg.norm(z, axis=1, keepdims=True), extension)


def normalise_pair(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Rescale ``psi_n`` so that ``<phi_n, psi_n> = 1``."""
    products = np.einsum("nd,nd->n", phi, psi.conj())
    return psi / products.conj()[:, None]


def random_pair(rng, dim: int, count: int, field: str = REAL, extension: str = PERIODIC) -> SequencePair:
    """Random pair with ``<phi_n, psi_n> = 1`` and unit analysis vectors."""
    phi = random_unit_sequence(rng, dim, count, field, extension).generators
    psi = normalise_pair(phi, _normal(rng, (count, dim), field))
    return SequencePair.from_arrays(phi, psi, extension)


def random_orthonormal_basis(rng, dim: int, field: str = REAL) -> np.ndarray:
    q, r = np.linalg.qr(_normal(rng, (dim, dim), field))
    return (q * (np.diag(r) / np.abs(np.diag(r)))).T


def random_spd(rng, dim: int, cond: float = 10.0, field: str = REAL) -> np.ndarray:
    """Hermitian positive definite with eigenvalues spread log-uniformly in ``[1, cond]``."""
    q = random_orthonormal_basis(rng, dim, field).T
    w = np.exp(rng.uniform(0.0, np.log(cond), dim))
    w[0], w[-1] = 1.0, cond
    a = (q * w) @ q.conj().T
    return 0.5 * (a + a.conj().T)


def random_invertible(rng, dim: int, field: str = REAL, max_cond: float = 1e3) -> np.ndarray:
    while True:
        t = _normal(rng, (dim, dim), field)
        if np.linalg.cond(t) <= max_cond:
            return t


def random_symmetric_indefinite(rng, dim: int, field: str = REAL) -> np.ndarray:
    q = random_orthonormal_basis(rng, dim, field).T
    w = rng.uniform(0.5, 2.0, dim)
    w[rng.integers(dim)] *= -1.0
    a = (q * w) @ q.conj().T
    return 0.5 * (a + a.conj().T)
