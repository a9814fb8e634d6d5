"""Dense linear algebra kernel over the real or complex field.

Vectors and operators are plain numpy arrays: ``float64`` for the real field
and ``complex128`` for the complex field. Every function here is pure.

The inner product is linear in the first slot and conjugate-linear in the
second, ``<u, v> = sum(u * conj(v))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, NotHermitian, NotPositive

DEFAULT_TOL = 1e-10

REAL = "real"
COMPLEX = "complex"


def field_of(a) -> str:
    return COMPLEX if np.iscomplexobj(a) else REAL


def dtype_for(field: str):
    if field == REAL:
        return np.float64
    if field == COMPLEX:
        return np.complex128
    raise ValueError(f"unknown field {field!r}")


def as_vector(data, field: str | None = None) -> np.ndarray:
    """Coerce ``data`` to a 1-D float64/complex128 array."""
    arr = np.asarray(data)
    if field is None:
        field = field_of(arr)
    elif field == REAL and np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise FieldMismatch("complex data supplied for a real vector")
        arr = arr.real
    out = np.array(arr, dtype=dtype_for(field))
    if out.ndim != 1 or out.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-D vector, got shape {out.shape}")
    return out


def as_operator(data, field: str | None = None) -> np.ndarray:
    arr = np.asarray(data)
    if field is None:
        field = field_of(arr)
    out = np.array(arr, dtype=dtype_for(field))
    if out.ndim != 2 or out.shape[0] != out.shape[1] or out.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {out.shape}")
    return out


def check_compatible(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    if field_of(u) != field_of(v):
        raise FieldMismatch(f"field mismatch: {field_of(u)} vs {field_of(v)}")


def inner_product(u, v):
    """``<u, v>``, linear in ``u`` and conjugate-linear in ``v``.

    >>> inner_product(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    11.0
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"dimension mismatch: {u.shape} vs {v.shape}")
    check_compatible(u, v)
    val = np.vdot(v, u)
    return val.item()


def norm(v) -> float:
    return float(np.linalg.norm(v))


def op_norm(a) -> float:
    """Spectral norm."""
    return float(np.linalg.norm(a, 2))


def scaled_tol(a, tol: float) -> float:
    return tol * (1.0 + op_norm(a))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def hermitian_defect(a: np.ndarray) -> float:
    return op_norm(a - a.conj().T)


@dataclass(frozen=True)
class EigDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


def eigh(a, tol: float = DEFAULT_TOL) -> EigDecomposition:
    a = as_operator(a)
    if hermitian_defect(a) > scaled_tol(a, tol):
        raise NotHermitian(f"matrix is not Hermitian (defect {hermitian_defect(a):.3e})")
    w, q = np.linalg.eigh(hermitian_part(a))
    return EigDecomposition(w, q)


def positive_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive square root of a Hermitian positive semidefinite operator.

    Eigenvalues in ``[-tol*(1+||A||), 0)`` are clamped to zero; anything more
    negative raises :class:`NotPositive`.
    """
    a = as_operator(a)
    dec = eigh(a, tol)
    w = dec.eigenvalues
    floor = -scaled_tol(a, tol)
    if w[0] < floor:
        raise NotPositive(f"operator has eigenvalue {w[0]:.3e} < 0")
    root = np.sqrt(np.clip(w, 0.0, None))
    q = dec.eigenvectors
    r = (q * root) @ q.conj().T
    return hermitian_part(r)


@dataclass(frozen=True)
class PsdVerdict:
    positive: bool
    min_eigenvalue: float
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.positive


def is_psd(a, tol: float = DEFAULT_TOL) -> PsdVerdict:
    """Decide ``<Au, u> >= 0`` for all ``u`` through the Hermitian part of ``A``.

    ``A`` need not be Hermitian. When the verdict is negative the returned
    witness is the eigenvector of the smallest eigenvalue of the Hermitian
    part, so ``Re <Au, u>`` equals that (negative) eigenvalue.
    """
    a = as_operator(a)
    w, q = np.linalg.eigh(hermitian_part(a))
    lam = float(w[0])
    if lam >= -scaled_tol(a, tol):
        return PsdVerdict(True, lam)
    u = q[:, 0]
    # canonical sign so witnesses are reproducible
    k = int(np.argmax(np.abs(u)))
    u = u * (abs(u[k]) / u[k])
    if not np.iscomplexobj(a):
        u = u.real
    return PsdVerdict(False, lam, u)


def quadratic_form(a, u) -> float:
    """``Re <Au, u>``; the real part is the quantity positivity constrains."""
    a = np.asarray(a)
    u = np.asarray(u)
    return float(np.real(np.vdot(u, a @ u)))


def pseudo_inverse(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse; singular values below ``tol * s_max`` are dropped."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    return np.linalg.pinv(a, rcond=tol)


def spectral_radius(a) -> float:
    a = as_operator(a)
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def orth(a: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space, rank cut at ``tol * s_max``."""
    if a.size == 0:
        return a[:, :0]
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    rank = int(np.sum(s > tol * s[0]))
    return u[:, :rank]


def numerical_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    return orth(np.asarray(a), tol).shape[1]


def min_singular_value(a) -> float:
    return float(np.linalg.svd(np.asarray(a), compute_uv=False)[-1])
