"""Dual Kaczmarz iteration over an (analysis, synthesis) pair and its diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classic import (
    RADIUS_MARGIN,
    IterationTrace,
    TriangularSection,
    _aux_recursion,
    _pair_radius,
    _trace,
    _triangular_section,
)
from .errors import (
    HypothesisViolation,
    KaczmarzError,
    NotPeriodic,
    OracleDisagreement,
)
from .frames import frame_operator_partial
from .linalg import DEFAULT_TOL, as_operator, hermitian_defect, op_norm, scaled_tol
from .sequences import EXPLICIT, SequencePair, VectorSequence, validate

ORACLE_TRIALS = 20
ORACLE_PERIODS = 200


def run_dual(pair: SequencePair, x, steps: int, tol: float = DEFAULT_TOL) -> IterationTrace:
    """Dual Kaczmarz iterates ``x_n = x_{n-1} + <x - x_{n-1}, phi_n> psi_n``.

    Runs regardless of whether ``<phi_n, psi_n> = 1``; use
    :func:`kaczmarz.sequences.validate` to check the hypotheses.
    """
    return _trace(pair.analysis, pair.synthesis, x, steps, tol)


@dataclass(frozen=True, eq=False)
class AuxiliaryPair:
    g: VectorSequence
    g_tilde: VectorSequence


def auxiliary_pair(pair: SequencePair, K: int) -> AuxiliaryPair:
    phi = pair.analysis.terms(K)
    psi = pair.synthesis.terms(K)
    return AuxiliaryPair(
        VectorSequence(_aux_recursion(phi, psi), EXPLICIT),
        VectorSequence(_aux_recursion(psi, phi), EXPLICIT),
    )


def partial_sum_identity_check(pair: SequencePair, x, n: int, tol: float = DEFAULT_TOL) -> float:
    """``||x_n - sum_{k<=n} <x, g_k> psi_k||`` with ``x_n`` taken from :func:`run_dual`.

    The caller compares the returned defect against its tolerance.
    """
    x = np.asarray(x)
    xn = run_dual(pair, x, n + 1, tol).iterates[n]
    g = auxiliary_pair(pair, n + 1).g.generators
    coeffs = g.conj() @ x
    series = coeffs @ pair.synthesis.terms(n + 1)
    return float(np.linalg.norm(xn - series))


def triangular_N_V(pair: SequencePair, K: int) -> TriangularSection:
    """Sections of ``I + N`` (entries ``<phi_n, psi_k>`` below the diagonal) and ``I + V``."""
    return _triangular_section(pair.analysis.terms(K), pair.synthesis.terms(K))


@dataclass(frozen=True)
class PartialIsometryResult:
    partial_isometry: bool
    defect: float

    def __bool__(self):
        return self.partial_isometry


def partial_isometry_test(section: TriangularSection, tol: float = DEFAULT_TOL) -> PartialIsometryResult:
    """Finite-section test that ``V^* V`` is a projection.

    ``V`` is the strictly lower part of the inverse block; the defect is
    ``||(V^*V)^2 - V^*V||``. Only a diagnostic of the infinite condition.
    """
    v = section.strict_inverse
    w = v.conj().T @ v
    defect = op_norm(w @ w - w)
    return PartialIsometryResult(defect <= tol, defect)


def iteration_rate(
    pair: SequencePair,
    periods: int = ORACLE_PERIODS,
    trials: int = ORACLE_TRIALS,
    seed: int = 0,
) -> float:
    """Per-period error decay rate measured by running the dual iteration.

    The error ``eps_n = eps_{n-1} - <eps_{n-1}, phi_n> psi_n`` is advanced one
    generator at a time from ``trials`` random starting vectors; columns are
    renormalised each period and the rate is the geometric mean growth over
    the second half of the run, maximised over the trials.
    """
    if not pair.is_periodic:
        raise NotPeriodic("iteration rate needs a periodic pair")
    phi = pair.analysis.generators
    psi = pair.synthesis.generators
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((pair.dim, trials))
    if pair.field == "complex":
        eps = eps + 1j * rng.standard_normal((pair.dim, trials))
    eps = eps.astype(np.result_type(phi, psi, eps))
    log_growth = np.zeros(trials)
    dead = np.zeros(trials, dtype=bool)
    half = periods // 2
    mark = np.zeros(trials)
    for p in range(periods):
        for k in range(phi.shape[0]):
            eps -= np.outer(psi[k], phi[k].conj() @ eps)
        norms = np.linalg.norm(eps, axis=0)
        dead |= norms == 0.0
        live = ~dead
        log_growth[live] += np.log(norms[live])
        eps[:, live] /= norms[live]
        eps[:, dead] = 0.0
        if p + 1 == half:
            mark = log_growth.copy()
    span = periods - half
    rates = np.exp((log_growth - mark) / span)
    rates[dead] = 0.0
    return float(np.max(rates))


@dataclass(frozen=True)
class PairVerdict:
    forward_effective: bool
    reverse_effective: bool
    forward_radius: float
    reverse_radius: float
    forward_rate: float | None = None
    reverse_rate: float | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def symmetric(self) -> bool:
        return self.forward_effective and self.reverse_effective


def effective_pair_oracle(
    pair: SequencePair,
    seed: int = 0,
    cross_check: bool = True,
    tol: float = DEFAULT_TOL,
) -> PairVerdict:
    """Effectiveness of a periodic pair in both orders.

    Each order is decided by the spectral radius of its one-period error map
    on the reachable invariant subspace. With ``cross_check`` the verdict is
    confirmed by :func:`iteration_rate`; a disagreement raises
    :class:`OracleDisagreement` (a bug, or a radius within ``1e-9`` of 1).
    """
    if not pair.is_periodic:
        raise NotPeriodic("the pair oracle needs a periodic pair")
    phi = pair.analysis.generators
    psi = pair.synthesis.generators
    fwd = _pair_radius(phi, psi, tol)
    rev = _pair_radius(psi, phi, tol)
    fwd_ok = fwd < 1.0 - RADIUS_MARGIN
    rev_ok = rev < 1.0 - RADIUS_MARGIN
    fwd_rate = rev_rate = None
    if cross_check:
        fwd_rate = iteration_rate(pair, seed=seed)
        rev_rate = iteration_rate(pair.reversed(), seed=seed)
        for name, radius, ok, rate in (("forward", fwd, fwd_ok, fwd_rate), ("reverse", rev, rev_ok, rev_rate)):
            if ok != (rate < 1.0 - RADIUS_MARGIN):
                raise OracleDisagreement(
                    f"{name} spectral radius {radius!r} disagrees with iteration rate {rate!r}",
                    radius,
                    rate,
                )
    report = validate(pair, tol=tol)
    return PairVerdict(fwd_ok, rev_ok, fwd, rev, fwd_rate, rev_rate, list(report.warnings))


@dataclass(frozen=True, eq=False)
class EquivalenceReport:
    section: int
    v_partial_isometry: bool
    v_defect: float
    canonical_duals: bool
    canonical_defect: float
    symmetric_pair: bool
    pair_verdict: PairVerdict
    T_consistent: bool
    T_defect: float
    T: np.ndarray


def _check_relating_operator(pair: SequencePair, t: np.ndarray, K: int, tol: float) -> None:
    herm = hermitian_defect(t)
    if herm > scaled_tol(t, tol):
        raise HypothesisViolation(f"T is not Hermitian (defect {herm:.3e})")
    lam = float(np.linalg.eigvalsh(0.5 * (t + t.conj().T))[0])
    if lam <= scaled_tol(t, tol):
        raise HypothesisViolation(f"T is not positive invertible (min eigenvalue {lam:.3e})")
    phi = pair.analysis.terms(K)
    psi = pair.synthesis.terms(K)
    mapping = float(np.max(np.linalg.norm(phi @ t.T - psi, axis=1)))
    scale = max(1.0, float(np.max(np.linalg.norm(phi, axis=1))))
    if mapping > scaled_tol(t, tol) * scale:
        raise HypothesisViolation(f"T does not map phi_n to psi_n (defect {mapping:.3e})")


def equivalence_report(
    pair: SequencePair,
    T=None,
    K: int | None = None,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> EquivalenceReport:
    """Evaluate the three equivalent conditions for a pair related by a positive ``T``.

    (i) ``V`` is a partial isometry at section ``K``; (ii) ``g`` and ``g~``
    are canonical duals at section ``K``; (iii) the pair is a symmetric
    effective pair. Also reports ``||S_g - T^{-1}||`` where ``S_g`` is the
    frame operator of the first ``K`` auxiliary vectors ``g``.

    When ``T`` is omitted it is recovered from the pair; failure to recover
    one is reported as :class:`HypothesisViolation`.
    """
    if K is None:
        K = len(pair)
    if T is None:
        from .constructors import recover_T

        try:
            T = recover_T(pair, max(K, len(pair)), tol).T
        except KaczmarzError as exc:
            raise HypothesisViolation(f"hypothesis not satisfiable: {exc}") from exc
    t = as_operator(T)
    _check_relating_operator(pair, t, K, tol)

    pi = partial_isometry_test(triangular_N_V(pair, K), tol)

    aux = auxiliary_pair(pair, K)
    s_g = frame_operator_partial(aux.g, K)
    try:
        canon = np.linalg.solve(s_g, aux.g.generators.T).T
        canon_defect = float(np.max(np.linalg.norm(aux.g_tilde.generators - canon, axis=1)))
    except np.linalg.LinAlgError:
        canon_defect = float("inf")

    verdict = effective_pair_oracle(pair, seed=seed, tol=tol)
    t_inv = np.linalg.inv(t)
    t_defect = op_norm(s_g - t_inv)

    return EquivalenceReport(
        section=K,
        v_partial_isometry=pi.partial_isometry,
        v_defect=pi.defect,
        canonical_duals=canon_defect <= tol,
        canonical_defect=canon_defect,
        symmetric_pair=verdict.symmetric,
        pair_verdict=verdict,
        T_consistent=t_defect <= scaled_tol(t_inv, tol),
        T_defect=t_defect,
        T=t,
    )
