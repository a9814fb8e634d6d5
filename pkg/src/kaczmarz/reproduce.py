"""Regression fixtures for the four worked examples, with closed-form expectations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constructors import biorthogonal_pair, recover_T
from .dual import auxiliary_pair, effective_pair_oracle, partial_isometry_test, run_dual, triangular_N_V
from .errors import NoPositiveOperator
from .fixtures import asymmetric_pair, negated_basis_pair, nonpositive_grammian_pair, skew_basis
from .frames import PHI_PSI, PSI_PHI, grammian_positive, mixed_grammian
from .linalg import quadratic_form
from .sequences import PERIODIC, VectorSequence, validate

TOL = 1e-10
EXAMPLES = ("obs14", "obs15", "obs16", "obs17finite")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float | None = None
    detail: str = ""


def _check(name, value, limit=TOL, detail=""):
    return Check(name, bool(value <= limit), float(value), detail)


def negated_basis(dim: int = 4, samples: int = 20, seed: int = 0) -> list[Check]:
    pair = negated_basis_pair(dim)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal(dim)
        last = run_dual(pair, x, dim).iterates[-1]
        worst = max(worst, float(np.linalg.norm(last + x)))
    report = validate(pair)
    return [
        _check("one pass reproduces -x", worst),
        Check("normalisation flagged", not report.normalization_ok, report.normalization_deviation),
        _check("normalisation deviation is 2", abs(report.normalization_deviation - 2.0)),
    ]


def asymmetric(periods: int = 20) -> list[Check]:
    pair = asymmetric_pair()
    x = np.array([3.0, 4.0])
    b = x[1]
    err = run_dual(pair, x, 3 * (periods + 1)).errors
    worst = 0.0
    for k in range(periods + 1):
        expected = (
            b / 2**k * np.array([1.0, 1.0]),
            b / 2**k * np.array([-1.0, 1.0]),
            b / 2 ** (k + 1) * np.array([1.0, 1.0]),
        )
        for j in range(3):
            worst = max(worst, float(np.linalg.norm(err[3 * k + j] - expected[j])))
    checks = [_check("forward error formulas, k <= %d" % periods, worst)]

    rev = pair.reversed()
    err = run_dual(rev, np.array([0.0, 4.0]), 90).errors
    cycle = np.array([[0.0, 4.0], [0.0, 4.0], [1.0, 3.0]])
    dev = float(np.max(np.abs(err - np.tile(cycle, (30, 1)))))
    checks.append(_check("reverse error cycles (0,4),(0,4),(1,3)", dev))

    verdict = effective_pair_oracle(pair)
    checks += [
        Check("forward effective", verdict.forward_effective, verdict.forward_radius),
        Check("reverse not effective", not verdict.reverse_effective, verdict.reverse_radius),
        _check("forward radius 1/2", abs(verdict.forward_radius - 0.5), 1e-9),
        _check("reverse radius 1", abs(verdict.reverse_radius - 1.0), 1e-9),
        _check("normalised", validate(pair).normalization_deviation),
    ]
    return checks


def nonpositive_grammian(samples: int = 5, seed: int = 0) -> list[Check]:
    pair = nonpositive_grammian_pair()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        err = run_dual(pair, rng.standard_normal(2), 31).errors
        worst = max(worst, float(np.max(np.linalg.norm(err[3:], axis=1))))
    checks = [_check("errors vanish for 3 <= k <= 30", worst)]

    displayed = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    section = mixed_grammian(pair, 3, PHI_PSI)
    checks.append(_check("Grammian section matches display", float(np.max(np.abs(section.entries - displayed)))))
    for orientation in (PHI_PSI, PSI_PHI):
        sec = mixed_grammian(pair, 3, orientation)
        v = grammian_positive(sec)
        ok = (not v.positive) and v.failing_order == 3
        form = quadratic_form(sec.entries[:3, :3], v.witness) if v.witness is not None else 0.0
        checks.append(Check(f"Grammian ({orientation}) not positive, witness verified", ok and form < 0, form))

    pi = partial_isometry_test(triangular_N_V(pair, 3))
    checks.append(Check("V section is a partial isometry", pi.partial_isometry and pi.defect <= 1e-12, pi.defect))

    try:
        recover_T(pair, 3)
        checks.append(Check("no positive operator relates the pair", False))
    except NoPositiveOperator:
        checks.append(Check("no positive operator relates the pair", True))

    verdict = effective_pair_oracle(pair)
    checks.append(Check("symmetric effective pair", verdict.symmetric, max(verdict.forward_radius, verdict.reverse_radius)))
    return checks


def biorthogonal(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    bases = [skew_basis(), VectorSequence(rng.standard_normal((4, 4)), PERIODIC)]
    checks = []
    for i, basis in enumerate(bases):
        pair = biorthogonal_pair(basis)
        n = basis.dim
        phi = pair.analysis.generators
        psi = pair.synthesis.generators
        bio = float(np.max(np.abs(phi @ psi.conj().T - np.eye(n))))
        checks.append(_check(f"basis {i}: biorthogonal", bio))
        aux = auxiliary_pair(pair, n)
        d = max(float(np.max(np.abs(aux.g.generators - phi))), float(np.max(np.abs(aux.g_tilde.generators - psi))))
        checks.append(_check(f"basis {i}: auxiliary sequences equal the pair", d))
        x = rng.standard_normal(n)
        fwd = run_dual(pair, x, n).final_error
        rev = run_dual(pair.reversed(), x, n).final_error
        checks.append(_check(f"basis {i}: exact after one pass, both orders", max(fwd, rev) / max(1.0, np.linalg.norm(x))))
        verdict = effective_pair_oracle(pair)
        checks.append(Check(f"basis {i}: symmetric effective pair", verdict.symmetric, max(verdict.forward_radius, verdict.reverse_radius)))
    return checks


RUNNERS = {
    "obs14": negated_basis,
    "obs15": asymmetric,
    "obs16": nonpositive_grammian,
    "obs17finite": biorthogonal,
}


def reproduce(example: str) -> list[Check]:
    try:
        runner = RUNNERS[example]
    except KeyError:
        raise ValueError(f"unknown example {example!r}; choose from {', '.join(EXAMPLES)}") from None
    return runner()
