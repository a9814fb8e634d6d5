"""Exit criteria, each run at its stated tolerance.

Run with ``pytest tests/test_acceptance.py`` (one PASS/FAIL line per
criterion appears in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import filecmp
import json
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

from kaczmarz.classic import auxiliary_h, periodic_effectiveness_oracle
from kaczmarz.cli import main as cli_main
from kaczmarz.constructors import (
    pair_from_effective,
    recover_T,
    relating_operator,
    run_augmented,
    synthesis_dual_from_almost_effective,
    transform_pair,
)
from kaczmarz.dual import (
    effective_pair_oracle,
    equivalence_report,
    iteration_rate,
    partial_isometry_test,
    run_dual,
    triangular_N_V,
)
from kaczmarz.errors import NoPositiveOperator
from kaczmarz.fixtures import (
    asymmetric_pair,
    negated_basis_pair,
    nonpositive_grammian_pair,
    plane_sequence,
    random_invertible,
    random_orthonormal_basis,
    random_pair,
    random_spd,
    random_symmetric_indefinite,
    random_unit_sequence,
    random_vector,
)
from kaczmarz.frames import PHI_PSI, frame_bounds, grammian_positive, mixed_grammian
from kaczmarz.linalg import quadratic_form
from kaczmarz.classic import RADIUS_MARGIN
from kaczmarz.sequences import SequencePair, VectorSequence


def _field(i: int) -> str:
    return "complex" if i % 3 == 2 else "real"


def forward_reproduction():
    """Forward errors of the asymmetric pair follow the closed form for k <= 20."""
    err = run_dual(asymmetric_pair(), np.array([3.0, 4.0]), 63).errors
    worst = 0.0
    for k in range(21):
        expected = (
            4 / 2**k * np.array([1.0, 1.0]),
            4 / 2**k * np.array([-1.0, 1.0]),
            4 / 2 ** (k + 1) * np.array([1.0, 1.0]),
        )
        for j in range(3):
            worst = max(worst, float(np.linalg.norm(err[3 * k + j] - expected[j])))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def reverse_cycle():
    rev = asymmetric_pair().reversed()
    err = run_dual(rev, np.array([0.0, 4.0]), 90).errors
    cycle = np.tile([[0.0, 4.0], [0.0, 4.0], [1.0, 3.0]], (30, 1))
    dev = float(np.max(np.abs(err - cycle)))
    radius = effective_pair_oracle(asymmetric_pair()).reverse_radius
    ok = dev <= 1e-12 and abs(radius - 1.0) <= 1e-9
    return ok, f"cycle deviation {dev:.2e}, reverse radius {radius!r}"


def nonpositive_grammian():
    pair = nonpositive_grammian_pair()
    rng = np.random.default_rng(16)
    worst = 0.0
    for _ in range(20):
        err = run_dual(pair, rng.standard_normal(2), 31).errors
        worst = max(worst, float(np.max(np.linalg.norm(err[3:31], axis=1))))
    section = mixed_grammian(pair, 3, PHI_PSI)
    verdict = grammian_positive(section)
    witnessed = (
        not verdict.positive
        and verdict.witness is not None
        and quadratic_form(section.entries[: verdict.failing_order, : verdict.failing_order], verdict.witness) < 0
    )
    pi = partial_isometry_test(triangular_N_V(pair, 3))
    try:
        recover_T(pair, 3)
        refused = False
    except NoPositiveOperator:
        refused = True
    ok = worst <= 1e-12 and witnessed and pi.partial_isometry and pi.defect <= 1e-12 and refused
    return ok, (
        f"max error k>=3 {worst:.1e}, witness verified={witnessed}, V defect {pi.defect:.1e}, "
        f"recover_T refused={refused}"
    )


def negated_basis():
    rng = np.random.default_rng(14)
    worst = 0.0
    for n in range(1, 9):
        pair = negated_basis_pair(n)
        for _ in range(20):
            x = rng.standard_normal(n)
            worst = max(worst, float(np.linalg.norm(run_dual(pair, x, n).iterates[-1] + x)))
    return worst <= 1e-10, f"max ||x_N + x|| {worst:.1e} over N=1..8"


def parseval_limit():
    found, seed, worst = 0, 0, 0.0
    while found < 20:
        rng = np.random.default_rng(5000 + seed)
        seed += 1
        dim = 2 + seed % 3
        e = random_unit_sequence(rng, dim, dim + int(rng.integers(0, 3)), _field(seed))
        if periodic_effectiveness_oracle(e).period_map_radius >= 0.9:
            continue
        found += 1
        K = 50 * len(e)
        fb = frame_bounds(auxiliary_h(e, K), K)
        worst = max(worst, abs(fb.A - 1.0), abs(fb.B - 1.0))
    return worst <= 1e-4, f"max(|A-1|,|B-1|) = {worst:.1e} over 20 sequences ({seed} drawn)"


def transform_invariance():
    same = 0
    for i in range(100):
        rng = np.random.default_rng(600 + i)
        dim = 2 + i % 4
        field = _field(i)
        pair = random_pair(rng, dim, dim + int(rng.integers(0, 3)), field)
        t = random_invertible(rng, dim, field, max_cond=100.0)
        a = effective_pair_oracle(pair, seed=i)
        b = effective_pair_oracle(transform_pair(pair, t), seed=i)
        same += (a.forward_effective, a.reverse_effective) == (b.forward_effective, b.reverse_effective)
    return same == 100, f"{same}/100 verdicts unchanged"


def symmetric_from_basis():
    symmetric, worst = 0, 0.0
    for i in range(50):
        rng = np.random.default_rng(700 + i)
        dim = 2 + i % 5
        field = _field(i)
        e = VectorSequence.periodic(random_orthonormal_basis(rng, dim, field))
        t = random_spd(rng, dim, float(rng.uniform(1.0, 100.0)), field)
        pair = pair_from_effective(e, t)
        symmetric += effective_pair_oracle(pair, seed=i).symmetric
        worst = max(worst, float(np.linalg.norm(recover_T(pair, dim).T - relating_operator(t), 2)))
    ok = symmetric == 50 and worst <= 1e-8
    return ok, f"{symmetric}/50 symmetric, max ||T_recovered - (T T*)^-1|| {worst:.1e}"


def recover_round_trip():
    worst, refused = 0.0, 0
    for i in range(50):
        rng = np.random.default_rng(800 + i)
        dim = 2 + i % 5
        field = _field(i)
        phi = random_unit_sequence(rng, dim, dim + int(rng.integers(0, 4)), field).generators
        t0 = random_spd(rng, dim, float(rng.uniform(1.0, 100.0)), field)
        pair = SequencePair.from_arrays(phi, phi @ t0.T)
        worst = max(worst, float(np.linalg.norm(recover_T(pair, len(phi)).T - t0, 2)))

        bad = random_symmetric_indefinite(rng, dim, field)
        try:
            recover_T(SequencePair.from_arrays(phi, phi @ bad.T), len(phi))
        except NoPositiveOperator:
            refused += 1
    ok = worst <= 1e-8 and refused == 50
    return ok, f"max ||T - T0|| {worst:.1e}, {refused}/50 non-positive cases refused"


def equivalence_consistency():
    good, worst_defect, worst_t = 0, 0.0, 0.0
    for i in range(30):
        rng = np.random.default_rng(900 + i)
        dim = 2 + i % 4
        field = _field(i)
        e = VectorSequence.periodic(random_orthonormal_basis(rng, dim, field))
        pair = pair_from_effective(e, random_spd(rng, dim, float(rng.uniform(1.0, 100.0)), field))
        report = equivalence_report(pair, K=3 * dim, tol=1e-8, seed=i)
        good += report.v_partial_isometry and report.canonical_duals and report.symmetric_pair
        worst_defect = max(worst_defect, report.v_defect, report.canonical_defect)
        worst_t = max(worst_t, report.T_defect)
    ok = good == 30 and worst_defect <= 1e-8 and worst_t <= 1e-6
    return ok, f"{good}/30 all conditions true, max defect {worst_defect:.1e}, max ||S_g - T^-1|| {worst_t:.1e}"


def augmented_recovery():
    e = plane_sequence(periods=60)
    K = len(e)
    A = frame_bounds(auxiliary_h(e, K), K).A
    psi = synthesis_dual_from_almost_effective(e, K)
    rng = np.random.default_rng(10)
    x = random_vector(rng, 3)
    run = run_augmented(e, psi, x, K)
    xn = float(np.linalg.norm(x))
    rel = run.augmented_trace.final_error / xn
    stall = float(np.min(run.classic_trace.error_norms[-50:]))
    ok = 0.2 <= A <= 0.9 and rel <= 1e-6 and stall >= 0.01 * xn and run.identity_defect <= 1e-10
    return ok, (
        f"A={A:.4f}, y relative error {rel:.1e}, min classic error over last 50 = {stall / xn:.3f}||x||, "
        f"identity defect {run.identity_defect:.1e}"
    )


def oracle_iteration_agreement():
    agree, excluded = 0, []
    for i in range(200):
        rng = np.random.default_rng(1100 + i)
        dim = 2 + i % 5
        pair = random_pair(rng, dim, dim + int(rng.integers(0, 4)), _field(i))
        verdict = effective_pair_oracle(pair, cross_check=False)
        consistent = True
        for radius, p in ((verdict.forward_radius, pair), (verdict.reverse_radius, pair.reversed())):
            if abs(radius - 1.0) <= RADIUS_MARGIN:
                excluded.append((i, radius))
                continue
            rate = iteration_rate(p, seed=i)
            consistent &= (radius < 1.0 - RADIUS_MARGIN) == (rate < 1.0 - RADIUS_MARGIN)
        agree += consistent
    detail = f"{agree}/200 agree"
    if excluded:
        detail += f"; excluded near-unit radii {excluded}"
    return agree == 200, detail


def determinism():
    cfg_dir = Path(__file__).resolve().parents[1] / "configs"
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        same = True
        for tag, argv in (
            ("run", ["run", "--config", str(cfg_dir / "asymmetric_pair.json")]),
            ("aug", ["run", "--algorithm", "augmented", "--config", str(cfg_dir / "plane_almost_effective.json")]),
            ("sweep", ["sweep", "--config", str(cfg_dir / "sweep_basis.json")]),
        ):
            for rep in ("a", "b"):
                cli_main(argv + ["--seed", "11", "--out", str(tmp / tag / rep)])
            a, b = tmp / tag / "a", tmp / tag / "b"
            names = sorted(p.name for p in a.iterdir())
            match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
            same &= bool(names) and not mismatch and not errors
    return same, "run, augmented run and sweep outputs byte-identical across repeats"


CRITERIA = [
    (1, "forward reproduction of the asymmetric pair", forward_reproduction),
    (2, "reverse order cycles without converging", reverse_cycle),
    (3, "symmetric pair with non-positive Grammian", nonpositive_grammian),
    (4, "negated basis pair reproduces -x", negated_basis),
    (5, "auxiliary sequence tends to a Parseval frame", parseval_limit),
    (6, "effectiveness invariant under transform_pair", transform_invariance),
    (7, "pairs built from an orthonormal basis are symmetric", symmetric_from_basis),
    (8, "recover_T round trip and refusal", recover_round_trip),
    (9, "equivalence report consistency", equivalence_consistency),
    (10, "augmented iteration recovers x", augmented_recovery),
    (11, "spectral oracle agrees with iteration", oracle_iteration_agreement),
    (12, "deterministic CLI output", determinism),
]


def _line(number, title, passed, detail):
    return f"{'PASS' if passed else 'FAIL'}  criterion {number:2d}: {title} ({detail})"


@pytest.mark.acceptance
@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    from conftest import ACCEPTANCE_LINES

    passed, detail = check()
    line = _line(number, title, passed, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def main() -> int:
    failures = 0
    for number, title, check in CRITERIA:
        passed, detail = check()
        failures += not passed
        print(_line(number, title, passed, detail), flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
