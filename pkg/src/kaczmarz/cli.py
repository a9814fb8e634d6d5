"""``kaczmarz`` command line: run, diagnose, reproduce, sweep.

Exit codes: 0 converged / pass, 1 invalid input, 2 negative verdict or failed
assertion, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .classic import (
    almost_effective_bound,
    auxiliary_h,
    periodic_effectiveness_oracle,
    run_classic,
    triangular_M_U,
)
from .constructors import pair_from_effective, run_augmented, synthesis_dual_from_almost_effective
from .dual import (
    auxiliary_pair,
    effective_pair_oracle,
    equivalence_report,
    partial_isometry_test,
    run_dual,
    triangular_N_V,
)
from .errors import KaczmarzError, NumericalFailure
from .frames import PHI_PSI, PSI_PHI, frame_bounds, grammian_positive, mixed_grammian
from .reproduce import EXAMPLES, reproduce
from .sequences import EXPLICIT, VectorSequence, validate, validate_sequence

log = logging.getLogger("kaczmarz")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NEGATIVE = 2
EXIT_NUMERICAL = 3

DEFAULT_DELTAS = (0.0, 0.05, 0.1, 0.2)
DEFAULT_TRIALS = 20


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("KACZMARZ_OUT_DIR") or "kaczmarz-out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(args) -> io.ProblemConfig:
    if not args.config:
        raise io.ConfigError("--config is required")
    cfg = io.load_config(args.config)
    if args.seed is not None:
        raw = dict(cfg.raw)
        raw["seed"] = args.seed
        cfg = io.parse_config(raw)
    return cfg


def _check_length(cfg: io.ProblemConfig, count: int, steps: int) -> None:
    if cfg.extension == EXPLICIT and steps > count:
        raise io.ConfigError(f"steps={steps} exceeds the {count} explicit vectors supplied")


def augmented_section(cfg: io.ProblemConfig) -> int:
    """Section used to build the reconstruction sequence for an augmented run."""
    count = len(cfg.e)
    if cfg.section is not None:
        return cfg.section
    if cfg.extension == EXPLICIT:
        return count
    return max(cfg.steps, 20 * count)


def run_command(cfg: io.ProblemConfig, algorithm: str, out: Path) -> int:
    x = cfg.target()
    tol = cfg.tolerance
    verdict = {
        "algorithm": algorithm,
        "config_hash": cfg.hash,
        "seed": cfg.seed,
        "steps": cfg.steps,
        "tolerance": tol,
        "x": x,
    }
    if algorithm in ("classic", "augmented"):
        if cfg.e is None:
            raise io.ConfigError(f"the {algorithm} algorithm needs an 'e' sequence")
        e = cfg.sequence()
        _check_length(cfg, len(e), cfg.steps)
        verdict["validation"] = validate_sequence(e)
        if e.is_periodic:
            verdict["oracle"] = periodic_effectiveness_oracle(e)
        if algorithm == "classic":
            trace = run_classic(e, x, cfg.steps, tol)
        else:
            K = augmented_section(cfg)
            if cfg.extension == EXPLICIT and K > len(e):
                raise io.ConfigError(f"section {K} exceeds the {len(e)} explicit vectors supplied")
            if K < cfg.steps:
                raise io.ConfigError(f"section {K} is shorter than steps={cfg.steps}")
            psi = synthesis_dual_from_almost_effective(e, K, tol)
            run = run_augmented(e, psi, x, cfg.steps, tol)
            trace = run.augmented_trace
            io.write_augmented_csv(run, out / "augmented.csv")
            verdict["section"] = K
            verdict["identity_defect"] = run.identity_defect
            verdict["classic_final_error"] = run.classic_trace.final_error
            verdict["almost_effective"] = almost_effective_bound(e, K, tol)
    elif algorithm == "dual":
        if cfg.phi is None:
            raise io.ConfigError("the dual algorithm needs a 'phi' sequence")
        pair = cfg.pair()
        _check_length(cfg, len(pair), cfg.steps)
        verdict["validation"] = validate(pair)
        if pair.is_periodic:
            verdict["oracle"] = effective_pair_oracle(pair, seed=cfg.seed)
        trace = run_dual(pair, x, cfg.steps, tol)
    else:
        raise io.ConfigError(f"unknown algorithm {algorithm!r}")

    verdict["converged"] = trace.converged
    verdict["final_error"] = trace.final_error
    io.write_trace_csv(trace, out / "trace.csv")
    io.write_json(verdict, out / "verdict.json")
    log.info("final error %.3e (%s)", trace.final_error, "converged" if trace.converged else "not converged")
    return EXIT_OK if trace.converged else EXIT_NEGATIVE


def diagnose_command(cfg: io.ProblemConfig, out: Path) -> tuple[dict, int]:
    tol = cfg.tolerance
    result = {"config_hash": cfg.hash, "seed": cfg.seed}
    code = EXIT_OK
    if cfg.is_pair:
        pair = cfg.pair()
        K = cfg.section or len(pair)
        result["section"] = K
        result["validation"] = validate(pair, tol=tol)
        if pair.is_periodic:
            pv = effective_pair_oracle(pair, seed=cfg.seed)
            result["pair_verdict"] = pv
            code = EXIT_OK if pv.forward_effective else EXIT_NEGATIVE
        result["grammian"] = {
            o: grammian_positive(mixed_grammian(pair, K, o), tol) for o in (PSI_PHI, PHI_PSI)
        }
        result["v_partial_isometry"] = partial_isometry_test(triangular_N_V(pair, K), tol)
        aux = auxiliary_pair(pair, K)
        result["g_frame_bounds"] = frame_bounds(aux.g, K, tol)
        result["g_tilde_frame_bounds"] = frame_bounds(aux.g_tilde, K, tol)
        if pair.is_periodic:
            try:
                result["equivalence"] = equivalence_report(pair, None, K, tol, seed=cfg.seed)
            except KaczmarzError as exc:
                if isinstance(exc, NumericalFailure):
                    raise
                result["equivalence"] = {"error": str(exc)}
    else:
        e = cfg.sequence()
        K = cfg.section or (20 * len(e) if e.is_periodic else min(len(e), 20 * e.dim))
        result["section"] = K
        result["validation"] = validate_sequence(e, tol)
        if e.is_periodic:
            ev = periodic_effectiveness_oracle(e, tol)
            result["effectiveness"] = ev
            code = EXIT_OK if ev.effective else EXIT_NEGATIVE
        ae = almost_effective_bound(e, K, tol)
        result["almost_effective"] = ae
        if not e.is_periodic and not ae.almost_effective:
            code = EXIT_NEGATIVE
        result["h_frame_bounds"] = frame_bounds(auxiliary_h(e, K), K, tol)
        result["u_partial_isometry"] = partial_isometry_test(triangular_M_U(e, K), tol)
    io.write_json(result, out / "diagnose.json")
    return result, code


def sweep_rows(cfg: io.ProblemConfig, deltas, trials: int) -> list[tuple]:
    """Perturb an orthonormal basis and record classical and pair radii.

    For each perturbed (renormalised) basis ``b`` the pair is built from the
    base basis ``e`` and the operator ``T`` with ``T e_n = b_n``.
    """
    if cfg.e is None:
        raise io.ConfigError("sweep needs an 'e' sequence")
    e = cfg.e
    if e.shape[0] != cfg.dimension or np.linalg.norm(e @ e.conj().T - np.eye(cfg.dimension)) > 1e-8:
        raise io.ConfigError("sweep base 'e' must be an orthonormal basis")
    base = VectorSequence.periodic(e)
    rows = []
    for di, delta in enumerate(deltas):
        for trial in range(trials):
            rng = np.random.default_rng([cfg.seed, di, trial])
            z = rng.standard_normal(e.shape)
            if cfg.field == "complex":
                z = z + 1j * rng.standard_normal(e.shape)
            b = e + delta * z
            b = b / np.linalg.norm(b, axis=1, keepdims=True)
            classic = periodic_effectiveness_oracle(VectorSequence.periodic(b)).period_map_radius
            t = b.T @ e.conj()
            pair = pair_from_effective(base, t)
            pv = effective_pair_oracle(pair, seed=cfg.seed)
            rows.append((float(delta), trial, classic, pv.forward_radius))
    return rows


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="problem config (JSON)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None, help="output directory (default $KACZMARZ_OUT_DIR or ./kaczmarz-out)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kaczmarz", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an iteration and write trace.csv / verdict.json")
    _add_common(p)
    p.add_argument("--algorithm", choices=["classic", "dual", "augmented"], default=None)

    p = sub.add_parser("diagnose", help="oracle, Grammian, triangular-section and frame diagnostics")
    _add_common(p)

    p = sub.add_parser("reproduce", help="check a worked example against closed-form values")
    _add_common(p)
    p.add_argument("example", nargs="?", choices=EXAMPLES)
    p.add_argument("--example", dest="example_opt", choices=EXAMPLES)

    p = sub.add_parser("sweep", help="perturbation sweep around an orthonormal basis")
    _add_common(p)
    p.add_argument("--deltas", default=None, help="comma-separated perturbation magnitudes")
    p.add_argument("--trials", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _dispatch(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except KaczmarzError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _dispatch(args) -> int:
    if args.command == "reproduce":
        example = args.example_opt or args.example
        if example is None:
            raise io.ConfigError(f"name an example: {', '.join(EXAMPLES)}")
        checks = reproduce(example)
        for c in checks:
            value = "" if c.value is None else f" ({c.value:.3e})"
            print(f"{'PASS' if c.passed else 'FAIL'}  {example}: {c.name}{value}")
        out = _out_dir(args)
        io.write_json({"example": example, "checks": checks}, out / f"reproduce-{example}.json")
        return EXIT_OK if all(c.passed for c in checks) else EXIT_NEGATIVE

    cfg = _load(args)
    out = _out_dir(args)
    if args.command == "run":
        algorithm = args.algorithm or ("dual" if cfg.is_pair else "classic")
        return run_command(cfg, algorithm, out)
    if args.command == "diagnose":
        result, code = diagnose_command(cfg, out)
        print(io.dumps(result))
        return code
    if args.command == "sweep":
        deltas = io.parse_grid(args.deltas) if args.deltas else (cfg.sweep_deltas or DEFAULT_DELTAS)
        trials = io.parse_trials(args.trials) if args.trials is not None else (cfg.sweep_trials or DEFAULT_TRIALS)
        rows = sweep_rows(cfg, deltas, trials)
        io.write_sweep_csv(rows, out / "sweep.csv")
        log.info("wrote %d rows", len(rows))
        return EXIT_OK
    raise io.ConfigError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
