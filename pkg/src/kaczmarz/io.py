"""Problem configs (JSON) and run artifacts (CSV traces, JSON verdicts).

Vectors are written as lists of ``[re]`` (real field) or ``[re, im]``
(complex field) entries. On input a bare number is also accepted for an
entry.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import KaczmarzError
from .linalg import COMPLEX, DEFAULT_TOL, REAL, dtype_for
from .sequences import EXPLICIT, PERIODIC, SequencePair, VectorSequence

TRACE_HEADER = ["step", "error_norm", "residual_norm"]
AUGMENTED_HEADER = ["step", "classic_error", "augmented_error"]
SWEEP_HEADER = ["delta", "trial", "classic_radius", "pair_radius"]


class ConfigError(KaczmarzError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ProblemConfig:
    field: str
    dimension: int
    extension: str
    steps: int
    tolerance: float
    seed: int
    phi: np.ndarray | None = None
    psi: np.ndarray | None = None
    e: np.ndarray | None = None
    x: np.ndarray | None = None
    section: int | None = None
    sweep_deltas: tuple | None = None
    sweep_trials: int | None = None
    raw: dict | None = None

    @property
    def is_pair(self) -> bool:
        return self.phi is not None

    def pair(self) -> SequencePair:
        if self.phi is None:
            e = self.sequence()
            return SequencePair(e, e)
        psi = self.phi if self.psi is None else self.psi
        return SequencePair.from_arrays(self.phi, psi, self.extension)

    def sequence(self) -> VectorSequence:
        if self.e is None:
            raise ConfigError("config has no 'e' sequence")
        return VectorSequence(self.e, self.extension)

    def target(self) -> np.ndarray:
        if self.x is not None:
            return self.x
        rng = np.random.default_rng(self.seed)
        z = rng.standard_normal(self.dimension)
        if self.field == COMPLEX:
            z = z + 1j * rng.standard_normal(self.dimension)
        return z.astype(dtype_for(self.field))

    @property
    def hash(self) -> str:
        return config_hash(self.raw or {})


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _entry(value, field: str):
    if isinstance(value, (list, tuple)):
        if len(value) == 1:
            re, im = value[0], 0.0
        elif len(value) == 2:
            re, im = value
        else:
            raise ConfigError(f"vector entry must be [re] or [re, im], got {value!r}")
    else:
        re, im = value, 0.0
    try:
        re, im = float(re), float(im)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric vector entry {value!r}") from exc
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ConfigError(f"non-finite vector entry {value!r}")
    if field == REAL:
        if im != 0.0:
            raise ConfigError(f"complex entry {value!r} in a real config")
        return re
    return complex(re, im)


def parse_vector(data, field: str, dimension: int) -> np.ndarray:
    if not isinstance(data, (list, tuple)):
        raise ConfigError(f"vector must be a list, got {type(data).__name__}")
    if len(data) != dimension:
        raise ConfigError(f"vector has length {len(data)}, expected {dimension}")
    return np.array([_entry(v, field) for v in data], dtype=dtype_for(field))


def parse_vectors(data, field: str, dimension: int) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or not data:
        raise ConfigError("sequence must be a non-empty list of vectors")
    return np.stack([parse_vector(v, field, dimension) for v in data])


def vector_to_json(v) -> list:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [[float(z)] for z in v]


def parse_config(raw: dict) -> ProblemConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    field = raw.get("field", REAL)
    if field not in (REAL, COMPLEX):
        raise ConfigError(f"field must be 'real' or 'complex', got {field!r}")
    dim = raw.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ConfigError("dimension must be a positive integer")
    ext = raw.get("extension", PERIODIC)
    if ext == "explicit-finite":
        ext = EXPLICIT
    if ext not in (PERIODIC, EXPLICIT):
        raise ConfigError(f"extension must be 'periodic' or 'explicit', got {ext!r}")

    has_e = raw.get("e") is not None
    has_phi = raw.get("phi") is not None
    if has_e == has_phi:
        raise ConfigError("exactly one of 'e' or 'phi' must be given")
    if has_e and raw.get("psi") is not None:
        raise ConfigError("'psi' is only meaningful together with 'phi'")

    e = parse_vectors(raw["e"], field, dim) if has_e else None
    phi = parse_vectors(raw["phi"], field, dim) if has_phi else None
    psi = None
    if raw.get("psi") is not None:
        psi = parse_vectors(raw["psi"], field, dim)
        if psi.shape != phi.shape:
            raise ConfigError("'phi' and 'psi' must have the same number of vectors")
    x = parse_vector(raw["x"], field, dim) if raw.get("x") is not None else None

    steps = raw.get("steps", 100)
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
        raise ConfigError("steps must be a positive integer")
    tol = raw.get("tolerance", DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
        raise ConfigError("tolerance must be a positive number")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    section = raw.get("section")
    if section is not None and (not isinstance(section, int) or section < 1):
        raise ConfigError("section must be a positive integer")

    deltas = trials = None
    sweep = raw.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("'sweep' must be an object")
        if "deltas" in sweep:
            deltas = parse_grid(sweep["deltas"])
        if "trials" in sweep:
            trials = parse_trials(sweep["trials"])

    return ProblemConfig(
        field=field,
        dimension=dim,
        extension=ext,
        steps=steps,
        tolerance=float(tol),
        seed=seed,
        phi=phi,
        psi=psi,
        e=e,
        x=x,
        section=section,
        sweep_deltas=deltas,
        sweep_trials=trials,
        raw=raw,
    )


def parse_grid(values) -> tuple:
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    if not isinstance(values, (list, tuple)) or not values:
        raise ConfigError("delta grid must be a non-empty list")
    try:
        grid = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric delta in {values!r}") from exc
    if any(not math.isfinite(d) or d < 0 for d in grid):
        raise ConfigError("deltas must be finite and non-negative")
    return grid


def parse_trials(value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError("trials must be a positive integer")
    return value


def load_config(path) -> ProblemConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw)


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    return repr(float(v))


def write_trace_csv(trace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for n in range(trace.steps):
            w.writerow([n, _fmt(trace.error_norms[n]), _fmt(trace.residual_norms[n])])


def write_augmented_csv(run, path) -> None:
    classic = run.classic_trace.error_norms
    augmented = run.augmented_trace.error_norms
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AUGMENTED_HEADER)
        for n in range(classic.size):
            w.writerow([n, _fmt(classic[n]), _fmt(augmented[n])])


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for delta, trial, classic, pair in sorted(rows, key=lambda r: (r[0], r[1])):
            w.writerow([_fmt(delta), trial, _fmt(classic), _fmt(pair)])


def to_jsonable(obj):
    """Recursively convert dataclasses and numpy values into JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for name in ("symmetric", "max_defect"):
            if hasattr(type(obj), name) and isinstance(getattr(type(obj), name), property):
                out[name] = to_jsonable(getattr(obj, name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 1:
            return vector_to_json(obj)
        return [to_jsonable(row) for row in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, VectorSequence):
        return {"extension": obj.extension, "generators": to_jsonable(obj.generators)}
    return obj


def write_json(data, path) -> None:
    Path(path).write_text(dumps(data) + "\n")


def dumps(data) -> str:
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True)
