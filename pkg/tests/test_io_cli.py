import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kaczmarz import io
from kaczmarz.cli import main
from kaczmarz.frames import mixed_grammian
from kaczmarz.fixtures import nonpositive_grammian_pair

ASYMMETRIC = {
    "field": "real",
    "dimension": 2,
    "extension": "periodic",
    "phi": [[1, -1], [1, 1], [0.5, -0.5]],
    "psi": [[1, 0], [1, 0], [1.5, -0.5]],
    "x": [3, 4],
    "steps": 120,
    "tolerance": 1e-10,
}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_config_parsing_accepts_complex_entries():
    cfg = io.parse_config({"field": "complex", "dimension": 2, "e": [[[1, 0], [0, 0]], [0, [1, 0]]]})
    assert cfg.e.dtype == complex and cfg.steps == 100 and cfg.seed == 0
    assert np.allclose(cfg.e, np.eye(2))


@pytest.mark.parametrize(
    "bad",
    [
        {"dimension": 2},
        {"dimension": 0, "e": [[1]]},
        {"dimension": 2, "e": [[1, 0]], "phi": [[1, 0]]},
        {"dimension": 2, "e": [[1, 0, 0]]},
        {"dimension": 2, "e": [[[1, 1], 0]]},
        {"dimension": 2, "e": [[1, 0]], "field": "quaternion"},
        {"dimension": 2, "phi": [[1, 0]], "psi": [[1, 0], [0, 1]]},
        {"dimension": 2, "e": [[1, 0]], "steps": -1},
        {"dimension": 2, "e": [[1, 0]], "sweep": {"deltas": [-0.1]}},
    ],
)
def test_invalid_configs_are_rejected(bad):
    with pytest.raises(io.ConfigError):
        io.parse_config(bad)


@given(st.dictionaries(st.sampled_from("abc"), st.integers()))
def test_config_hash_ignores_key_order(d):
    assert io.config_hash(d) == io.config_hash(dict(reversed(list(d.items()))))


def test_vector_json_round_trip():
    v = np.array([1 + 2j, -0.5j])
    assert np.allclose(io.parse_vector(io.vector_to_json(v), "complex", 2), v)


def test_run_writes_trace_and_verdict(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", write(tmp_path, ASYMMETRIC), "--out", str(out)]) == 0
    rows = (out / "trace.csv").read_text().splitlines()
    assert rows[0] == "step,error_norm,residual_norm" and len(rows) == 121
    assert float(rows[4].split(",")[1]) == pytest.approx(np.sqrt(8.0))
    verdict = json.loads((out / "verdict.json").read_text())
    assert verdict["converged"] and verdict["oracle"]["forward_effective"]
    assert not verdict["oracle"]["reverse_effective"]


def test_run_reports_nonconvergence(tmp_path):
    cfg = dict(ASYMMETRIC, phi=ASYMMETRIC["psi"], psi=ASYMMETRIC["phi"], x=[0, 4])
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2


def test_run_uses_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("KACZMARZ_OUT_DIR", str(tmp_path / "env"))
    assert main(["run", "--config", write(tmp_path, ASYMMETRIC)]) == 0
    assert (tmp_path / "env" / "trace.csv").exists()


def test_augmented_run(tmp_path):
    from kaczmarz.fixtures import plane_sequence

    cfg = {"dimension": 3, "extension": "explicit", "e": plane_sequence(periods=30).generators.tolist(), "steps": 91, "tolerance": 1e-8}
    out = tmp_path / "aug"
    assert main(["run", "--config", write(tmp_path, cfg), "--algorithm", "augmented", "--out", str(out)]) == 0
    rows = (out / "augmented.csv").read_text().splitlines()
    classic, augmented = map(float, rows[-1].split(",")[1:])
    assert augmented < 1e-8 < classic


def test_diagnose_exit_codes(tmp_path, capsys):
    assert main(["diagnose", "--config", write(tmp_path, ASYMMETRIC), "--out", str(tmp_path)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["pair_verdict"]["forward_radius"] == pytest.approx(0.5)
    dead = {"dimension": 2, "e": [[1, 0]], "tolerance": 1e-10}
    assert main(["diagnose", "--config", write(tmp_path, dead), "--out", str(tmp_path)]) == 2


def test_diagnose_reports_grammian_failure_of_symmetric_pair(tmp_path, capsys):
    cfg = {"dimension": 2, "phi": [[1, 0], [1, 1], [0, 1]], "psi": [[1, 0], [1, 0], [0, 1]]}
    assert main(["diagnose", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["grammian"]["phi_psi"]["failing_order"] == 3
    assert result["v_partial_isometry"]["partial_isometry"]
    assert "error" in result["equivalence"]


def test_reproduce_exit_codes(capsys, tmp_path):
    assert main(["reproduce", "obs15", "--out", str(tmp_path)]) == 0
    assert "FAIL" not in capsys.readouterr().out
    assert main(["reproduce", "--example", "obs16", "--out", str(tmp_path)]) == 0


def test_invalid_input_exit_code(tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["reproduce", "obs99"])
    assert info.value.code == 1
    cfg = dict(ASYMMETRIC, extension="explicit", steps=10)
    assert main(["run", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 1


def test_sweep_rejects_non_orthonormal_base(tmp_path):
    cfg = {"dimension": 2, "e": [[1, 0], [1, 0]]}
    assert main(["sweep", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 1


def test_sweep_output_shape(tmp_path):
    cfg = {"dimension": 3, "e": np.eye(3).tolist(), "seed": 4}
    out = tmp_path / "sw"
    assert main(["sweep", "--config", write(tmp_path, cfg), "--deltas", "0,0.1", "--trials", "3", "--out", str(out)]) == 0
    rows = [r.split(",") for r in (out / "sweep.csv").read_text().splitlines()]
    assert rows[0] == ["delta", "trial", "classic_radius", "pair_radius"] and len(rows) == 7
    assert float(rows[1][2]) == pytest.approx(0.0, abs=1e-12)
    assert all(float(r[3]) < 1e-9 for r in rows[1:])


def test_grammian_csv_is_written_in_order(tmp_path):
    path = tmp_path / "g.csv"
    mixed_grammian(nonpositive_grammian_pair(), 3, "phi_psi").to_csv(path)
    rows = path.read_text().splitlines()[1:]
    assert [r.split(",")[:2] for r in rows[:3]] == [["0", "0"], ["0", "1"], ["0", "2"]]
