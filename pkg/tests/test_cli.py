import io
import json
import math
from pathlib import Path

import pytest

from bellport.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFY_FAILED, main, parse_config, rational_label
from bellport.errors import ConfigurationError, ParseError
from bellport.scattering import PostselectedState

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def basis_config(labels, unitary="bell"):
    return {
        "n_ports": len(labels),
        "unitary": unitary,
        "inputs": [{"plus": [1, 0], "minus": [0, 0]} if c == "+" else {"plus": [0, 0], "minus": [1, 0]} for c in labels],
    }


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data, indent=2))
    return str(p)


def test_simulate_w4(tmp_path):
    code, out, _ = run("simulate", "--config", write(tmp_path, basis_config("+---")))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["success_probability"] == pytest.approx(0.0625, abs=1e-12)
    assert report["success_probability_text"] == "0.0625 (= 1/16)"
    assert report["fidelities"]["W(4)"] == pytest.approx(1.0, abs=1e-10)
    assert report["decomposition"]["weights"]["W(4)"] == pytest.approx(1 / 16)
    norm = PostselectedState.from_json(report["normalized_state"])
    assert norm.norm_squared() == pytest.approx(1.0, abs=1e-12)


def test_simulate_all_plus_reports_empty(tmp_path):
    code, out, _ = run("simulate", "--config", write(tmp_path, basis_config("++++")))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["status"] == "empty postselected state"
    assert report["raw_state"]["terms"] == []
    assert report["normalized_state"] is None


def test_simulate_ghz(tmp_path):
    code, out, _ = run("simulate", "--config", write(tmp_path, basis_config("+-+-")))
    report = json.loads(out)
    assert report["success_probability"] == pytest.approx(0.125, abs=1e-12)
    assert report["fidelities"]["GHZ4"] == pytest.approx(1.0, abs=1e-10)


def test_simulate_out_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run("simulate", "--config", str(CONFIGS / "double_singlet4.json"), "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["fidelities"]["DS4"] == pytest.approx(1.0)


def test_emitted_states_round_trip(tmp_path):
    code, out, _ = run("simulate", "--config", str(CONFIGS / "mixed4.json"))
    report = json.loads(out)
    raw = PostselectedState.from_json(report["raw_state"])
    again = PostselectedState.from_json(json.loads(json.dumps(raw.to_json())))
    assert again.n == raw.n
    for k in raw:
        assert abs(again.amplitude(k) - raw.amplitude(k)) <= 1e-12
    assert raw.norm_squared() == pytest.approx(report["success_probability"], abs=1e-12)


def test_parse_error_has_line_context(tmp_path):
    code, _, err = run("simulate", "--config", write(tmp_path, '{\n  "n_ports": 4,\n  "inputs": [,]\n}'))
    assert code == EXIT_CONFIG
    assert "cfg.json:3:" in err


def test_parse_error_has_field_context():
    cfg = basis_config("+-")
    cfg["inputs"][1]["minus"] = [1, "x"]
    with pytest.raises(ParseError) as exc:
        parse_config(json.dumps(cfg), "c.json")
    assert exc.value.where == "c.json: inputs[1].minus"


def test_unnormalized_input_rejected():
    cfg = basis_config("+-")
    cfg["inputs"][0]["minus"] = [1, 0]
    with pytest.raises(ConfigurationError, match=r"inputs\[0\]"):
        parse_config(json.dumps(cfg))


def test_dimension_mismatch_exit_code(tmp_path):
    cfg = basis_config("+---")
    cfg["n_ports"] = 3
    code, _, err = run("simulate", "--config", write(tmp_path, cfg))
    assert code == EXIT_CONFIG
    assert "n_ports=3" in err


def test_explicit_unitary(tmp_path):
    r = 1 / math.sqrt(2)
    cfg = basis_config("+-", unitary={"entries": [[[r, 0], [0, r]], [[0, r], [r, 0]]]})
    code, out, _ = run("simulate", "--config", write(tmp_path, cfg))
    assert code == EXIT_OK
    # distinguishable labels: |U11 U22|^2 + |U12 U21|^2
    assert json.loads(out)["success_probability"] == pytest.approx(0.5, abs=1e-12)
    assert "decomposition" not in json.loads(out)


def test_non_unitary_explicit_is_config_error(tmp_path):
    code, _, err = run("simulate", "--config", str(CONFIGS / "corrupted_unitary4.json"))
    assert code == EXIT_CONFIG
    assert "not unitary" in err


def test_sweep_stdout():
    code, out, _ = run("sweep", "--min", "4", "--max", "4")
    assert code == EXIT_OK
    assert out == "n,p_suc\n4,0.0625\n"


def test_sweep_2_2():
    _, out, _ = run("sweep", "--min", "2", "--max", "2")
    assert out.splitlines()[1] == "2,0.5"


@pytest.mark.slow
def test_sweep_file_and_fit(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    code, _, _ = run("sweep", "--min", "2", "--max", "18", "--out", str(csv_path))
    assert code == EXIT_OK
    rows = csv_path.read_text().splitlines()[1:]
    assert len(rows) == 17
    zeros = [int(r.split(",")[0]) for r in rows if float(r.split(",")[1]) <= 1e-12]
    assert zeros == [6, 12]
    code, out, _ = run("fit", "--in", str(csv_path))
    fit = json.loads(out)
    assert 1.17 <= fit["b"] <= 1.37
    assert 6 not in fit["points_used"] and 12 not in fit["points_used"]


def test_sweep_bad_range():
    code, _, err = run("sweep", "--min", "3", "--max", "25")
    assert code == EXIT_CONFIG and "n_max" in err


def test_fit_synthetic(tmp_path):
    lines = ["n,p_suc"] + [f"{n},{math.exp(2 - n):.15g}" for n in range(2, 10)]
    code, out, _ = run("fit", "--in", write(tmp_path, "\n".join(lines) + "\n", "syn.csv"))
    fit = json.loads(out)
    assert fit["a"] == pytest.approx(2, abs=1e-12)
    assert fit["b"] == pytest.approx(1, abs=1e-12)


def test_fit_two_points(tmp_path):
    code, _, err = run("fit", "--in", write(tmp_path, "n,p_suc\n2,0.5\n3,0.1\n", "two.csv"))
    assert code == EXIT_CONFIG
    assert "at least 3" in err


def test_verify_passes():
    code, out, _ = run("verify", "--max-n", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].endswith("checks passed")


def test_verify_size_limit():
    code, _, err = run("verify", "--max-n", "8")
    assert code == EXIT_CONFIG
    assert "max_n <= 7" in err


def test_verify_reports_corrupted_unitary():
    code, out, _ = run("verify", "--max-n", "4", "--config", str(CONFIGS / "corrupted_unitary4.json"))
    assert code == EXIT_VERIFY_FAILED
    assert out.splitlines()[0].startswith("FAIL config unitary")


def test_bad_arguments_exit_2():
    code, _, _ = run("sweep", "--min", "two")
    assert code == EXIT_CONFIG


@pytest.mark.parametrize(
    "p,label",
    [(1 / 16, "1/16"), (1 / 8, "1/8"), (1 / 9, "1/9"), (0.0016, None), (math.pi / 10, None)],
)
def test_rational_label(p, label):
    assert rational_label(p) == label
