import csv
import io
import json

import numpy as np
import pytest

from permdyn.cli import main
from permdyn.hamiltonian import OperatorPolynomial, synthesize_exact
from permdyn.io import matrix_from_json, matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_evolve_text(capsys):
    code, out, _ = run(capsys, "evolve", "--spins", "6", "--state", "uudddu", "--steps", "3")
    assert code == 0
    lines = out.split()
    assert len(lines) == 3 and lines[-1] == "uudddu"


def test_evolve_inverse_json(capsys):
    code, out, _ = run(capsys, "evolve", "--spins", "8", "--state", "uuuduuuu", "--inverse", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["initial"] == "uuuduuuu" and len(data["states"]) == 1
    _, fwd, _ = run(capsys, "evolve", "--spins", "8", "--state", data["states"][0], "--format", "text")
    assert fwd.strip() == "uuuduuuu"


@pytest.mark.parametrize("argv", [
    ["evolve", "--spins", "6", "--state", "uux"],
    ["evolve", "--spins", "8", "--state", "uudddu"],
    ["evolve", "--spins", "3", "--state", "uud"],
    ["verify", "exp", "--spins", "3"],
    ["perturb", "--spins", "8", "--epsilon", "-1"],
    ["hamiltonian", "--spins", "4", "--form", "approx"],
    ["orbits", "--spins", "8", "--cap", "6"],
    ["entropy", "--spins", "4", "--term", "uudd:1", "--term", "uudd:-1"],
    ["spectrum", "--cogwheel", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and err.startswith("error:")


def test_orbits_report(capsys):
    code, out, _ = run(capsys, "orbits", "--spins", "6")
    data = json.loads(out)
    assert code == 0 and data["spins"] == 6 and data["total_states"] == 64
    assert sum(o["count"] for o in data["orbits"]) == 64
    assert all(set(o) == {"rep", "length", "count"} for o in data["orbits"])
    assert all(3 % o["length"] == 0 for o in data["orbits"])


def test_hamiltonian_json(capsys):
    _, out, _ = run(capsys, "hamiltonian", "--spins", "8", "--T", "2")
    poly = OperatorPolynomial.from_json(json.loads(out))
    assert poly.coefficients == synthesize_exact(4, 2.0).coefficients


def test_spectrum_csv(capsys):
    _, out, _ = run(capsys, "spectrum", "--spins", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    for row in rows:
        L, r = int(row["L"]), int(row["r"])
        assert float(row["re"]) == pytest.approx(2 * np.pi * r / L, abs=1e-12)


def test_cogwheel_spectrum_csv(capsys):
    _, out, _ = run(capsys, "spectrum", "--cogwheel", "4", "--T", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "eigenvalue"]
    assert [float(r[1]) for r in rows[1:]] == pytest.approx([0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])


@pytest.mark.parametrize("check,spins", [("exp", "8"), ("exp", "40"), ("bch-product", "6"),
                                         ("cogwheel", "16"), ("conservation", "6"),
                                         ("conservation", "64")])
def test_verify_passes(capsys, check, spins):
    code, out, _ = run(capsys, "verify", check, "--spins", spins)
    report = json.loads(out)
    assert code == 0 and report["pass"] and report["check"] == check


def test_verify_fails_with_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "exp", "--spins", "6", "--tol", "1e-30")
    assert code == 1 and not json.loads(out)["pass"]


def test_dense_cap_override(capsys, monkeypatch):
    monkeypatch.setenv("PERMDYN_DENSE_CAP", "4")
    code, _, err = run(capsys, "verify", "bch-product", "--spins", "6")
    assert code == 2 and "cap" in err


def test_perturb_trace(capsys):
    code, out, _ = run(capsys, "perturb", "--spins", "8", "--epsilon", "0", "--times", "1", "2", "3")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 3
    assert all(r["weight"] <= 1e-12 for r in recs)
    _, out, _ = run(capsys, "perturb", "--spins", "8", "--epsilon", "1e-2", "--times", "1", "2")
    assert all(json.loads(line)["weight"] > 0 for line in out.splitlines())


def test_entropy_and_bell_probe(capsys):
    _, out, _ = run(capsys, "entropy", "--spins", "8", "--term", "uuduuduu", "--term", "uduuuudu:-1",
                    "--cut", "4")
    assert json.loads(out)["entropy"] == pytest.approx(np.log(2), abs=1e-12)
    _, out, _ = run(capsys, "bell-probe", "--spins", "8")
    data = json.loads(out)
    assert data["probe"] == "uuudduuu"
    assert {t["state"]: t["re"] for t in data["terms"]} == {"uuduuduu": 1.0, "uduuuudu": -1.0}
    assert data["entropy"] == pytest.approx(np.log(2), abs=1e-12)


def test_output_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for p in paths:
        code, out, _ = run(capsys, "perturb", "--spins", "8", "--epsilon", "1e-3", "--times", "1", "5",
                           "--seed", "7", "-o", str(p))
        assert code == 0 and out == ""
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_plots_written(capsys, tmp_path):
    targets = {
        "orbits.png": ["orbits", "--spins", "8"],
        "spectrum.png": ["spectrum", "--spins", "6", "--form", "approx"],
        "cog.png": ["spectrum", "--cogwheel", "7"],
        "trace.png": ["perturb", "--spins", "8", "--epsilon", "1e-2", "--times", "0", "1", "2"],
    }
    for name, argv in targets.items():
        code, _, _ = run(capsys, *argv, "--plot", str(tmp_path / name))
        assert code == 0
        assert (tmp_path / name).stat().st_size > 1000


def test_matrix_json_round_trip():
    M = np.array([[1 + 2j, 0], [-0.5, 3j]])
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(M)))), M)
    with pytest.raises(ValueError):
        matrix_from_json([[1, 2], [3, 4]][0])
