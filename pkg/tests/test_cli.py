from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from boundary_ising import cli
from boundary_ising.correlate import correlations
from boundary_ising.region import STAPLE_TAU, STAPLE_THETA, regular_polygon, staple_region


def write_region(tmp_path, data, name="region.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def region_dict(r):
    return {"n": r.n, "tau": list(r.matching.pairing), "theta": list(r.theta)}


@pytest.fixture
def square_file(tmp_path):
    return write_region(tmp_path, region_dict(regular_polygon(2)))


@pytest.fixture
def staple_file(tmp_path):
    return write_region(tmp_path, {"n": 6, "tau": list(STAPLE_TAU), "theta": list(STAPLE_THETA)})


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_correlations_csv(capsys, square_file):
    code, out, _ = run(capsys, "correlations", square_file, "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["j", "k", "correlation"]
    assert ["1", "2", repr(correlations(regular_polygon(2))[1, 2])] in rows
    assert float(dict(((r[0], r[1]), r[2]) for r in rows[1:])[("1", "2")]) == pytest.approx(math.sqrt(2) - 1)


def test_correlations_json_round_trip(capsys, staple_file):
    code, out, _ = run(capsys, "correlations", staple_file, "--basis", "derivative")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 6
    expected = correlations(staple_region(), "derivative").entries
    assert np.array_equal(np.array(data["correlations"]), expected)


def test_correlations_vectors_input(capsys, tmp_path):
    path = write_region(tmp_path, {"n": 2, "vectors": [[1, 0], [0, 1], [-1, 0], [0, -1]]})
    code, out, _ = run(capsys, "correlations", path)
    assert code == 0
    assert json.loads(out)["correlations"][0][1] == pytest.approx(math.sqrt(2) - 1, abs=1e-14)


def test_output_is_deterministic(capsys, staple_file):
    first = run(capsys, "correlations", staple_file)[1]
    second = run(capsys, "correlations", staple_file)[1]
    assert first == second


def test_fixed_point_exit_code(capsys, tmp_path):
    path = write_region(tmp_path, {"n": 2, "tau": [1, 4, 3, 2], "theta": [0, 0, 0, 0]})
    code, _, err = run(capsys, "correlations", path)
    assert code == 2
    assert "fixed-point" in err


@pytest.mark.parametrize("content", ["not json", "[1, 2]", '{"n": 2}', '{"n": 0, "tau": [], "theta": []}',
                                     '{"n": 2, "tau": [3, 4, 1], "theta": [0, 1, 2]}'])
def test_bad_files_exit_2(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert run(capsys, "correlations", str(p))[0] == 2


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "correlations", str(tmp_path / "nope.json"))[0] == 2


def test_numerical_failure_exit_3(capsys, staple_file):
    code, _, err = run(capsys, "correlations", staple_file, "--basis", "fourier")
    assert code == 3
    assert "RankDeficient" in err


def test_samples_flag(capsys, square_file):
    code, out, _ = run(capsys, "correlations", square_file, "--basis", "samples", "--samples", "0,2.356194490192345")
    assert code == 0
    assert json.loads(out)["correlations"][0][1] == pytest.approx(math.sqrt(2) - 1, abs=1e-14)
    assert run(capsys, "correlations", square_file, "--basis", "samples", "--samples", "0,x")[0] == 2
    assert run(capsys, "correlations", square_file, "--basis", "samples", "--samples", "0.5")[0] == 2


def test_regular_closed(capsys):
    code, out, _ = run(capsys, "regular", "2")
    assert code == 0
    vals = [row["correlation"] for row in json.loads(out)]
    assert vals == [1.0, pytest.approx(math.sqrt(2) - 1, abs=1e-15)]
    vals3 = [row["correlation"] for row in json.loads(run(capsys, "regular", "3")[1])]
    np.testing.assert_allclose(vals3, [1, 1 / 3, 1 / 3], atol=1e-15)


def test_regular_pipeline_agrees(capsys):
    closed = json.loads(run(capsys, "regular", "6")[1])
    pipe = json.loads(run(capsys, "regular", "6", "--mode", "pipeline")[1])
    diff = max(abs(a["correlation"] - b["correlation"]) for a, b in zip(closed, pipe))
    assert diff <= 1e-9


def test_regular_bad_n(capsys):
    assert run(capsys, "regular", "0")[0] == 2


def test_oracle_square(capsys, square_file):
    code, out, _ = run(capsys, "oracle", square_file)
    assert code == 0
    report = json.loads(out)
    assert report["max_abs_difference"] <= 1e-12
    assert report["placement_spread"] <= 1e-12


def test_oracle_triangle(capsys, tmp_path):
    assert run(capsys, "oracle", write_region(tmp_path, region_dict(regular_polygon(3))))[0] == 0


def test_oracle_corrupted_theta(capsys, tmp_path):
    d = region_dict(regular_polygon(2))
    d["theta"][2] += 0.1
    assert run(capsys, "oracle", write_region(tmp_path, d))[0] == 2


def test_oracle_disagreement_exit_4(capsys, square_file, monkeypatch):
    from boundary_ising import correlate

    real = correlate.correlations

    def skewed(r, *a, **kw):
        m = real(r, *a, **kw).entries.copy()
        m[0, 1] = m[1, 0] = m[0, 1] + 1e-3
        return correlate.CorrelationMatrix(m)

    monkeypatch.setattr(correlate, "correlations", skewed)
    code, _, err = run(capsys, "oracle", square_file)
    assert code == 4
    assert "disagreement at (1,2)" in err


def test_limit_table(capsys):
    code, out, _ = run(capsys, "limit", "0.5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["n"]) for r in rows] == [64, 128, 256, 512]
    errors = [float(r["abs_error"]) for r in rows]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= 0.02
    assert all(float(r["limit"]) == 1.0 for r in rows)


@pytest.mark.parametrize("argv", [["limit", "1.5"], ["limit", "0.5", "--n", "128,64"], ["limit", "0.01", "--n", "10"]])
def test_limit_domain_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_check_square(capsys, square_file):
    code, out, _ = run(capsys, "check", square_file)
    assert code == 0
    names = [line.split()[1].rstrip(":") for line in out.splitlines()]
    assert names == ["orthogonality", "BK=I", "basis-equivalence", "recursion-identity", "oracle"]
    assert all(line.startswith("PASS") for line in out.splitlines())


def test_check_staple(capsys, staple_file):
    code, out, _ = run(capsys, "check", staple_file)
    assert code == 0
    assert "PASS oracle" in out


def test_check_corrupted_matching(capsys, tmp_path):
    path = write_region(tmp_path, {"n": 2, "tau": [2, 3, 1, 4], "theta": [0, 1, 2, 3]})
    assert run(capsys, "check", path)[0] == 2


def test_check_failure_exit_4(capsys, square_file, monkeypatch):
    from boundary_ising import checks

    monkeypatch.setattr(checks, "orthogonality_residual", lambda r, seed=0: 1.0)
    code, out, err = run(capsys, "check", square_file)
    assert code == 4
    assert "FAIL orthogonality" in out
    assert "orthogonality" in err


def test_help_documents_region_format(capsys):
    with pytest.raises(SystemExit):
        cli.main(["correlations", "--help"])
    assert "1-based" in capsys.readouterr().out
