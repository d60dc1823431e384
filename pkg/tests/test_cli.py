import json

import pytest

from quartic.cli import UsageError, _glue_ranges, main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def body(report):
    return {k: v for k, v in report.items() if k != "meta"}


def test_parse_range():
    assert parse_range("1..5") == [1, 2, 3, 4, 5]
    assert parse_range("1..6:odd") == [1, 3, 5]
    assert parse_range("-3..3:even") == [-2, 0, 2]
    assert parse_range("7") == [7]
    for bad in ("5..1", "a..b", "1..5:prime", ""):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_glue_ranges():
    assert _glue_ranges(["scan", "--w", "-25..25", "--d", "3"]) == ["scan", "--w=-25..25", "--d", "3"]


def test_sieve_example(capsys, tmp_path):
    code, rep, _ = run(capsys, "sieve", "--t", "2", "--m", "840", "--r", "1", "--s", "0",
                       "--prime-bound", "10000", "--jobs", "1", "--cache-dir", str(tmp_path))
    assert code == 0 and rep["schema"] == 1
    assert rep["survivors_mod_M"] == [1, 3, 837, 839, 841, 843, 1677, 1679]
    assert len(rep["factor_base"]) == 27
    assert rep["converged"] is True


def test_sieve_non_convergence_exit_one(capsys):
    code, rep, err = run(capsys, "sieve", "--t", "2", "--r", "0", "--s", "0", "--prime-bound", "10000", "--jobs", "1")
    assert code == 1 and "did not converge" in err
    assert rep["converged"] is False


def test_expect_flag(capsys):
    args = ["reduce", "--A", "3", "--B", "2", "--jobs", "1"]
    assert run(capsys, *args, "--expect", 't="2"', "--expect", "solvable=true")[0] == 0
    code, _, err = run(capsys, *args, "--expect", 't="3"')
    assert code == 1 and "expectation failed" in err
    assert run(capsys, *args, "--expect", "t")[0] == 2


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "scan", "--d", "3", "--i", "5..1", "--w", "1", "--jobs", "1")[0] == 2
    assert run(capsys, "conjecture31", "--i", "1..4", "--w", "1", "--jobs", "1")[0] == 2
    assert run(capsys, "descent", "--t", "3", "--n", "841", "--jobs", "1")[0] == 2
    assert run(capsys, "descent", "--t", "2", "--n", "842", "--jobs", "1")[0] == 2
    assert run(capsys, "brute", "--A", "3", "--jobs", "1")[0] == 2
    assert run(capsys, "prove-t2", "--n-bound", "100", "--jobs", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sieve"])
    assert exc.value.code == 2


def test_descent_and_poly(capsys):
    code, rep, _ = run(capsys, "descent", "--t", "2", "--n", "841", "--jobs", "1")
    assert code == 0 and rep["valid"] and rep["jacobi_value"] == -1
    code, rep, _ = run(capsys, "descent", "--t", "2", "--n", "841", "--poly", "linear:2,1", "--jobs", "1")
    assert code == 0 and rep["b"] == 21 and isinstance(rep["witness_modulus"], str)


def test_scan_exit_codes(capsys):
    code, rep, _ = run(capsys, "scan", "--d", "3", "--i", "1", "--w", "-5..5", "--sign", "both", "--jobs", "1")
    assert code == 0 and len(rep["scans"]) == 2
    code, rep, err = run(capsys, "scan", "--d", "2", "--i", "2", "--w", "1..2", "--sign", "plus", "--jobs", "1")
    assert code == 1 and len(rep["exceptions"]) == 2 and "exceptions" in err


def test_brute_modes(capsys):
    code, rep, _ = run(capsys, "brute", "--t", "2", "--n-bound", "301", "--jobs", "1")
    assert code == 0 and rep["square_indices"] == [1, 3] and rep["solutions"] == [["1", "1"], ["3", "11"]]
    code, rep, _ = run(capsys, "brute", "--A", "3", "--B", "2", "--x-bound", "100", "--jobs", "1")
    assert rep["solutions"] == [[1, "1"], [3, "11"]]


def test_reduce_degenerate_exit_one(capsys):
    code, rep, _ = run(capsys, "reduce", "--A", "1", "--B", "7", "--jobs", "1")
    assert code == 1 and rep["degenerate_flag"] is True


def test_deterministic_bodies(capsys):
    args = ["conjecture31", "--i", "1..5:odd", "--w", "-3..3", "--jobs", "1"]
    a, b = run(capsys, *args)[1], run(capsys, *args)[1]
    assert json.dumps(body(a)) == json.dumps(body(b))
    assert set(a["meta"]) == {"version", "command", "started", "elapsed_s"}


def test_parallel_matches_serial(capsys):
    args = ["scan", "--d", "4", "--i", "1..3", "--w", "-4..4", "--sign", "minus"]
    ser = run(capsys, *args, "--jobs", "1")[1]
    par = run(capsys, *args, "--jobs", "2")[1]
    assert body(ser) == body(par)


def test_cold_and_warm_cache_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QS_CACHE_DIR", str(tmp_path))
    args = ["sieve", "--t", "3", "--max-r", "1", "--max-s", "1", "--prime-bound", "5000", "--jobs", "1"]
    cold = run(capsys, *args)[1]
    assert list(tmp_path.glob("*.json"))
    warm = run(capsys, *args)[1]
    assert body(cold) == body(warm)


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    assert main(["reduce", "--A", "5", "--B", "4", "--jobs", "1", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    data = json.loads(path.read_text())
    assert data["t"] == "4" and data["a0"] == "1"
