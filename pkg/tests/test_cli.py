"""
The command-line surface: polynomial parsing, degree fitting, the three
subcommands' exit codes and outputs, report determinism, and the external
solver escape hatch.
"""

import json
import math
import os

import pytest

from proofbench.cli import (
    UsageError,
    _classify,
    _search_budget,
    fit_degree,
    main,
    parse_poly,
    solver_answer,
)
from proofbench.core import cnf, emit_dimacs, parse_dimacs, parse_gates
from proofbench.encoder import build_php, build_sat

PAIR_DIMACS = "p cnf 1 2\n1 0\n-1 0\n"
PAIR_PROOF = "A 0\nA 1\nR 0 1 1 :\n"


# ---------------------------------------------------------------------------
# small helpers


def test_parse_poly_forms():
    assert parse_poly("4s") == (0, 4)
    assert parse_poly("s^2+1") == (1, 0, 1)
    assert parse_poly("3s^3+2s") == (0, 2, 0, 3)
    assert parse_poly("7") == (7,)
    assert parse_poly("2+3") == (5,)
    assert parse_poly("s + s") == (0, 2)
    for bad in ("", "x", "s^", "4*s"):
        with pytest.raises(UsageError):
            parse_poly(bad)


def test_fit_degree_recovers_exponents():
    xs = [1.0, 2.0, 4.0, 8.0]
    assert math.isclose(fit_degree(xs, [x**2 for x in xs]), 2.0)
    assert math.isclose(fit_degree(xs, [5 * x for x in xs]), 1.0)
    assert fit_degree(xs, [0, 0, 0, 0]) == 0.0  # zero-safe


def test_search_budget_reads_environment(monkeypatch):
    monkeypatch.setenv("PROOFBENCH_MAX_SECONDS", "0.25")
    assert _search_budget().max_seconds == 0.25
    monkeypatch.delenv("PROOFBENCH_MAX_SECONDS")
    assert _search_budget().max_seconds is None


# ---------------------------------------------------------------------------
# encode


def test_encode_php_round_trip(tmp_path, capsys):
    out = tmp_path / "php.dimacs"
    assert main(["encode", "php", "--pigeons", "2", "--holes", "1", "--out", str(out)]) == 0
    assert "wrote" in capsys.readouterr().out
    text = out.read_text()
    assert parse_dimacs(text) == build_php(2, 1)
    # byte-stable across invocations
    main(["encode", "php", "--pigeons", "2", "--holes", "1", "--out", str(out)])
    assert out.read_text() == text
    assert emit_dimacs(parse_dimacs(text)) == text


def test_encode_prf_defaults_dimensions_from_cnf(tmp_path):
    src = tmp_path / "pair.dimacs"
    src.write_text(PAIR_DIMACS)
    out = tmp_path / "prf.dimacs"
    vmap = tmp_path / "prf.map"
    rc = main(
        ["encode", "prf", "--m", "3", "--cnf", str(src), "--out", str(out), "--map", str(vmap)]
    )
    assert rc == 0
    f = parse_dimacs(out.read_text())
    assert f.n == 3 * (3 * 1 + 2 + 3)  # m(3n+k+m)
    assert len(vmap.read_text().splitlines()) == f.n


def test_encode_sat_emits_circuit(tmp_path):
    out = tmp_path / "sat.gates"
    vmap = tmp_path / "sat.map"
    assert main(["encode", "sat", "--n", "1", "--k", "1", "--out", str(out), "--map", str(vmap)]) == 0
    assert parse_gates(out.read_text()) == build_sat(1, 1)
    assert len(vmap.read_text().splitlines()) == 2 * 1 * 1 + 1


def test_encode_clique_color_writes_both_sides(tmp_path):
    a, b, vmap = (tmp_path / x for x in ("clique.dimacs", "color.dimacs", "edges.map"))
    rc = main(
        ["encode", "clique-color", "--k", "1", "--vertices", "3",
         "--out", str(a), "--out2", str(b), "--map", str(vmap)]
    )
    assert rc == 0
    fa, fb = parse_dimacs(a.read_text()), parse_dimacs(b.read_text())
    assert fa.n == fb.n
    assert vmap.read_text().splitlines() == ["1 e[1,2]", "2 e[1,3]", "3 e[2,3]"]
    rc = main(["encode", "clique-color", "--k", "1", "--vertices", "3", "--out", str(a)])
    assert rc == 2  # missing --out2


def test_encode_to_stdout(capsys):
    assert main(["encode", "php", "--pigeons", "2", "--holes", "2", "--out", "-"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("p cnf ") and "wrote" not in out


def test_encode_usage_errors(tmp_path, capsys):
    assert main(["encode", "php", "--pigeons", "2", "--out", str(tmp_path / "x")]) == 2
    assert main(["encode", "prf", "--m", "2", "--n", "1", "--k", "1"]) == 2  # no --out
    assert main(["encode", "lrfn", "--m", "2", "--cnf", str(tmp_path / "nope"), "--out", "-"]) == 2
    assert "error:" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["encode", "nosuchfamily", "--out", "-"])
    assert e.value.code == 2


def test_encode_rejects_mismatched_dimensions(tmp_path, capsys):
    src = tmp_path / "pair.dimacs"
    src.write_text(PAIR_DIMACS)
    rc = main(
        ["encode", "prf", "--m", "2", "--n", "3", "--k", "1",
         "--cnf", str(src), "--out", str(tmp_path / "x")]
    )
    assert rc == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# check


def _write_pair(tmp_path):
    src = tmp_path / "pair.dimacs"
    src.write_text(PAIR_DIMACS)
    return src


def test_check_valid(tmp_path, capsys):
    src = _write_pair(tmp_path)
    prf = tmp_path / "p.res"
    prf.write_text(PAIR_PROOF)
    assert main(["check", "--cnf", str(src), "--proof", str(prf)]) == 0
    assert capsys.readouterr().out == "valid, 3 lines\n"


def test_check_invalid_is_exit_one(tmp_path, capsys):
    src = _write_pair(tmp_path)
    prf = tmp_path / "p.res"
    prf.write_text("A 0\nA 1\nR 0 1 1 : 1\n")  # claims a non-empty final line
    assert main(["check", "--cnf", str(src), "--proof", str(prf)]) == 1
    assert capsys.readouterr().out.startswith("invalid at step 2:")


def test_check_weakening_mode_flag(tmp_path):
    src = _write_pair(tmp_path)
    prf = tmp_path / "p.res"
    prf.write_text("A 0 : 1\nA 1\nR 0 1 1 :\n")
    assert main(["check", "--cnf", str(src), "--proof", str(prf), "--mode", "weakening"]) == 0


def test_check_parse_and_io_errors_are_exit_two(tmp_path, capsys):
    src = _write_pair(tmp_path)
    prf = tmp_path / "p.res"
    prf.write_text("R 0 1\n")  # malformed resolution line
    assert main(["check", "--cnf", str(src), "--proof", str(prf)]) == 2
    assert main(["check", "--cnf", str(tmp_path / "missing"), "--proof", str(prf)]) == 2
    assert capsys.readouterr().err.count("error:") == 2


# ---------------------------------------------------------------------------
# experiments


def _load_report(path):
    with open(path) as fh:
        return json.load(fh)


def _stable(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in ("generated_at", "wall_clock_s")}


def test_experiment_report_volatile_keys_only(tmp_path, capsys):
    args = [
        "experiment", "lrfn-nontaut", "--count", "2", "--n", "2", "--k", "2",
        "--m", "4,6", "--seed", "3",
    ]
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(args + ["--report", str(r1)]) == 0
    assert main(args + ["--report", str(r2)]) == 0
    assert "ok, report in" in capsys.readouterr().out
    a, b = _load_report(r1), _load_report(r2)
    assert set(a) == {"experiment", "parameters", "records", "aggregate",
                      "generated_at", "wall_clock_s"}
    assert _stable(a) == _stable(b)
    assert a["aggregate"]["valid"] == a["aggregate"]["total"] == 4
    assert a["aggregate"]["fits"]["degree_in_m"] <= 3.0


def test_experiment_workers_match_serial(tmp_path):
    args = [
        "experiment", "am-roundtrip", "--count", "2", "--n", "1", "--seed", "5",
    ]
    r1, r2 = tmp_path / "w1.json", tmp_path / "w2.json"
    assert main(args + ["--workers", "1", "--report", str(r1)]) == 0
    assert main(args + ["--workers", "2", "--report", str(r2)]) == 0
    a, b = _load_report(r1), _load_report(r2)
    assert _stable(a) == _stable(b)


def test_experiment_lowerbound_trend_smallest_point(tmp_path):
    r = tmp_path / "t.json"
    rc = main(
        ["experiment", "lowerbound-trend", "--n", "1", "--max-lines", "11",
         "--report", str(r)]
    )
    assert rc == 0
    rep = _load_report(r)
    # the search target is the refutation-existence instance, not the pair
    assert rep["records"][0]["vars"] == 6 and rep["records"][0]["clauses"] == 9
    assert rep["aggregate"]["values"] == [11]
    assert rep["records"][0]["search"] == "found"
    assert rep["records"][0]["valid"] is True
    assert rep["records"][0]["dpll_valid"] is True


def test_experiment_rfn_cf_sizes_small_grid(tmp_path):
    r = tmp_path / "g.json"
    assert main(["experiment", "rfn-cf-sizes", "--max", "2", "--report", str(r)]) == 0
    rep = _load_report(r)
    sizes = {(x["m"], x["n"], x["k"]): x["lines"] for x in rep["records"]}
    assert sizes[(1, 1, 1)] == 561 and sizes[(2, 2, 2)] == 5681
    assert all(x["valid"] for x in rep["records"])
    assert rep["aggregate"]["max_ratio_to_bound_shape"] <= 360


def test_experiment_json_to_stdout(capsys):
    rc = main(["experiment", "lowerbound-trend", "--n", "1", "--max-lines", "3"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["experiment"] == "lowerbound-trend"


# ---------------------------------------------------------------------------
# external solvers


def _script(tmp_path, name, body):
    path = tmp_path / name
    path.write_text(f"#!/bin/sh\n{body}\n")
    os.chmod(path, 0o755)
    return str(path)


def test_solver_answer_verifies_models(tmp_path):
    f = cnf(2, [[1], [-2]])
    plain = _script(tmp_path, "plain", 'echo "SAT"; echo "1 -2 0"')
    styled = _script(tmp_path, "styled", 'echo "s SATISFIABLE"; echo "v 1 -2 0"')
    assert solver_answer(plain, f) == ("sat", (1, 0))
    assert solver_answer(styled, f) == ("sat", (1, 0))


def test_solver_answer_rejects_lying_model(tmp_path):
    f = cnf(2, [[1], [-2]])
    liar = _script(tmp_path, "liar", 'echo "SAT"; echo "1 2 0"')
    assert solver_answer(liar, f) == ("unknown", "claimed model fails verification")


def test_solver_answer_unsat_is_advisory(tmp_path):
    f = cnf(1, [[1], [-1]])
    for body in ('echo "UNSAT"', 'echo "s UNSATISFIABLE"'):
        sol = _script(tmp_path, "u", body)
        assert solver_answer(sol, f) == ("unsat-advisory",)
    # and unsatisfiable always checks before the SAT substring it contains
    assert solver_answer(_script(tmp_path, "u", 'echo "UNSATISFIABLE"'), f) == (
        "unsat-advisory",
    )


def test_solver_answer_handles_missing_and_silent_solvers(tmp_path):
    f = cnf(1, [[1]])
    assert solver_answer(str(tmp_path / "absent"), f)[0] == "unknown"
    silent = _script(tmp_path, "silent", "true")
    assert solver_answer(silent, f) == ("unknown", "no verdict line in solver output")


def test_classify_falls_back_on_bad_external_answer(tmp_path):
    f = cnf(2, [[1], [-2]])
    liar = _script(tmp_path, "liar", 'echo "SAT"; echo "-1 2 0"')
    verdict = _classify(f, liar)
    assert verdict[0] == "sat"
    assert verdict[1] == (1, 0)  # the internal search's model, not the liar's
