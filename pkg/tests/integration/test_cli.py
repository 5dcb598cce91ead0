"""Integration tests for the udg-clique command line."""

import csv
import io
import json

import pytest

from src import config
from src.cli.main import EXIT_CONTRACT, EXIT_INPUT, EXIT_OK, main
from src.instances.pointfile import read_clique, read_points
from src.solvers.oracle import brute_force_max_clique

HEXAGON = "tests/fixtures/hexagon.txt"
QUADRILATERAL = "tests/fixtures/quadrilateral.txt"
TWO_TRIANGLES = "tests/fixtures/two_triangles.txt"
UNIT_SQUARE = "tests/fixtures/unit_square.txt"


def _run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


# solve


def test_solve_general(capsys):
    """Test the default solver reports the clique and its search trace."""
    code, report = _run_json(capsys, ["solve", TWO_TRIANGLES])
    assert code == EXIT_OK
    assert report["clique_size"] == 3
    assert report["algorithm"] == "general"
    assert [p["k"] for p in report["probe_trace"]][:3] == [1, 2, 4]
    assert "update_counts" not in report


def test_solve_lens(capsys):
    """Test the lens baseline on the hexagon."""
    code, report = _run_json(capsys, ["solve", HEXAGON, "--algo", "lens"])
    assert code == EXIT_OK
    assert report["indices"] == [0, 1, 2, 3, 4, 5]


def test_solve_convex_reports_branch(capsys):
    """Test the randomized solver reports its branch and threshold."""
    argv = ["solve", HEXAGON, "--algo", "convex", "--seed", "1"]
    code, report = _run_json(capsys, argv)
    assert code == EXIT_OK
    assert report["clique_size"] == 6
    assert report["seed"] == 1
    assert report["randomized"]["branch"] == "sampling"
    assert report["randomized"]["k0"] == 5


def test_solve_convex_given(capsys, tmp_path):
    """Test the anchored sweep reports both runs and writes the clique file."""
    out = tmp_path / "clique.txt"
    argv = [
        "solve",
        QUADRILATERAL,
        "--algo",
        "convex-given",
        "--anchor",
        "0",
        "--seed",
        "0",
        "--out-clique",
        str(out),
    ]
    code, report = _run_json(capsys, argv)
    assert code == EXIT_OK
    assert report["indices"] == [0, 1, 2, 3]
    assert len(report["update_counts"]) == 2
    assert read_clique(out) == [0, 1, 2, 3]


def test_solve_convex_given_needs_anchor(capsys):
    """Test a missing anchor is an input error."""
    assert main(["solve", QUADRILATERAL, "--algo", "convex-given"]) == EXIT_INPUT


def test_solve_rejects_non_convex_input(capsys, tmp_path):
    """Test convex solvers refuse points in general position."""
    path = tmp_path / "pts.txt"
    path.write_text("0 0\n1 0\n0 1\n1 1\n0.5 0.5\n", encoding="utf-8")
    assert main(["solve", str(path), "--algo", "convex"]) == EXIT_INPUT


def test_solve_rejects_duplicates(capsys, tmp_path):
    """Test coincident points are an input error."""
    path = tmp_path / "dup.txt"
    path.write_text("0 0\n0.5 0.5\n0 0\n", encoding="utf-8")
    assert main(["solve", str(path)]) == EXIT_INPUT


def test_solve_missing_file(capsys, tmp_path):
    """Test an unreadable point file maps to exit code 1."""
    assert main(["solve", str(tmp_path / "nope.txt")]) == EXIT_INPUT


def test_solve_no_checks_flag(capsys):
    """Test --no-checks switches the invariant checks off."""
    code, report = _run_json(capsys, ["solve", HEXAGON, "--no-checks"])
    assert code == EXIT_OK
    assert report["clique_size"] == 6
    assert not config.checks_enabled()


def test_usage_errors_exit_one(capsys):
    """Test argparse errors use exit code 1, not 2."""
    assert main(["solve", HEXAGON, "--algo", "magic"]) == EXIT_INPUT
    assert main([]) == EXIT_INPUT
    assert EXIT_CONTRACT == 2


# decide / verify


@pytest.mark.parametrize("k,found", [(3, True), (4, False)])
def test_decide(capsys, k, found):
    """Test decide answers for two separated triangles."""
    code, outcome = _run_json(capsys, ["decide", TWO_TRIANGLES, "--k", str(k)])
    assert code == EXIT_OK
    assert outcome["found"] is found
    assert (outcome["witness"] is not None) is found
    assert outcome["case"] == ("bucket" if found else "none")


def test_verify_valid_and_invalid(capsys, tmp_path):
    """Test verify exits 0 on a clique and 1 with the violating pairs."""
    clique = tmp_path / "clique.txt"
    clique.write_text("0 1\n", encoding="utf-8")
    code, result = _run_json(capsys, ["verify", UNIT_SQUARE, "--clique", str(clique)])
    assert code == EXIT_OK
    assert result == {"valid": True, "size": 2, "violations": []}

    clique.write_text("0 1 3\n", encoding="utf-8")
    code, result = _run_json(capsys, ["verify", UNIT_SQUARE, "--clique", str(clique)])
    assert code == EXIT_INPUT
    assert result["violations"] == [[0, 3]]


# gen / plot


def test_gen_to_file(capsys, tmp_path):
    """Test generated instances are written with a provenance header."""
    out = tmp_path / "convex.txt"
    argv = ["gen", "--family", "convex", "--n", "10", "--param", "0.8"]
    assert main(argv + ["--seed", "1", "--out", str(out)]) == EXIT_OK
    assert len(read_points(out)) == 10
    first = out.read_text(encoding="utf-8").splitlines()[0]
    assert first == "# family=convex_circle n=10 param=0.8 seed=1 k_max=8"


def test_gen_to_stdout(capsys):
    """Test without --out the point file goes to stdout."""
    argv = ["gen", "--family", "uniform", "--n", "5", "--param", "2", "--seed", "3"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# family=uniform_square n=5")
    assert len(lines) == 6


def test_plot_with_solver(capsys, tmp_path):
    """Test plot can solve first and highlight the clique."""
    out = tmp_path / "fig.svg"
    argv = ["plot", HEXAGON, "--out", str(out), "--solve", "lens", "--lens", "0", "3"]
    assert main(argv) == EXIT_OK
    svg = out.read_text(encoding="utf-8")
    assert svg.count('class="clique"') == 6
    assert 'class="lens"' in svg


# bench


def test_bench_serial_with_summary_and_fit(capsys, tmp_path):
    """Test a serial bench writes CSV rows, medians and a slope."""
    spec = tmp_path / "bench.json"
    spec.write_text(
        json.dumps(
            {
                "families": [
                    {"family": "uniform_square", "n": [10, 20], "param": 3.0}
                ],
                "algos": ["general"],
                "seeds": [1, 2],
            }
        ),
        encoding="utf-8",
    )
    out = tmp_path / "bench.csv"
    argv = ["bench", "--spec", str(spec), "--out", str(out), "--serial"]
    assert main(argv + ["--summary", "--fit", "uniform_square:general"]) == EXIT_OK

    rows = list(csv.DictReader(io.StringIO(out.read_text(encoding="utf-8"))))
    assert len(rows) == 6
    assert [r["seed"] for r in rows[4:]] == ["median", "median"]
    assert all(r["status"].startswith(("ok", "summary")) for r in rows)
    slopes = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert "uniform_square:general" in slopes["loglog_slopes"]


def test_gen_then_solve_convex_matches_oracle(capsys, tmp_path):
    """Test a generated convex instance solves to the oracle's clique size."""
    pts = tmp_path / "pts.txt"
    argv = ["gen", "--family", "convex", "--n", "40", "--param", "0.5"]
    assert main(argv + ["--seed", "7", "--out", str(pts)]) == EXIT_OK
    code, report = _run_json(capsys, ["solve", "--algo", "convex", str(pts)])
    assert code == EXIT_OK
    assert report["clique_size"] == brute_force_max_clique(read_points(pts)).size
