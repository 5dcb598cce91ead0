"""Unit tests for the argument parser and the documented public entry points."""

import pytest

from src.cli.main import ALGOS, build_parser, main
from src.geometry.primitives import is_clique
from src.instances.pointfile import read_points
from src.solvers.convex_randomized import run_convex
from src.solvers.oracle import brute_force_max_clique

# Parser


def test_solve_defaults():
    """Test solve falls back to the general solver and the relaxed lower rule."""
    args = build_parser().parse_args(["solve", "pts.txt"])
    assert args.algo == "general"
    assert args.lower_policy == "relaxed"
    assert args.seed is None
    assert args.handler.__name__ == "cmd_solve"


@pytest.mark.parametrize("command", ["solve", "decide", "gen", "bench", "verify"])
def test_common_flags_on_every_subcommand(command):
    """Test every subcommand accepts the shared flags."""
    required = {
        "solve": ["pts.txt"],
        "decide": ["pts.txt", "--k", "3"],
        "gen": ["--family", "uniform", "--n", "4", "--param", "2"],
        "bench": ["--spec", "bench.json"],
        "verify": ["pts.txt", "--clique", "c.txt"],
    }[command]
    argv = [command, *required, "--seed", "7", "--verbose", "--no-checks"]
    args = build_parser().parse_args(argv)
    assert args.seed == 7
    assert args.verbose and args.no_checks


def test_unknown_algo_exits_one(capsys):
    """Test a bad choice is a usage error with exit code 1, not 2."""
    assert "quantum" not in ALGOS
    assert main(["solve", "pts.txt", "--algo", "quantum"]) == 1
    assert "invalid choice" in capsys.readouterr().err


# Docstrings


@pytest.mark.parametrize(
    "fn", [is_clique, brute_force_max_clique, read_points, run_convex, build_parser]
)
def test_public_entry_points_document_returns(fn):
    """Test public entry points describe what they return."""
    assert fn.__doc__ is not None
    assert "Returns:" in fn.__doc__
