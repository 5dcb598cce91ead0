"""
Benchmark matrix runner.

A bench spec (JSON) expands into cells (family, n, param, algo, seed). Each
cell generates its instance, times one solve and yields a CSV row. Cells run
in their own spawned process so a cell that exceeds its timeout can be
terminated; rows always come back in spec order.
"""

import csv
import json
import logging
import multiprocessing as mp
import queue
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from src import config
from src.constants import DEFAULT_BENCH_TIMEOUT_S
from src.errors import InputError, UdgCliqueError
from src.instances.generators import FAMILIES, GenSpec, generate
from src.solvers.convex_randomized import RandomizedConfig, max_clique_convex
from src.solvers.convex_sweep import sweep_given_point
from src.solvers.general import max_clique_general
from src.solvers.lens import max_clique_lens_baseline

logger = logging.getLogger(__name__)

# Seconds between checks on a spawned cell that has not answered yet
ISOLATED_POLL_S = 0.5

ALGOS = ("general", "lens", "convex", "convex-given", "convex-given-exact")
CSV_COLUMNS = [
    "family",
    "n",
    "param",
    "algo",
    "seed",
    "clique_size",
    "elapsed_ms",
    "probes",
    "updates",
    "status",
]


@dataclass(frozen=True)
class BenchCell:
    family: str
    n: int
    param: float
    algo: str
    seed: int
    k_max: int = 8


@dataclass
class BenchSpec:
    cells: list[BenchCell] = field(default_factory=list)
    timeout_s: float = DEFAULT_BENCH_TIMEOUT_S


def parse_bench_spec(data: dict) -> BenchSpec:
    """Expand families x n x algos x seeds, in that nesting order."""
    try:
        families = data["families"]
        algos = data["algos"]
        seeds = data["seeds"]
    except KeyError as e:
        raise InputError(f"Bench spec is missing key {e}") from e
    for algo in algos:
        if algo not in ALGOS:
            raise InputError(f"Unknown bench algorithm {algo!r}; expected {ALGOS}")

    cells = []
    for entry in families:
        family = entry.get("family")
        if family not in FAMILIES:
            raise InputError(f"Unknown family {family!r}; expected {FAMILIES}")
        for n in entry["n"]:
            for algo in algos:
                for seed in seeds:
                    cells.append(
                        BenchCell(
                            family=family,
                            n=int(n),
                            param=float(entry["param"]),
                            algo=algo,
                            seed=int(seed),
                            k_max=int(entry.get("k_max", 8)),
                        )
                    )
    timeout_s = float(data.get("timeout_s", DEFAULT_BENCH_TIMEOUT_S))
    if timeout_s <= 0:
        raise InputError(f"timeout_s must be positive, got {timeout_s}")
    return BenchSpec(cells, timeout_s)


def load_bench_spec(path: str | Path) -> BenchSpec:
    """
    Read and validate a bench spec JSON file.

    Args:
        path: JSON file with families, algos, seeds and optional timeout_s

    Returns:
        BenchSpec with one cell per (family, n, algo, seed)

    Raises:
        InputError: If the JSON is malformed or fails validation
    """
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"Bench spec {path} is not valid JSON: {e}") from e
    return parse_bench_spec(data)


def _base_row(cell: BenchCell) -> dict:
    return {
        "family": cell.family,
        "n": cell.n,
        "param": cell.param,
        "algo": cell.algo,
        "seed": cell.seed,
        "clique_size": "",
        "elapsed_ms": "",
        "probes": "",
        "updates": "",
        "status": "ok",
    }


def run_cell(cell: BenchCell) -> dict:
    """Generate the cell's instance and time a single solve."""
    ps = generate(GenSpec(cell.family, cell.n, cell.param, cell.seed, cell.k_max))
    row = _base_row(cell)
    started = time.perf_counter()
    if cell.algo == "general":
        clique, trace = max_clique_general(ps)
        row["probes"] = len(trace.probes)
    elif cell.algo == "lens":
        clique = max_clique_lens_baseline(ps)
    elif cell.algo == "convex":
        clique = max_clique_convex(ps, RandomizedConfig(seed=cell.seed))
    else:
        policy = "exact" if cell.algo == "convex-given-exact" else "relaxed"
        clique, reports = sweep_given_point(ps, 0, cell.seed, policy)
        row["updates"] = sum(r.counts.total for r in reports)
    elapsed = (time.perf_counter() - started) * 1000.0

    row["clique_size"] = clique.size
    row["elapsed_ms"] = round(elapsed, 3)
    return row


def _error_row(cell: BenchCell, status: str) -> dict:
    row = _base_row(cell)
    row["status"] = status
    return row


def _safe_run_cell(cell: BenchCell) -> dict:
    try:
        return run_cell(cell)
    except UdgCliqueError as e:
        logger.error(f"Bench cell {cell} failed: {e}")
        return _error_row(cell, f"error: {type(e).__name__}")


def _cell_worker(cell: BenchCell, checks: bool, results) -> None:
    config.apply_settings(config.Settings(checks=checks))
    try:
        row = _safe_run_cell(cell)
    except Exception as e:
        # The child reports every failure as a row
        logger.exception(f"Bench cell {cell} crashed: {e}")
        row = _error_row(cell, f"error: {type(e).__name__}")
    results.put(row)


def _run_isolated(cell: BenchCell, timeout_s: float, checks: bool) -> dict:
    ctx = mp.get_context("spawn")
    results = ctx.Queue()
    proc = ctx.Process(target=_cell_worker, args=(cell, checks, results), daemon=True)
    proc.start()
    deadline = time.monotonic() + timeout_s
    while True:
        remaining = deadline - time.monotonic()
        try:
            row = results.get(timeout=max(min(ISOLATED_POLL_S, remaining), 0.0))
            break
        except queue.Empty:
            pass
        if not proc.is_alive():
            try:
                row = results.get(timeout=ISOLATED_POLL_S)
                break
            except queue.Empty:
                logger.error(f"Bench cell {cell} died with exit code {proc.exitcode}")
                return _error_row(cell, f"error: exit code {proc.exitcode}")
        if time.monotonic() >= deadline:
            proc.terminate()
            proc.join()
            logger.warning(f"Bench cell {cell} timed out after {timeout_s}s")
            return _error_row(cell, "timeout")
    proc.join()
    return row


def bench_run(
    spec: BenchSpec,
    settings: config.Settings | None = None,
    isolate: bool = True,
) -> list[dict]:
    """
    Run every cell and return rows in spec order.

    isolate=False runs cells serially in this process (no timeout); the
    process-isolated mode runs up to settings.threads cells at once.
    """
    settings = settings or config.load_settings()
    logger.debug(
        f"bench_run(): {len(spec.cells)} cells, threads={settings.threads}, "
        f"isolate={isolate}, checks={settings.checks}"
    )
    if not isolate:
        previous = config.checks_enabled()
        config.apply_settings(settings)
        try:
            return [_safe_run_cell(cell) for cell in spec.cells]
        finally:
            config.CHECKS_ENABLED = previous

    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        futures = [
            pool.submit(_run_isolated, cell, spec.timeout_s, settings.checks)
            for cell in spec.cells
        ]
        return [f.result() for f in futures]


def _group_key(row: dict) -> tuple:
    return (row["family"], row["n"], row["param"], row["algo"])


def summarize(rows: Iterable[dict]) -> list[dict]:
    """Rows followed by one median row per (family, n, param, algo) group."""
    rows = list(rows)
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row.get("seed") == "median":
            continue
        groups.setdefault(_group_key(row), []).append(row)

    summary = []
    for (family, n, param, algo), members in groups.items():
        ok = [r for r in members if r["status"] == "ok"]
        if not ok:
            continue

        def median_of(column: str):
            values = [float(r[column]) for r in ok if r[column] != ""]
            return round(float(np.median(values)), 3) if values else ""

        summary.append(
            {
                "family": family,
                "n": n,
                "param": param,
                "algo": algo,
                "seed": "median",
                "clique_size": median_of("clique_size"),
                "elapsed_ms": median_of("elapsed_ms"),
                "probes": median_of("probes"),
                "updates": median_of("updates"),
                "status": f"summary of {len(ok)}",
            }
        )
    return rows + summary


def fit_loglog_slope(rows: Iterable[dict], family: str, algo: str) -> float:
    """Least-squares slope of log(median elapsed_ms) against log(n)."""
    by_n: dict[int, list[float]] = {}
    for row in rows:
        if (
            row["family"] == family
            and row["algo"] == algo
            and row["status"] == "ok"
            and row.get("seed") != "median"
        ):
            by_n.setdefault(int(row["n"]), []).append(float(row["elapsed_ms"]))
    if len(by_n) < 2:
        raise InputError(f"Need at least two sizes of {family}/{algo} to fit a slope")
    ns = sorted(by_n)
    medians = [max(float(np.median(by_n[n])), 1e-6) for n in ns]
    slope, _ = np.polyfit(np.log(ns), np.log(medians), 1)
    logger.debug(f"fit_loglog_slope({family}, {algo}): n={ns}, slope={slope:.3f}")
    return float(slope)


def write_csv(rows: Iterable[dict], out: IO[str]) -> None:
    """Header plus one line per row; missing columns are written empty."""
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({col: row.get(col, "") for col in CSV_COLUMNS})

