"""
Point and clique file formats.

Point files are UTF-8 text with one `x y` pair per line; ids are line order
among data lines. Clique files hold whitespace-separated ids. In both, `#`
starts a comment line and blank lines are ignored.
"""

import logging
from pathlib import Path
from typing import Iterable

import numpy as np

from src.errors import InputError
from src.geometry.primitives import PointSet

logger = logging.getLogger(__name__)


def _data_lines(path: Path):
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_points(path: str | Path) -> PointSet:
    """
    Load a point file: one "x y" pair per line, '#' comments and blank lines
    ignored. Point ids follow line order.

    Args:
        path: Point file to read

    Returns:
        PointSet with one row per data line

    Raises:
        OSError: If the file cannot be opened
        InputError: If a line is malformed or a coordinate is not finite
    """
    path = Path(path)
    rows = []
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected 'x y', got {line!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as e:
            raise InputError(f"{path}:{lineno}: {e}") from e
    logger.debug(f"read_points({path}): {len(rows)} points")
    return PointSet(np.array(rows, dtype=np.float64).reshape(-1, 2))


def write_points(path: str | Path, ps: PointSet, header: str | None = None) -> None:
    """repr() round-trips float64 exactly, so re-reading gives identical ids."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        if header:
            for line in header.splitlines():
                f.write(f"# {line}\n")
        for x, y in ps.coords:
            f.write(f"{float(x)!r} {float(y)!r}\n")
    logger.debug(f"write_points({path}): {len(ps)} points")


def read_clique(path: str | Path) -> list[int]:
    """Point ids in file order, any number per line."""
    path = Path(path)
    ids: list[int] = []
    for lineno, line in _data_lines(path):
        for token in line.split():
            try:
                ids.append(int(token))
            except ValueError as e:
                raise InputError(f"{path}:{lineno}: bad point id {token!r}") from e
    return ids


def write_clique(path: str | Path, ids: Iterable[int]) -> None:
    with open(Path(path), "w", encoding="utf-8") as f:
        for i in ids:
            f.write(f"{int(i)}\n")
