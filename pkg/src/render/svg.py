"""SVG figures of point sets, cliques and lenses, rendered through Jinja2."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

from src.errors import InputError
from src.geometry.primitives import PointSet

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"
CANVAS_PX = 640.0
MARGIN_PX = 40.0
POINT_RADIUS_PX = 3.5

_env = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    autoescape=select_autoescape(default=True, default_for_string=True),
    trim_blocks=True,
    lstrip_blocks=True,
)


@dataclass(frozen=True)
class LensArcs:
    """Boundary of the lens of (p, q): two arcs of radius |pq| meeting at a and b."""

    p: tuple[float, float]
    q: tuple[float, float]
    radius: float
    a: tuple[float, float]
    b: tuple[float, float]


def lens_arcs(p: tuple[float, float], q: tuple[float, float]) -> LensArcs:
    """
    The circles of radius r = |pq| around p and q meet on the perpendicular
    bisector at distance r * sqrt(3) / 2 from the midpoint.
    """
    (px, py), (qx, qy) = p, q
    r = math.hypot(qx - px, qy - py)
    if r == 0:
        raise InputError("Lens endpoints coincide")
    mx, my = (px + qx) / 2.0, (py + qy) / 2.0
    # Unit normal to pq
    nx, ny = -(qy - py) / r, (qx - px) / r
    h = r * math.sqrt(3.0) / 2.0
    return LensArcs(
        p=(px, py),
        q=(qx, qy),
        radius=r,
        a=(mx + h * nx, my + h * ny),
        b=(mx - h * nx, my - h * ny),
    )


@dataclass(frozen=True)
class _Frame:
    """World-to-screen transform; screen y grows downward."""

    x0: float
    y1: float
    scale: float

    def to_screen(self, x: float, y: float) -> tuple[float, float]:
        return (
            round(MARGIN_PX + (x - self.x0) * self.scale, 3),
            round(MARGIN_PX + (self.y1 - y) * self.scale, 3),
        )


def _frame(coords: np.ndarray) -> tuple[_Frame, float, float]:
    if coords.shape[0] == 0:
        coords = np.array([[0.0, 0.0], [1.0, 1.0]])
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    # At least one unit of extent so the scale bar fits
    span = max(float((hi - lo).max()), 1.0)
    scale = CANVAS_PX / span
    width = 2 * MARGIN_PX + (hi[0] - lo[0]) * scale
    height = 2 * MARGIN_PX + (hi[1] - lo[1]) * scale + MARGIN_PX
    return _Frame(float(lo[0]), float(hi[1]), scale), max(width, 200.0), height


def _lens_path(arcs: LensArcs, frame: _Frame) -> str:
    a = frame.to_screen(*arcs.a)
    b = frame.to_screen(*arcs.b)
    r = round(arcs.radius * frame.scale, 3)

    def sweep(centre: tuple[float, float], start, end) -> int:
        # Minor arc from start to end turns positively in screen coordinates
        cx, cy = frame.to_screen(*centre)
        cross = (start[0] - cx) * (end[1] - cy) - (start[1] - cy) * (end[0] - cx)
        return 1 if cross > 0 else 0

    return (
        f"M {a[0]} {a[1]} "
        f"A {r} {r} 0 0 {sweep(arcs.p, a, b)} {b[0]} {b[1]} "
        f"A {r} {r} 0 0 {sweep(arcs.q, b, a)} {a[0]} {a[1]} Z"
    )


def render_svg(
    ps: PointSet,
    path: str | Path | None = None,
    clique: Iterable[int] | None = None,
    lens: tuple[int, int] | None = None,
    title: str = "Unit-disk instance",
) -> str:
    """
    Render points (clique members highlighted), an optional lens outline of
    two point ids and a one-unit scale bar. Writes to path when given and
    returns the SVG text either way.
    """
    members = set(int(i) for i in clique) if clique is not None else set()
    bad = [i for i in members if not 0 <= i < len(ps)]
    if bad:
        raise InputError(f"Clique ids out of range: {sorted(bad)}")

    arcs = None
    extent = ps.coords
    if lens is not None:
        p, q = lens
        if not (0 <= p < len(ps) and 0 <= q < len(ps)):
            raise InputError(f"Lens endpoints out of range: {lens}")
        arcs = lens_arcs(tuple(ps.coords[p]), tuple(ps.coords[q]))
        extent = np.vstack([ps.coords, [arcs.a, arcs.b]])

    frame, width, height = _frame(extent)
    points = []
    for i, (x, y) in enumerate(ps.coords):
        cx, cy = frame.to_screen(float(x), float(y))
        points.append(
            {
                "id": i,
                "cx": cx,
                "cy": cy,
                "r": POINT_RADIUS_PX + (1.5 if i in members else 0.0),
                "cls": "clique" if i in members else "point",
            }
        )

    bar_y = round(height - MARGIN_PX / 2.0, 3)
    svg = _env.get_template("instance.svg.j2").render(
        title=title,
        width=round(width, 3),
        height=round(height, 3),
        points=points,
        lens={"path": _lens_path(arcs, frame)} if arcs else None,
        scale_bar={
            "x1": MARGIN_PX,
            "x2": round(MARGIN_PX + frame.scale, 3),
            "y": bar_y,
            "label_y": round(bar_y - 4.0, 3),
        },
        clique_size=len(members),
    )

    if path is not None:
        with open(Path(path), "w", encoding="utf-8") as f:
            f.write(svg)
        logger.debug(f"render_svg(): wrote {len(ps)} points to {path}")
    return svg
