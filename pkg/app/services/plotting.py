"""Figure data for bodies whose embedding ρ(C_∞) is planar (nd = 2).

SVG output is rendered with the Agg backend, a fixed hash salt and no date
metadata so identical inputs give byte-identical files.
"""
import csv
import io
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from app.config import settings  # noqa: E402
from app.core.exceptions import DegenerateError  # noqa: E402
from app.services import omodule  # noqa: E402
from app.services.adelic import AdelicPolytope, lattice_points  # noqa: E402
from app.services.intervals import CertifiedInterval  # noqa: E402
from app.services.numberfield import embed, format_rational  # noqa: E402
from app.services.omodule import Point  # noqa: E402

logger = logging.getLogger(__name__)

_WIDTH = Fraction(1, 10 ** 9)

matplotlib.rcParams["svg.hashsalt"] = "adelic-polytopes"


def _require_planar(C: AdelicPolytope) -> None:
    if C.n * C.field.degree != 2:
        raise DegenerateError("plots need a planar embedding (n*d = 2)", n=C.n, degree=C.field.degree)


def rho(point: Sequence) -> Tuple[float, ...]:
    """Float image of ρ(ι(x)), coordinate i*d + v."""
    field = point[0].field
    return tuple(float(embed(x, v, _WIDTH).midpoint) for x in point for v in range(field.r))


def lattice_in_window(C: AdelicPolytope, window: Optional[float] = None) -> List[Point]:
    """Points of 𝔐 whose embedding lies in the square [-window, window]^{nd}."""
    window = Fraction(str(window if window is not None else settings.SVG_WINDOW))
    box = [CertifiedInterval(-window, window)] * (C.n * C.field.degree)
    return omodule.enumerate_in_box(C.finite_part, box)


def body_outline(C: AdelicPolytope) -> List[Tuple[float, float]]:
    """Closed polygon of ρ(C_∞) in the plane."""
    _require_planar(C)
    if C.n == 1:
        # product of one interval per place: a rectangle
        spans = []
        for P in C.infinite_parts:
            values = sorted(v.approx()[0] for v in P.vertices)
            spans.append((values[0], values[-1]))
        (x0, x1), (y0, y1) = spans
        return [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
    vertices = [v.approx() for v in C.infinite_parts[0].vertices]
    return [(x, y) for x, y in vertices + vertices[:1]]


def render_svg(C: AdelicPolytope, window: Optional[float] = None, labels: bool = False,
               title: Optional[str] = None) -> str:
    _require_planar(C)
    window = float(window if window is not None else settings.SVG_WINDOW)
    lattice = lattice_in_window(C, window)
    inside = set(lattice_points(C))

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.axhline(0, color="0.8", linestyle="--", linewidth=0.8)
    ax.axvline(0, color="0.8", linestyle="--", linewidth=0.8)
    outline = body_outline(C)
    ax.plot([p[0] for p in outline], [p[1] for p in outline], color="black", linewidth=1.2)

    outer = [rho(x) for x in lattice if x not in inside]
    inner = [rho(x) for x in lattice if x in inside]
    if outer:
        ax.scatter([p[0] for p in outer], [p[1] for p in outer], s=6, color="0.55")
    if inner:
        ax.scatter([p[0] for p in inner], [p[1] for p in inner], s=18, color="black")
    if labels:
        for x in lattice:
            if x in inside:
                px, py = rho(x)
                ax.annotate(", ".join(str(c) for c in x), (px, py), textcoords="offset points",
                            xytext=(4, 4), fontsize=7)

    ax.set_xlim(-window, window)
    ax.set_ylim(-window, window)
    ax.set_aspect("equal")
    if C.n == 1:
        ax.set_xlabel("σ1")
        ax.set_ylabel("σ2")
    if title:
        ax.set_title(title)

    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"svg: {len(lattice)} lattice points in window, {len(inner)} inside the body")
    return buffer.getvalue()


def _point_columns(n: int, degree: int) -> List[str]:
    exact = [f"x{i + 1}_{j}" for i in range(n) for j in range(degree)]
    approx = [f"rho{q + 1}" for q in range(n * degree)]
    return exact + approx


def points_csv(points: Sequence[Point], n: int, degree: int, extra: Optional[Sequence[Tuple[str, str]]] = None) -> str:
    """Exact power-basis coefficients as "p/q" plus float ρ columns.

    `extra` adds one (name, value) column per point.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = _point_columns(n, degree)
    if extra is not None:
        header.append(extra[0][0] if extra else "tag")
    writer.writerow(header)
    for k, point in enumerate(points):
        row = [format_rational(c) for x in point for c in x.coords]
        row += [repr(round(value, 12)) for value in rho(point)]
        if extra is not None:
            row.append(extra[k][1])
        writer.writerow(row)
    return buffer.getvalue()


def figure_csv(C: AdelicPolytope, window: Optional[float] = None) -> str:
    lattice = lattice_in_window(C, window)
    inside = set(lattice_points(C))
    tags = [("inside", "1" if x in inside else "0") for x in lattice]
    return points_csv(lattice, C.n, C.field.degree, tags)


def table_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_rational(v) if isinstance(v, Fraction) else v for v in row])
    return buffer.getvalue()
