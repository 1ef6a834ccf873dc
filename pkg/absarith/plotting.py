"""
SVG and DOT renderers for the command-line figures: the graph of a Smirnov
map, the adjacency wheel on N-th roots of unity, and p-trees of lattices.
"""

import io
import logging
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .big_picture import Lattice, TreeEdge  # noqa: E402
from .config import config  # noqa: E402
from .errors import DomainError  # noqa: E402
from .habiro_topology import adjacency_wheel, wheel_layout  # noqa: E402
from .smirnov_cover import FINITE_TAG, ZERO_TAG, P1Point  # noqa: E402

logger = logging.getLogger(__name__)


def _new_figure() -> Figure:
    plot = config['plot']
    return Figure(
        figsize=(plot.WIDTH / plot.POINTS_PER_INCH, plot.HEIGHT / plot.POINTS_PER_INCH),
        dpi=plot.POINTS_PER_INCH,
    )


def _to_svg(fig: Figure) -> str:
    """Serialize with a fixed hash salt and no timestamp, so output is reproducible"""
    plot = config['plot']
    buffer = io.StringIO()
    with rc_context({"svg.hashsalt": plot.HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def render_smirnov_svg(points: Sequence[Tuple[int, P1Point]], title: Optional[str] = None) -> str:
    """Scatter of p -> q(p) on a logarithmic prime axis.

    Finite images [n] sit at height n, [0] on a rail below them and
    [infinity] on a rail above.
    """
    if not points:
        raise DomainError("render_smirnov_svg needs at least one point")
    plot = config['plot']

    finite = [(p, pt.n) for p, pt in points if pt.tag == FINITE_TAG]
    zeros = [p for p, pt in points if pt.tag == ZERO_TAG]
    infinities = [p for p, pt in points if pt.tag not in (FINITE_TAG, ZERO_TAG)]
    top = max((n for _, n in finite), default=1) + 1

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    ax.set_xscale("log")

    ax.axhline(0, color=plot.ZERO_COLOR, linewidth=0.8, linestyle="--", gid="rail-zero")
    ax.axhline(top, color=plot.INFINITY_COLOR, linewidth=0.8, linestyle="--", gid="rail-infinity")

    if finite:
        ax.scatter([p for p, _ in finite], [n for _, n in finite],
                   s=plot.MARKER_SIZE, color=plot.FINITE_COLOR, gid="points-finite")
    if zeros:
        ax.scatter(zeros, [0] * len(zeros), s=plot.MARKER_SIZE * 2, marker="s",
                   color=plot.ZERO_COLOR, gid="points-zero")
    if infinities:
        ax.scatter(infinities, [top] * len(infinities), s=plot.MARKER_SIZE * 2, marker="^",
                   color=plot.INFINITY_COLOR, gid="points-infinity")

    ax.set_xlabel("p", fontsize=plot.FONT_SIZE)
    ax.set_ylabel("q(p)", fontsize=plot.FONT_SIZE)
    if title:
        ax.set_title(title, fontsize=plot.FONT_SIZE)
    ax.text(1.0, 0, " [0]", transform=ax.get_yaxis_transform(), va="center",
            fontsize=plot.FONT_SIZE, color=plot.ZERO_COLOR)
    ax.text(1.0, top, " [∞]", transform=ax.get_yaxis_transform(), va="center",
            fontsize=plot.FONT_SIZE, color=plot.INFINITY_COLOR)

    logger.debug(f"Smirnov graph: {len(finite)} finite, {len(zeros)} at [0], {len(infinities)} at [∞]")
    return _to_svg(fig)


def render_wheel_svg(N: int) -> str:
    """N-th roots of unity on a circle, adjacent pairs joined and coloured by prime"""
    plot = config['plot']
    layout = wheel_layout(N)
    position = {x: (re, im) for x, re, im in layout}
    edges = adjacency_wheel(N)

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    ax.set_aspect("equal")
    ax.set_axis_off()

    for k, edge in enumerate(edges):
        (x0, y0), (x1, y1) = position[edge.x], position[edge.y]
        color = plot.EDGE_COLORS.get(edge.prime, plot.DEFAULT_EDGE_COLOR)
        ax.plot([x0, x1], [y0, y1], color=color, linewidth=0.6, gid=f"edge-{k}-p{edge.prime}")

    ax.scatter([re for _, re, _ in layout], [im for _, _, im in layout],
               s=plot.MARKER_SIZE, color=plot.FINITE_COLOR, zorder=3, gid="vertices")
    for x, re, im in layout:
        ax.annotate(str(x), (re * 1.08, im * 1.08), ha="center", va="center",
                    fontsize=plot.FONT_SIZE - 3)

    ax.set_title(f"adjacency on μ_{N}", fontsize=plot.FONT_SIZE)
    return _to_svg(fig)


def render_tree_dot(edges: List[TreeEdge], root: Lattice, p: int) -> str:
    """Undirected DOT graph of a p-tree edge list"""
    lines = [f'graph "{p}-tree" {{', f'  "{root}" [shape=doublecircle];']
    for edge in edges:
        lines.append(f'  "{edge.parent}" -- "{edge.child}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
