"""ASCII pictures of labeled patches, for eyeballing only.

Each vertex row is drawn as ``o---07--o``; between two vertex rows a pair of
lines shows vertical edges (``|``) with the slanting edges of each unit
square: ``/`` for the rising one and ``\\`` for the falling one.
"""

from __future__ import annotations

from typing import Mapping

from .grid import Edge, EdgeClass

CELL = 8  # characters per column step


def _fmt(lab: Mapping[Edge, int], e: Edge) -> str | None:
    c = lab.get(e)
    return None if c is None else f"{c:02d}" if c < 100 else str(c)


def render_patch(lab: Mapping[Edge, int], x0: int, y0: int, w: int, h: int) -> str:
    """Draw the ``w x h`` vertex block with lower-left corner ``(x0, y0)``.

    Edges missing from ``lab`` are drawn as blanks, so partial labelings
    show their holes.
    """
    lines = []
    for y in range(y0 + h - 1, y0 - 1, -1):
        row = []
        for x in range(x0, x0 + w):
            row.append("o")
            if x < x0 + w - 1:
                t = _fmt(lab, Edge.at((x, y), EdgeClass.H))
                row.append(f"--{t:-^5}" if t else " " * (CELL - 1))
        lines.append("".join(row).rstrip())
        if y == y0:
            break
        upper, lower = [], []
        for x in range(x0, x0 + w):
            v = _fmt(lab, Edge.at((x, y - 1), EdgeClass.V))
            upper.append(f"|{v}" if v else "   ")
            lower.append("|  " if v else "   ")
            if x < x0 + w - 1:
                r = _fmt(lab, Edge.at((x, y - 1), EdgeClass.R))
                ll = _fmt(lab, Edge.at((x, y), EdgeClass.L))
                upper.append(f" /{r} " if r else "     ")
                lower.append(f" \\{ll} " if ll else "     ")
            upper.append("")
        lines.append("".join(upper).rstrip())
        lines.append("".join(lower).rstrip())
    return "\n".join(lines)


def render_labeling(lab: Mapping[Edge, int]) -> str:
    """Draw the bounding box of a finite labeling."""
    if not lab:
        return ""
    xs = [p.x for e in lab for p in e.endpoints()]
    ys = [p.y for e in lab for p in e.endpoints()]
    return render_patch(lab, min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1)
