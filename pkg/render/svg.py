# render/svg.py
# Minimal deterministic SVG writer: data coordinates in a box are mapped onto a
# fixed pixel canvas (y up), every number printed with three decimals.
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d">
"""

POSTAMBLE = """\
</svg>
"""


def _f(v: float) -> str:
    s = "%.3f" % v
    return "0.000" if s == "-0.000" else s


def diverging(v: float, vmax: float) -> str:
    """Blue (negative) - white - red (positive)."""
    t = 0.0 if vmax <= 0 else max(-1.0, min(1.0, v / vmax))
    if t >= 0:
        r, g, b = 255, int(round(255 * (1 - t))), int(round(255 * (1 - t)))
    else:
        r, g, b = int(round(255 * (1 + t))), int(round(255 * (1 + t))), 255
    return "#%02x%02x%02x" % (r, g, b)


class SvgCanvas:
    def __init__(self, box: Tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0),
                 width: int = 480, height: int = 480, margin: int = 48):
        x0, x1, y0, y1 = box
        if x1 <= x0:
            x0, x1 = x0 - 0.5, x0 + 0.5
        if y1 <= y0:
            y0, y1 = y0 - 0.5, y0 + 0.5
        self.box = (x0, x1, y0, y1)
        self.width = width
        self.height = height
        self.margin = margin
        self.commands: List[str] = []

    # -- coordinates --
    def px(self, x: float, y: float) -> Tuple[float, float]:
        x0, x1, y0, y1 = self.box
        w = self.width - 2 * self.margin
        h = self.height - 2 * self.margin
        return (self.margin + (x - x0) / (x1 - x0) * w,
                self.height - self.margin - (y - y0) / (y1 - y0) * h)

    def _pts(self, points: Iterable[Sequence[float]]) -> str:
        return " ".join("%s,%s" % tuple(map(_f, self.px(p[0], p[1]))) for p in points)

    # -- primitives --
    def comment(self, text: str) -> None:
        self.commands.append("<!-- %s -->" % text.replace("--", "- -"))

    def polygon(self, points, stroke: str = "#000000", fill: str = "none", width: float = 1.0,
                opacity: float = 1.0) -> None:
        pts = list(points)
        if len(pts) == 0:
            return
        if len(pts) < 3:
            self.polyline(pts, stroke=stroke, width=width)
            return
        self.commands.append(
            '<polygon points="%s" style="fill:%s;fill-opacity:%s;stroke:%s;stroke-width:%s"/>'
            % (self._pts(pts), fill, _f(opacity), stroke, _f(width))
        )

    def polyline(self, points, stroke: str = "#000000", width: float = 1.0, dash: Optional[str] = None) -> None:
        pts = list(points)
        if len(pts) == 0:
            return
        if len(pts) == 1:
            pts = pts + pts
        style = "fill:none;stroke:%s;stroke-width:%s" % (stroke, _f(width))
        if dash:
            style += ";stroke-dasharray:%s" % dash
        self.commands.append('<polyline points="%s" style="%s"/>' % (self._pts(pts), style))

    def circle(self, x: float, y: float, r: float = 2.0, fill: str = "#000000", stroke: str = "none",
               width: float = 1.0) -> None:
        cx, cy = self.px(x, y)
        self.commands.append(
            '<circle cx="%s" cy="%s" r="%s" style="fill:%s;stroke:%s;stroke-width:%s"/>'
            % (_f(cx), _f(cy), _f(r), fill, stroke, _f(width))
        )

    def rect(self, x: float, y: float, w: float, h: float, fill: str = "#000000") -> None:
        """Axis-aligned rectangle given in data coordinates (x, y is the lower-left corner)."""
        ax, ay = self.px(x, y + h)
        bx, by = self.px(x + w, y)
        self.commands.append(
            '<rect x="%s" y="%s" width="%s" height="%s" style="fill:%s"/>'
            % (_f(ax), _f(ay), _f(bx - ax), _f(by - ay), fill)
        )

    def text(self, x: float, y: float, text: str, size: int = 11, color: str = "#333333",
             anchor: str = "start", raw: bool = False) -> None:
        """Data coordinates unless raw=True (then pixels)."""
        px, py = (x, y) if raw else self.px(x, y)
        self.commands.append(
            '<text x="%s" y="%s" fill="%s" font-size="%d" font-family="monospace" text-anchor="%s">%s</text>'
            % (_f(px), _f(py), color, size, anchor, escape(text))
        )

    def axes(self, xlabel: str = "", ylabel: str = "", ticks: int = 5) -> None:
        x0, x1, y0, y1 = self.box
        self.polyline([(x0, y0), (x1, y0)], stroke="#888888")
        self.polyline([(x0, y0), (x0, y1)], stroke="#888888")
        for i in range(ticks + 1):
            tx = x0 + (x1 - x0) * i / ticks
            ty = y0 + (y1 - y0) * i / ticks
            px, py = self.px(tx, y0)
            self.text(px, py + 14, "%g" % round(tx, 3), size=9, anchor="middle", raw=True)
            px, py = self.px(x0, ty)
            self.text(px - 6, py + 3, "%g" % round(ty, 3), size=9, anchor="end", raw=True)
        if xlabel:
            self.text(self.width / 2, self.height - 8, xlabel, anchor="middle", raw=True)
        if ylabel:
            self.text(10, self.margin - 12, ylabel, raw=True)

    # -- output --
    def to_string(self) -> str:
        body = "".join(item + "\n" for item in self.commands)
        return PREAMBLE % {"width": self.width, "height": self.height} + body + POSTAMBLE

    def save(self, filename: str) -> None:
        with open(filename, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_string())
