"""Renderers for layout trees: SVG with interactivity metadata, and a
256-color ANSI terminal mode.

SVG output is deterministic byte-for-byte: coordinates are serialized with
fixed 2-decimal formatting.  Every visual element carries ``data-path``
(slash-joined source path, with a leading ``0`` for the body root) and
``data-label`` (the full identifier or class name), which is the hover
contract consumed by the web UI.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from typing import Optional

from geckograph.layout import (
    CELL,
    CONSTRUCTOR,
    FUNCTION,
    KIND_HOLE,
    ConstraintBadge,
    LayoutNode,
)


class WidthOverflow(Exception):
    def __init__(self, required: int, available: int):
        super().__init__(f"terminal too narrow: need {required} columns, have {available}")
        self.required = required
        self.available = available


@dataclass
class RenderOptions:
    scale: float = 28.0  # pixels per layout unit
    mode: str = "full"  # full | compact (compact drops labels)
    theme: str = "screen"  # screen | print

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.mode not in ("full", "compact"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.theme not in ("screen", "print"):
            raise ValueError(f"unknown theme {self.theme!r}")


_THEMES = {
    "screen": {"stroke": "#333333", "stroke_w": 0.02, "fill_opacity": "0.9", "text": "#1a1a1a"},
    "print": {"stroke": "#000000", "stroke_w": 0.035, "fill_opacity": "1", "text": "#000000"},
}
_HIGHLIGHT = "#FF2D78"


def data_path(path: tuple[int, ...]) -> str:
    return "/".join(["0"] + [str(i) for i in path])


class _Svg:
    def __init__(self, scale: float):
        self.scale = scale
        self.parts: list[str] = []

    def px(self, v: float) -> str:
        return f"{round(v, 4) * self.scale:.2f}"

    def open_g(self, attrs: dict[str, str]) -> None:
        text = " ".join(f'{k}="{_escape(v)}"' for k, v in attrs.items())
        self.parts.append(f"<g {text}>" if text else "<g>")

    def close_g(self) -> None:
        self.parts.append("</g>")

    def polygon(self, points: list[tuple[float, float]], **attrs: str) -> None:
        pts = " ".join(f"{self.px(x)},{self.px(y)}" for x, y in points)
        text = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.parts.append(f'<polygon points="{pts}" {text}/>')

    def rect(self, x: float, y: float, w: float, h: float, **attrs: str) -> None:
        text = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.parts.append(
            f'<rect x="{self.px(x)}" y="{self.px(y)}" width="{self.px(w)}" '
            f'height="{self.px(h)}" {text}/>'
        )
    def line(self, x1: float, y1: float, x2: float, y2: float, **attrs: str) -> None:
        text = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.parts.append(
            f'<path d="M {self.px(x1)} {self.px(y1)} L {self.px(x2)} {self.px(y2)}" {text}/>'
        )

    def circle(self, cx: float, cy: float, r: float, **attrs: str) -> None:
        text = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        self.parts.append(
            f'<circle cx="{self.px(cx)}" cy="{self.px(cy)}" r="{self.px(r)}" {text}/>'
        )

    def text(self, x: float, y: float, content: str, size: float, fill: str) -> None:
        self.parts.append(
            f'<text x="{self.px(x)}" y="{self.px(y)}" font-family="monospace" '
            f'font-size="{self.px(size)}" fill="{fill}">{_escape(content)}</text>'
        )


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def to_svg(n: LayoutNode, o: Optional[RenderOptions] = None) -> str:
    o = o or RenderOptions()
    theme = _THEMES[o.theme]
    svg = _Svg(o.scale)
    pad = 0.1
    w = svg.px(n.extent_w + 2 * pad if n.extent_w else n.w + 2 * pad)
    h = svg.px((n.extent_h if n.extent_h else n.h) + 2 * pad)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<g transform="translate({svg.px(pad)},{svg.px(pad)})">',
    ]
    _emit_node(svg, n, o, theme)
    svg.parts.append("</g>")
    return "\n".join(out + svg.parts + ["</svg>", ""])


def _emit_node(svg: _Svg, n: LayoutNode, o: RenderOptions, theme: dict) -> None:
    attrs: dict[str, str] = {"class": f"gg-{n.node_kind.lower()}"}
    if n.source_path is not None:
        attrs["data-path"] = data_path(n.source_path)
    if n.full_name:
        attrs["data-label"] = n.full_name
    svg.open_g(attrs)

    stroke = _HIGHLIGHT if n.highlight else theme["stroke"]
    stroke_w = svg.px(theme["stroke_w"] * (3 if n.highlight else 1))
    notch = 0.25
    if n.node_kind in (CELL, CONSTRUCTOR):
        points = [
            (n.x + notch, n.y),
            (n.x + n.w, n.y),
            (n.x + n.w, n.y + n.h),
            (n.x, n.y + n.h),
            (n.x, n.y + notch),
        ]
        svg.polygon(
            points,
            fill=n.color,
            fill_opacity=theme["fill_opacity"],
            stroke=stroke,
            stroke_width=stroke_w,
        )
    elif n.node_kind == KIND_HOLE:
        svg.rect(
            n.x, n.y, n.w, n.h,
            fill="none", stroke=stroke, stroke_width=stroke_w,
            stroke_dasharray=f"{svg.px(0.08)} {svg.px(0.08)}",
        )
    elif n.node_kind == FUNCTION:
        svg.rect(
            n.x, n.y, n.w, n.h,
            fill="none", stroke=stroke, stroke_width=stroke_w, opacity="0.35",
        )

    if n.indicator is not None:
        ix, iy = n.indicator
        svg.open_g({"class": "gg-indicator"})
        for k in range(3):
            x0 = ix - 0.21 + k * 0.14
            svg.polygon(
                [(x0, iy + 0.05), (x0 + 0.1, iy + 0.15), (x0, iy + 0.25)],
                fill="none", stroke=theme["stroke"], stroke_width=svg.px(0.03),
            )
        svg.close_g()

    if n.label and o.mode == "full":
        svg.text(n.x + 0.07, n.y + n.h - 0.08, n.label, 0.36, theme["text"])

    for badge in n.badges:
        _emit_badge(svg, badge, theme)

    for c in n.children:
        _emit_node(svg, c, o, theme)
    svg.close_g()


def _emit_badge(svg: _Svg, b: ConstraintBadge, theme: dict) -> None:
    svg.open_g({"class": "gg-badge", "data-label": b.class_name})
    if b.qualified:
        # thin rule across the whole constrained span
        svg.line(
            b.span[0], b.y - 0.03, b.span[0] + b.span[1], b.y - 0.03,
            stroke=b.color, stroke_width=svg.px(0.04),
        )
    size = 0.25
    shape = b.shape_index % 4
    sw = svg.px(theme["stroke_w"])
    if shape == 0:
        svg.rect(b.x, b.y, size, size, fill=b.color, stroke=theme["stroke"], stroke_width=sw)
    elif shape == 1:
        svg.circle(b.x + size / 2, b.y + size / 2, size / 2, fill=b.color,
                   stroke=theme["stroke"], stroke_width=sw)
    elif shape == 2:
        svg.polygon(
            [(b.x + size / 2, b.y), (b.x + size, b.y + size), (b.x, b.y + size)],
            fill=b.color, stroke=theme["stroke"], stroke_width=sw,
        )
    else:
        svg.polygon(
            [
                (b.x + size / 2, b.y),
                (b.x + size, b.y + size / 2),
                (b.x + size / 2, b.y + size),
                (b.x, b.y + size / 2),
            ],
            fill=b.color, stroke=theme["stroke"], stroke_width=sw,
        )
    svg.close_g()


# ---------------------------------------------------------------------------
# ANSI terminal mode

_CHARS_PER_LU = 2


def _hex_to_256(color: str) -> int:
    r, g, b = (int(color[i : i + 2], 16) for i in (1, 3, 5))
    to_cube = lambda v: 0 if v < 48 else 1 if v < 115 else (v - 35) // 40
    return 16 + 36 * to_cube(r) + 6 * to_cube(g) + to_cube(b)


def to_ansi(n: LayoutNode, o: Optional[RenderOptions] = None, width: Optional[int] = None) -> str:
    o = o or RenderOptions()
    if width is None:
        width = shutil.get_terminal_size().columns
    cols = max(1, round(n.w * _CHARS_PER_LU))
    if cols > width:
        raise WidthOverflow(required=cols, available=width)

    boundaries = sorted({round(v, 4) for m in n.walk() for v in (m.y, m.y + m.h)})
    bands = list(zip(boundaries, boundaries[1:]))
    grid = [[(" ", None) for _ in range(cols)] for _ in bands]

    def paint(node: LayoutNode) -> None:
        if node.node_kind in (CELL, CONSTRUCTOR, KIND_HOLE):
            c0 = round(node.x * _CHARS_PER_LU)
            c1 = round((node.x + node.w) * _CHARS_PER_LU)
            for bi, (y0, y1) in enumerate(bands):
                mid = (y0 + y1) / 2
                if not (node.y <= mid < node.y + node.h):
                    continue
                for c in range(c0, min(c1, cols)):
                    if node.node_kind == KIND_HOLE:
                        grid[bi][c] = ("░", None)
                    else:
                        grid[bi][c] = ("█", _hex_to_256(node.color))
        for ch in node.children:
            paint(ch)

    paint(n)

    # function indicators overwrite the strip band
    for m in n.walk():
        if m.indicator is None:
            continue
        ix, iy = m.indicator
        for bi, (y0, y1) in enumerate(bands):
            if y0 <= iy + 0.01 < y1:
                c0 = round(ix * _CHARS_PER_LU) - 1
                for k, ch in enumerate(">>>"):
                    c = c0 + k
                    if 0 <= c < cols:
                        grid[bi][c] = (ch, None)

    lines = []
    for row in grid:
        text = []
        cur = None
        for ch, color in row:
            if color != cur:
                text.append("\x1b[0m" if color is None else f"\x1b[38;5;{color}m")
                cur = color
            text.append(ch)
        if cur is not None:
            text.append("\x1b[0m")
        lines.append("".join(text).rstrip())

    if o.mode == "full":
        label_row = [" "] * cols
        for m in n.walk():
            if m.label and m.node_kind in (CELL, CONSTRUCTOR):
                c0 = round(m.x * _CHARS_PER_LU)
                for k, ch in enumerate(m.label):
                    if c0 + k < cols:
                        label_row[c0 + k] = ch
        lines.append("".join(label_row).rstrip())

    if n.extended_rows:
        for row_i in range(n.extended_rows):
            badge_row = [(" ", None)] * cols
            for m in n.walk():
                for b in m.badges:
                    if b.row != row_i:
                        continue
                    c = min(cols - 1, round(b.x * _CHARS_PER_LU))
                    badge_row[c] = ("■", _hex_to_256(b.color))
            text = []
            for ch, color in badge_row:
                text.append(ch if color is None else f"\x1b[38;5;{color}m{ch}\x1b[0m")
            lines.append("".join(text).rstrip())

    return "\n".join(lines) + "\n"
