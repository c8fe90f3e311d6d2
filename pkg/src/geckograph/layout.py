"""Geometric layout of type signatures.

Produces a tree of rectangles in abstract layout units (lu), independent of
the output format.  The rules: atomic types are 1x1 notched cells;
application encloses its arguments behind a constructor column, growing one
layer taller than the tallest argument; arrow spines lay segments left to
right under a shared indicator strip, with curried codomain strips merged
into one connected row; constraint badges replicate under every occurrence
of the constrained variable in an extended area below the baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from geckograph.palette import Assignment, Palette, assign_colors
from geckograph.syntax import (
    App,
    Con,
    Constraint,
    Fun,
    Scheme,
    TypeExpr,
    Var,
    app_spine,
    identifiers,
    kind_arity,
)

CELL = "Cell"
CONSTRUCTOR = "ConstructorCell"
FUNCTION = "FunctionCell"
KIND_HOLE = "KindHole"

BADGE_SIZE = 0.25
BADGE_GAP = 0.05


class NotAFunction(Exception):
    pass


@dataclass
class LayoutOptions:
    cell_w: float = 1.0
    cell_h: float = 1.0
    con_col: float = 0.5  # constructor column width
    notch: float = 0.25  # notch triangle leg
    strip_h: float = 0.3  # function indicator strip height
    badge_row_h: float = 0.35  # extended constraint area per badge row
    gap: float = 0.08  # inter-cell gap
    palette: Palette = field(default_factory=Palette)


@dataclass
class ConstraintBadge:
    class_name: str
    class_color_slot: int
    color: str
    shape_index: int  # 0 square, then circle, triangle, diamond
    span: tuple[float, float]  # (x, width) of the area it annotates
    qualified: bool
    row: int
    x: float = 0.0
    y: float = 0.0


@dataclass
class LayoutNode:
    x: float
    y: float
    w: float
    h: float
    node_kind: str
    label: str = ""
    full_name: str = ""
    color_slot: int = -1
    color: str = ""
    notch: bool = False
    indicator: Optional[tuple[float, float]] = None
    badges: list[ConstraintBadge] = field(default_factory=list)
    source_path: Optional[tuple[int, ...]] = None
    children: list["LayoutNode"] = field(default_factory=list)
    highlight: bool = False
    merged_cod: bool = False
    # set on the root only
    extended_rows: int = 0
    extent_w: float = 0.0
    extent_h: float = 0.0
    palette_warning: bool = False

    @property
    def rect(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)

    def walk(self) -> Iterator["LayoutNode"]:
        yield self
        for c in self.children:
            yield from c.walk()


def truncate_label(name: str) -> str:
    if name in ("()", "[]"):
        return name
    if name.startswith("(") and "," in name:
        return ","
    return name if len(name) <= 1 else name[:2]


class _Builder:
    def __init__(self, scheme: Scheme, opts: LayoutOptions, colors: Assignment):
        self.scheme = scheme
        self.opts = opts
        self.colors = colors
        self.kinds = scheme.kind_map()
        self.span_index: dict[tuple[int, ...], LayoutNode] = {}

    def slot(self, ident: str) -> int:
        return self.colors.indices.get(ident, 0)

    def color(self, ident: str) -> str:
        return self.opts.palette.color(self.slot(ident))

    def var_arity(self, name: str) -> int:
        k = self.kinds.get(name)
        return kind_arity(k) if k is not None else 0

    def build(self, t: TypeExpr, path: tuple[int, ...]) -> LayoutNode:
        if isinstance(t, Fun):
            return self.build_fun(t, path)
        if isinstance(t, App):
            return self.build_app(t, path)
        return self.build_leaf(t, path)

    def build_leaf(self, t: TypeExpr, path: tuple[int, ...]) -> LayoutNode:
        o = self.opts
        name = t.name
        arity = self.var_arity(name) if isinstance(t, Var) else 0
        if arity > 0:
            return self.build_con_cell(name, [], arity, path, path)
        node = LayoutNode(
            0.0, 0.0, o.cell_w, o.cell_h,
            CELL, label=truncate_label(name), full_name=name,
            color_slot=self.slot(name), color=self.color(name),
            notch=True, source_path=path,
        )
        self.span_index[path] = node
        return node

    def build_app(self, t: TypeExpr, path: tuple[int, ...]) -> LayoutNode:
        head, args = app_spine(t)
        n = len(args)
        head_path = path + (0,) * n
        arg_nodes = [
            self.build(a, path + (0,) * (n - 1 - i) + (1,)) for i, a in enumerate(args)
        ]
        if not isinstance(head, (Var, Con)):
            raise ValueError("application head must be a variable or constructor")
        holes = 0
        if isinstance(head, Var):
            holes = max(0, self.var_arity(head.name) - n)
        node = self.build_con_cell(head.name, arg_nodes, holes, head_path, path)
        return node

    def build_con_cell(
        self,
        name: str,
        arg_nodes: list[LayoutNode],
        holes: int,
        head_path: tuple[int, ...],
        spine_path: tuple[int, ...],
    ) -> LayoutNode:
        o = self.opts
        for _ in range(holes):
            arg_nodes.append(
                LayoutNode(0.0, 0.0, o.cell_w, o.cell_h, KIND_HOLE)
            )
        inner_h = max((c.h for c in arg_nodes), default=0.0)
        h = o.cell_h + inner_h
        x = o.con_col
        for c in arg_nodes:
            x += o.gap
            c.x, c.y = x, h - c.h
            x += c.w
        node = LayoutNode(
            0.0, 0.0, x, h,
            CONSTRUCTOR, label=truncate_label(name), full_name=name,
            color_slot=self.slot(name), color=self.color(name),
            notch=True, source_path=head_path, children=arg_nodes,
        )
        self.span_index[head_path] = node
        self.span_index[spine_path] = node
        return node

    def build_fun(self, t: Fun, path: tuple[int, ...]) -> LayoutNode:
        o = self.opts
        dom = self.build(t.dom, path + (0,))
        merged = isinstance(t.cod, Fun)
        cod = self.build(t.cod, path + (1,))
        if merged:
            h = max(dom.h + o.strip_h, cod.h)
            _stretch(cod, h)
        else:
            h = o.strip_h + max(dom.h, cod.h)
        dom.x, dom.y = 0.0, h - dom.h
        cod.x, cod.y = dom.w + o.gap, 0.0 if merged else h - cod.h
        node = LayoutNode(
            0.0, 0.0, dom.w + o.gap + cod.w, h,
            FUNCTION,
            indicator=(dom.w + o.gap / 2.0, 0.0),
            source_path=path,
            children=[dom, cod],
            merged_cod=merged,
        )
        self.span_index[path] = node
        return node


def _stretch(fn: LayoutNode, h: float) -> None:
    """Grow a function node to height h, keeping children bottom-aligned and
    the merged codomain strip at the top."""
    delta = h - fn.h
    if delta <= 0:
        return
    fn.h = h
    for i, c in enumerate(fn.children):
        if fn.merged_cod and i == len(fn.children) - 1:
            _stretch(c, h)
        else:
            c.y += delta


def _absolutize(node: LayoutNode, ox: float, oy: float) -> None:
    node.x += ox
    node.y += oy
    if node.indicator is not None:
        node.indicator = (node.indicator[0] + node.x, node.indicator[1] + node.y)
    for c in node.children:
        _absolutize(c, node.x, node.y)


def occurrences(
    body: TypeExpr,
    pattern: TypeExpr,
    wildcards: tuple[str, ...] = (),
) -> list[tuple[int, ...]]:
    """Paths of all subtrees of body structurally equal to pattern.

    Variables listed in wildcards (a qualified constraint's locally
    quantified variables) match any subtree, so the pattern ``f b`` from
    ``forall b. C (f b)`` matches every application of ``f`` in the body."""

    def matches(t: TypeExpr, p: TypeExpr) -> bool:
        if isinstance(p, Var) and p.name in wildcards:
            return True
        if isinstance(p, (App, Fun)) and type(t) is type(p):
            ta, tb = (t.head, t.arg) if isinstance(t, App) else (t.dom, t.cod)
            pa, pb = (p.head, p.arg) if isinstance(p, App) else (p.dom, p.cod)
            return matches(ta, pa) and matches(tb, pb)
        return t == p

    out: list[tuple[int, ...]] = []

    def walk(t: TypeExpr, path: tuple[int, ...]) -> None:
        if matches(t, pattern):
            out.append(path)
            return  # occurrences are maximal; no nested repeats of the same expr
        if isinstance(t, (App, Fun)):
            a, b = (t.head, t.arg) if isinstance(t, App) else (t.dom, t.cod)
            walk(a, path + (0,))
            walk(b, path + (1,))

    walk(body, ())
    return out


def collect_identifiers(s: Scheme) -> list[str]:
    """Type identifiers and class names in first-appearance order."""
    ids = identifiers(s.body, [])

    def walk_constraint(c: Constraint) -> None:
        if c.class_name not in ids:
            ids.append(c.class_name)
        for p in c.params:
            identifiers(p, ids)
        for inner in c.inner_context:
            walk_constraint(inner)

    for c in s.context:
        walk_constraint(c)
    return ids


def layout(s: Scheme, opts: Optional[LayoutOptions] = None) -> LayoutNode:
    opts = opts or LayoutOptions()
    colors = assign_colors(collect_identifiers(s), opts.palette)
    builder = _Builder(s, opts, colors)
    root = builder.build(s.body, ())
    _absolutize(root, 0.0, 0.0)

    plain = [c for c in s.context if not c.qualified]
    qualified = [c for c in s.context if c.qualified]
    rows_plain = 1 if plain else 0
    stacked: dict[int, int] = {}  # id(node) -> badges already stacked in row 0

    def place(c: Constraint, row: int, order_index: int) -> None:
        for pi, param in enumerate(c.params):
            for occ in occurrences(s.body, param, c.quantified_vars):
                node = builder.span_index.get(occ)
                if node is None:
                    continue
                k = stacked.get(id(node), 0) if not c.qualified else 0
                bx = node.x + node.w - (k + 1) * (BADGE_SIZE + BADGE_GAP) + BADGE_GAP
                by = root.h + row * opts.badge_row_h + (opts.badge_row_h - BADGE_SIZE) / 2
                badge = ConstraintBadge(
                    class_name=c.class_name,
                    class_color_slot=builder.slot(c.class_name),
                    color=builder.color(c.class_name),
                    shape_index=pi,
                    span=(node.x, node.w),
                    qualified=c.qualified,
                    row=row,
                    x=bx,
                    y=by,
                )
                node.badges.append(badge)
                if not c.qualified:
                    stacked[id(node)] = k + 1

    for i, c in enumerate(plain):
        place(c, 0, i)
    for j, c in enumerate(qualified):
        place(c, rows_plain + j, j)

    root.extended_rows = rows_plain + len(qualified)
    root.extent_w = root.w
    root.extent_h = root.h + root.extended_rows * opts.badge_row_h
    root.palette_warning = colors.overflowed
    return root


def shape_of(n: LayoutNode):
    """Geometry with labels and colors erased; equal shapes mean congruent
    diagrams."""
    ind = None
    if n.indicator is not None:
        ind = (round(n.indicator[0], 4), round(n.indicator[1], 4))
    return (
        n.node_kind,
        (round(n.x, 4), round(n.y, 4), round(n.w, 4), round(n.h, 4)),
        ind,
        tuple(shape_of(c) for c in n.children),
    )


def arity_by_indicators(n: LayoutNode) -> int:
    """Arity of a function layout, counted as its connected top-strip
    indicators."""
    if n.node_kind != FUNCTION or n.indicator is None:
        raise NotAFunction("layout root carries no function indicator")
    top = n.y
    return sum(
        1
        for m in n.walk()
        if m.node_kind == FUNCTION and m.indicator is not None and m.indicator[1] == top
    )
