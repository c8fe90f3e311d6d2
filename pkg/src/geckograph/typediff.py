"""Structural alignment of two type expressions with mismatch classification.

The comparison is positional and structural, not nominal: a type variable
matches any leaf, so ``Char`` vs ``t0 a0`` is reported as a single
leaf-vs-structure region rather than a naming problem.  Arrow spines are
compared by length first so an arity difference surfaces once at the spine
root; constructors that match but nest to different depths yield a layer
mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from geckograph.layout import LayoutNode, LayoutOptions, layout
from geckograph.syntax import (
    App,
    Con,
    Fun,
    Scheme,
    TypeExpr,
    Var,
    fun_spine,
)

LEAF_VS_STRUCTURE = "LeafVsStructure"
ARITY_MISMATCH = "ArityMismatch"
LAYER_MISMATCH = "LayerMismatch"
IDENTIFIER_MISMATCH = "IdentifierMismatch"
CONSTRAINT_MISMATCH = "ConstraintMismatch"

KINDS = (
    LEAF_VS_STRUCTURE,
    ARITY_MISMATCH,
    LAYER_MISMATCH,
    IDENTIFIER_MISMATCH,
    CONSTRAINT_MISMATCH,
)

Path = tuple[int, ...]


@dataclass(frozen=True)
class Region:
    lpath: Path
    rpath: Path
    kind: str
    detail: tuple[int, ...] | str = ()


@dataclass
class DiffReport:
    left: Scheme
    right: Scheme
    regions: list[Region] = field(default_factory=list)

    @property
    def summary(self) -> dict[str, int]:
        out = {k: 0 for k in KINDS}
        for r in self.regions:
            out[r.kind] += 1
        return out

    def to_json(self) -> dict:
        from geckograph.syntax import print_scheme

        return {
            "left": print_scheme(self.left),
            "right": print_scheme(self.right),
            "regions": [
                {
                    "lpath": list(r.lpath),
                    "rpath": list(r.rpath),
                    "kind": r.kind,
                    "detail": list(r.detail) if isinstance(r.detail, tuple) else r.detail,
                }
                for r in self.regions
            ],
            "summary": self.summary,
        }


def nesting_depth(t: TypeExpr) -> int:
    """Maximal structural nesting under t; arrow spines do not nest their
    segments, argument-position functions do."""
    match t:
        case Var(_) | Con(_):
            return 0
        case App(head, arg):
            return max(nesting_depth(head), 1 + nesting_depth(arg))
        case Fun(_, _):
            segs = fun_spine(t)
            return max(
                nesting_depth(s) + (1 if isinstance(s, Fun) else 0) for s in segs
            )
    raise TypeError(t)


def _is_leaf(t: TypeExpr) -> bool:
    return isinstance(t, (Var, Con))


def _walk(l: TypeExpr, r: TypeExpr, lp: Path, rp: Path, out: list[Region]) -> None:
    l_segs = fun_spine(l)
    r_segs = fun_spine(r)
    if len(l_segs) > 1 or len(r_segs) > 1:
        if len(l_segs) != len(r_segs):
            out.append(
                Region(lp, rp, ARITY_MISMATCH, (len(l_segs) - 1, len(r_segs) - 1))
            )
            return
        for i in range(len(l_segs)):
            tail = (1,) * i
            lseg_p = lp + tail + ((0,) if i < len(l_segs) - 1 else ())
            rseg_p = rp + tail + ((0,) if i < len(r_segs) - 1 else ())
            _walk(l_segs[i], r_segs[i], lseg_p, rseg_p, out)
        return

    if _is_leaf(l) and _is_leaf(r):
        if isinstance(l, Con) and isinstance(r, Con) and l.name != r.name:
            out.append(Region(lp, rp, IDENTIFIER_MISMATCH))
        return  # variables match any leaf

    if _is_leaf(l) != _is_leaf(r):
        out.append(Region(lp, rp, LEAF_VS_STRUCTURE))
        return

    # both applications
    dl, dr = nesting_depth(l), nesting_depth(r)
    if dl != dr:
        out.append(Region(lp, rp, LAYER_MISMATCH, (dl, dr)))
        return
    assert isinstance(l, App) and isinstance(r, App)
    _walk(l.head, r.head, lp + (0,), rp + (0,), out)
    _walk(l.arg, r.arg, lp + (1,), rp + (1,), out)


def _constraint_key(c) -> tuple:
    return (c.class_name, c.params, c.quantified_vars, c.inner_context)


def _first_occurrence(body: TypeExpr, t: TypeExpr) -> Path:
    from geckograph.layout import occurrences

    occ = occurrences(body, t)
    return occ[0] if occ else ()


def diff(left: Scheme, right: Scheme) -> DiffReport:
    report = DiffReport(left, right)
    _walk(left.body, right.body, (), (), report.regions)

    # contexts diff as sets keyed by the whole constraint structure
    lkeys = {_constraint_key(c): c for c in left.context}
    rkeys = {_constraint_key(c): c for c in right.context}
    for key, c in lkeys.items():
        if key not in rkeys:
            report.regions.append(
                Region(
                    _first_occurrence(left.body, c.params[0]), (),
                    CONSTRAINT_MISMATCH, c.class_name,
                )
            )
    for key, c in rkeys.items():
        if key not in lkeys:
            report.regions.append(
                Region(
                    (), _first_occurrence(right.body, c.params[0]),
                    CONSTRAINT_MISMATCH, c.class_name,
                )
            )
    return report


def annotate(
    report: DiffReport, opts: Optional[LayoutOptions] = None
) -> tuple[LayoutNode, LayoutNode]:
    """Lay out both sides with highlight flags on every node inside a
    mismatch region."""
    lroot = layout(report.left, opts)
    rroot = layout(report.right, opts)
    lpaths = [r.lpath for r in report.regions if r.kind != CONSTRAINT_MISMATCH]
    rpaths = [r.rpath for r in report.regions if r.kind != CONSTRAINT_MISMATCH]

    def mark(root: LayoutNode, paths: list[Path]) -> None:
        for node in root.walk():
            if node.source_path is None:
                continue
            for p in paths:
                if node.source_path[: len(p)] == p:
                    node.highlight = True
                    break

    mark(lroot, lpaths)
    mark(rroot, rpaths)
    return lroot, rroot
