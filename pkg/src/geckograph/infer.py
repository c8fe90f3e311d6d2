"""Hindley-Milner inference for the game's expression language.

The language is deliberately tiny: variable references, application,
parentheses, and infix operators resolved through a fixity table.  There is
no let, so generalization happens only at the definition boundary.  Fresh
inference variables follow the t0/t1 naming style so error payloads read
like compiler diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from geckograph.syntax import (
    App,
    Con,
    Constraint,
    Fun,
    Scheme,
    TypeExpr,
    Var,
    free_vars,
    kind_infer,
    print_type,
    rename_vars,
)

# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Apply:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class Paren:
    inner: "Expr"


@dataclass(frozen=True)
class InfixApply:
    op_name: str
    left: "Expr"
    right: "Expr"


Expr = Union[VarRef, Apply, Paren, InfixApply]


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple[str, ...]
    body: Expr


Fixity = tuple[str, int]  # ("left" | "right", precedence)

DEFAULT_FIXITIES: dict[str, Fixity] = {
    "$": ("right", 0),
    ".": ("right", 9),
    "<$>": ("left", 4),
    "<*>": ("left", 4),
}


# ---------------------------------------------------------------------------
# Errors


class ExprSyntaxError(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class UnknownOperator(ExprSyntaxError):
    def __init__(self, op: str, offset: int):
        super().__init__(f"unknown operator {op!r}", offset)
        self.op = op


class UnboundName(Exception):
    def __init__(self, name: str, path: tuple[int, ...] = ()):
        super().__init__(f"name {name!r} is not in scope")
        self.name = name
        self.path = path


class TypeError_(Exception):
    """Base for inference failures; carries the expression path."""

    kind = "type_error"

    def __init__(self, message: str, path: tuple[int, ...] = ()):
        super().__init__(message)
        self.path = path

    def to_json(self) -> dict:
        return {"kind": self.kind, "path": list(self.path)}


class OccursCheck(TypeError_):
    kind = "occurs_check"

    def __init__(self, var: str, in_type: TypeExpr, path: tuple[int, ...] = ()):
        super().__init__(
            f"cannot construct the infinite type {var} ~ {print_type(in_type)}", path
        )
        self.var = var
        self.in_type = in_type

    def to_json(self) -> dict:
        return {**super().to_json(), "left": self.var, "right": print_type(self.in_type)}


class Mismatch(TypeError_):
    kind = "mismatch"

    def __init__(self, left: TypeExpr, right: TypeExpr, path: tuple[int, ...] = ()):
        super().__init__(
            f"cannot match {print_type(left)} with {print_type(right)}", path
        )
        self.left = left
        self.right = right

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "left": print_type(self.left),
            "right": print_type(self.right),
        }


# ---------------------------------------------------------------------------
# Expression parser

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_OP_CHARS = set("!#$%&*+./<=>?@\\^|-~:")


@dataclass
class _Tok:
    kind: str  # ident op ( ) = end
    text: str
    offset: int


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            toks.append(_Tok("ident", m.group(0), i))
            i = m.end()
            continue
        if ch in _OP_CHARS:
            j = i
            while j < n and text[j] in _OP_CHARS:
                j += 1
            op = text[i:j]
            toks.append(_Tok("=" if op == "=" else "op", op, i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


class _ExprParser:
    def __init__(self, toks: list[_Tok], fixities: dict[str, Fixity]):
        self.toks = toks
        self.pos = 0
        self.fixities = fixities

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def atom(self) -> Optional[Expr]:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            return VarRef(t.text)
        if t.kind == "(":
            # `(op)` names the operator as a function
            if self.toks[self.pos + 1].kind == "op" and self.toks[self.pos + 2].kind == ")":
                op = self.toks[self.pos + 1].text
                self.pos += 3
                return VarRef(op)
            self.next()
            inner = self.expr(0)
            close = self.next()
            if close.kind != ")":
                raise ExprSyntaxError("expected ')'", close.offset)
            return Paren(inner)
        return None

    def application(self) -> Expr:
        fn = self.atom()
        if fn is None:
            t = self.peek()
            raise ExprSyntaxError(
                f"expected an expression, found {t.text!r}" if t.text else "expected an expression",
                t.offset,
            )
        while True:
            arg = self.atom()
            if arg is None:
                return fn
            fn = Apply(fn, arg)

    def expr(self, min_prec: int) -> Expr:
        left = self.application()
        while True:
            t = self.peek()
            if t.kind != "op":
                return left
            fixity = self.fixities.get(t.text)
            if fixity is None:
                raise UnknownOperator(t.text, t.offset)
            assoc, prec = fixity
            if prec < min_prec:
                return left
            self.next()
            right = self.expr(prec + 1 if assoc == "left" else prec)
            left = InfixApply(t.text, left, right)


def parse_expr(text: str, fixities: Optional[dict[str, Fixity]] = None) -> Definition:
    """Parse ``name params* = body`` under the given fixity table."""
    fixities = DEFAULT_FIXITIES if fixities is None else fixities
    toks = _lex(text)
    idents = []
    pos = 0
    while toks[pos].kind == "ident":
        idents.append(toks[pos].text)
        pos += 1
    if not idents:
        raise ExprSyntaxError("expected a definition name", toks[pos].offset)
    if toks[pos].kind != "=":
        raise ExprSyntaxError("expected '=' after definition head", toks[pos].offset)
    params = tuple(idents[1:])
    if len(set(params)) != len(params):
        raise ExprSyntaxError("duplicate parameter names", toks[0].offset)
    parser = _ExprParser(toks[pos + 1 :], fixities)
    body = parser.expr(0)
    end = parser.peek()
    if end.kind != "end":
        raise ExprSyntaxError(f"unexpected {end.text!r}", end.offset)
    return Definition(idents[0], params, body)


# ---------------------------------------------------------------------------
# Substitution and unification


class Subst:
    """Idempotent map from inference variable names to types."""

    def __init__(self, mapping: Optional[dict[str, TypeExpr]] = None):
        self.mapping: dict[str, TypeExpr] = mapping or {}

    def apply(self, t: TypeExpr) -> TypeExpr:
        match t:
            case Var(name):
                sub = self.mapping.get(name)
                return t if sub is None else self.apply(sub)
            case Con(_):
                return t
            case App(head, arg):
                return App(self.apply(head), self.apply(arg))
            case Fun(dom, cod):
                return Fun(self.apply(dom), self.apply(cod))
        raise TypeError(t)

    def bind(self, name: str, t: TypeExpr, path: tuple[int, ...] = ()) -> None:
        t = self.apply(t)
        if t == Var(name):
            return
        if name in free_vars(t):
            raise OccursCheck(name, t, path)
        self.mapping[name] = t


def unify(
    t1: TypeExpr, t2: TypeExpr, subst: Optional[Subst] = None, path: tuple[int, ...] = ()
) -> Subst:
    """Most general unifier; extends and returns subst."""
    subst = subst or Subst()
    a, b = subst.apply(t1), subst.apply(t2)
    match (a, b):
        case (Var(n1), Var(n2)) if n1 == n2:
            return subst
        case (Var(n), _):
            subst.bind(n, b, path)
            return subst
        case (_, Var(n)):
            subst.bind(n, a, path)
            return subst
        case (Con(n1), Con(n2)) if n1 == n2:
            return subst
        case (App(h1, a1), App(h2, a2)):
            unify(h1, h2, subst, path)
            unify(a1, a2, subst, path)
            return subst
        case (Fun(d1, c1), Fun(d2, c2)):
            unify(d1, d2, subst, path)
            unify(c1, c2, subst, path)
            return subst
    raise Mismatch(a, b, path)


# ---------------------------------------------------------------------------
# Inference


class InferredVarNamer:
    """Fresh t0/t1-style inference variable source, local to one run."""

    def __init__(self, prefix: str = "t", avoid: Optional[set[str]] = None):
        self.counter = 0
        self.prefix = prefix
        self.avoid = avoid or set()

    def fresh(self) -> Var:
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                return Var(name)


def instantiate(scheme: Scheme, namer: InferredVarNamer) -> TypeExpr:
    mapping = {v: namer.fresh().name for v in scheme.quantified}
    return rename_vars(scheme.body, mapping)


def _infer_expr(
    e: Expr,
    env: dict[str, Scheme],
    locals_: dict[str, TypeExpr],
    subst: Subst,
    namer: InferredVarNamer,
    path: tuple[int, ...],
) -> TypeExpr:
    match e:
        case VarRef(name):
            if name in locals_:
                return subst.apply(locals_[name])
            if name in env:
                return instantiate(env[name], namer)
            raise UnboundName(name, path)
        case Paren(inner):
            return _infer_expr(inner, env, locals_, subst, namer, path + (0,))
        case Apply(fn, arg):
            t_fn = _infer_expr(fn, env, locals_, subst, namer, path + (0,))
            t_arg = _infer_expr(arg, env, locals_, subst, namer, path + (1,))
            result = namer.fresh()
            unify(t_fn, Fun(t_arg, result), subst, path)
            return subst.apply(result)
        case InfixApply(op, left, right):
            t_op = _infer_expr(VarRef(op), env, locals_, subst, namer, path)
            t_l = _infer_expr(left, env, locals_, subst, namer, path + (0,))
            t_r = _infer_expr(right, env, locals_, subst, namer, path + (1,))
            result = namer.fresh()
            unify(t_op, Fun(t_l, Fun(t_r, result)), subst, path)
            return subst.apply(result)
    raise TypeError(e)


_CANON_NAMES = "abcdefghijklmnopqrstuvwxyz"


def canonicalize(t: TypeExpr) -> Scheme:
    """Close over the free variables of t, renamed a, b, c... in
    first-occurrence order."""
    vs = free_vars(t)
    mapping = {}
    for i, v in enumerate(vs):
        if i < len(_CANON_NAMES):
            mapping[v] = _CANON_NAMES[i]
        else:
            mapping[v] = f"{_CANON_NAMES[i % 26]}{i // 26}"
    body = rename_vars(t, mapping)
    scheme = Scheme(quantified=tuple(mapping[v] for v in vs), context=(), body=body)
    kinds = kind_infer(scheme)
    return Scheme(
        scheme.quantified, (), body, tuple(sorted(kinds.items(), key=lambda kv: kv[0]))
    )


def infer(definition: Definition, env: dict[str, Scheme]) -> Scheme:
    """Principal type scheme of a definition, canonically renamed."""
    namer = InferredVarNamer()
    subst = Subst()
    locals_: dict[str, TypeExpr] = {p: namer.fresh() for p in definition.params}
    t_body = _infer_expr(definition.body, env, locals_, subst, namer, ())
    t = subst.apply(t_body)
    for p in reversed(definition.params):
        t = Fun(subst.apply(locals_[p]), t)
    return canonicalize(subst.apply(t))


# ---------------------------------------------------------------------------
# Subsumption

_SKOLEM_PREFIX = "!sk!"


def skolemize(s: Scheme) -> TypeExpr:
    mapping = {v: None for v in s.quantified}
    body = s.body

    def walk(t: TypeExpr) -> TypeExpr:
        match t:
            case Var(name):
                return Con(_SKOLEM_PREFIX + name) if name in mapping else t
            case Con(_):
                return t
            case App(head, arg):
                return App(walk(head), walk(arg))
            case Fun(dom, cod):
                return Fun(walk(dom), walk(cod))
        raise TypeError(t)

    return walk(body)


def _subst_constraint(c: Constraint, subst: Subst) -> Constraint:
    return Constraint(
        c.class_name,
        tuple(subst.apply(p) for p in c.params),
        c.quantified_vars,
        tuple(_subst_constraint(i, subst) for i in c.inner_context),
    )


def subsumes(general: Scheme, specific: Scheme) -> bool:
    """True iff specific can be obtained by instantiating general."""
    namer = InferredVarNamer(prefix="g")
    gmap = {v: namer.fresh().name for v in general.quantified}
    inst = rename_vars(general.body, gmap)
    target = skolemize(specific)
    try:
        subst = unify(inst, target)
    except TypeError_:
        return False
    # contexts: general's constraints must appear in specific's, after
    # applying the instantiation and the same skolem renaming
    if general.context:
        skmap = {v: _SKOLEM_PREFIX + v for v in specific.quantified}
        spec_ctx = {
            (c.class_name, tuple(print_type(_skolem_rename(p, skmap)) for p in c.params))
            for c in specific.context
        }
        for c in general.context:
            inst_params = tuple(subst.apply(rename_vars(p, gmap)) for p in c.params)
            if (c.class_name, tuple(print_type(p) for p in inst_params)) not in spec_ctx:
                return False
    return True


def _skolem_rename(t: TypeExpr, mapping: dict[str, str]) -> TypeExpr:
    match t:
        case Var(name):
            return Con(mapping[name]) if name in mapping else t
        case Con(_):
            return t
        case App(head, arg):
            return App(_skolem_rename(head, mapping), _skolem_rename(arg, mapping))
        case Fun(dom, cod):
            return Fun(_skolem_rename(dom, mapping), _skolem_rename(cod, mapping))
    raise TypeError(t)


