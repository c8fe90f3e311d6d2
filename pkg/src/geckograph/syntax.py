"""Parsing, printing, and kind inference for type signatures.

The supported syntax is a Haskell-style subset: type variables, concrete
types, left-nested application, right-associative ``->``, lists ``[a]``,
tuples up to arity 7, unit ``()``, constraint contexts, and a single level
of quantified constraints written ``(forall b. C b => A (a b)) => ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Con:
    name: str  # "[]", "()" and "(,)".."(,,,,,,)" are the builtin aliases


@dataclass(frozen=True)
class App:
    head: "TypeExpr"
    arg: "TypeExpr"


@dataclass(frozen=True)
class Fun:
    dom: "TypeExpr"
    cod: "TypeExpr"


TypeExpr = Union[Var, Con, App, Fun]


@dataclass(frozen=True)
class KStar:
    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class KArrow:
    from_: "Kind"
    to: "Kind"

    def __str__(self) -> str:
        lhs = f"({self.from_})" if isinstance(self.from_, KArrow) else str(self.from_)
        return f"{lhs} -> {self.to}"


Kind = Union[KStar, KArrow]
STAR = KStar()


def kind_arity(k: Kind) -> int:
    n = 0
    while isinstance(k, KArrow):
        n += 1
        k = k.to
    return n


def kind_of_arity(n: int) -> Kind:
    k: Kind = STAR
    for _ in range(n):
        k = KArrow(STAR, k)
    return k


@dataclass(frozen=True)
class Constraint:
    class_name: str
    params: tuple[TypeExpr, ...]
    quantified_vars: tuple[str, ...] = ()
    inner_context: tuple["Constraint", ...] = ()

    @property
    def qualified(self) -> bool:
        return bool(self.quantified_vars) or bool(self.inner_context)


@dataclass(frozen=True)
class Scheme:
    quantified: tuple[str, ...]
    context: tuple[Constraint, ...]
    body: TypeExpr
    kinds: tuple[tuple[str, Kind], ...] = ()

    def kind_map(self) -> dict[str, Kind]:
        return dict(self.kinds)


# ---------------------------------------------------------------------------
# Errors


class ParseError(Exception):
    """Syntax error with a zero-based byte offset and an expectation set."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.expected = expected


class KindMismatch(Exception):
    def __init__(self, var: str, k1: Kind, k2: Kind):
        super().__init__(f"variable '{var}' used at incompatible kinds {k1} and {k2}")
        self.var = var


# ---------------------------------------------------------------------------
# Structural helpers


def app_spine(t: TypeExpr) -> tuple[TypeExpr, list[TypeExpr]]:
    """Return (head, args) of a left-nested application spine."""
    args: list[TypeExpr] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.head
    args.reverse()
    return t, args


def fun_spine(t: TypeExpr) -> list[TypeExpr]:
    """Segments of the maximal right-nested arrow spine at t."""
    segs = []
    while isinstance(t, Fun):
        segs.append(t.dom)
        t = t.cod
    segs.append(t)
    return segs


def free_vars(t: TypeExpr, acc: Optional[list[str]] = None) -> list[str]:
    """Free variable names in first-appearance order."""
    if acc is None:
        acc = []
    match t:
        case Var(name):
            if name not in acc:
                acc.append(name)
        case Con(_):
            pass
        case App(head, arg):
            free_vars(head, acc)
            free_vars(arg, acc)
        case Fun(dom, cod):
            free_vars(dom, acc)
            free_vars(cod, acc)
    return acc


def constraint_free_vars(c: Constraint, acc: list[str]) -> list[str]:
    for p in c.params:
        free_vars(p, acc)
    for inner in c.inner_context:
        constraint_free_vars(inner, acc)
    return [v for v in acc if v not in c.quantified_vars]


def identifiers(t: TypeExpr, acc: Optional[list[str]] = None) -> list[str]:
    """Variable and constructor names in first-appearance order."""
    if acc is None:
        acc = []
    match t:
        case Var(name) | Con(name):
            if name not in acc:
                acc.append(name)
        case App(head, arg):
            identifiers(head, acc)
            identifiers(arg, acc)
        case Fun(dom, cod):
            identifiers(dom, acc)
            identifiers(cod, acc)
    return acc


def child_at(t: TypeExpr, index: int) -> TypeExpr:
    match t:
        case App(head, arg) | Fun(head, arg):
            return (head, arg)[index]
    raise IndexError(f"node has no child {index}")


def node_at(t: TypeExpr, path: tuple[int, ...]) -> TypeExpr:
    for i in path:
        t = child_at(t, i)
    return t


def rename_vars(t: TypeExpr, mapping: dict[str, str]) -> TypeExpr:
    match t:
        case Var(name):
            return Var(mapping.get(name, name))
        case Con(_):
            return t
        case App(head, arg):
            return App(rename_vars(head, mapping), rename_vars(arg, mapping))
        case Fun(dom, cod):
            return Fun(rename_vars(dom, mapping), rename_vars(cod, mapping))
    raise TypeError(t)


def rename_constraint(c: Constraint, mapping: dict[str, str]) -> Constraint:
    inner = {k: v for k, v in mapping.items() if k not in c.quantified_vars}
    return Constraint(
        class_name=c.class_name,
        params=tuple(rename_vars(p, inner) for p in c.params),
        quantified_vars=c.quantified_vars,
        inner_context=tuple(rename_constraint(i, inner) for i in c.inner_context),
    )


def rename_scheme(s: Scheme, mapping: dict[str, str]) -> Scheme:
    return Scheme(
        quantified=tuple(mapping.get(v, v) for v in s.quantified),
        context=tuple(rename_constraint(c, mapping) for c in s.context),
        body=rename_vars(s.body, mapping),
        kinds=tuple((mapping.get(v, v), k) for v, k in s.kinds),
    )


# ---------------------------------------------------------------------------
# Lexer

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9']*")
_OPERATOR_CHARS = set("!#$%&*+./<=>?@\\^|-~:")

TUPLE_MAX = 7


@dataclass
class Token:
    kind: str  # varid conid ( ) [ ] , -> => :: forall . end
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    for i, ch in enumerate(text):
        if ord(ch) > 127:
            raise ParseError("non-ASCII character", i)
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()[],":
            toks.append(Token(ch, ch, i))
            i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group(0)
            if word == "forall":
                toks.append(Token("forall", word, i))
            elif word[0].isupper():
                toks.append(Token("conid", word, i))
            else:
                toks.append(Token("varid", word, i))
            i = m.end()
            continue
        if ch in _OPERATOR_CHARS:
            j = i
            while j < n and text[j] in _OPERATOR_CHARS:
                j += 1
            op = text[i:j]
            if op == "->":
                toks.append(Token("->", op, i))
            elif op == "=>":
                toks.append(Token("=>", op, i))
            elif op == "::":
                toks.append(Token("::", op, i))
            elif op == ".":
                toks.append(Token(".", op, i))
            else:
                toks.append(Token("op", op, i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(Token("end", "", n))
    return toks


class _Cursor:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}", t.offset, (kind,))
        return self.next()


# ---------------------------------------------------------------------------
# Parser


def _strip_name_prefix(cur: _Cursor) -> None:
    # `name ::` or `(op) ::` prefix is discarded
    t = cur.peek()
    if t.kind in ("varid", "conid") and cur.peek(1).kind == "::":
        cur.next()
        cur.next()
    elif (
        t.kind == "("
        and cur.peek(1).kind == "op"
        and cur.peek(2).kind == ")"
        and cur.peek(3).kind == "::"
    ):
        for _ in range(4):
            cur.next()


def _paren_depth_split(cur: _Cursor, kind: str, stop: Optional[int] = None) -> Optional[int]:
    """Index (absolute) of the first depth-0 token of `kind` in [cur.pos, stop)."""
    depth = 0
    for idx in range(cur.pos, stop if stop is not None else len(cur.toks)):
        t = cur.toks[idx]
        if t.kind in ("(", "["):
            depth += 1
        elif t.kind in (")", "]"):
            depth -= 1
            if depth < 0:
                return None
        elif t.kind == kind and depth == 0:
            return idx
    return None


def _parse_atype(cur: _Cursor) -> Optional[TypeExpr]:
    t = cur.peek()
    if t.kind == "varid":
        cur.next()
        return Var(t.text)
    if t.kind == "conid":
        cur.next()
        return Con(t.text)
    if t.kind == "[":
        cur.next()
        inner = _parse_type(cur)
        cur.expect("]")
        return App(Con("[]"), inner)
    if t.kind == "(":
        cur.next()
        if cur.peek().kind == ")":
            cur.next()
            return Con("()")
        parts = [_parse_type(cur)]
        while cur.peek().kind == ",":
            cur.next()
            parts.append(_parse_type(cur))
        cur.expect(")")
        if len(parts) == 1:
            return parts[0]
        if len(parts) > TUPLE_MAX:
            raise ParseError(f"tuples beyond arity {TUPLE_MAX} not supported", t.offset)
        out: TypeExpr = Con("(" + "," * (len(parts) - 1) + ")")
        for p in parts:
            out = App(out, p)
        return out
    return None


def _parse_btype(cur: _Cursor) -> TypeExpr:
    head = _parse_atype(cur)
    if head is None:
        t = cur.peek()
        raise ParseError(
            f"expected a type, found {t.text!r}" if t.text else "expected a type",
            t.offset,
            ("varid", "conid", "(", "["),
        )
    while True:
        arg = _parse_atype(cur)
        if arg is None:
            return head
        head = App(head, arg)


def _parse_type(cur: _Cursor) -> TypeExpr:
    dom = _parse_btype(cur)
    if cur.peek().kind == "->":
        cur.next()
        return Fun(dom, _parse_type(cur))
    return dom


def _parse_constraint(cur: _Cursor, stop: int, allow_qualified: bool = True) -> Constraint:
    quantified: tuple[str, ...] = ()
    inner: tuple[Constraint, ...] = ()
    if cur.peek().kind == "forall":
        if not allow_qualified:
            raise ParseError("nested qualified constraint not supported", cur.peek().offset)
        cur.next()
        names = []
        while cur.peek().kind == "varid":
            names.append(cur.next().text)
        if not names:
            raise ParseError("expected variable after forall", cur.peek().offset)
        cur.expect(".")
        quantified = tuple(names)
    split = _paren_depth_split(cur, "=>", stop)
    if split is not None:
        if not allow_qualified:
            raise ParseError("nested qualified constraint not supported", cur.peek().offset)
        inner = tuple(_parse_context_items(cur, stop=split, allow_qualified=False))
        cur.expect("=>")
    head = cur.peek()
    if head.kind != "conid":
        raise ParseError("expected a class name", head.offset, ("conid",))
    cur.next()
    params: list[TypeExpr] = []
    while cur.pos < stop:
        p = _parse_atype(cur)
        if p is None:
            break
        params.append(p)
    if not params:
        raise ParseError("class constraint needs at least one parameter", cur.peek().offset)
    return Constraint(head.text, tuple(params), quantified, inner)


def _item_end(cur: _Cursor, stop: int) -> int:
    """Index of the next depth-0 comma before stop, else stop itself."""
    comma = _paren_depth_split(cur, ",", stop)
    return comma if comma is not None else stop


def _parse_context_items(cur: _Cursor, stop: int, allow_qualified: bool = True) -> list[Constraint]:
    """Parse the context occupying tokens [cur.pos, stop)."""
    out: list[Constraint] = []
    if cur.peek().kind == "(" and _matching_paren(cur, stop):
        cur.next()
        inner_stop = stop - 1
        out.append(_parse_constraint(cur, _item_end(cur, inner_stop), allow_qualified))
        while cur.peek().kind == ",":
            cur.next()
            out.append(_parse_constraint(cur, _item_end(cur, inner_stop), allow_qualified))
        cur.expect(")")
    else:
        out.append(_parse_constraint(cur, stop, allow_qualified))
    if cur.pos != stop:
        t = cur.peek()
        raise ParseError(f"unexpected {t.text!r} in context", t.offset)
    return out


def _matching_paren(cur: _Cursor, stop: int) -> bool:
    """True when the '(' at cur.pos closes exactly at stop - 1."""
    depth = 0
    for idx in range(cur.pos, stop):
        k = cur.toks[idx].kind
        if k in ("(", "["):
            depth += 1
        elif k in (")", "]"):
            depth -= 1
            if depth == 0:
                return idx == stop - 1
    return False


def parse_type(text: str) -> TypeExpr:
    """Parse a bare type expression (no name prefix, forall, or context)."""
    cur = _Cursor(tokenize(text))
    t = _parse_type(cur)
    end = cur.peek()
    if end.kind != "end":
        raise ParseError(f"unexpected {end.text!r} after type", end.offset)
    return t


def parse_scheme(text: str) -> Scheme:
    cur = _Cursor(tokenize(text))
    _strip_name_prefix(cur)

    explicit: Optional[tuple[str, ...]] = None
    if cur.peek().kind == "forall":
        cur.next()
        names = []
        while cur.peek().kind == "varid":
            names.append(cur.next().text)
        if not names:
            raise ParseError("expected variable after forall", cur.peek().offset)
        cur.expect(".")
        explicit = tuple(names)

    context: tuple[Constraint, ...] = ()
    split = _paren_depth_split(cur, "=>")
    if split is not None:
        context = tuple(_parse_context_items(cur, stop=split))
        cur.expect("=>")
        if _paren_depth_split(cur, "=>") is not None:
            raise ParseError("multiple contexts not supported", cur.peek().offset)

    body = _parse_type(cur)
    end = cur.peek()
    if end.kind != "end":
        raise ParseError(f"unexpected {end.text!r} after type", end.offset)

    implicit: list[str] = []
    free_vars(body, implicit)
    for c in context:
        for v in constraint_free_vars(c, []):
            if v not in implicit:
                implicit.append(v)
    if explicit is None:
        quantified = tuple(implicit)
    else:
        quantified = explicit + tuple(v for v in implicit if v not in explicit)

    scheme = Scheme(quantified=quantified, context=context, body=body)
    kinds = kind_infer(scheme)
    return replace(scheme, kinds=tuple(sorted(kinds.items(), key=lambda kv: kv[0])))


# ---------------------------------------------------------------------------
# Printer

_BUILTIN_TUPLE = re.compile(r"^\(,+\)$")


def _atomic(t: TypeExpr) -> str:
    """Print t, parenthesizing unless it is atomic or sugared ([a], (a, b), ())."""
    if isinstance(t, (Var, Con)) or _is_sugared(t):
        return _print_type(t, 0)
    return "(" + _print_type(t, 0) + ")"


def _print_type(t: TypeExpr, prec: int = 0) -> str:
    # prec 0: arrow position, 1: application argument needing atomic form
    match t:
        case Var(name) | Con(name):
            return name
        case Fun(_, _):
            segs = fun_spine(t)
            text = " -> ".join(
                "(" + _print_type(s, 0) + ")" if isinstance(s, Fun) and i < len(segs) - 1
                else _print_type(s, 0)
                for i, s in enumerate(segs)
            )
            return f"({text})" if prec >= 1 else text
        case App(_, _):
            if _is_sugared(t):
                head, args = app_spine(t)
                if isinstance(head, Con) and head.name == "[]":
                    return "[" + _print_type(args[0], 0) + "]"
                return "(" + ", ".join(_print_type(a, 0) for a in args) + ")"
            head, args = app_spine(t)
            text = " ".join([_atomic(head)] + [_atomic(a) for a in args])
            return f"({text})" if prec >= 1 else text
    raise TypeError(t)


def _is_sugared(t: TypeExpr) -> bool:
    if not isinstance(t, App):
        return False
    head, args = app_spine(t)
    if isinstance(head, Con) and head.name == "[]" and len(args) == 1:
        return True
    if isinstance(head, Con) and _BUILTIN_TUPLE.match(head.name):
        return len(args) == head.name.count(",") + 1
    return False


def print_type(t: TypeExpr) -> str:
    return _print_type(t, 0)


def _print_constraint(c: Constraint) -> str:
    parts = []
    if c.quantified_vars:
        parts.append("forall " + " ".join(c.quantified_vars) + ".")
    if c.inner_context:
        inner = ", ".join(_print_constraint(i) for i in c.inner_context)
        if len(c.inner_context) > 1:
            inner = f"({inner})"
        parts.append(inner + " =>")
    head = c.class_name + " " + " ".join(_atomic(p) for p in c.params)
    parts.append(head)
    return " ".join(parts)


def print_scheme(s: Scheme) -> str:
    parts = []
    implicit: list[str] = []
    free_vars(s.body, implicit)
    for c in s.context:
        for v in constraint_free_vars(c, []):
            if v not in implicit:
                implicit.append(v)
    if tuple(implicit) != s.quantified:
        parts.append("forall " + " ".join(s.quantified) + ".")
    if s.context:
        items = [_print_constraint(c) for c in s.context]
        if len(items) == 1 and not s.context[0].qualified:
            parts.append(items[0] + " =>")
        else:
            parts.append("(" + ", ".join(items) + ") =>")
    parts.append(_print_type(s.body, 0))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Kind inference

_BUILTIN_KINDS = {"()": 0, "[]": 1}


@dataclass
class _KVar:
    id: int
    ref: Optional[object] = None  # resolved kind or another _KVar


def _kprune(k):
    while isinstance(k, _KVar) and k.ref is not None:
        k = k.ref
    return k


def _kunify(k1, k2, var: str) -> None:
    k1, k2 = _kprune(k1), _kprune(k2)
    if isinstance(k1, _KVar):
        if k1 is not k2:
            k1.ref = k2
        return
    if isinstance(k2, _KVar):
        k2.ref = k1
        return
    if isinstance(k1, KStar) and isinstance(k2, KStar):
        return
    if isinstance(k1, tuple) and isinstance(k2, tuple):
        _kunify(k1[0], k2[0], var)
        _kunify(k1[1], k2[1], var)
        return
    raise KindMismatch(var, _kresolve(k1), _kresolve(k2))


def _kresolve(k) -> Kind:
    k = _kprune(k)
    if isinstance(k, _KVar):
        return STAR  # unconstrained kinds default to Star
    if isinstance(k, tuple):
        return KArrow(_kresolve(k[0]), _kresolve(k[1]))
    return k


class _KindSolver:
    def __init__(self) -> None:
        self.counter = 0
        self.vars: dict[str, object] = {}
        self.cons: dict[str, object] = {}

    def fresh(self):
        self.counter += 1
        return _KVar(self.counter)

    def var_kind(self, name: str):
        if name not in self.vars:
            self.vars[name] = self.fresh()
        return self.vars[name]

    def con_kind(self, name: str):
        if name in _BUILTIN_KINDS:
            n = _BUILTIN_KINDS[name]
        elif _BUILTIN_TUPLE.match(name):
            n = name.count(",") + 1
        else:
            if name not in self.cons:
                self.cons[name] = self.fresh()
            return self.cons[name]
        k: object = STAR
        for _ in range(n):
            k = (STAR, k)
        return k

    def infer(self, t: TypeExpr, cur_var: str = "?"):
        match t:
            case Var(name):
                return self.var_kind(name)
            case Con(name):
                return self.con_kind(name)
            case App(head, arg):
                vname = head.name if isinstance(head, Var) else cur_var
                kh = self.infer(head, cur_var)
                ka = self.infer(arg, cur_var)
                result = self.fresh()
                _kunify(kh, (ka, result), vname)
                return result
            case Fun(dom, cod):
                _kunify(self.infer(dom, cur_var), STAR, self._leaf_name(dom))
                _kunify(self.infer(cod, cur_var), STAR, self._leaf_name(cod))
                return STAR
        raise TypeError(t)

    @staticmethod
    def _leaf_name(t: TypeExpr) -> str:
        return t.name if isinstance(t, (Var, Con)) else "?"


def kind_infer(s: Scheme) -> dict[str, Kind]:
    """Minimal kind of each quantified variable; unconstrained default to Star."""
    solver = _KindSolver()
    _kunify(solver.infer(s.body), STAR, _KindSolver._leaf_name(s.body))

    def walk_constraint(c: Constraint) -> None:
        for p in c.params:
            solver.infer(p)  # class parameter kinds are unconstrained overall
        for inner in c.inner_context:
            walk_constraint(inner)

    for c in s.context:
        walk_constraint(c)
    out = {}
    for v in s.quantified:
        out[v] = _kresolve(solver.vars[v]) if v in solver.vars else STAR
    return out
