"""Seeded random generators for types and schemes, shared by the property
suites and the acceptance gate.

Generated signatures are kind-consistent by construction: variables occur
only as leaves, and constructors are applied at fixed arities, so every
produced string parses without a kind error.
"""

from __future__ import annotations

import random

VARS = ["a", "b", "c", "d", "e"]
NULLARY = ["Int", "Char", "Bool", "Text"]
UNARY = ["Maybe", "Hero", "Tree"]
BINARY = ["Either", "Zero", "Map"]
CLASSES = ["Eq", "Ord", "Show", "Convert"]


def random_type(rng: random.Random, depth: int, allow_fun: bool = True) -> str:
    """A printed type of structural depth <= depth."""
    if depth <= 0:
        return rng.choice(VARS + NULLARY)
    roll = rng.randrange(8 if allow_fun else 6)
    if roll == 0:
        return rng.choice(VARS + NULLARY)
    if roll == 1:
        return f"{rng.choice(UNARY)} {_atom(rng, depth - 1)}"
    if roll == 2:
        return (
            f"{rng.choice(BINARY)} {_atom(rng, depth - 1)} {_atom(rng, depth - 1)}"
        )
    if roll == 3:
        return f"[{random_type(rng, depth - 1)}]"
    if roll == 4:
        return f"({random_type(rng, depth - 1)}, {random_type(rng, depth - 1)})"
    if roll == 5:
        return "()"
    # arrow spine of 2-3 segments
    segs = [
        random_type(rng, depth - 1, allow_fun=rng.random() < 0.3)
        for _ in range(rng.randrange(2, 4))
    ]
    return " -> ".join(_fun_atom(s) for s in segs)


def _atom(rng: random.Random, depth: int) -> str:
    t = random_type(rng, depth, allow_fun=False)
    return f"({t})" if " " in t and not t.startswith(("(", "[")) else t


def _fun_atom(t: str) -> str:
    return f"({t})" if "->" in t and not t.startswith("(") else t


def random_scheme(rng: random.Random, depth: int = 4) -> str:
    """A printed scheme; sometimes constrained over a variable it mentions."""
    body = random_type(rng, depth)
    used = [v for v in VARS if _mentions_var(body, v)]
    if used and rng.random() < 0.4:
        cls = rng.choice(CLASSES)
        if cls == "Convert" and len(used) >= 2:
            picked = rng.sample(used, 2)
            return f"{cls} {picked[0]} {picked[1]} => {body}"
        return f"{cls} {rng.choice(used)} => {body}"
    return body


def _mentions_var(body: str, v: str) -> bool:
    for i, ch in enumerate(body):
        if ch != v:
            continue
        before = body[i - 1] if i else " "
        after = body[i + 1] if i + 1 < len(body) else " "
        if not before.isalnum() and not after.isalnum():
            return True
    return False


# --- AST-level generators for the inference property suites -----------------

from geckograph.syntax import App, Con, Fun, Var  # noqa: E402

GROUND_UNIVERSE = [
    Con("Int"),
    Con("Bool"),
    App(Con("Maybe"), Con("Int")),
    App(Con("Maybe"), Con("Bool")),
    Fun(Con("Int"), Con("Bool")),
]


def random_type_expr(rng: random.Random, depth: int, var_pool=("a", "b", "c")):
    """A random TypeExpr with variables from var_pool; kind discipline is not
    enforced (the unifier does not kind-check)."""
    if depth <= 0 or rng.random() < 0.35:
        leaves = [Var(v) for v in var_pool] + [Con("Int"), Con("Bool")]
        return rng.choice(leaves)
    roll = rng.random()
    if roll < 0.4:
        return Fun(
            random_type_expr(rng, depth - 1, var_pool),
            random_type_expr(rng, depth - 1, var_pool),
        )
    if roll < 0.7:
        return App(Con("Maybe"), random_type_expr(rng, depth - 1, var_pool))
    return App(
        App(Con("Either"), random_type_expr(rng, depth - 1, var_pool)),
        random_type_expr(rng, depth - 1, var_pool),
    )
