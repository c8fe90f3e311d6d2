"""Hypothesis property suites over seeded generators: shrinking explores the
seed space while the generators guarantee well-formed inputs."""

import random

from hypothesis import given, settings, strategies as st

from geckograph.infer import Subst, TypeError_, canonicalize, subsumes, unify
from geckograph.layout import layout, shape_of
from geckograph.syntax import parse_scheme, print_scheme, rename_scheme
from geckograph.typediff import diff

from genutil import VARS, random_scheme, random_type_expr

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_parse_print_round_trip(seed):
    s = parse_scheme(random_scheme(random.Random(seed)))
    assert parse_scheme(print_scheme(s)) == s


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_layout_baseline_and_containment(seed):
    root = layout(parse_scheme(random_scheme(random.Random(seed))))
    for n in root.walk():
        for c in n.children:
            assert abs((c.y + c.h) - (n.y + n.h)) < 1e-9
            assert c.x >= n.x - 1e-9 and c.x + c.w <= n.x + n.w + 1e-9


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_layout_alpha_invariant(seed):
    s = parse_scheme(random_scheme(random.Random(seed)))
    renamed = rename_scheme(s, {v: v + "1" for v in VARS})
    assert shape_of(layout(s)) == shape_of(layout(renamed))


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_diff_reflexive(seed):
    s = parse_scheme(random_scheme(random.Random(seed)))
    assert diff(s, s).regions == []


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_unify_sound_and_idempotent(seed):
    rng = random.Random(seed)
    t1 = random_type_expr(rng, 4)
    t2 = random_type_expr(rng, 4, var_pool=("x", "y", "z"))
    try:
        s = unify(t1, t2)
    except TypeError_:
        return
    assert s.apply(t1) == s.apply(t2)
    once = s.apply(t1)
    assert s.apply(once) == once


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_subsumes_reflexive(seed):
    sch = canonicalize(random_type_expr(random.Random(seed), 3))
    assert subsumes(sch, sch)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_subsumes_instantiation(seed):
    rng = random.Random(seed)
    general = canonicalize(random_type_expr(rng, 3))
    mapping = {
        v: random_type_expr(rng, 1, var_pool=(f"u{i}",))
        for i, v in enumerate(general.quantified)
        if rng.random() < 0.5
    }
    specific = canonicalize(Subst(mapping).apply(general.body))
    assert subsumes(general, specific)
