"""Hindley-Milner inference: expression parsing, unification, principal
types, and subsumption."""

import itertools
import random

import pytest

from geckograph.game import load_levels
from geckograph.infer import (
    Apply,
    ExprSyntaxError,
    InfixApply,
    Mismatch,
    OccursCheck,
    Subst,
    TypeError_,
    UnboundName,
    UnknownOperator,
    VarRef,
    canonicalize,
    infer,
    parse_expr,
    subsumes,
    unify,
)
from geckograph.syntax import (
    App,
    Con,
    Fun,
    Var,
    free_vars,
    parse_scheme,
    print_scheme,
    rename_scheme,
)

from genutil import GROUND_UNIVERSE, random_type_expr

LEVELS = {l.number: l for l in load_levels()}


def strip_parens(e):
    from geckograph.infer import Paren

    if isinstance(e, Paren):
        return strip_parens(e.inner)
    if isinstance(e, Apply):
        return Apply(strip_parens(e.fn), strip_parens(e.arg))
    if isinstance(e, InfixApply):
        return InfixApply(e.op_name, strip_parens(e.left), strip_parens(e.right))
    return e


class TestParseExpr:
    def test_simple_application(self):
        d = parse_expr("zeroToHero z = f z")
        assert d.name == "zeroToHero"
        assert d.params == ("z",)
        assert strip_parens(d.body) == Apply(VarRef("f"), VarRef("z"))

    def test_operator_fixities(self):
        d = parse_expr("zeroToHero z = f3 . f1 $ z")
        assert strip_parens(d.body) == InfixApply(
            "$", InfixApply(".", VarRef("f3"), VarRef("f1")), VarRef("z")
        )

    def test_left_assoc_with_parens(self):
        d = parse_expr("zeroToHero z = f2 z <*> (f1 z <*> f3 z)")
        body = strip_parens(d.body)
        assert body.op_name == "<*>"
        assert body.left == Apply(VarRef("f2"), VarRef("z"))
        assert body.right.op_name == "<*>"

    def test_dollar_right_associative(self):
        d = parse_expr("zeroToHero z = f $ g $ z")
        body = strip_parens(d.body)
        assert body.right.op_name == "$"

    def test_syntax_error_offset(self):
        with pytest.raises(ExprSyntaxError) as exc:
            parse_expr("zeroToHero z = f (g z")
        assert exc.value.offset == 21

    def test_unknown_operator(self):
        with pytest.raises(UnknownOperator):
            parse_expr("zeroToHero z = f ?? z")

    def test_duplicate_params_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("zeroToHero z z = z")


class TestUnify:
    def test_var_binds(self):
        s = unify(Var("a"), Con("Int"))
        assert s.apply(Var("a")) == Con("Int")

    def test_forced_conflict(self):
        with pytest.raises(Mismatch) as exc:
            unify(
                Fun(Var("a"), Var("a")),
                Fun(Con("Int"), Con("Bool")),
            )
        assert {exc.value.left, exc.value.right} == {Con("Int"), Con("Bool")}

    def test_occurs_check(self):
        with pytest.raises(OccursCheck):
            unify(Var("a"), App(Con("[]"), Var("a")))

    def test_soundness_random(self):
        rng = random.Random(51)
        successes = 0
        for _ in range(400):
            t1 = random_type_expr(rng, 4)
            t2 = random_type_expr(rng, 4, var_pool=("x", "y", "z"))
            try:
                s = unify(t1, t2)
            except TypeError_:
                continue
            successes += 1
            assert s.apply(t1) == s.apply(t2)
            # substitution idempotence
            for t in (t1, t2):
                once = s.apply(t)
                assert s.apply(once) == once
        assert successes > 50

    def test_brute_force_completeness(self):
        # if ground instantiation from a tiny universe equalizes the pair,
        # the unifier must not report a mismatch
        rng = random.Random(52)
        checked = 0
        for _ in range(300):
            t1 = random_type_expr(rng, 2)
            t2 = random_type_expr(rng, 2, var_pool=("x", "y"))
            vs = sorted(set(free_vars(t1) + free_vars(t2)))
            if len(vs) > 3:
                continue
            ground_hit = any(
                Subst(dict(zip(vs, combo))).apply(t1)
                == Subst(dict(zip(vs, combo))).apply(t2)
                for combo in itertools.product(GROUND_UNIVERSE, repeat=len(vs))
            )
            try:
                unify(t1, t2)
                unified = True
            except TypeError_:
                unified = False
            if ground_hit:
                assert unified, (t1, t2)
            checked += 1
        assert checked > 200

    def test_occurs_rejection_random(self):
        rng = random.Random(53)
        for _ in range(200):
            inner = random_type_expr(rng, 2, var_pool=("a",))
            t = App(Con("Maybe"), inner)
            if Var("a") not in _leaves(t):
                continue
            with pytest.raises(OccursCheck):
                unify(Var("a"), t)


def _leaves(t):
    if isinstance(t, (App, Fun)):
        a, b = (t.head, t.arg) if isinstance(t, App) else (t.dom, t.cod)
        return _leaves(a) + _leaves(b)
    return [t]


class TestInfer:
    def infer_text(self, level: int, code: str) -> str:
        lv = LEVELS[level]
        return print_scheme(infer(parse_expr(code, lv.fixities()), lv.env()))

    def test_level1_solution(self):
        assert self.infer_text(1, "zeroToHero z = f z") == "Zero a -> Hero a"

    def test_level4_correct(self):
        assert self.infer_text(4, "zeroToHero z = f2 (f4 z)") == "Zero a b -> Hero b b"

    def test_level4_one_step(self):
        assert self.infer_text(4, "zeroToHero z = f1 z") == "Zero a b -> Hero b a"

    def test_unbound_name(self):
        lv = LEVELS[2]
        with pytest.raises(UnboundName) as exc:
            infer(parse_expr("zeroToHero z = undefinedFn z", lv.fixities()), lv.env())
        assert exc.value.name == "undefinedFn"

    def test_type_error_carries_path_and_subtypes(self):
        lv = LEVELS[2]
        with pytest.raises(TypeError_) as exc:
            infer(
                parse_expr("zeroToHero z = runZero (mkHero z) z", lv.fixities()),
                lv.env(),
            )
        payload = exc.value.to_json()
        assert payload["kind"] in ("mismatch", "occurs_check")
        assert "path" in payload

    def test_stability_under_env_renaming(self):
        mapping = {"a": "p", "b": "q", "c": "r", "d": "s"}
        for number in (1, 3, 4, 6):
            lv = LEVELS[number]
            env = lv.env()
            renamed = {
                name: rename_scheme(s, mapping) for name, s in env.items()
            }
            code = lv.reference_solution
            a = infer(parse_expr(code, lv.fixities()), env)
            b = infer(parse_expr(code, lv.fixities()), renamed)
            assert print_scheme(a) == print_scheme(b)

    def test_consistent_reference_solutions(self):
        for number in (1, 2, 3, 4, 6, 7, 8, 10):
            lv = LEVELS[number]
            inferred = infer(
                parse_expr(lv.reference_solution, lv.fixities()), lv.env()
            )
            assert subsumes(inferred, lv.target), number

    def test_inconsistent_levels_flagged(self):
        assert not LEVELS[5].solution_verified
        assert not LEVELS[9].solution_verified


class TestSubsumes:
    def s(self, text: str):
        return parse_scheme(text)

    def test_direction(self):
        assert subsumes(self.s("a -> a"), self.s("Int -> Int"))
        assert not subsumes(self.s("Int -> Int"), self.s("a -> a"))

    def test_reflexive_up_to_alpha(self):
        assert subsumes(
            self.s("Zero a b -> Hero b b"), self.s("Zero a b -> Hero b b")
        )
        assert subsumes(self.s("a -> b"), self.s("c -> d"))

    def test_context_entailment(self):
        assert subsumes(self.s("a -> a"), self.s("Eq a => a -> a"))
        assert not subsumes(self.s("Eq a => a -> a"), self.s("a -> a"))

    def test_reflexivity_random(self):
        rng = random.Random(54)
        for _ in range(150):
            sch = canonicalize(random_type_expr(rng, 3))
            assert subsumes(sch, sch)

    def test_transitivity_random(self):
        rng = random.Random(55)
        for _ in range(150):
            general = canonicalize(random_type_expr(rng, 3))
            s1 = _instantiate_some(rng, general)
            s2 = _instantiate_some(rng, s1)
            assert subsumes(general, s1)
            assert subsumes(s1, s2)
            assert subsumes(general, s2)


def _instantiate_some(rng: random.Random, scheme):
    subst = {}
    for i, v in enumerate(scheme.quantified):
        if rng.random() < 0.5:
            subst[v] = random_type_expr(rng, 1, var_pool=(f"u{i}",))
    return canonicalize(Subst(subst).apply(scheme.body))
