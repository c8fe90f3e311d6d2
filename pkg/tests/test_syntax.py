"""Parser, printer, and kind inference."""

import json
import random

import pytest

from geckograph.syntax import (
    App,
    Con,
    Constraint,
    Fun,
    KArrow,
    KindMismatch,
    ParseError,
    STAR,
    Scheme,
    Var,
    kind_infer,
    parse_scheme,
    parse_type,
    print_scheme,
    print_type,
    rename_scheme,
)

from genutil import random_scheme


def body(text: str):
    return parse_scheme(text).body


class TestParse:
    def test_appendix_level4_target(self):
        s = parse_scheme("zeroToHero :: Zero a b -> Hero b b")
        assert s.quantified == ("a", "b")
        assert s.context == ()
        assert s.body == Fun(
            App(App(Con("Zero"), Var("a")), Var("b")),
            App(App(Con("Hero"), Var("b")), Var("b")),
        )

    def test_single_variable(self):
        s = parse_scheme("a")
        assert s.quantified == ("a",)
        assert s.context == ()
        assert s.body == Var("a")

    def test_map_signature(self):
        s = parse_scheme("(a -> b) -> [a] -> [b]")
        assert s.body == Fun(
            Fun(Var("a"), Var("b")),
            Fun(App(Con("[]"), Var("a")), App(Con("[]"), Var("b"))),
        )

    def test_operator_name_prefix_and_context(self):
        s = parse_scheme("(==) :: Eq a => a -> a -> Bool")
        assert s.context == (Constraint("Eq", (Var("a"),)),)
        assert s.body == Fun(Var("a"), Fun(Var("a"), Con("Bool")))

    def test_application_left_nested(self):
        assert body("T a b") == App(App(Con("T"), Var("a")), Var("b"))

    def test_arrows_right_nested(self):
        assert body("a -> b -> c") == Fun(Var("a"), Fun(Var("b"), Var("c")))

    def test_tuple_unit_list(self):
        assert body("(a, b)") == App(App(Con("(,)"), Var("a")), Var("b"))
        assert body("()") == Con("()")
        assert body("[Int]") == App(Con("[]"), Con("Int"))

    def test_explicit_forall(self):
        s = parse_scheme("forall b a. a -> b")
        assert s.quantified == ("b", "a")

    def test_multi_constraint_context(self):
        s = parse_scheme("(A a, B a) => a")
        assert [c.class_name for c in s.context] == ["A", "B"]

    def test_qualified_constraint(self):
        s = parse_scheme("(forall b. A (a b)) => a c")
        (c,) = s.context
        assert c.class_name == "A"
        assert c.quantified_vars == ("b",)
        assert c.qualified

    def test_qualified_constraint_with_inner_context(self):
        s = parse_scheme("(forall b. Eq b => Eq (f b)) => f a -> Bool")
        (c,) = s.context
        assert c.inner_context[0].class_name == "Eq"
        assert c.quantified_vars == ("b",)

    def test_multi_parameter_class(self):
        s = parse_scheme("Convert a b => a -> b")
        (c,) = s.context
        assert c.params == (Var("a"), Var("b"))


class TestParseErrors:
    def test_offset_reported(self):
        with pytest.raises(ParseError) as exc:
            parse_scheme("Zero a -> ")
        assert exc.value.offset == 10

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse_scheme("(a -> b")

    def test_non_ascii_rejected(self):
        with pytest.raises(ParseError):
            parse_scheme("a → b")

    def test_deep_qualification_rejected(self):
        with pytest.raises(ParseError):
            parse_scheme("((forall c. B c) => forall b. A b) => a")

    def test_oversize_tuple_rejected(self):
        parts = ", ".join("a%d" % i for i in range(8))
        with pytest.raises(ParseError):
            parse_scheme(f"({parts})")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_scheme("   ")


class TestPrint:
    def test_redundant_parens_dropped(self):
        assert print_scheme(parse_scheme("a -> (b -> c)")) == "a -> b -> c"

    def test_forced_parens_kept(self):
        assert print_scheme(parse_scheme("(a -> b) -> c")) == "(a -> b) -> c"

    def test_level8_target(self):
        text = "(a -> d) -> (b -> d) -> (c -> d) -> Zero a b c -> Hero a d c"
        assert print_scheme(parse_scheme("zeroToHero :: " + text)) == text

    def test_sugar_preserved(self):
        for text in ("[a]", "(a, b)", "()", "[(a, b)] -> ()"):
            assert print_scheme(parse_scheme(text)) == text

    def test_context_printing(self):
        assert print_scheme(parse_scheme("Eq a => a")) == "Eq a => a"
        assert print_scheme(parse_scheme("(A a, B a) => a")) == "(A a, B a) => a"


class TestRoundTrip:
    def test_random_corpus(self):
        rng = random.Random(11)
        for _ in range(300):
            text = random_scheme(rng)
            s = parse_scheme(text)
            assert parse_scheme(print_scheme(s)) == s

    def test_print_idempotent(self):
        rng = random.Random(12)
        for _ in range(200):
            once = print_scheme(parse_scheme(random_scheme(rng)))
            assert print_scheme(parse_scheme(once)) == once

    def test_appendix_levels_parse(self):
        from geckograph.game import default_level_path

        raw = json.loads(default_level_path().read_text())
        for entry in raw:
            parse_scheme(entry["target"])
            for fn in entry["functions"]:
                parse_scheme(fn["type"])

    def test_alpha_rename_commutes(self):
        rng = random.Random(13)
        mapping = {"a": "x", "b": "y", "c": "z", "d": "w", "e": "v"}
        for _ in range(100):
            text = random_scheme(rng)
            s = parse_scheme(text)
            renamed_ast = rename_scheme(s, mapping)
            renamed_text = "".join(
                mapping.get(ch, ch)
                if ch in mapping and not _ident_adjacent(text, i)
                else ch
                for i, ch in enumerate(text)
            )
            assert parse_scheme(renamed_text).body == renamed_ast.body


def _ident_adjacent(text: str, i: int) -> bool:
    before = text[i - 1] if i else " "
    after = text[i + 1] if i + 1 < len(text) else " "
    return before.isalnum() or after.isalnum()


class TestKinds:
    def test_applied_variable(self):
        kinds = dict(parse_scheme("a b -> b").kinds)
        assert kinds["a"] == KArrow(STAR, STAR)
        assert kinds["b"] == STAR

    def test_defaulting(self):
        kinds = dict(parse_scheme("a -> a").kinds)
        assert kinds["a"] == STAR

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            parse_scheme("a -> a b -> a")

    def test_nested_arity(self):
        kinds = dict(parse_scheme("f a b -> f a b").kinds)
        assert kinds["f"] == KArrow(STAR, KArrow(STAR, STAR))

    def test_kind_infer_entry_point(self):
        s = parse_scheme("t a -> t a")
        assert kind_infer(s)["t"] == KArrow(STAR, STAR)


def test_parse_type_plain():
    assert parse_type("Maybe a") == App(Con("Maybe"), Var("a"))
    assert print_type(parse_type("(a -> b) -> c")) == "(a -> b) -> c"
