import re

import pytest

from perm2.errors import ParseError, UnknownRule
from perm2.kernel import App, Context, Pair, Product, Sequent, Sort, Var
from perm2.signature import (
    RewriteRule,
    apply_morphism,
    build_signature,
    is_hrs,
    validate_signature,
    with_rules,
)
from perm2.syntax import parse_signature, show_signature

T = Sort("t")


def test_lambda_signature_is_valid_hrs(lam):
    assert validate_signature(lam).ok
    ok, issues = is_hrs(lam)
    assert ok and not issues
    assert set(lam.sorts) == {"t"}
    assert lam.rule("beta").context.names == ("x", "y")
    with pytest.raises(UnknownRule):
        lam.rule("gamma")


def test_parallelism_violation():
    ctx = Context((("x", T),))
    sig = build_signature(["t"], {}, [RewriteRule("bad", ctx, Var(0), Var(0), T)])
    bad = RewriteRule("dup", ctx, Var(0), Pair(Var(0), Var(0)), T)
    rep = validate_signature(with_rules(sig, [bad]))
    assert "ParallelismViolation" in rep.kinds()


def test_unknown_sort():
    sig = build_signature(["t"], {"c": Sequent((Sort("u"),), T)})
    assert "UnknownSort" in validate_signature(sig).kinds()


def test_ill_typed_and_declared_type():
    ctx = Context((("x", T),))
    sig = build_signature(["t"], {}, [RewriteRule("r", ctx, App(Var(0), Var(0)), Var(0), T)])
    assert "IllTyped" in validate_signature(sig).kinds()
    sig = build_signature(["t"], {}, [RewriteRule("r", ctx, Var(0), Var(0), Product(T, T))])
    assert "TypeMismatch" in validate_signature(sig).kinds()


def test_hrs_conditions():
    sig = parse_signature("""
        sort t
        op c : (t) -> t
        rule v : [x: t] x => c(x) : t
        rule e : [f: t ^ t] \\y:t. c(f y) => f : t ^ t
        rule d : [x: t, y: t] c(x) => y : t
    """)
    assert validate_signature(sig).ok
    ok, issues = is_hrs(sig)
    assert not ok
    kinds = {(i.kind, i.item) for i in issues}
    assert ("LhsIsVariable", "v") in kinds
    assert ("ResultNotASort", "e") in kinds
    assert ("VariableNotInLhs", "d") in kinds


def test_rules_are_stored_normalized():
    sig = parse_signature("""
        sort t
        op l : (t ^ t) -> t
        rule r : [f: t ^ t] l(f) => l(\\z:t. (\\w:t. f w) z) : t
    """)
    r = sig.rule("r")
    assert r.lhs == r.rhs
    assert validate_signature(sig).ok


def test_identity_morphism(lam):
    assert apply_morphism(None, None, None, lam, lam).ok


def test_bad_op_map(lam):
    rep = apply_morphism(None, {"a": "l", "l": "l"}, None, lam, lam)
    assert "SequentSquare" in rep.kinds()


def test_relabel_sorts(lam):
    text = re.sub(r"\bt\b", "s", show_signature(lam))
    copy = parse_signature(text)
    assert validate_signature(copy).ok
    assert apply_morphism({"t": "s"}, None, None, lam, copy).ok
    rep = apply_morphism({"t": "s"}, None, {"beta": "missing"}, lam, copy)
    assert "MissingRule" in rep.kinds()


def test_rule_square_detects_wrong_target():
    src = parse_signature("sort t\nop c : (t) -> t\nrule r : [x: t] c(x) => x : t")
    dst = parse_signature("sort t\nop c : (t) -> t\nrule r : [x: t] c(x) => c(x) : t")
    assert "RuleSquare" in apply_morphism(None, None, None, src, dst).kinds()


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_signature("sort t\nsort t")
    with pytest.raises(ParseError):
        parse_signature("sort t\nop fst : () -> t")
    with pytest.raises(ParseError):
        parse_signature("sort t\nbanana")
