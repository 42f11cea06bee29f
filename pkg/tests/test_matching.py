import pytest

from perm2.errors import NonPatternLhs
from perm2.kernel import UNIT, UNIT_TERM, App, ConstApp, Lambda, Exponential, Pair, Product, Proj1, Sort, Var
from perm2.matching import canonical_inhabitant, check_pattern, match_pattern
from perm2.syntax import parse_context, parse_signature, parse_term

T = Sort("t")


def test_first_order_match(lam, parse):
    r = lam.rule("beta")
    subject = parse("term", r"a(l(\y:t. y), x)")
    sigma = match_pattern(r.lhs, subject, r.context.types)
    assert sigma == (Lambda(T, Var(0)), Var(0))


def test_no_match(lam, parse):
    r = lam.rule("beta")
    assert match_pattern(r.lhs, parse("term", "a(x, x)"), r.context.types) is None


def test_higher_order_pattern():
    sig = parse_signature("""
        sort t
        op c : (t ^ t) -> t
        op d : (t) -> t
        rule r : [f: t ^ t] c(\\z:t. d(f z)) => c(f) : t
    """)
    r = sig.rule("r")
    ctx = parse_context("x:t")
    subject = parse_term(r"c(\w:t. d(d(w)))", ctx, sig)
    sigma = match_pattern(r.lhs, subject, r.context.types)
    assert sigma == (Lambda(T, ConstApp("d", (Var(0),))),)
    # the bound variable cannot escape: d(x) does not mention w
    sigma = match_pattern(r.lhs, parse_term(r"c(\w:t. d(x))", ctx, sig), r.context.types)
    assert sigma == (Lambda(T, Var(1)),)


def test_non_patterns():
    with pytest.raises(NonPatternLhs):
        check_pattern(App(Var(0), Var(0)), (T,))
    with pytest.raises(NonPatternLhs):
        check_pattern(Lambda(Product(T, T), App(Var(1), Proj1(Var(0)))), (Exponential(T, T),))


def test_canonical_inhabitant():
    assert canonical_inhabitant(UNIT) == UNIT_TERM
    assert canonical_inhabitant(Product(UNIT, UNIT)) == Pair(UNIT_TERM, UNIT_TERM)
