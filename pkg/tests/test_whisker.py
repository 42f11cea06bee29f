import random

import pytest

from perm2.errors import ArityMismatch
from perm2.generate import RandomGen
from perm2.kernel import ConstApp, Lambda, Sort, Var, subst_term
from perm2.permeq import perm_equiv
from perm2.proofterm import (
    ConstCong,
    LambdaCong,
    RuleApp,
    VarRefl,
    VComp,
    identity_reduction,
    judge,
    rule_count,
    typecheck_reduction,
)
from perm2.syntax import parse_context
from perm2.whisker import left_whisker, right_whisker, subst_reduction, subst_reduction_alt

T = Sort("t")
X = parse_context("x:t")


def test_left_whisker_clauses(lam, parse):
    p = parse("proof", r"beta<\y:t. y, x>")
    assert left_whisker(Var(0), [p]) == p
    assert left_whisker(ConstApp("a", (Var(0), Var(0))), [p]) == ConstCong("a", (p, p))
    w = left_whisker(Lambda(T, Var(1)), [p])
    assert isinstance(w, LambdaCong)
    s, t, ty = typecheck_reduction(X, w, lam)
    assert t == Lambda(T, Var(1)) and ty.codomain == T


def test_left_whisker_identities(lam, parse):
    m = parse("term", r"a(l(\y:t. x), x)")
    ctx = parse_context("u:t, v:t")
    w = left_whisker(m, [VarRefl(1)])
    assert w == identity_reduction(subst_term(m, [Var(1)]))
    assert typecheck_reduction(ctx, w, lam)[0] == typecheck_reduction(ctx, w, lam)[1]


def test_right_whisker_clauses(lam, parse):
    ctx = parse_context("f:t ^ t, x:t")
    n = parse("term", r"l(\z:t. z)", "x:t")
    assert right_whisker(VarRefl(0), [n]) == identity_reduction(n)
    p = RuleApp("beta", (VarRefl(1), VarRefl(0)))
    terms = [parse("term", r"\z:t. z", "x:t"), Var(0)]
    assert right_whisker(p, terms) == RuleApp("beta", tuple(identity_reduction(t) for t in terms))
    seq = VComp(VarRefl(0), Var(0), VarRefl(0))
    out = right_whisker(seq, [n], lam, X)
    assert isinstance(out, VComp) and out.mid == n


def test_subst_reduction_example(lam, parse):
    delta = parse_context("x1:t ^ t, x2:t")
    p = judge(delta, RuleApp("beta", (VarRefl(1), VarRefl(0))), lam)
    q1 = judge(X, identity_reduction(parse("term", r"\z:t. z")), lam)
    q2 = judge(X, parse("proof", r"beta<\y:t. y, x>"), lam)
    r = subst_reduction(p, [q1, q2], lam)
    assert isinstance(r, VComp)
    assert rule_count(r.left) == 1 and rule_count(r.right) == 1
    s, t, _ = typecheck_reduction(X, r, lam)
    assert s == parse("term", r"a(l(\z:t. z), a(l(\y:t. y), x))")
    assert t == Var(0)


def test_subst_reduction_identities(lam, parse):
    m = parse("term", r"a(x, x)")
    r = subst_reduction(judge(X, identity_reduction(m), lam), [judge(X, VarRefl(0), lam)], lam)
    s, t, _ = typecheck_reduction(X, r, lam)
    assert s == t == m
    assert rule_count(r) == 0


def test_subst_arity(lam):
    p = judge(parse_context("x:t, y:t"), VarRefl(0), lam)
    with pytest.raises(ArityMismatch):
        subst_reduction(p, [judge(X, VarRefl(0), lam)], lam)


def test_factorizations_agree(lam):
    rng = random.Random(11)
    delta = parse_context("f:t ^ t, y:t")
    gen = RandomGen(lam, rng)
    for _ in range(25):
        p = judge(delta, gen.reduction(delta.types, T, 5), lam)
        qs = [judge(X, gen.reduction(X.types, a, 4), lam) for a in delta.types]
        one = judge(X, subst_reduction(p, qs, lam), lam)
        two = judge(X, subst_reduction_alt(p, qs, lam), lam)
        assert one.triple == two.triple
        assert perm_equiv(one, two, lam).verdict
