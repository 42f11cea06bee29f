import pytest

from perm2.errors import IllTyped, UnknownRule
from perm2.kernel import Sort
from perm2.monad2 import (
    DerivedRule,
    LayeredSignature,
    associativity_sides,
    derive_rule,
    eta_layer,
    layer,
    map_mu,
    mu_flatten,
    rename_rules,
    unit_eta,
    unit_sides,
)
from perm2.permeq import perm_equiv
from perm2.proofterm import ReductionJudgment, RuleApp, VarRefl, judge, typecheck_reduction
from perm2.signature import build_signature
from perm2.syntax import parse_context, parse_proof, parse_term

T = Sort("t")
X = parse_context("x:t")
B2 = parse_context("f:t ^ t, y:t")


def J(sig, src, ctx):
    return judge(ctx, parse_proof(src, ctx, sig), sig)


def test_unit_eta(lam):
    p = unit_eta("beta", lam)
    assert p == RuleApp("beta", (VarRefl(1), VarRefl(0)))
    r = lam.rule("beta")
    assert typecheck_reduction(r.context, p, lam) == (r.lhs, r.rhs, T)
    with pytest.raises(UnknownRule):
        unit_eta("nope", lam)


def test_derive_rule(lam):
    body = J(lam, "beta<f, y>", B2)
    d = derive_rule(body, lam, "D")
    r = d.as_rule()
    assert (r.lhs, r.rhs) == (lam.rule("beta").lhs, lam.rule("beta").rhs)
    two = J(lam, r"beta<\z:t. z, a(l(\z:t. z), y)> ; beta<\z:t. z, y>", parse_context("y:t"))
    assert derive_rule(two, lam, "BB").as_rule().rhs == two.target
    bad = ReductionJudgment(X, parse_proof("x", X, lam), two.source, two.target, T)
    with pytest.raises(IllTyped):
        derive_rule(bad, lam, "bad")


def test_mu_flatten_unit_instance(lam):
    l1 = eta_layer(lam, "h_")
    p = RuleApp("h_beta", (VarRefl(1), VarRefl(0)))
    flat = mu_flatten(p, l1, B2)
    assert perm_equiv(judge(B2, flat, lam), judge(B2, unit_eta("beta", lam), lam), lam).verdict


def test_mu_flatten_congruence_unchanged(lam):
    l1 = eta_layer(lam)
    p = parse_proof(r"a(x, l(\z:t. z))", X, lam)
    assert mu_flatten(p, l1, X) == p


def test_signature_of_layer(lam):
    l1 = eta_layer(lam, "h_")
    assert set(l1.signature.rules) == {"h_beta"}
    assert l1.base_signature is lam


def test_two_levels(lam):
    y = parse_context("y:t")
    d1 = derive_rule(J(lam, r"beta<\z:t. z, y>", y), lam, "d1")
    l1 = layer(lam, [d1])
    e1 = derive_rule(J(l1.signature, r"d1<d1<y>>", y), l1.signature, "e1")
    l2 = layer(l1, [e1])
    p = parse_proof(r"a(e1<x>, x)", X, l2.signature)
    left, right = associativity_sides(p, X, l2)
    jl, jr = judge(X, left, lam), judge(X, right, lam)
    assert jl.triple == jr.triple
    assert perm_equiv(jl, jr, lam).verdict
    flat, mapping = map_mu(l2)
    assert mapping == {"e1": "e1'"}
    assert rename_rules(p, mapping) == parse_proof(r"a(e1'<x>, x)", X, flat.signature)


def test_unit_sides(lam):
    j = J(lam, r"a(beta<f, y>, beta<\z:t. y, y>)", B2)
    first, second = unit_sides(j, lam)
    assert perm_equiv(j, judge(B2, first, lam), lam).verdict
    assert perm_equiv(j, judge(B2, second, lam), lam).verdict
