import pytest

from perm2.errors import TypeMismatch, UnknownEquation
from perm2.kernel import Sort, Var
from perm2.permeq import (
    EQUATIONS,
    EXHAUSTED,
    NO,
    YES,
    canonicalize,
    eq_step,
    oracle_equiv,
    perm_equiv,
    representative,
)
from perm2.proofterm import LambdaCong, AppCong, VarRefl, VComp, identity_reduction, judge, shift_reduction
from perm2.syntax import parse_context, parse_proof

T = Sort("t")


def J(sig, src, ctx="x:t"):
    c = parse_context(ctx)
    return judge(c, parse_proof(src, c, sig), sig)


def test_equation_ids():
    assert len(EQUATIONS) == len(set(EQUATIONS)) == 28


def test_canonical_identity(lam):
    assert canonicalize(J(lam, r"a(l(\y:t. y), x)"), lam).steps == ()


def test_canonical_single_step(lam):
    cf = canonicalize(J(lam, r"beta<\y:t. y, x>"), lam)
    assert len(cf.steps) == 1
    assert cf.steps[0].position == ()
    assert cf.steps[0].rule == "beta"


def test_representative_is_equivalent(lam):
    j = J(lam, r"a(beta<\y:t. y, x>, beta<\y:t. y, x>)")
    cf = canonicalize(j, lam)
    rep = judge(j.context, representative(cf), lam)
    assert rep.triple == j.triple
    assert perm_equiv(j, rep, lam).verdict


def test_disjoint_steps_commute(lam):
    b = r"beta<\y:t. y, x>"
    r = r"a(l(\y:t. y), x)"
    one = J(lam, f"a({b}, {r}) ; a(x, {b})")
    two = J(lam, f"a({r}, {b}) ; a({b}, x)")
    par = J(lam, f"a({b}, {b})")
    assert canonicalize(one, lam) == canonicalize(two, lam) == canonicalize(par, lam)
    assert oracle_equiv(one, two, 10000, lam).verdict == YES


def test_reflexivity_and_unit(lam):
    p = J(lam, r"beta<\y:t. y, x>")
    assert perm_equiv(p, p, lam).verdict
    assert perm_equiv(J(lam, r"a(l(\y:t. y), x) ; beta<\y:t. y, x>"), p, lam).verdict
    assert perm_equiv(J(lam, r"beta<\y:t. y, x> ; x"), p, lam).verdict


def test_eta_arrow(lam):
    p = J(lam, "f", "f:t ^ t, x:t")
    q = J(lam, r"\z:t. f z", "f:t ^ t, x:t")
    assert perm_equiv(p, q, lam).verdict
    r = J(lam, r"\z:t. beta<\w:t. w, z>", "x:t")
    s = LambdaCong(T, AppCong(shift_reduction(r.proof, 1), VarRefl(0)))
    assert perm_equiv(r, judge(r.context, s, lam), lam).verdict


def test_beta_arrow(lam):
    p = J(lam, r"(\z:t. beta<\w:t. w, z>) x")
    q = J(lam, r"beta<\w:t. w, x>")
    assert perm_equiv(p, q, lam).verdict
    assert eq_step(p.proof, q.proof, "beta-arrow", lam, p.context)


def test_lifting_const(lam):
    p = J(lam, r"a(beta<\w:t. w, x> ; x, x ; x)")
    q = J(lam, r"a(beta<\w:t. w, x>, x) ; a(x, x)")
    assert eq_step(p.proof, q.proof, "lift-const", lam, p.context)
    assert perm_equiv(p, q, lam).verdict


def test_category_laws_by_eq_step(lam):
    p = J(lam, r"beta<\y:t. y, x>")
    ctx = p.context
    m = parse_proof(r"a(l(\y:t. y), x)", ctx, lam)
    assert eq_step(VComp(m, p.source, p.proof), p.proof, "cat-unit-l", lam, ctx)
    assert eq_step(VComp(p.proof, Var(0), VarRefl(0)), p.proof, "cat-unit-r", lam, ctx)
    assert not eq_step(VComp(p.proof, Var(0), VarRefl(0)), p.proof, "cat-assoc", lam, ctx)
    assert eq_step(p.proof, p.proof, "cong-refl", lam, ctx)


def test_eq_step_errors(lam):
    p = J(lam, r"beta<\y:t. y, x>")
    with pytest.raises(UnknownEquation):
        eq_step(p.proof, p.proof, "no-such-law", lam, p.context)
    with pytest.raises(TypeMismatch):
        eq_step(p.proof, VarRefl(0), "cong-refl", lam, p.context)


def test_different_endpoints(lam):
    p = J(lam, r"beta<\y:t. y, x>")
    q = J(lam, r"a(l(\y:t. y), x)")
    cert = perm_equiv(p, q, lam)
    assert not cert.verdict and cert.reason == "endpoints differ"
    with pytest.raises(TypeMismatch):
        perm_equiv(p, q, lam, strict=True)


def test_non_equivalent_same_endpoints(ccs):
    ctx = parse_context("")
    twice = judge(ctx, parse_proof("comm<a(), abar()> ; comm<abar(), a()>", ctx, ccs), ccs)
    ident = judge(ctx, parse_proof("par(a(), abar())", ctx, ccs), ccs)
    assert twice.triple == ident.triple
    assert not perm_equiv(twice, ident, ccs).verdict
    assert oracle_equiv(twice, ident, 500, ccs).verdict in (NO, EXHAUSTED)


def test_oracle_examples(lam):
    p = J(lam, r"beta<\y:t. y, x>")
    assert oracle_equiv(p, p, 1, lam).verdict == YES
    left = J(lam, "x ; (x ; x)")
    right = J(lam, "(x ; x) ; x")
    assert oracle_equiv(left, right, 10, lam).verdict == YES


def test_duplicating_and_erasing(lam):
    # beta duplicates its argument reduction: contracting it first or after gives
    # equivalent reductions
    inner = r"beta<\y:t. y, x>"
    dup = J(lam, rf"beta<\z:t. a(z, z), {inner}>")
    seq = J(lam, rf"beta<\z:t. a(z, z), a(l(\y:t. y), x)> ; a({inner}, {inner})")
    assert perm_equiv(dup, seq, lam).verdict
    erase = J(lam, rf"beta<\z:t. x, {inner}>")
    only = J(lam, r"beta<\z:t. x, a(l(\y:t. y), x)>")
    assert perm_equiv(erase, only, lam).verdict


def test_oracle_agreement_with_negative_pairs(ccs):
    # the ccs rules give reductions with equal endpoints that are not equivalent
    import itertools
    from perm2.generate import ReductionEnum, type_universe
    for cs in ("", "x:p"):
        ctx = parse_context(cs)
        en = ReductionEnum(ccs, type_universe(ccs, ctx.types))
        groups = {}
        for p in en.up_to(ctx.types, Sort("p"), 5):
            groups.setdefault(en.triple(ctx.types, p), []).append(p)
        seen = set()
        for group in groups.values():
            for p, q in itertools.combinations(group, 2):
                jp, jq = judge(ctx, p, ccs), judge(ctx, q, ccs)
                mine = perm_equiv(jp, jq, ccs).verdict
                theirs = oracle_equiv(jp, jq, 3000, ccs).verdict
                assert (theirs == YES) == mine, (p, q, theirs)
                seen.add(mine)
        assert seen == {True, False}
