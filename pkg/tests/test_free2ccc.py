import pytest

from perm2.errors import MiddleMismatch, TypeMismatch, UnknownItem
from perm2.free2ccc import (
    Cell1,
    cell1,
    cell2,
    compose1,
    curry2,
    equal2,
    hcompose,
    identity1,
    identity2,
    pair2,
    product_of,
    projections,
    split2,
    terminal2,
    uncurry2,
    unit_component,
    vcompose,
    whisker_left_cell,
    whisker_right_cell,
    whisker_right_direct,
)
from perm2.kernel import UNIT, Exponential, Product, Proj1, Proj2, Sort, Var
from perm2.proofterm import UNIT_REFL, typecheck_reduction
from perm2.syntax import parse_context, parse_proof, parse_term

T = Sort("t")
X = parse_context("x:t")
ID = r"l(\y:t. y)"


def c1(lam, src, dom=T, cod=T):
    return cell1(parse_term(src, parse_context(f"x:{'t' if dom == T else 't * t'}"), lam), dom, cod, lam)


def c2(lam, src):
    return cell2(parse_proof(src, X, lam), T, lam)


def test_compose1(lam):
    m = c1(lam, rf"a({ID}, x)")
    assert compose1(m, identity1(T), lam) == m
    assert compose1(identity1(T), m, lam) == m
    n = c1(lam, "a(x, x)")
    assert compose1(m, n, lam).body == parse_term(rf"a(a({ID}, x), a({ID}, x))", X, lam)
    with pytest.raises(TypeMismatch):
        compose1(cell1(Var(0), T, T, lam), Cell1(Product(T, T), T, Proj1(Var(0))), lam)


def test_vcompose(lam):
    a = c2(lam, rf"a({ID}, beta<\y:t. y, x>)")
    b = c2(lam, r"beta<\y:t. y, x>")
    ab = vcompose(a, b, lam)
    assert ab.source == a.source and ab.target == b.target
    assert equal2(vcompose(a, identity2(a.target), lam), a, lam)
    with pytest.raises(MiddleMismatch):
        vcompose(b, a, lam)


def test_hcompose_identities(lam):
    m = c1(lam, rf"a({ID}, x)")
    n = c1(lam, "a(x, x)")
    h = hcompose(identity2(m), identity2(n), lam)
    assert equal2(h, identity2(compose1(m, n, lam)), lam)


def test_middle_four(lam):
    alpha = c2(lam, r"beta<\y:t. y, x>")
    beta = c2(lam, rf"a(beta<\y:t. y, x>, x)")
    h = hcompose(alpha, beta, lam)
    one = vcompose(whisker_right_cell(alpha.source, beta, lam), whisker_left_cell(alpha, beta.target, lam), lam)
    two = vcompose(whisker_left_cell(alpha, beta.source, lam), whisker_right_cell(alpha.target, beta, lam), lam)
    assert equal2(h, one, lam) and equal2(h, two, lam)
    assert equal2(whisker_right_cell(alpha.source, beta, lam), whisker_right_direct(alpha.source, beta, lam), lam)


def test_whisker_by_identity(lam):
    alpha = c2(lam, r"beta<\y:t. y, x>")
    assert equal2(whisker_left_cell(alpha, identity1(T), lam), alpha, lam)
    assert equal2(whisker_right_cell(identity1(T), alpha, lam), alpha, lam)


def test_products(lam):
    r = c2(lam, r"beta<\y:t. y, x>")
    s = c2(lam, rf"a({ID}, x)")
    p = pair2(r, s, lam)
    assert p.codomain == Product(T, T)
    r2, s2 = split2(p, lam)
    assert equal2(r2, r, lam) and equal2(s2, s, lam)
    assert equal2(pair2(*split2(p, lam), lam), p, lam)
    with pytest.raises(TypeMismatch):
        split2(r, lam)


def test_terminal(lam):
    z = cell2(parse_proof("snd u", parse_context("u:t * 1"), lam), Product(T, UNIT), lam)
    assert z.codomain == UNIT
    assert equal2(z, terminal2(Product(T, UNIT)), lam)
    assert terminal2(T).proof == UNIT_REFL


def test_curry(lam):
    dom = Product(T, T)
    f = cell2(parse_proof(r"a(beta<\y:t. y, fst x>, snd x)", parse_context("x:t * t"), lam), dom, lam)
    g = curry2(f, lam)
    assert g.codomain == Exponential(T, T)
    assert equal2(uncurry2(g, lam), f, lam)
    assert equal2(curry2(uncurry2(g, lam), lam), g, lam)


def test_unit_components(lam):
    assert unit_component("t", lam) == T
    a = unit_component("a", lam)
    assert a.domain == Product(T, T)
    assert a.body == parse_term("a(fst x, snd x)", parse_context("x:t * t"), lam)
    b = unit_component("beta", lam)
    ctx = parse_context("x:(t ^ t) * t")
    assert b.source.body == parse_term(r"a(l(\y:t. (fst x) y), snd x)", ctx, lam)
    assert b.target.body == parse_term("(fst x) (snd x)", ctx, lam)
    assert typecheck_reduction(ctx, b.proof, lam)[0] == b.source.body
    with pytest.raises(UnknownItem):
        unit_component("zz", lam)


def test_product_of():
    assert product_of(()) == UNIT
    assert product_of((T,)) == T
    assert product_of((T, UNIT, T)) == Product(T, Product(UNIT, T))
    assert projections(3) == [Proj1(Var(0)), Proj1(Proj2(Var(0))), Proj2(Proj2(Var(0)))]
