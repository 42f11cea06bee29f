import pytest
from hypothesis import given, settings, strategies as st

from perm2.errors import (
    ArityMismatch,
    DuplicateVariable,
    IllTyped,
    TypeMismatch,
    UnboundVariable,
    UnknownConstant,
    UnknownSort,
)
from perm2.kernel import (
    UNIT,
    UNIT_TERM,
    App,
    ConstApp,
    Context,
    Exponential,
    Lambda,
    Pair,
    Product,
    Proj1,
    Proj2,
    Sort,
    Var,
    beta_eta_normalize,
    eta_contract,
    free_vars,
    normalize,
    normalize_in,
    shift,
    show_type,
    subst_term,
    subst_type,
    term_equal,
    typecheck_term,
)
from perm2.syntax import parse_context, parse_type

T = Sort("t")
X = Context((("x", T),))


def test_typecheck_constant_and_lambda(lam, parse):
    assert typecheck_term(X, parse("term", r"a(l(\y:t. y), x)"), lam) == T


def test_typecheck_unit():
    assert typecheck_term(Context(), UNIT_TERM, None) == UNIT


def test_typecheck_self_application(lam):
    with pytest.raises(TypeMismatch):
        typecheck_term(X, App(Var(0), Var(0)), lam)


def test_typecheck_errors(lam):
    with pytest.raises(UnboundVariable):
        typecheck_term(X, Var(3), lam)
    with pytest.raises(UnknownConstant):
        typecheck_term(X, ConstApp("nope", ()), lam)
    with pytest.raises(ArityMismatch):
        typecheck_term(X, ConstApp("a", (Var(0),)), lam)
    with pytest.raises(TypeMismatch):
        typecheck_term(X, ConstApp("l", (Var(0),)), lam)
    with pytest.raises(TypeMismatch):
        typecheck_term(X, Proj1(Var(0)), lam)


def test_golden_normal_forms(lam, parse):
    assert beta_eta_normalize(X, parse("term", r"(\y:t. y) x"), T, lam) == Var(0)
    ctx = parse_context("x:t, y:t")
    m = Pair(Var(1), Var(0))
    assert normalize_in(ctx.types, Proj1(m), T, lam.ops) == Var(1)
    assert normalize_in(ctx.types, Proj2(m), T, lam.ops) == Var(0)
    u = parse_context("x:t, u:1")
    assert beta_eta_normalize(u, Var(0), UNIT, lam) == UNIT_TERM
    assert beta_eta_normalize(u, Proj2(Pair(Var(1), Var(0))), UNIT, lam) == UNIT_TERM


def test_eta_long_forms(lam):
    f = parse_context("f:t ^ t")
    assert normalize(f, Var(0), lam) == Lambda(T, App(Var(1), Var(0)))
    p = parse_context("p:t * t")
    assert normalize(p, Var(0), lam) == Pair(Proj1(Var(0)), Proj2(Var(0)))


def test_normalize_ill_typed(lam):
    with pytest.raises(IllTyped):
        beta_eta_normalize(X, App(Var(0), Var(0)), T, lam)
    with pytest.raises(IllTyped):
        beta_eta_normalize(X, Var(0), UNIT, lam)


def test_term_equal(lam, parse):
    assert term_equal(X, parse("term", r"(\y:t. y) x"), Var(0), T, lam)
    f = parse_context("f:t ^ t")
    assert term_equal(f, Lambda(T, App(Var(1), Var(0))), Var(0), Exponential(T, T), lam)
    xy = parse_context("x:t, y:t")
    assert not term_equal(xy, Var(0), Var(1), T, lam)


def test_subst_term_examples():
    # (x1 x2)[f, a] = f a, context order x1, x2
    assert subst_term(App(Var(1), Var(0)), [Var(5), Var(6)]) == App(Var(5), Var(6))
    # (\y. x1)[y]: the free variable is shifted under the binder, no capture
    assert subst_term(Lambda(T, Var(1)), [Var(0)]) == Lambda(T, Var(1))
    m = App(Var(1), Lambda(T, App(Var(1), Var(0))))
    assert subst_term(m, [Var(1), Var(0)]) == m
    with pytest.raises(ArityMismatch):
        subst_term(Var(2), [Var(0)])


def test_shift_refuses_capture():
    assert shift(Var(0), 2) == Var(2)
    assert shift(Lambda(T, Var(0)), 5) == Lambda(T, Var(0))
    with pytest.raises(ValueError):
        shift(Var(0), -1)


def test_free_vars_and_eta_contract():
    assert free_vars(Lambda(T, App(Var(0), Var(2)))) == {1}
    assert eta_contract(Lambda(T, App(Var(1), Var(0)))) == Var(0)
    assert eta_contract(Pair(Proj1(Var(0)), Proj2(Var(0)))) == Var(0)


def test_subst_type_examples():
    assert subst_type(T, {"t": Product(T, T)}) == Product(T, T)
    assert subst_type(Exponential(T, T), {"t": UNIT}) == Exponential(UNIT, UNIT)
    a = parse_type("(t * 1) ^ t")
    assert subst_type(a, lambda s: Sort(s)) == a
    with pytest.raises(UnknownSort):
        subst_type(Sort("u"), {"t": T})


def test_show_type_precedence():
    assert show_type(parse_type("t ^ t ^ t")) == "t ^ t ^ t"
    assert parse_type("t ^ t ^ t") == Exponential(Exponential(T, T), T)
    assert show_type(Product(Product(T, T), T)) == "(t * t) * t"
    assert parse_type("t * t * t") == Product(T, Product(T, T))


def test_context_names():
    c = Context((("x", T),))
    assert c.extend("x", T).names == ("x", "x1")
    with pytest.raises(DuplicateVariable):
        c.prepend("x", T)
    with pytest.raises(DuplicateVariable):
        Context((("x", T), ("x", T)))


# ---------------------------------------------------------------- properties

sorts = st.sampled_from([Sort("s"), Sort("t")])
types = st.recursive(sorts | st.just(UNIT), lambda inner: st.builds(Product, inner, inner) | st.builds(Exponential, inner, inner), max_leaves=6)


@given(types)
def test_subst_type_monad_laws(a):
    assert subst_type(a, lambda s: Sort(s)) == a
    f = {"s": Product(Sort("t"), Sort("s")), "t": Exponential(Sort("s"), UNIT)}
    g = {"s": Sort("t"), "t": Product(Sort("s"), Sort("s"))}
    lhs = subst_type(subst_type(a, f), g)
    rhs = subst_type(a, {k: subst_type(v, g) for k, v in f.items()})
    assert lhs == rhs


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 7))
def test_normalize_idempotent_and_typed(lam, seed, size):
    import random
    from perm2.generate import RandomGen
    ctx = parse_context("x:t, f:t ^ t, p:t * t")
    gen = RandomGen(lam, random.Random(seed))
    m = gen.term(ctx.types, T, size)
    n = beta_eta_normalize(ctx, m, T, lam)
    assert beta_eta_normalize(ctx, n, T, lam) == n
    assert typecheck_term(ctx, n, lam) == T
