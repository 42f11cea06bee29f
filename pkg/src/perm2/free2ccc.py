"""The free cartesian closed 2-category on a signature.

Objects are types, 1-cells ``A -> B`` are normal terms in one variable of
type ``A``, and 2-cells are reductions between them, kept as canonical
representatives and compared by permutation equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MiddleMismatch, TypeMismatch, UnknownItem
from .kernel import (
    App,
    ConstApp,
    Context,
    Exponential,
    Pair,
    Product,
    Proj1,
    Proj2,
    Sort,
    UNIT,
    UNIT_TERM,
    Unit,
    Var,
    normalize_in,
    subst_term,
)
from .permeq import canonicalize, perm_equiv, representative
from .proofterm import (
    AppCong,
    LambdaCong,
    PairCong,
    Proj1Cong,
    Proj2Cong,
    RuleApp,
    UNIT_REFL,
    identity_reduction,
    judge,
)
from .whisker import left_whisker, right_whisker, subst_reduction


@dataclass(frozen=True)
class Cell1:
    domain: object
    codomain: object
    body: object


@dataclass(frozen=True)
class Cell2:
    source: Cell1
    target: Cell1
    proof: object

    @property
    def domain(self):
        return self.source.domain

    @property
    def codomain(self):
        return self.source.codomain


def _ctx(a) -> Context:
    return Context((("x", a),))


def cell1(body, domain, codomain, sig) -> Cell1:
    return Cell1(domain, codomain, normalize_in((domain,), body, codomain, sig.ops, check=True))


def identity1(a) -> Cell1:
    return Cell1(a, a, _eta(a))


def _eta(a):
    return normalize_in((a,), Var(0), a, {})


def compose1(f: Cell1, g: Cell1, sig) -> Cell1:
    """g after f."""
    if f.codomain != g.domain:
        raise TypeMismatch(g.domain, f.codomain, "1-cell composition")
    return Cell1(f.domain, g.codomain, normalize_in((f.domain,), subst_term(g.body, [f.body]), g.codomain, sig.ops))


def cell2(proof, domain, sig) -> Cell2:
    """The 2-cell of a reduction in one variable, stored canonically."""
    j = judge(_ctx(domain), proof, sig)
    rep = representative(canonicalize(j, sig))
    return Cell2(Cell1(domain, j.type, j.source), Cell1(domain, j.type, j.target), rep)


def identity2(m: Cell1) -> Cell2:
    return Cell2(m, m, identity_reduction(m.body))


def judgment(a: Cell2, sig):
    return judge(_ctx(a.domain), a.proof, sig)


def equal2(a: Cell2, b: Cell2, sig) -> bool:
    if a.domain != b.domain:
        return False
    return perm_equiv(judgment(a, sig), judgment(b, sig), sig).verdict


def vcompose(a: Cell2, b: Cell2, sig) -> Cell2:
    if a.domain != b.domain or a.codomain != b.codomain:
        raise TypeMismatch((a.domain, a.codomain), (b.domain, b.codomain), "vertical composition")
    if a.target.body != b.source.body:
        raise MiddleMismatch(a.target.body, b.source.body)
    from .proofterm import VComp
    return cell2(VComp(a.proof, a.target.body, b.proof), a.domain, sig)


def hcompose(a: Cell2, b: Cell2, sig) -> Cell2:
    """b after a, for a : A -> B and b : B -> C."""
    if a.codomain != b.domain:
        raise TypeMismatch(b.domain, a.codomain, "horizontal composition")
    red = subst_reduction(judgment(b, sig), [judgment(a, sig)], sig)
    return cell2(red, a.domain, sig)


def whisker_left_cell(a: Cell2, n: Cell1, sig) -> Cell2:
    """id_N after a: the term ``n`` with the reduction of ``a`` substituted."""
    if a.codomain != n.domain:
        raise TypeMismatch(n.domain, a.codomain, "whiskering")
    return cell2(left_whisker(n.body, [a.proof]), a.domain, sig)


def whisker_right_cell(m: Cell1, g: Cell2, sig) -> Cell2:
    """g after id_M."""
    if m.codomain != g.domain:
        raise TypeMismatch(g.domain, m.codomain, "whiskering")
    red = subst_reduction(judgment(g, sig), [judge(_ctx(m.domain), identity_reduction(m.body), sig)], sig)
    return cell2(red, m.domain, sig)


def whisker_right_direct(m: Cell1, g: Cell2, sig) -> Cell2:
    """g after id_M computed by right whiskering alone."""
    if m.codomain != g.domain:
        raise TypeMismatch(g.domain, m.codomain, "whiskering")
    return cell2(right_whisker(g.proof, [m.body], sig, _ctx(m.domain)), m.domain, sig)


# ---------------------------------------------------------------- products, unit, exponentials

def pair2(r: Cell2, s: Cell2, sig) -> Cell2:
    if r.domain != s.domain:
        raise TypeMismatch(r.domain, s.domain, "pairing")
    return cell2(PairCong(r.proof, s.proof), r.domain, sig)


def split2(p: Cell2, sig) -> tuple:
    if not isinstance(p.codomain, Product):
        raise TypeMismatch("a product type", p.codomain, "splitting")
    return cell2(Proj1Cong(p.proof), p.domain, sig), cell2(Proj2Cong(p.proof), p.domain, sig)


def terminal1(domain) -> Cell1:
    return Cell1(domain, UNIT, UNIT_TERM)


def terminal2(domain) -> Cell2:
    """The only 2-cell into the unit type, up to equivalence."""
    t = terminal1(domain)
    return Cell2(t, t, UNIT_REFL)


def curry2(a: Cell2, sig) -> Cell2:
    """From a 2-cell C x A -> B to the corresponding C -> B ^ A."""
    if not isinstance(a.domain, Product):
        raise TypeMismatch("a product domain", a.domain, "currying")
    c, arg = a.domain.left, a.domain.right
    inner = Context((("x", c), ("y", arg)))
    body = right_whisker(a.proof, [Pair(Var(1), Var(0))], sig, inner)
    return cell2(LambdaCong(arg, body, "y"), c, sig)


def uncurry2(b: Cell2, sig) -> Cell2:
    """From a 2-cell C -> B ^ A to the corresponding C x A -> B."""
    if not isinstance(b.codomain, Exponential):
        raise TypeMismatch("an exponential codomain", b.codomain, "uncurrying")
    c, arg = b.domain, b.codomain.domain
    dom = Product(c, arg)
    head = right_whisker(b.proof, [Proj1(Var(0))], sig, _ctx(dom))
    return cell2(AppCong(head, Proj2Cong(identity_reduction(Var(0)))), dom, sig)


# ---------------------------------------------------------------- unit components

def product_of(types) -> object:
    """Right-nested product: () -> 1, (A) -> A, (A, B, ...) -> A * (B * ...)."""
    types = tuple(types)
    if not types:
        return UNIT
    if len(types) == 1:
        return types[0]
    return Product(types[0], product_of(types[1:]))


def projections(n: int, x=Var(0)) -> list:
    """The n projections out of a right-nested product of n factors."""
    out = []
    cur = x
    for i in range(n):
        if i == n - 1:
            out.append(cur)
        else:
            out.append(Proj1(cur))
            cur = Proj2(cur)
    return out


def unit_component(name, sig, kind: str | None = None):
    """Image of a sort, operation or rule in the free 2-category."""
    kinds = [kind] if kind else ["sort", "op", "rule"]
    for k in kinds:
        if k == "sort" and name in sig.sorts:
            return Sort(name)
        if k == "op" and name in sig.ops:
            seq = sig.ops[name]
            dom = product_of(seq.premises)
            body = ConstApp(name, tuple(projections(len(seq.premises))))
            return cell1(body, dom, seq.conclusion, sig)
        if k == "rule" and name in sig.rules:
            r = sig.rule(name)
            dom = product_of(r.context.types)
            args = tuple(identity_reduction(t) for t in projections(len(r.context)))
            return cell2(RuleApp(name, args), dom, sig)
    raise UnknownItem(str(name))
