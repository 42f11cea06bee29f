"""Property suites for the algebraic laws, run on generated instances.

Each suite returns a LawReport; ``run_all`` is what the ``laws`` command prints.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import Perm2Error
from .free2ccc import (
    Cell1,
    cell2,
    curry2,
    equal2,
    hcompose,
    identity2,
    pair2,
    split2,
    terminal2,
    vcompose,
    whisker_left_cell,
    whisker_right_cell,
    whisker_right_direct,
)
from .generate import RandomGen, ReductionEnum, type_universe
from .kernel import Context, Exponential, Product, Sort, UNIT
from .monad2 import DerivedRule, LayeredSignature, associativity_sides, unit_sides
from .permeq import perm_equiv
from .proofterm import ReductionJudgment, judge, rule_count
from .whisker import subst_reduction, subst_reduction_alt


@dataclass
class LawReport:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, good: bool, what: str = ""):
        self.checked += 1
        if not good:
            self.failures.append(what)

    def line(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return f"{self.name}: {self.checked} checked, {len(self.failures)} failed [{status}]"


def _equiv(ctx, p, q, sig) -> bool:
    return perm_equiv(judge(ctx, p, sig), judge(ctx, q, sig), sig).verdict


def sorts_of(sig):
    return [Sort(s) for s in sig.sorts]


def sample_context(sig, rng: random.Random, size: int = 2) -> Context:
    """A context with one variable per sort plus a few function-typed ones."""
    entries = [(f"x{i}", s) for i, s in enumerate(sorts_of(sig))]
    fun = [a for a in type_universe(sig) if isinstance(a, Exponential)]
    for i in range(rng.randint(0, size)):
        if fun:
            entries.append((f"f{i}", rng.choice(sorted(fun, key=str))))
    return Context(tuple(entries))


def _reduction(gen, ctx, ty, size):
    for _ in range(20):
        try:
            return gen.reduction(ctx.types, ty, size)
        except Perm2Error:
            continue
    raise Perm2Error(f"could not generate a reduction of type {ty}")


# ---------------------------------------------------------------- substitution factorization

def substitution_factorization(sig, rng, samples: int = 200, size: int = 5) -> LawReport:
    """P[Q] against M[Q] ; P[N'] (that is, the two factorizations)."""
    rep = LawReport("substitution-factorization")
    gen = RandomGen(sig, rng)
    tries = 0
    while rep.checked < samples and tries < samples * 5:
        tries += 1
        delta = sample_context(sig, rng, 1)
        gamma = sample_context(sig, rng, 1)
        try:
            p = judge(delta, _reduction(gen, delta, rng.choice(sorts_of(sig)), size), sig)
            gq = RandomGen(sig, rng, type_universe(sig, gamma.types + delta.types))
            qs = [judge(gamma, _reduction(gq, gamma, a, max(2, size - 2)), sig) for a in delta.types]
        except Perm2Error:
            continue
        one = judge(gamma, subst_reduction(p, qs, sig), sig)
        two = judge(gamma, subst_reduction_alt(p, qs, sig), sig)
        rep.record(one.triple == two.triple and perm_equiv(one, two, sig).verdict, f"{p.proof} / {[q.proof for q in qs]}")
    return rep


# ---------------------------------------------------------------- monad laws

def layered_fixture(sig, rng, n_derived: int = 3, size: int = 4):
    """Two layers of derived rules: L1 over ``sig`` and L2 over L1."""
    l1 = _random_layer(sig, sig, rng, "d", n_derived, size)
    l2 = _random_layer(l1, l1.signature, rng, "e", n_derived, size)
    return l1, l2


def _random_layer(base, bsig, rng, prefix, k, size):
    gen = RandomGen(bsig, rng)
    derived = {}
    # every rule of the layer below, as its own eta-expansion
    for name, r in sorted(bsig.rules.items()):
        from .monad2 import unit_eta
        nm = f"{prefix}_{name}"
        derived[nm] = DerivedRule(nm, judge(r.context, unit_eta(name, bsig), bsig))
    attempts = 0
    while len(derived) < len(bsig.rules) + k and attempts < 50 * k:
        attempts += 1
        ctx = sample_context(bsig, rng, 1)
        try:
            p = _reduction(gen, ctx, rng.choice(sorts_of(bsig)), size)
        except Perm2Error:
            continue
        if not rule_count(p):
            continue
        nm = f"{prefix}{len(derived)}"
        derived[nm] = DerivedRule(nm, judge(ctx, p, bsig))
    return LayeredSignature(base, derived)


def enumerate_layered(l2: LayeredSignature, contexts, max_size: int = 4) -> list:
    """Every reduction over the top layer up to ``max_size`` that uses a derived rule."""
    s2 = l2.signature
    out = []
    for ctx in contexts:
        en = ReductionEnum(s2, type_universe(s2, ctx.types))
        for ty in sorted(set(sorts_of(s2)) | set(ctx.types), key=str):
            for p in en.up_to(ctx.types, ty, max_size):
                if rule_count(p):
                    out.append((ctx, p))
    return out


def monad_laws(sig, rng, samples: int = 100, max_size: int = 4, contexts=None) -> list:
    """Associativity on enumerated L2-proofs and both unit laws on enumerated base proofs."""
    l1, l2 = layered_fixture(sig, rng)
    if contexts is None:
        contexts = [Context(tuple((f"x{i}", s) for i, s in enumerate(sorts_of(sig)))), sample_context(sig, rng, 1)]
    base = l1.base_signature
    assoc = LawReport("monad-associativity")
    for ctx, p in enumerate_layered(l2, contexts, max_size):
        left, right = associativity_sides(p, ctx, l2)
        assoc.record(_equiv(ctx, left, right, base), str(p))
    units = LawReport("monad-unit")
    for ctx in contexts:
        en = ReductionEnum(base, type_universe(base, ctx.types))
        for ty in sorted(set(sorts_of(base)) | set(ctx.types), key=str):
            for p in en.up_to(ctx.types, ty, max_size):
                j = judge(ctx, p, base)
                first, second = unit_sides(j, base)
                units.record(_equiv(ctx, first, p, base) and _equiv(ctx, second, p, base), str(p))
    return [assoc, units]


# ---------------------------------------------------------------- 2-category laws

def _cell_from(gen, dom, cod, size, sig):
    ctx = Context((("x", dom),))
    return cell2(_reduction(gen, ctx, cod, size), dom, sig)


def _extend(gen, a, size, sig):
    """A random 2-cell starting where ``a`` ends."""
    ctx = Context((("x", a.domain),))
    p = gen.reduction_from(ctx.types, a.target.body, a.codomain, size)
    return cell2(p, a.domain, sig)


def interchange(sig, rng, samples: int = 200, size: int = 4) -> list:
    """Interchange, middle-four and whiskering agreement on random quadruples."""
    ia = LawReport("interchange")
    mf = LawReport("middle-four")
    wk = LawReport("whiskering")
    srts = sorts_of(sig)
    tries = 0
    while ia.checked < samples and tries < samples * 5:
        tries += 1
        a_, b_, c_ = (rng.choice(srts) for _ in range(3))
        try:
            g1 = RandomGen(sig, rng, type_universe(sig, (a_,)))
            g2 = RandomGen(sig, rng, type_universe(sig, (b_,)))
            alpha = _cell_from(g1, a_, b_, size, sig)
            beta = _extend(g1, alpha, size, sig)
            gamma = _cell_from(g2, b_, c_, size, sig)
            theta = _extend(g2, gamma, size, sig)
        except Perm2Error:
            continue
        lhs = hcompose(vcompose(alpha, beta, sig), vcompose(gamma, theta, sig), sig)
        rhs = vcompose(hcompose(alpha, gamma, sig), hcompose(beta, theta, sig), sig)
        ia.record(equal2(lhs, rhs, sig), f"{alpha.proof} {beta.proof} {gamma.proof} {theta.proof}")
        h = hcompose(alpha, gamma, sig)
        one = vcompose(whisker_right_cell(alpha.source, gamma, sig), whisker_left_cell(alpha, gamma.target, sig), sig)
        two = vcompose(whisker_left_cell(alpha, gamma.source, sig), whisker_right_cell(alpha.target, gamma, sig), sig)
        mf.record(equal2(h, one, sig) and equal2(h, two, sig), f"{alpha.proof} {gamma.proof}")
        ok = equal2(whisker_right_cell(alpha.source, gamma, sig), whisker_right_direct(alpha.source, gamma, sig), sig)
        ok = ok and equal2(vcompose(whisker_left_cell(alpha, gamma.source, sig), whisker_left_cell(beta, gamma.source, sig), sig),
                           whisker_left_cell(vcompose(alpha, beta, sig), gamma.source, sig), sig)
        ok = ok and equal2(vcompose(whisker_right_cell(alpha.source, gamma, sig), whisker_right_cell(alpha.source, theta, sig), sig),
                           whisker_right_cell(alpha.source, vcompose(gamma, theta, sig), sig), sig)
        wk.record(ok, f"{alpha.proof} {gamma.proof}")
    return [ia, mf, wk]


def _product_types(sig, rng):
    base = sorts_of(sig) + [a for a in type_universe(sig) if isinstance(a, Exponential)]
    return rng.choice(base), rng.choice(base)


def products(sig, rng, samples: int = 100, size: int = 4) -> list:
    """The pairing/splitting isomorphism and the terminal object."""
    iso = LawReport("product-iso")
    unit = LawReport("unit-terminal")
    srts = sorts_of(sig)
    tries = 0
    while iso.checked < samples and tries < samples * 5:
        tries += 1
        a_, b_ = _product_types(sig, rng)
        c_ = rng.choice(srts + [Product(rng.choice(srts), rng.choice(srts))])
        uni = type_universe(sig, (a_, b_, c_, Product(a_, b_)))
        gen = RandomGen(sig, rng, uni)
        try:
            r = _cell_from(gen, c_, a_, size, sig)
            s = _cell_from(gen, c_, b_, size, sig)
            p = _cell_from(gen, c_, Product(a_, b_), size, sig)
        except Perm2Error:
            continue
        u1, u2 = split2(pair2(r, s, sig), sig)
        good = equal2(u1, r, sig) and equal2(u2, s, sig)
        good = good and equal2(pair2(*split2(p, sig), sig), p, sig)
        iso.record(good, f"{r.proof} {s.proof} {p.proof}")
        cu = rng.choice([UNIT, Product(rng.choice(srts), UNIT), Product(UNIT, UNIT)])
        dom = Product(c_, cu)
        gu = RandomGen(sig, rng, type_universe(sig, (dom, UNIT)))
        try:
            z = _cell_from(gu, dom, UNIT, size, sig)
        except Perm2Error:
            continue
        unit.record(equal2(z, terminal2(dom), sig), str(z.proof))
    return [iso, unit]


def exponentials(sig, rng, samples: int = 100, size: int = 4) -> LawReport:
    """Currying then uncurrying gives back the cell, and the other way round."""
    from .free2ccc import uncurry2
    rep = LawReport("curry-uncurry")
    srts = sorts_of(sig)
    tries = 0
    while rep.checked < samples and tries < samples * 5:
        tries += 1
        c_, a_, b_ = (rng.choice(srts) for _ in range(3))
        dom = Product(c_, a_)
        gen = RandomGen(sig, rng, type_universe(sig, (dom, Exponential(a_, b_))))
        try:
            f = _cell_from(gen, dom, b_, size, sig)
            g = _cell_from(gen, c_, Exponential(a_, b_), size, sig)
        except Perm2Error:
            continue
        good = equal2(uncurry2(curry2(f, sig), sig), f, sig)
        good = good and equal2(curry2(uncurry2(g, sig), sig), g, sig)
        rep.record(good, f"{f.proof} {g.proof}")
    return rep


def run_all(sig, samples: int = 50, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    out += monad_laws(sig, rng, samples, max_size=3)
    out += interchange(sig, rng, samples)
    out.append(substitution_factorization(sig, rng, samples))
    out += products(sig, rng, samples)
    out.append(exponentials(sig, rng, samples))
    return out
