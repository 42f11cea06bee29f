"""Derived rules, the multiplication and unit of the reduction monad, and
the law checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import IllTyped, Perm2Error
from .kernel import Context
from .proofterm import (
    LambdaCong,
    ReductionJudgment,
    RuleApp,
    VarRefl,
    VComp,
    judge,
    r_children,
    r_rebuild,
)
from .signature import RewriteRule, Signature2
from .whisker import subst_reduction


@dataclass(frozen=True)
class DerivedRule:
    name: str
    body: ReductionJudgment

    def as_rule(self) -> RewriteRule:
        b = self.body
        return RewriteRule(self.name, b.context, b.source, b.target, b.type)


@dataclass(frozen=True, eq=False)
class LayeredSignature:
    """Rules are reductions over ``base``; ``base`` may itself be layered."""
    base: object
    derived: dict = field(default_factory=dict)

    @property
    def base_signature(self) -> Signature2:
        return self.base.signature if isinstance(self.base, LayeredSignature) else self.base

    @cached_property
    def signature(self) -> Signature2:
        b = self.base_signature
        return Signature2(b.base, {n: d.as_rule() for n, d in self.derived.items()})


def derive_rule(j: ReductionJudgment, sig, name: str) -> DerivedRule:
    """Wrap a checked reduction as a rule one layer up."""
    try:
        checked = judge(j.context, j.proof, sig)
    except Perm2Error as e:
        raise IllTyped(str(e)) from e
    if checked.triple != j.triple:
        raise IllTyped(f"body of {name} does not have the recorded endpoints")
    return DerivedRule(name, checked)


def layer(base, rules) -> LayeredSignature:
    return LayeredSignature(base, {d.name: d for d in rules})


def unit_eta(r, sig):
    """r<x1, ..., xn>: the rule applied to the variables of its own context."""
    rule = sig.rule(r)
    n = len(rule.context)
    return RuleApp(r, tuple(VarRefl(n - 1 - i) for i in range(n)))


def eta_layer(sig, prefix: str = "") -> LayeredSignature:
    """One derived rule per rule of ``sig``, with body ``unit_eta(r)``."""
    out = {}
    for name, r in sig.rules.items():
        body = judge(r.context, unit_eta(name, sig), sig)
        out[prefix + name] = DerivedRule(prefix + name, body)
    return LayeredSignature(sig, out)


def mu_flatten(p, lsig: LayeredSignature, ctx):
    """Replace each derived rule application by its body with the arguments substituted."""
    base = lsig.base_signature
    types = ctx.types if isinstance(ctx, Context) else tuple(ctx)

    def go(r, local):
        if isinstance(r, RuleApp) and r.rule in lsig.derived:
            d = lsig.derived[r.rule]
            gamma = Context(tuple((f"v{i}", a) for i, a in enumerate(local)))
            args = [judge(gamma, go(a, local), base) for a in r.args]
            return subst_reduction(d.body, args, base)
        if isinstance(r, LambdaCong):
            return LambdaCong(r.ty, go(r.body, local + (r.ty,)), r.hint)
        kids = r_children(r)
        if not kids:
            return r
        return r_rebuild(r, tuple(go(c, local) for c in kids))

    return go(p, types)


def rename_rules(p, mapping):
    """Apply a rule renaming to a reduction (the action of L on a rule map)."""
    if isinstance(p, RuleApp):
        return RuleApp(mapping.get(p.rule, p.rule), tuple(rename_rules(a, mapping) for a in p.args))
    kids = r_children(p)
    if not kids:
        return p
    return r_rebuild(p, tuple(rename_rules(c, mapping) for c in kids))


def map_mu(l2: LayeredSignature, suffix: str = "'") -> tuple:
    """Flatten every rule body of a two-level layer; returns (new layer, renaming)."""
    l1 = l2.base
    base = l1.base_signature
    new, mapping = {}, {}
    for name, d in l2.derived.items():
        body = mu_flatten(d.body.proof, l1, d.body.context)
        nm = name + suffix
        new[nm] = derive_rule(judge(d.body.context, body, base), base, nm)
        mapping[name] = nm
    return LayeredSignature(base, new), mapping


# ---------------------------------------------------------------- laws

def associativity_sides(p, ctx, l2: LayeredSignature):
    """Both ways of flattening a reduction over a two-level layer down to the base."""
    l1 = l2.base
    left = mu_flatten(mu_flatten(p, l2, ctx), l1, ctx)
    flat, mapping = map_mu(l2)
    right = mu_flatten(rename_rules(p, mapping), flat, ctx)
    return left, right


def unit_sides(j: ReductionJudgment, sig):
    """(mu(eta_L X(D)), mu(L(eta_X)(D))) for a base reduction D; both should equal D."""
    d = DerivedRule("D", judge(j.context, j.proof, sig))
    wrap = LayeredSignature(sig, {"D": d})
    n = len(j.context)
    first = mu_flatten(RuleApp("D", tuple(VarRefl(n - 1 - i) for i in range(n))), wrap, j.context)
    etas = eta_layer(sig, prefix="eta_")
    second = mu_flatten(rename_rules(j.proof, {k: "eta_" + k for k in sig.rules}), etas, j.context)
    return first, second
