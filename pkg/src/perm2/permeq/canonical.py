"""Canonical forms of reductions.

A reduction is first cut into a vertical sequence of composite-free pieces.
Each piece is a term over the doubled signature (rules read as constants), so
it is normalized with the ordinary normalizer.  Every normal piece is then
split into steps carrying exactly one rule occurrence, and the sequence is
brought to standard order by repeatedly swapping adjacent steps whose second
step is a residual of a redex lying at a smaller position.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import NonPatternLhs, Perm2Error
from ..kernel import (
    ConstApp,
    Exponential,
    Hole,
    Lambda,
    children,
    normalize_in,
    rebuild,
    replace_at,
    subst_term,
    subterm_at,
    Sort,
)
from ..matching import check_pattern, match_pattern
from ..proofterm import (
    LambdaCong,
    ReductionJudgment,
    RuleApp,
    VComp,
    compose_all,
    from_doubled,
    identity_reduction,
    r_children,
    r_rebuild,
    to_doubled,
    typecheck_reduction,
)
from ..signature import RuleRef
from ..whisker import left_whisker

DEFAULT_FUEL = 20000


class CanonicalizationFuel(Perm2Error):
    pass


@dataclass(frozen=True)
class ElementaryStep:
    doubled: object  # normal term over the doubled signature, one rule occurrence
    position: tuple
    rule: str
    args: tuple
    source: object
    target: object

    @property
    def context(self):
        return replace_at(self.doubled, self.position, Hole())

    @property
    def reduction(self):
        return from_doubled(self.doubled)


@dataclass(frozen=True)
class CanonicalForm:
    steps: tuple
    source: object
    target: object
    type: object

    @property
    def endpoints(self):
        return (self.source, self.target, self.type)

    def key(self):
        return (tuple(s.doubled for s in self.steps), self.endpoints)

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ---------------------------------------------------------------- doubled terms

def rule_occurrences(t, path=()):
    """Paths of rule constants in pre-order."""
    out = []
    if isinstance(t, ConstApp) and isinstance(t.op, RuleRef):
        out.append(path)
    for i, c in enumerate(children(t)):
        out.extend(rule_occurrences(c, path + (i,)))
    return out


def has_rule(t) -> bool:
    if isinstance(t, ConstApp) and isinstance(t.op, RuleRef):
        return True
    return any(has_rule(c) for c in children(t))


def expand(t, sig, side: str, keep=None, path=()):
    """Replace each rule occurrence (except the one at ``keep``) by its lhs or rhs."""
    if isinstance(t, ConstApp):
        args = tuple(expand(a, sig, side, keep, path + (i,)) for i, a in enumerate(t.args))
        if isinstance(t.op, RuleRef) and path != keep:
            r = sig.rule(t.op.name)
            return subst_term(r.lhs if side == "lhs" else r.rhs, args)
        return ConstApp(t.op, args)
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(expand(c, sig, side, keep, path + (i,)) for i, c in enumerate(kids)))


def _dnorm(types, t, ty, sig):
    return normalize_in(types, t, ty, sig.doubled_ops)


def _bnorm(types, t, ty, sig):
    return normalize_in(types, t, ty, sig.ops)


def make_step(types, d, ty, sig) -> ElementaryStep:
    (pos,) = rule_occurrences(d)
    occ = subterm_at(d, pos)
    return ElementaryStep(d, pos, occ.op.name, occ.args,
                          _bnorm(types, expand(d, sig, "lhs"), ty, sig),
                          _bnorm(types, expand(d, sig, "rhs"), ty, sig))


# ---------------------------------------------------------------- sequentializing

def segments(types, p, sig) -> list:
    """Cut ``p`` into composite-free reductions whose vertical composite is equivalent to it."""
    if isinstance(p, VComp):
        return segments(types, p.left, sig) + segments(types, p.right, sig)
    if isinstance(p, LambdaCong):
        return [LambdaCong(p.ty, s, p.hint) for s in segments(types + (p.ty,), p.body, sig)]
    kids = r_children(p)
    if not kids:
        return [p]
    cols = _columns(types, kids, sig)
    if isinstance(p, RuleApp):
        if len(cols) == 1:
            return [RuleApp(p.rule, cols[0])]
        lhs = sig.rule(p.rule).lhs
        return [left_whisker(lhs, c) for c in cols[:-1]] + [RuleApp(p.rule, cols[-1])]
    return [r_rebuild(p, c) for c in cols]


def _columns(types, kids, sig):
    segs = [segments(types, k, sig) for k in kids]
    width = max(len(s) for s in segs)
    padded = []
    for k, s in zip(kids, segs):
        if len(s) < width:
            tgt = typecheck_reduction(types, k, sig)[1]
            s = s + [identity_reduction(tgt)] * (width - len(s))
        padded.append(s)
    return [tuple(col[j] for col in padded) for j in range(width)]


def _innermost(d):
    occ = rule_occurrences(d)
    for pos in occ:
        if not any(has_rule(a) for a in subterm_at(d, pos).args):
            return pos
    raise AssertionError("no innermost rule occurrence")


def decompose(types, d, ty, sig, budget) -> list:
    """Split a normal doubled term into a sequence of one-occurrence steps."""
    out = []
    work = [d]
    while work:
        budget[0] -= 1
        if budget[0] < 0:
            raise CanonicalizationFuel("decomposition did not finish")
        cur = work.pop()
        occ = rule_occurrences(cur)
        if not occ:
            continue
        if len(occ) == 1:
            out.append(make_step(types, cur, ty, sig))
            continue
        pos = _innermost(cur)
        node = subterm_at(cur, pos)
        rhs = subst_term(sig.rule(node.op.name).rhs, node.args)
        first = _dnorm(types, expand(cur, sig, "lhs", keep=pos), ty, sig)
        rest = _dnorm(types, replace_at(cur, pos, rhs), ty, sig)
        # processed in order: first, then rest
        work.append(rest)
        work.append(first)
    return out


# ---------------------------------------------------------------- standardizing

@lru_cache(maxsize=None)
def _swappable(sig, name) -> bool:
    r = sig.rule(name)
    if not isinstance(r.type, Sort) or not isinstance(r.lhs, ConstApp):
        return False
    try:
        check_pattern(r.lhs, r.context.types)
    except NonPatternLhs:
        return False
    return True


def _try_swap(types, u, v, ty, sig, budget):
    if not v.position < u.position or not _swappable(sig, v.rule):
        return None
    q = v.position
    r = sig.rule(v.rule)
    sub = subterm_at(u.doubled, q)
    sigma = match_pattern(r.lhs, sub, r.context.types)
    if sigma is None:
        return None
    marked = replace_at(u.doubled, q, ConstApp(RuleRef(v.rule), sigma))
    first = _dnorm(types, expand(marked, sig, "lhs", keep=q), ty, sig)
    if rule_occurrences(first) != [q]:
        return None
    rest = _dnorm(types, replace_at(u.doubled, q, subst_term(r.rhs, sigma)), ty, sig)
    new = [make_step(types, first, ty, sig)] + decompose(types, rest, ty, sig, budget)
    if new[0].source != u.source or new[-1].target != v.target:
        return None
    return new


def standardize(types, steps, ty, sig, budget) -> list:
    steps = list(steps)
    i = 0
    while i < len(steps) - 1:
        new = _try_swap(types, steps[i], steps[i + 1], ty, sig, budget)
        if new is None:
            i += 1
            continue
        budget[0] -= 1
        if budget[0] < 0:
            raise CanonicalizationFuel("standardization did not finish")
        steps[i:i + 2] = new
        i = max(i - 1, 0)
    return steps


# ---------------------------------------------------------------- entry points

def canonicalize(j: ReductionJudgment, sig, fuel: int = DEFAULT_FUEL) -> CanonicalForm:
    types = j.context.types
    ty = j.type
    budget = [fuel]
    steps = []
    for seg in segments(types, j.proof, sig):
        d = _dnorm(types, to_doubled(seg), ty, sig)
        steps.extend(decompose(types, d, ty, sig, budget))
    steps = standardize(types, steps, ty, sig, budget)
    return CanonicalForm(tuple(steps), j.source, j.target, ty)


def representative(cf: CanonicalForm):
    """The reduction spelled out by a canonical form."""
    if not cf.steps:
        return identity_reduction(cf.source)
    reds = [s.reduction for s in cf.steps]
    mids = [s.target for s in cf.steps[:-1]]
    return compose_all(reds, mids)
