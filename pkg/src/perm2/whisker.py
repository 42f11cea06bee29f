"""Left and right whiskering and the substitution of reductions into reductions."""
from __future__ import annotations

from .errors import ArityMismatch, TypeMismatch
from .kernel import (
    App,
    ConstApp,
    Lambda,
    Pair,
    Proj1,
    Proj2,
    UnitIntro,
    Var,
    normalize_in,
    shift,
    subst_term,
)
from .proofterm import (
    UNIT_REFL,
    AppCong,
    ConstCong,
    LambdaCong,
    PairCong,
    Proj1Cong,
    Proj2Cong,
    ReductionJudgment,
    RuleApp,
    UnitRefl,
    VarRefl,
    VComp,
    identity_reduction,
    normalize_mids,
    shift_reduction,
    typecheck_reduction,
)


def left_whisker(m, q):
    """M[Q]: substitute the reductions ``q`` (context order) for the variables of ``m``."""
    q = tuple(q)
    n = len(q)

    def go(t, depth):
        if isinstance(t, Var):
            if t.index < depth:
                return VarRefl(t.index)
            j = t.index - depth
            if j >= n:
                raise ArityMismatch(f"{n} reductions do not cover index {j}")
            return shift_reduction(q[n - 1 - j], depth)
        if isinstance(t, UnitIntro):
            return UNIT_REFL
        if isinstance(t, ConstApp):
            return ConstCong(t.op, tuple(go(a, depth) for a in t.args))
        if isinstance(t, Lambda):
            return LambdaCong(t.ty, go(t.body, depth + 1), t.hint)
        if isinstance(t, App):
            return AppCong(go(t.fun, depth), go(t.arg, depth))
        if isinstance(t, Pair):
            return PairCong(go(t.fst, depth), go(t.snd, depth))
        if isinstance(t, Proj1):
            return Proj1Cong(go(t.arg, depth))
        if isinstance(t, Proj2):
            return Proj2Cong(go(t.arg, depth))
        raise TypeError(f"not a term: {t!r}")

    return go(m, 0)


def _under(subs, depth):
    return [shift(s, depth) for s in subs] + [Var(depth - 1 - k) for k in range(depth)]


def right_whisker(p, n, sig=None, ctx=None):
    """P[N]: substitute the terms ``n`` for the variables of ``p``.

    With ``sig`` and ``ctx`` (the context of ``n``) middle terms are renormalized.
    """
    n = tuple(n)
    k = len(n)

    def go(r, depth):
        if isinstance(r, VarRefl):
            if r.index < depth:
                return r
            j = r.index - depth
            if j >= k:
                raise ArityMismatch(f"{k} terms do not cover index {j}")
            return identity_reduction(shift(n[k - 1 - j], depth))
        if isinstance(r, UnitRefl):
            return r
        if isinstance(r, RuleApp):
            return RuleApp(r.rule, tuple(go(a, depth) for a in r.args))
        if isinstance(r, VComp):
            return VComp(go(r.left, depth), subst_term(r.mid, _under(n, depth)), go(r.right, depth))
        if isinstance(r, ConstCong):
            return ConstCong(r.op, tuple(go(a, depth) for a in r.args))
        if isinstance(r, LambdaCong):
            return LambdaCong(r.ty, go(r.body, depth + 1), r.hint)
        if isinstance(r, AppCong):
            return AppCong(go(r.fun, depth), go(r.arg, depth))
        if isinstance(r, PairCong):
            return PairCong(go(r.fst, depth), go(r.snd, depth))
        if isinstance(r, Proj1Cong):
            return Proj1Cong(go(r.arg, depth))
        if isinstance(r, Proj2Cong):
            return Proj2Cong(go(r.arg, depth))
        raise TypeError(f"not a reduction: {r!r}")

    out = go(p, 0)
    if sig is not None and ctx is not None:
        out = normalize_mids(ctx, out, sig)
    return out


def _prepare(p, q, sig, delta, gamma):
    if isinstance(p, ReductionJudgment):
        delta = p.context
        target, ty = p.target, p.type
        p = p.proof
    else:
        _, target, ty = typecheck_reduction(delta, p, sig)
    q = list(q)
    if len(q) != len(delta):
        raise ArityMismatch(f"context has {len(delta)} variables, got {len(q)} reductions")
    proofs, srcs, tgts = [], [], []
    for expected, qj in zip(delta.types, q):
        if isinstance(qj, ReductionJudgment):
            gamma = qj.context
            s, t, qty, pr = qj.source, qj.target, qj.type, qj.proof
        else:
            s, t, qty = typecheck_reduction(gamma, qj, sig)
            pr = qj
        if qty != expected:
            raise TypeMismatch(expected, qty, "substituted reduction")
        proofs.append(pr)
        srcs.append(s)
        tgts.append(t)
    if gamma is None:
        raise ArityMismatch("the context of the substituted reductions is unknown")
    return p, target, ty, proofs, srcs, tgts, gamma


def subst_reduction(p, q, sig, delta=None, gamma=None):
    """P[Q] = P[N] ; M'[Q], where N are the sources of Q and M' the target of P.

    ``p`` and the entries of ``q`` may be judgments; bare reductions need the
    contexts ``delta`` (of p) and ``gamma`` (of q).
    """
    p, target, ty, proofs, srcs, _, gamma = _prepare(p, q, sig, delta, gamma)
    mid = normalize_in(gamma.types, subst_term(target, srcs), ty, sig.ops)
    return VComp(right_whisker(p, srcs, sig, gamma), mid, left_whisker(target, proofs))


def subst_reduction_alt(p, q, sig, delta=None, gamma=None):
    """The other factorization M[Q] ; P[N'], where N' are the targets of Q."""
    if isinstance(p, ReductionJudgment):
        source = p.source
    else:
        source = typecheck_reduction(delta, p, sig)[0]
    p, _, ty, proofs, srcs, tgts, gamma = _prepare(p, q, sig, delta, gamma)
    mid = normalize_in(gamma.types, subst_term(source, tgts), ty, sig.ops)
    return VComp(left_whisker(source, proofs), mid, right_whisker(p, tgts, sig, gamma))

