"""Instances of the equation schemas on reductions.

``root_moves`` lists every determinate orientation of every non-congruence
schema at the root of a reduction.  Congruence schemas are handled by
applying root moves at all positions (``neighbours``) and by ``eq_step``.
"""
from __future__ import annotations

from ..errors import Perm2Error, TypeMismatch, UnknownEquation
from ..kernel import (
    App,
    ConstApp,
    Exponential,
    Lambda,
    Pair,
    Product,
    Proj1,
    Proj2,
    UnitIntro,
    Unit,
    Var,
    eta_contract,
    normalize_in,
    subst_term,
)
from ..proofterm import (
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
    _infer,
    identity_reduction,
    is_identity_shaped,
    normalize_mids,
    r_children,
    r_rebuild,
    reduction_free_vars,
    shift_reduction,
)
from ..whisker import left_whisker, right_whisker, subst_reduction
from ..kernel import Context

CONGRUENCE = ("cong-refl", "cong-sym", "cong-trans", "cong-vcomp", "cong-rule", "cong-const",
              "cong-lam", "cong-app", "cong-pair", "cong-proj1", "cong-proj2")
CATEGORY = ("cat-assoc", "cat-unit-r", "cat-unit-l")
BETA_ETA = ("beta-arrow", "eta-arrow", "beta-proj1", "beta-proj2", "eta-pair", "eta-unit")
LIFTING = ("lift-rule-l", "lift-rule-r", "lift-const", "lift-lam", "lift-app", "lift-pair",
           "lift-proj1", "lift-proj2")
EQUATIONS = CONGRUENCE + CATEGORY + BETA_ETA + LIFTING


class Typer:
    """Memoized normal (source, target, type) of subreductions."""

    def __init__(self, sig):
        self.sig = sig
        self.memo = {}

    def __call__(self, types, p):
        key = (types, p)
        hit = self.memo.get(key)
        if hit is None:
            s, t, ty = _infer(types, p, self.sig)
            ops = self.sig.ops
            hit = (normalize_in(types, s, ty, ops), normalize_in(types, t, ty, ops), ty)
            if len(self.memo) > 200000:
                self.memo.clear()
            self.memo[key] = hit
        return hit


def unwhisker(m, red, n: int):
    """Reductions Q (context order) with ``left_whisker(m, Q) == red``, or None.

    Entries for variables that do not occur in ``m`` are left as None.
    """
    sol = [None] * n

    def go(t, r, depth):
        if isinstance(t, Var):
            if t.index < depth:
                return r == VarRefl(t.index)
            j = t.index - depth
            try:
                cand = shift_reduction(r, -depth, 0) if depth else r
            except ValueError:
                return False
            if depth and reduction_free_vars(r) & set(range(depth)):
                return False
            pos = n - 1 - j
            if sol[pos] is None:
                sol[pos] = cand
                return True
            return sol[pos] == cand
        if isinstance(t, UnitIntro):
            return isinstance(r, UnitRefl)
        if isinstance(t, ConstApp):
            return (isinstance(r, ConstCong) and r.op == t.op and len(r.args) == len(t.args)
                    and all(go(a, b, depth) for a, b in zip(t.args, r.args)))
        if isinstance(t, Lambda):
            return isinstance(r, LambdaCong) and r.ty == t.ty and go(t.body, r.body, depth + 1)
        if isinstance(t, App):
            return isinstance(r, AppCong) and go(t.fun, r.fun, depth) and go(t.arg, r.arg, depth)
        if isinstance(t, Pair):
            return isinstance(r, PairCong) and go(t.fst, r.fst, depth) and go(t.snd, r.snd, depth)
        if isinstance(t, Proj1):
            return isinstance(r, Proj1Cong) and go(t.arg, r.arg, depth)
        if isinstance(t, Proj2):
            return isinstance(r, Proj2Cong) and go(t.arg, r.arg, depth)
        return False

    return sol if go(m, red, 0) else None


def _vparts(p):
    return (p.left, p.mid, p.right) if isinstance(p, VComp) else None


def root_moves(types, p, sig, typer):
    """Yield (equation-id, reduction) for every root instance with ``p`` on one side."""
    ops = sig.ops
    # category
    if isinstance(p, VComp):
        if isinstance(p.right, VComp):
            r = p.right
            yield "cat-assoc", VComp(VComp(p.left, p.mid, r.left), r.mid, r.right)
        if isinstance(p.left, VComp):
            l = p.left
            yield "cat-assoc", VComp(l.left, l.mid, VComp(l.right, p.mid, p.right))
        if is_identity_shaped(p.right):
            yield "cat-unit-r", p.left
        if is_identity_shaped(p.left):
            yield "cat-unit-l", p.right
    s, t, ty = typer(types, p)
    yield "cat-unit-r", VComp(p, t, identity_reduction(eta_contract(t)))
    yield "cat-unit-l", VComp(identity_reduction(eta_contract(s)), s, p)

    # beta / eta
    if isinstance(p, AppCong) and isinstance(p.fun, LambdaCong):
        lam = p.fun
        ctx = Context(tuple((f"v{i}", a) for i, a in enumerate(types)))
        inner = Context(ctx.entries + (("v_", lam.ty),))
        n = len(types)
        ids = [VarRefl(n - 1 - i) for i in range(n)]
        yield "beta-arrow", subst_reduction(lam.body, ids + [p.arg], sig, delta=inner, gamma=ctx)
        # same instance with the whiskered target eta-short; cheaper for the search
        b_src, b_tgt, _ = typer(inner.types, lam.body)
        a_src, a_tgt, _ = typer(types, p.arg)
        terms = [Var(n - 1 - i) for i in range(n)]
        mid = normalize_in(types, subst_term(b_tgt, terms + [a_src]), ty, ops)
        head = right_whisker(lam.body, terms + [eta_contract(a_src)], sig, ctx)
        if is_identity_shaped(p.arg):
            yield "beta-arrow", head
        else:
            yield "beta-arrow", VComp(head, mid, left_whisker(eta_contract(b_tgt), [VarRefl(i) for i in range(n - 1, -1, -1)] + [p.arg]))
    if isinstance(ty, Exponential):
        yield "eta-arrow", LambdaCong(ty.domain, AppCong(shift_reduction(p, 1), VarRefl(0)))
    if (isinstance(p, LambdaCong) and isinstance(p.body, AppCong) and p.body.arg == VarRefl(0)
            and 0 not in reduction_free_vars(p.body.fun)):
        yield "eta-arrow", shift_reduction(p.body.fun, -1)
    if isinstance(p, Proj1Cong) and isinstance(p.arg, PairCong):
        yield "beta-proj1", p.arg.fst
    if isinstance(p, Proj2Cong) and isinstance(p.arg, PairCong):
        yield "beta-proj2", p.arg.snd
    if isinstance(ty, Product):
        yield "eta-pair", PairCong(Proj1Cong(p), Proj2Cong(p))
    if (isinstance(p, PairCong) and isinstance(p.fst, Proj1Cong) and isinstance(p.snd, Proj2Cong)
            and p.fst.arg == p.snd.arg):
        yield "eta-pair", p.fst.arg
    if isinstance(ty, Unit) and not isinstance(p, UnitRefl):
        yield "eta-unit", UNIT_REFL

    # lifting, splitting direction
    if isinstance(p, (RuleApp, ConstCong)) and p.args and all(isinstance(a, VComp) for a in p.args):
        ps = [a.left for a in p.args]
        ms = [a.mid for a in p.args]
        qs = [a.right for a in p.args]
        if isinstance(p, RuleApp):
            r = sig.rule(p.rule)
            yield "lift-rule-l", VComp(left_whisker(r.lhs, ps), normalize_in(types, subst_term(r.lhs, ms), ty, ops),
                                       RuleApp(p.rule, qs))
            yield "lift-rule-r", VComp(RuleApp(p.rule, ps), normalize_in(types, subst_term(r.rhs, ms), ty, ops),
                                       left_whisker(r.rhs, qs))
        else:
            yield "lift-const", VComp(ConstCong(p.op, ps), normalize_in(types, ConstApp(p.op, ms), ty, ops),
                                      ConstCong(p.op, qs))
    if isinstance(p, LambdaCong) and isinstance(p.body, VComp):
        b = p.body
        yield "lift-lam", VComp(LambdaCong(p.ty, b.left, p.hint), Lambda(p.ty, b.mid),
                                LambdaCong(p.ty, b.right, p.hint))
    if isinstance(p, AppCong) and isinstance(p.fun, VComp) and isinstance(p.arg, VComp):
        f, a = p.fun, p.arg
        yield "lift-app", VComp(AppCong(f.left, a.left), normalize_in(types, App(f.mid, a.mid), ty, ops),
                                AppCong(f.right, a.right))
    if isinstance(p, PairCong) and isinstance(p.fst, VComp) and isinstance(p.snd, VComp):
        f, g = p.fst, p.snd
        yield "lift-pair", VComp(PairCong(f.left, g.left), Pair(f.mid, g.mid), PairCong(f.right, g.right))
    if isinstance(p, Proj1Cong) and isinstance(p.arg, VComp):
        a = p.arg
        yield "lift-proj1", VComp(Proj1Cong(a.left), normalize_in(types, Proj1(a.mid), ty, ops), Proj1Cong(a.right))
    if isinstance(p, Proj2Cong) and isinstance(p.arg, VComp):
        a = p.arg
        yield "lift-proj2", VComp(Proj2Cong(a.left), normalize_in(types, Proj2(a.mid), ty, ops), Proj2Cong(a.right))

    # lifting, merging direction
    if isinstance(p, VComp):
        yield from _merge(types, p, sig, typer)


def _glue(types, ps, qs, typer):
    """Componentwise composites P_i ; Q_i, or None if some middle disagrees."""
    out = []
    for a, b in zip(ps, qs):
        ta = typer(types, a)[1]
        sb = typer(types, b)[0]
        if ta != sb:
            return None
        out.append(VComp(a, ta, b))
    return out


def _merge(types, p, sig, typer):
    left, right = p.left, p.right
    if isinstance(right, RuleApp) and right.args:
        r = sig.rule(right.rule)
        sol = unwhisker(r.lhs, left, len(r.context))
        if sol is not None:
            ps = [x if x is not None else identity_reduction(eta_contract(typer(types, q)[0]))
                  for x, q in zip(sol, right.args)]
            glued = _glue(types, ps, right.args, typer)
            if glued is not None:
                yield "lift-rule-l", RuleApp(right.rule, glued)
    if isinstance(left, RuleApp) and left.args:
        r = sig.rule(left.rule)
        sol = unwhisker(r.rhs, right, len(r.context))
        if sol is not None:
            qs = [x if x is not None else identity_reduction(eta_contract(typer(types, q)[1]))
                  for x, q in zip(sol, left.args)]
            glued = _glue(types, left.args, qs, typer)
            if glued is not None:
                yield "lift-rule-r", RuleApp(left.rule, glued)
    if (isinstance(left, ConstCong) and isinstance(right, ConstCong) and left.op == right.op
            and left.args and len(left.args) == len(right.args)):
        glued = _glue(types, left.args, right.args, typer)
        if glued is not None:
            yield "lift-const", ConstCong(left.op, glued)
    if isinstance(left, LambdaCong) and isinstance(right, LambdaCong) and left.ty == right.ty:
        inner = types + (left.ty,)
        glued = _glue(inner, [left.body], [right.body], typer)
        if glued is not None:
            yield "lift-lam", LambdaCong(left.ty, glued[0], left.hint)
    if isinstance(left, AppCong) and isinstance(right, AppCong):
        if typer(types, left.fun)[2] == typer(types, right.fun)[2]:
            glued = _glue(types, [left.fun, left.arg], [right.fun, right.arg], typer)
            if glued is not None:
                yield "lift-app", AppCong(*glued)
    if isinstance(left, PairCong) and isinstance(right, PairCong):
        glued = _glue(types, [left.fst, left.snd], [right.fst, right.snd], typer)
        if glued is not None:
            yield "lift-pair", PairCong(*glued)
    for cls, name in ((Proj1Cong, "lift-proj1"), (Proj2Cong, "lift-proj2")):
        if isinstance(left, cls) and isinstance(right, cls):
            if typer(types, left.arg)[2] == typer(types, right.arg)[2]:
                glued = _glue(types, [left.arg], [right.arg], typer)
                if glued is not None:
                    yield name, cls(glued[0])


# ---------------------------------------------------------------- positions

def positions(types, p, path=()):
    """Yield (path, local context types, subreduction) in pre-order."""
    yield path, types, p
    inner = types + (p.ty,) if isinstance(p, LambdaCong) else types
    for i, c in enumerate(r_children(p)):
        yield from positions(inner, c, path + (i,))


def _replace(p, path, new):
    if not path:
        return new
    kids = list(r_children(p))
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return r_rebuild(p, kids)


def neighbours(types, p, sig, typer, which=None):
    """Yield (equation-id, path, reduction) one schema application away from ``p``."""
    for path, local, sub in positions(types, p):
        try:
            for name, new in root_moves(local, sub, sig, typer):
                if which is None or name == which:
                    yield name, path, _replace(p, path, new)
        except Perm2Error:
            continue


# ---------------------------------------------------------------- eq_step

def _as_judgment(x, ctx, sig):
    if isinstance(x, ReductionJudgment):
        return x
    from ..proofterm import judge
    return judge(ctx, x, sig)


def eq_step(p, q, which: str, sig, ctx=None) -> bool:
    """Is (p, q) an instance of the schema ``which`` in either orientation at the root?"""
    if which not in EQUATIONS:
        raise UnknownEquation(which)
    jp = _as_judgment(p, ctx, sig)
    jq = _as_judgment(q, ctx if ctx is not None else jp.context, sig)
    if jp.triple != jq.triple:
        raise TypeMismatch(jp.triple, jq.triple, "equation sides")
    types = jp.context.types
    typer = Typer(sig)
    a = normalize_mids(types, jp.proof, sig)
    b = normalize_mids(types, jq.proof, sig)
    if which == "cong-refl":
        return a == b
    if which in CONGRUENCE:
        return _cong(types, a, b, which, sig, typer)

    def hits(x, y):
        for name, new in root_moves(types, x, sig, typer):
            if name == which and normalize_mids(types, new, sig) == y:
                return True
        return False

    return hits(a, b) or hits(b, a)


def _one_step(types, x, y, sig, typer) -> bool:
    return x == y or any(n == y for _, _, n in neighbours(types, x, sig, typer))


_COMPONENT_NODES = {
    "cong-vcomp": VComp,
    "cong-rule": RuleApp,
    "cong-const": ConstCong,
    "cong-lam": LambdaCong,
    "cong-app": AppCong,
    "cong-pair": PairCong,
    "cong-proj1": Proj1Cong,
    "cong-proj2": Proj2Cong,
}


def _labels(p):
    if isinstance(p, (RuleApp,)):
        return (p.rule, len(p.args))
    if isinstance(p, ConstCong):
        return (p.op, len(p.args))
    if isinstance(p, LambdaCong):
        return (p.ty,)
    return ()


def _cong(types, a, b, which, sig, typer) -> bool:
    if which == "cong-sym":
        return any(_root_related(types, b, a, name, sig, typer) for name in CATEGORY + BETA_ETA + LIFTING)
    if which == "cong-trans":
        left = {n for _, _, n in neighbours(types, a, sig, typer)} | {a}
        right = {n for _, _, n in neighbours(types, b, sig, typer)} | {b}
        return bool(left & right)
    cls = _COMPONENT_NODES[which]
    if not (isinstance(a, cls) and isinstance(b, cls)) or _labels(a) != _labels(b):
        return False
    inner = types + (a.ty,) if isinstance(a, LambdaCong) else types
    if isinstance(a, VComp) and typer(types, a.left)[1] != typer(types, b.left)[1]:
        return False
    for x, y in zip(r_children(a), r_children(b)):
        try:
            if typer(inner, x) != typer(inner, y):
                return False
        except Perm2Error:
            return False
        if not _one_step(inner, x, y, sig, typer):
            return False
    return True


def _root_related(types, x, y, which, sig, typer) -> bool:
    for name, new in root_moves(types, x, sig, typer):
        if name == which and normalize_mids(types, new, sig) == y:
            return True
    for name, new in root_moves(types, y, sig, typer):
        if name == which and normalize_mids(types, new, sig) == x:
            return True
    return False
