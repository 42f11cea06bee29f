"""Reductions (proof terms), their typing judgment, identities and weakening."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from .errors import ArityMismatch, IllTyped, MiddleMismatch, Perm2Error, TypeMismatch, UnboundVariable
from .kernel import (
    App,
    ConstApp,
    Context,
    Exponential,
    Lambda,
    Pair,
    Product,
    Proj1,
    Proj2,
    UNIT,
    UNIT_TERM,
    UnitIntro,
    Var,
    infer_type,
    normalize_in,
    ops_of,
    shift,
    subst_term,
)
from .signature import RuleRef


@dataclass(frozen=True)
class RuleApp:
    rule: Any
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class VComp:
    left: "Reduction"
    mid: Any
    right: "Reduction"


@dataclass(frozen=True)
class VarRefl:
    index: int


@dataclass(frozen=True)
class UnitRefl:
    pass


@dataclass(frozen=True)
class ConstCong:
    op: Any
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class LambdaCong:
    ty: Any
    body: "Reduction"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class AppCong:
    fun: "Reduction"
    arg: "Reduction"


@dataclass(frozen=True)
class PairCong:
    fst: "Reduction"
    snd: "Reduction"


@dataclass(frozen=True)
class Proj1Cong:
    arg: "Reduction"


@dataclass(frozen=True)
class Proj2Cong:
    arg: "Reduction"


Reduction = Union[RuleApp, VComp, VarRefl, UnitRefl, ConstCong, LambdaCong, AppCong, PairCong, Proj1Cong, Proj2Cong]
UNIT_REFL = UnitRefl()

for _cls in (RuleApp, VComp, VarRefl, UnitRefl, ConstCong, LambdaCong, AppCong, PairCong, Proj1Cong, Proj2Cong):
    _cls.__str__ = lambda self: _show(self)


def _show(p):
    from .syntax import show_proof
    return show_proof(p)


def r_children(p) -> tuple:
    if isinstance(p, (RuleApp, ConstCong)):
        return p.args
    if isinstance(p, VComp):
        return (p.left, p.right)
    if isinstance(p, LambdaCong):
        return (p.body,)
    if isinstance(p, AppCong):
        return (p.fun, p.arg)
    if isinstance(p, PairCong):
        return (p.fst, p.snd)
    if isinstance(p, (Proj1Cong, Proj2Cong)):
        return (p.arg,)
    return ()


def r_rebuild(p, kids):
    kids = tuple(kids)
    if isinstance(p, RuleApp):
        return RuleApp(p.rule, kids)
    if isinstance(p, ConstCong):
        return ConstCong(p.op, kids)
    if isinstance(p, VComp):
        return VComp(kids[0], p.mid, kids[1])
    if isinstance(p, LambdaCong):
        return LambdaCong(p.ty, kids[0], p.hint)
    if isinstance(p, AppCong):
        return AppCong(*kids)
    if isinstance(p, PairCong):
        return PairCong(*kids)
    if isinstance(p, Proj1Cong):
        return Proj1Cong(kids[0])
    if isinstance(p, Proj2Cong):
        return Proj2Cong(kids[0])
    return p


def reduction_size(p) -> int:
    """Number of reduction nodes; the middle term of a composite is not counted."""
    return 1 + sum(reduction_size(c) for c in r_children(p))


def rule_count(p) -> int:
    return (1 if isinstance(p, RuleApp) else 0) + sum(rule_count(c) for c in r_children(p))


def has_vcomp(p) -> bool:
    return isinstance(p, VComp) or any(has_vcomp(c) for c in r_children(p))


def is_identity_shaped(p) -> bool:
    """Built from congruence nodes only."""
    return not isinstance(p, (RuleApp, VComp)) and all(is_identity_shaped(c) for c in r_children(p))


# ---------------------------------------------------------------- judgments

@dataclass(frozen=True)
class ReductionJudgment:
    context: Context
    proof: Any
    source: Any
    target: Any
    type: Any

    @property
    def triple(self):
        return (self.source, self.target, self.type)


def _infer(types, p, sig):
    """Unnormalized (source, target, type) of ``p``."""
    ops = sig.ops
    if isinstance(p, VarRefl):
        if not 0 <= p.index < len(types):
            raise UnboundVariable(f"index {p.index}")
        v = Var(p.index)
        return v, v, types[len(types) - 1 - p.index]
    if isinstance(p, UnitRefl):
        return UNIT_TERM, UNIT_TERM, UNIT
    if isinstance(p, RuleApp):
        r = sig.rule(p.rule)
        if len(p.args) != len(r.context):
            raise ArityMismatch(f"rule {p.rule} expects {len(r.context)} arguments, got {len(p.args)}")
        srcs, tgts = [], []
        for expected, a in zip(r.context.types, p.args):
            s, t, ty = _infer(types, a, sig)
            if ty != expected:
                raise TypeMismatch(expected, ty, f"argument of rule {p.rule}")
            srcs.append(s)
            tgts.append(t)
        return subst_term(r.lhs, srcs), subst_term(r.rhs, tgts), r.type
    if isinstance(p, VComp):
        s1, t1, ty1 = _infer(types, p.left, sig)
        s2, t2, ty2 = _infer(types, p.right, sig)
        if ty1 != ty2:
            raise TypeMismatch(ty1, ty2, "vertical composite")
        try:
            mty = infer_type(types, p.mid, ops)
        except Perm2Error as e:
            raise MiddleMismatch(normalize_in(types, t1, ty1, ops), p.mid) from e
        if mty != ty1:
            raise TypeMismatch(ty1, mty, "middle term")
        left_t = normalize_in(types, t1, ty1, ops)
        mid = normalize_in(types, p.mid, ty1, ops)
        if left_t != mid:
            raise MiddleMismatch(left_t, mid)
        right_s = normalize_in(types, s2, ty1, ops)
        if right_s != mid:
            raise MiddleMismatch(mid, right_s)
        return s1, t2, ty1
    if isinstance(p, ConstCong):
        if p.op not in ops:
            from .errors import UnknownConstant
            raise UnknownConstant(str(p.op))
        seq = ops[p.op]
        if len(seq.premises) != len(p.args):
            raise ArityMismatch(f"{p.op} expects {len(seq.premises)} arguments, got {len(p.args)}")
        srcs, tgts = [], []
        for expected, a in zip(seq.premises, p.args):
            s, t, ty = _infer(types, a, sig)
            if ty != expected:
                raise TypeMismatch(expected, ty, f"argument of {p.op}")
            srcs.append(s)
            tgts.append(t)
        return ConstApp(p.op, srcs), ConstApp(p.op, tgts), seq.conclusion
    if isinstance(p, LambdaCong):
        s, t, ty = _infer(types + (p.ty,), p.body, sig)
        return Lambda(p.ty, s, p.hint), Lambda(p.ty, t, p.hint), Exponential(p.ty, ty)
    if isinstance(p, AppCong):
        s1, t1, f = _infer(types, p.fun, sig)
        if not isinstance(f, Exponential):
            raise TypeMismatch("an exponential type", f, "function position")
        s2, t2, a = _infer(types, p.arg, sig)
        if a != f.domain:
            raise TypeMismatch(f.domain, a, "application argument")
        return App(s1, s2), App(t1, t2), f.codomain
    if isinstance(p, PairCong):
        s1, t1, a = _infer(types, p.fst, sig)
        s2, t2, b = _infer(types, p.snd, sig)
        return Pair(s1, s2), Pair(t1, t2), Product(a, b)
    if isinstance(p, (Proj1Cong, Proj2Cong)):
        s, t, a = _infer(types, p.arg, sig)
        if not isinstance(a, Product):
            raise TypeMismatch("a product type", a, "projection")
        if isinstance(p, Proj1Cong):
            return Proj1(s), Proj1(t), a.left
        return Proj2(s), Proj2(t), a.right
    raise TypeError(f"not a reduction: {p!r}")


def _types(ctx) -> tuple:
    return ctx.types if isinstance(ctx, Context) else tuple(ctx)


def typecheck_reduction(ctx, p, sig):
    """Return the normal (source, target, type) of ``p`` in ``ctx``."""
    types = _types(ctx)
    s, t, ty = _infer(types, p, sig)
    return normalize_in(types, s, ty, sig.ops), normalize_in(types, t, ty, sig.ops), ty


def judge(ctx, p, sig) -> ReductionJudgment:
    s, t, ty = typecheck_reduction(ctx, p, sig)
    return ReductionJudgment(ctx, p, s, t, ty)


def check_judgment(j: ReductionJudgment, sig) -> bool:
    """True iff the proof typechecks to exactly the recorded triple."""
    try:
        return typecheck_reduction(j.context, j.proof, sig) == j.triple
    except Perm2Error:
        return False


def identity_reduction(m, ctx=None, sig=None):
    """The congruence-only reduction from ``m`` to itself."""
    if ctx is not None and sig is not None:
        try:
            infer_type(_types(ctx), m, ops_of(sig))
        except Perm2Error as e:
            raise IllTyped(str(e)) from e
    return _ident(m)


def _ident(m):
    if isinstance(m, Var):
        return VarRefl(m.index)
    if isinstance(m, UnitIntro):
        return UNIT_REFL
    if isinstance(m, ConstApp):
        return ConstCong(m.op, tuple(_ident(a) for a in m.args))
    if isinstance(m, Lambda):
        return LambdaCong(m.ty, _ident(m.body), m.hint)
    if isinstance(m, App):
        return AppCong(_ident(m.fun), _ident(m.arg))
    if isinstance(m, Pair):
        return PairCong(_ident(m.fst), _ident(m.snd))
    if isinstance(m, Proj1):
        return Proj1Cong(_ident(m.arg))
    if isinstance(m, Proj2):
        return Proj2Cong(_ident(m.arg))
    raise IllTyped(f"cannot embed {m!r}")


def weaken(j: ReductionJudgment, x: str, b) -> ReductionJudgment:
    """Add ``x : b`` to the context.

    The new variable goes to the outermost position, so de Bruijn indices and
    hence the proof term are unchanged.
    """
    return ReductionJudgment(j.context.prepend(x, b), j.proof, j.source, j.target, j.type)


# ---------------------------------------------------------------- doubled terms
# A reduction with no vertical composite is a term over the signature whose
# operations are the base ops plus one op per rule.

def to_doubled(p):
    if isinstance(p, VComp):
        raise ValueError("vertical composites have no doubled term")
    if isinstance(p, RuleApp):
        return ConstApp(RuleRef(p.rule), tuple(to_doubled(a) for a in p.args))
    if isinstance(p, VarRefl):
        return Var(p.index)
    if isinstance(p, UnitRefl):
        return UNIT_TERM
    if isinstance(p, ConstCong):
        return ConstApp(p.op, tuple(to_doubled(a) for a in p.args))
    if isinstance(p, LambdaCong):
        return Lambda(p.ty, to_doubled(p.body), p.hint)
    if isinstance(p, AppCong):
        return App(to_doubled(p.fun), to_doubled(p.arg))
    if isinstance(p, PairCong):
        return Pair(to_doubled(p.fst), to_doubled(p.snd))
    if isinstance(p, Proj1Cong):
        return Proj1(to_doubled(p.arg))
    if isinstance(p, Proj2Cong):
        return Proj2(to_doubled(p.arg))
    raise TypeError(f"not a reduction: {p!r}")


def from_doubled(t):
    if isinstance(t, ConstApp):
        args = tuple(from_doubled(a) for a in t.args)
        if isinstance(t.op, RuleRef):
            return RuleApp(t.op.name, args)
        return ConstCong(t.op, args)
    if isinstance(t, Var):
        return VarRefl(t.index)
    if isinstance(t, UnitIntro):
        return UNIT_REFL
    if isinstance(t, Lambda):
        return LambdaCong(t.ty, from_doubled(t.body), t.hint)
    if isinstance(t, App):
        return AppCong(from_doubled(t.fun), from_doubled(t.arg))
    if isinstance(t, Pair):
        return PairCong(from_doubled(t.fst), from_doubled(t.snd))
    if isinstance(t, Proj1):
        return Proj1Cong(from_doubled(t.arg))
    if isinstance(t, Proj2):
        return Proj2Cong(from_doubled(t.arg))
    raise TypeError(f"not a term: {t!r}")


def term_of(p):
    """The term denoted by a congruence-only reduction."""
    if not is_identity_shaped(p):
        raise ValueError("reduction is not an identity")
    return to_doubled(p)


# ---------------------------------------------------------------- utilities

def shift_reduction(p, d: int, cutoff: int = 0):
    if isinstance(p, VarRefl):
        if p.index < cutoff:
            return p
        if p.index + d < cutoff:
            raise ValueError("shift would capture a variable")
        return VarRefl(p.index + d)
    if isinstance(p, VComp):
        return VComp(shift_reduction(p.left, d, cutoff), shift(p.mid, d, cutoff),
                     shift_reduction(p.right, d, cutoff))
    if isinstance(p, LambdaCong):
        return LambdaCong(p.ty, shift_reduction(p.body, d, cutoff + 1), p.hint)
    kids = r_children(p)
    if not kids:
        return p
    return r_rebuild(p, tuple(shift_reduction(c, d, cutoff) for c in kids))


def reduction_free_vars(p, depth: int = 0) -> set:
    if isinstance(p, VarRefl):
        return {p.index - depth} if p.index >= depth else set()
    if isinstance(p, LambdaCong):
        return reduction_free_vars(p.body, depth + 1)
    out = set()
    if isinstance(p, VComp):
        from .kernel import free_vars
        out |= free_vars(p.mid, depth)
    for c in r_children(p):
        out |= reduction_free_vars(c, depth)
    return out


def normalize_mids(ctx, p, sig):
    """Replace every middle term by its normal form."""
    return _norm_mids(_types(ctx), p, sig)


def _norm_mids(types, p, sig):
    if isinstance(p, VComp):
        ty = infer_type(types, p.mid, sig.ops)
        return VComp(_norm_mids(types, p.left, sig), normalize_in(types, p.mid, ty, sig.ops),
                     _norm_mids(types, p.right, sig))
    if isinstance(p, LambdaCong):
        return LambdaCong(p.ty, _norm_mids(types + (p.ty,), p.body, sig), p.hint)
    kids = r_children(p)
    if not kids:
        return p
    return r_rebuild(p, tuple(_norm_mids(types, c, sig) for c in kids))


def r_subterm_at(p, path):
    for i in path:
        p = r_children(p)[i]
    return p


def r_replace_at(p, path, new):
    if not path:
        return new
    kids = list(r_children(p))
    kids[path[0]] = r_replace_at(kids[path[0]], path[1:], new)
    return r_rebuild(p, kids)


def r_binders_along(p, path) -> tuple:
    out = []
    for i in path:
        if isinstance(p, LambdaCong):
            out.append(p.ty)
        p = r_children(p)[i]
    return tuple(out)


def compose_all(steps, mids):
    """Left-nested vertical composite of ``steps`` with the given middles."""
    acc = steps[0]
    for m, s in zip(mids, steps[1:]):
        acc = VComp(acc, m, s)
    return acc
