"""Matching of higher-order patterns against normal terms.

A pattern is an eta-long normal term in which every occurrence of a rule
variable is applied to distinct bound variables.  Matching such a pattern is
unitary: it yields at most one substitution.
"""
from __future__ import annotations

from .errors import NonPatternLhs
from .kernel import (
    App,
    ConstApp,
    Exponential,
    Lambda,
    Pair,
    Product,
    Proj1,
    Proj2,
    UNIT_TERM,
    Unit,
    UnitIntro,
    Var,
    eta_contract,
    unit_like,
)


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def _has_proj_head(t):
    while isinstance(t, (App, Proj1, Proj2)):
        t = t.fun if isinstance(t, App) else t.arg
    return t


def _flex(t, depth):
    """Return (rule-var index, bound-var args) if ``t`` is a flex occurrence."""
    head = _has_proj_head(t)
    if not (isinstance(head, Var) and head.index >= depth):
        return None
    h, args = _spine(t)
    if h is not head:
        raise NonPatternLhs("projection applied to a rule variable")
    bound = []
    for a in args:
        c = eta_contract(a)
        if not (isinstance(c, Var) and c.index < depth):
            raise NonPatternLhs("rule variable applied to a non-variable")
        if c.index in bound:
            raise NonPatternLhs("rule variable applied to a repeated variable")
        bound.append(c.index)
    return head.index - depth, bound


def canonical_inhabitant(ty):
    if isinstance(ty, Unit):
        return UNIT_TERM
    if isinstance(ty, Product):
        return Pair(canonical_inhabitant(ty.left), canonical_inhabitant(ty.right))
    if isinstance(ty, Exponential):
        return Lambda(ty.domain, canonical_inhabitant(ty.codomain))
    raise ValueError(f"{ty} has no canonical inhabitant")


def check_pattern(lhs, ctx_types) -> None:
    """Raise NonPatternLhs unless ``lhs`` is a pattern determining every variable."""
    n = len(ctx_types)
    seen = set()

    def go(t, depth):
        f = _flex(t, depth)
        if f is not None:
            seen.add(f[0])
            return
        if isinstance(t, Lambda):
            go(t.body, depth + 1)
        elif isinstance(t, ConstApp):
            for a in t.args:
                go(a, depth)
        elif isinstance(t, App):
            go(t.fun, depth)
            go(t.arg, depth)
        elif isinstance(t, Pair):
            go(t.fst, depth)
            go(t.snd, depth)
        elif isinstance(t, (Proj1, Proj2)):
            go(t.arg, depth)

    go(lhs, 0)
    for j in range(n):
        if j not in seen and not unit_like(ctx_types[n - 1 - j]):
            raise NonPatternLhs(f"variable at index {j} is not determined by the left-hand side")


def _abstract(s, depth, bound, binder_types):
    """Build lambda y1..yk. s where y_m stands for the local binder ``bound[m]``."""
    k = len(bound)
    where = {b: m for m, b in enumerate(bound)}

    def go(t, e):
        if isinstance(t, Var):
            i = t.index
            if i < e:
                return t
            r = i - e
            if r < depth:
                if r not in where:
                    raise _NoMatch
                return Var(k - 1 - where[r] + e)
            return Var(r - depth + k + e)
        if isinstance(t, Lambda):
            return Lambda(t.ty, go(t.body, e + 1), t.hint)
        if isinstance(t, ConstApp):
            return ConstApp(t.op, tuple(go(a, e) for a in t.args))
        if isinstance(t, App):
            return App(go(t.fun, e), go(t.arg, e))
        if isinstance(t, Pair):
            return Pair(go(t.fst, e), go(t.snd, e))
        if isinstance(t, Proj1):
            return Proj1(go(t.arg, e))
        if isinstance(t, Proj2):
            return Proj2(go(t.arg, e))
        return t

    body = go(s, 0)
    for b in reversed(bound):
        body = Lambda(binder_types[depth - 1 - b], body, "y")
    return body


class _NoMatch(Exception):
    pass


def match_pattern(lhs, subject, ctx_types):
    """Substitution (in context order) with lhs[sigma] equal to ``subject``, or None.

    Both terms must be eta-long normal at the same type.  ``ctx_types`` are the
    types of the rule variables.  Constants are compared by op-id only.
    """
    n = len(ctx_types)
    sol = [None] * n

    def go(p, s, depth, binders):
        f = _flex(p, depth)
        if f is not None:
            j, bound = f
            val = _abstract(s, depth, bound, binders)
            pos = n - 1 - j
            if sol[pos] is None:
                sol[pos] = val
            elif sol[pos] != val:
                raise _NoMatch
            return
        if type(p) is not type(s):
            raise _NoMatch
        if isinstance(p, Var):
            if p.index != s.index:
                raise _NoMatch
        elif isinstance(p, ConstApp):
            if p.op != s.op or len(p.args) != len(s.args):
                raise _NoMatch
            for a, b in zip(p.args, s.args):
                go(a, b, depth, binders)
        elif isinstance(p, Lambda):
            if p.ty != s.ty:
                raise _NoMatch
            go(p.body, s.body, depth + 1, binders + (p.ty,))
        elif isinstance(p, App):
            go(p.fun, s.fun, depth, binders)
            go(p.arg, s.arg, depth, binders)
        elif isinstance(p, Pair):
            go(p.fst, s.fst, depth, binders)
            go(p.snd, s.snd, depth, binders)
        elif isinstance(p, (Proj1, Proj2)):
            go(p.arg, s.arg, depth, binders)
        elif isinstance(p, UnitIntro):
            pass

    try:
        go(lhs, subject, 0, ())
    except _NoMatch:
        return None
    for pos in range(n):
        if sol[pos] is None:
            if not unit_like(ctx_types[pos]):
                return None
            sol[pos] = canonical_inhabitant(ctx_types[pos])
    return tuple(sol)
