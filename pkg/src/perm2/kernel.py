"""Simply typed lambda terms with constants.

Terms use de Bruijn indices: ``Var(0)`` is the innermost binder, or the last
entry of the context when no binder is in scope.  Operations that need the
types of constants take a ``sig`` argument, which may be any object with an
``ops`` mapping (op-id -> Sequent) or such a mapping itself.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterator, Sequence, Union

from .errors import (
    ArityMismatch,
    DuplicateVariable,
    IllTyped,
    TypeMismatch,
    UnboundVariable,
    UnknownConstant,
    UnknownSort,
)


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class Sort:
    name: str

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Product:
    left: "Type"
    right: "Type"

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True)
class Exponential:
    domain: "Type"
    codomain: "Type"

    def __str__(self):
        return show_type(self)


Type = Union[Sort, Unit, Product, Exponential]
UNIT = Unit()


def show_type(a, prec: int = 0) -> str:
    # prec 0: top, 1: operand of *, 2: operand of ^
    if isinstance(a, Sort):
        return a.name
    if isinstance(a, Unit):
        return "1"
    if isinstance(a, Product):
        s = f"{show_type(a.left, 1)} * {show_type(a.right, 0)}"
        return f"({s})" if prec >= 1 else s
    if isinstance(a, Exponential):
        s = f"{show_type(a.codomain, 2)} ^ {show_type(a.domain, 1)}"
        return f"({s})" if prec >= 2 else s
    raise TypeError(f"not a type: {a!r}")


def type_sorts(a) -> set:
    if isinstance(a, Sort):
        return {a.name}
    if isinstance(a, Product):
        return type_sorts(a.left) | type_sorts(a.right)
    if isinstance(a, Exponential):
        return type_sorts(a.domain) | type_sorts(a.codomain)
    return set()


def subst_type(a, sortmap) -> Type:
    """Replace every sort by its image; ``sortmap`` is a mapping or callable."""
    if isinstance(a, Sort):
        try:
            image = sortmap(a.name) if callable(sortmap) else sortmap[a.name]
        except KeyError:
            raise UnknownSort(a.name) from None
        return image
    if isinstance(a, Unit):
        return a
    if isinstance(a, Product):
        return Product(subst_type(a.left, sortmap), subst_type(a.right, sortmap))
    if isinstance(a, Exponential):
        return Exponential(subst_type(a.domain, sortmap), subst_type(a.codomain, sortmap))
    raise TypeError(f"not a type: {a!r}")


def type_depth(a) -> int:
    if isinstance(a, (Product, Exponential)):
        l, r = (a.left, a.right) if isinstance(a, Product) else (a.domain, a.codomain)
        return 1 + max(type_depth(l), type_depth(r))
    return 0


def unit_like(a) -> bool:
    """True when the type has exactly one normal inhabitant."""
    if isinstance(a, Unit):
        return True
    if isinstance(a, Product):
        return unit_like(a.left) and unit_like(a.right)
    if isinstance(a, Exponential):
        return unit_like(a.codomain)
    return False


@dataclass(frozen=True)
class Sequent:
    premises: tuple
    conclusion: Type

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def __str__(self):
        return "(" + ", ".join(show_type(p) for p in self.premises) + ") -> " + show_type(self.conclusion)


# ---------------------------------------------------------------- contexts

@dataclass(frozen=True)
class Context:
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((str(n), t) for n, t in self.entries)
        names = [n for n, _ in entries]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DuplicateVariable(dup)
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.entries)

    @property
    def types(self) -> tuple:
        return tuple(t for _, t in self.entries)

    def lookup(self, index: int):
        if not 0 <= index < len(self.entries):
            raise UnboundVariable(f"index {index} in context of length {len(self.entries)}")
        return self.entries[len(self.entries) - 1 - index]

    def index_of(self, name: str) -> int:
        for i, (n, _) in enumerate(reversed(self.entries)):
            if n == name:
                return i
        raise UnboundVariable(name)

    def extend(self, name: str, ty) -> "Context":
        """Append a binder, renaming it if the name is already taken."""
        return Context(self.entries + ((fresh_name(name, self.names), ty),))

    def prepend(self, name: str, ty) -> "Context":
        if name in self.names:
            raise DuplicateVariable(name)
        return Context(((name, ty),) + self.entries)

    def __str__(self):
        return ", ".join(f"{n}:{show_type(t)}" for n, t in self.entries)


def fresh_name(base: str, used) -> str:
    used = set(used)
    if base not in used:
        return base
    stem = base.rstrip("0123456789'") or "x"
    i = 1
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class UnitIntro:
    pass


@dataclass(frozen=True)
class ConstApp:
    op: Any
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Lambda:
    ty: Type
    body: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"


@dataclass(frozen=True)
class Proj1:
    arg: "Term"


@dataclass(frozen=True)
class Proj2:
    arg: "Term"


@dataclass(frozen=True)
class Hole:
    """Marker for the hole of a one-hole context; not typeable."""


Term = Union[Var, UnitIntro, ConstApp, Lambda, App, Pair, Proj1, Proj2, Hole]
UNIT_TERM = UnitIntro()

for _cls in (Var, UnitIntro, ConstApp, Lambda, App, Pair, Proj1, Proj2, Hole):
    _cls.__str__ = lambda self: _show(self)


def _show(t):
    from .syntax import show_term
    return show_term(t)


class OpTable(Mapping):
    """Read-only op-id -> Sequent map, hashed by identity so it can key caches."""

    def __init__(self, data=()):
        self._d = dict(data)

    def __getitem__(self, k):
        return self._d[k]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    __hash__ = object.__hash__

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return f"OpTable({self._d!r})"


def ops_of(sig) -> Mapping:
    if sig is None:
        return OpTable()
    if isinstance(sig, Mapping):
        return sig
    return sig.ops


# ---------------------------------------------------------------- typing

def typecheck_term(ctx, m, sig) -> Type:
    types = ctx.types if isinstance(ctx, Context) else tuple(ctx)
    return infer_type(types, m, ops_of(sig))


def infer_type(types: tuple, m, ops) -> Type:
    """Type of ``m`` where ``types[-1]`` is the type of ``Var(0)``."""
    if isinstance(m, Var):
        if not 0 <= m.index < len(types):
            raise UnboundVariable(f"index {m.index}")
        return types[len(types) - 1 - m.index]
    if isinstance(m, UnitIntro):
        return UNIT
    if isinstance(m, ConstApp):
        if m.op not in ops:
            raise UnknownConstant(str(m.op))
        seq = ops[m.op]
        if len(seq.premises) != len(m.args):
            raise ArityMismatch(f"{m.op} expects {len(seq.premises)} arguments, got {len(m.args)}")
        for p, a in zip(seq.premises, m.args):
            found = infer_type(types, a, ops)
            if found != p:
                raise TypeMismatch(p, found, f"argument of {m.op}")
        return seq.conclusion
    if isinstance(m, Lambda):
        return Exponential(m.ty, infer_type(types + (m.ty,), m.body, ops))
    if isinstance(m, App):
        f = infer_type(types, m.fun, ops)
        if not isinstance(f, Exponential):
            raise TypeMismatch("an exponential type", f, "function position")
        a = infer_type(types, m.arg, ops)
        if a != f.domain:
            raise TypeMismatch(f.domain, a, "application argument")
        return f.codomain
    if isinstance(m, Pair):
        return Product(infer_type(types, m.fst, ops), infer_type(types, m.snd, ops))
    if isinstance(m, (Proj1, Proj2)):
        a = infer_type(types, m.arg, ops)
        if not isinstance(a, Product):
            raise TypeMismatch("a product type", a, "projection")
        return a.left if isinstance(m, Proj1) else a.right
    if isinstance(m, Hole):
        raise IllTyped("hole")
    raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------- normalization
# Normalization by evaluation: evaluate into a semantic domain of closures,
# pairs and neutral values, then read back at the expected type.  Read-back
# is type directed, so the result is eta-long (including unit and products).

class _VLam:
    __slots__ = ("fn", "hint")

    def __init__(self, fn, hint="x"):
        self.fn, self.hint = fn, hint


class _VPair:
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b


class _VUnit:
    __slots__ = ()


class _VNeu:
    __slots__ = ("n",)

    def __init__(self, n):
        self.n = n


class _NVar:
    __slots__ = ("level",)

    def __init__(self, level):
        self.level = level


class _NConst:
    __slots__ = ("op", "args")

    def __init__(self, op, args):
        self.op, self.args = op, args


class _NApp:
    __slots__ = ("head", "arg")

    def __init__(self, head, arg):
        self.head, self.arg = head, arg


class _NProj:
    __slots__ = ("head", "which")

    def __init__(self, head, which):
        self.head, self.which = head, which


_VUNIT = _VUnit()


def _apply(f, a):
    if isinstance(f, _VLam):
        return f.fn(a)
    if isinstance(f, _VNeu):
        return _VNeu(_NApp(f.n, a))
    raise IllTyped("application of a non-function")


def _proj(v, which):
    if isinstance(v, _VPair):
        return v.a if which == 1 else v.b
    if isinstance(v, _VNeu):
        return _VNeu(_NProj(v.n, which))
    raise IllTyped("projection of a non-pair")


def _eval(t, env):
    if isinstance(t, Var):
        return env[len(env) - 1 - t.index]
    if isinstance(t, App):
        return _apply(_eval(t.fun, env), _eval(t.arg, env))
    if isinstance(t, Lambda):
        body = t.body
        return _VLam(lambda v: _eval(body, env + (v,)), t.hint)
    if isinstance(t, ConstApp):
        return _VNeu(_NConst(t.op, tuple(_eval(a, env) for a in t.args)))
    if isinstance(t, Pair):
        return _VPair(_eval(t.fst, env), _eval(t.snd, env))
    if isinstance(t, Proj1):
        return _proj(_eval(t.arg, env), 1)
    if isinstance(t, Proj2):
        return _proj(_eval(t.arg, env), 2)
    if isinstance(t, UnitIntro):
        return _VUNIT
    raise IllTyped(f"cannot evaluate {t!r}")


def _reify(ty, v, levels, ops):
    if isinstance(ty, Exponential):
        lvl = len(levels)
        body = _reify(ty.codomain, _apply(v, _VNeu(_NVar(lvl))), levels + (ty.domain,), ops)
        return Lambda(ty.domain, body, v.hint if isinstance(v, _VLam) else "x")
    if isinstance(ty, Product):
        return Pair(_reify(ty.left, _proj(v, 1), levels, ops), _reify(ty.right, _proj(v, 2), levels, ops))
    if isinstance(ty, Unit):
        return UNIT_TERM
    if not isinstance(v, _VNeu):
        raise IllTyped("value of base type is not neutral")
    return _reify_neutral(v.n, levels, ops)[0]


def _reify_neutral(n, levels, ops):
    if isinstance(n, _NVar):
        return Var(len(levels) - 1 - n.level), levels[n.level]
    if isinstance(n, _NConst):
        seq = ops[n.op]
        args = tuple(_reify(p, a, levels, ops) for p, a in zip(seq.premises, n.args))
        return ConstApp(n.op, args), seq.conclusion
    if isinstance(n, _NApp):
        f, fty = _reify_neutral(n.head, levels, ops)
        return App(f, _reify(fty.domain, n.arg, levels, ops)), fty.codomain
    if isinstance(n, _NProj):
        h, hty = _reify_neutral(n.head, levels, ops)
        if n.which == 1:
            return Proj1(h), hty.left
        return Proj2(h), hty.right
    raise IllTyped("bad neutral")


def _nbe(types: tuple, m, a, ops):
    env = tuple(_VNeu(_NVar(i)) for i in range(len(types)))
    return _reify(a, _eval(m, env), types, ops)


@lru_cache(maxsize=1 << 18)
def _nbe_cached(types, m, a, ops, hints):
    # ``hints`` only splits the cache: terms equal up to binder names must
    # still read back with their own names
    return _nbe(types, m, a, ops)


def _hints(t) -> tuple:
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Lambda):
            out.append(u.hint)
        stack.extend(children(u))
    return tuple(out)


def normalize_in(types: tuple, m, a, ops, check: bool = False):
    """Eta-long beta-normal form of ``m : a`` over the context types ``types``."""
    if check:
        found = infer_type(types, m, ops)
        if found != a:
            raise IllTyped(f"term has type {found}, expected {a}")
    try:
        hash(ops)
    except TypeError:
        return _nbe(types, m, a, ops)
    return _nbe_cached(tuple(types), m, a, ops, _hints(m))


def beta_eta_normalize(ctx, m, a, sig=None):
    types = ctx.types if isinstance(ctx, Context) else tuple(ctx)
    ops = ops_of(sig)
    try:
        found = infer_type(types, m, ops)
    except (TypeMismatch, UnboundVariable, ArityMismatch, UnknownConstant) as e:
        raise IllTyped(str(e)) from e
    if found != a:
        raise IllTyped(f"term has type {found}, expected {a}")
    return normalize_in(types, m, a, ops)


def normalize(ctx, m, sig=None):
    """Normalize at the inferred type."""
    types = ctx.types if isinstance(ctx, Context) else tuple(ctx)
    ops = ops_of(sig)
    return normalize_in(types, m, infer_type(types, m, ops), ops)


def term_equal(ctx, m, n, a, sig=None) -> bool:
    return beta_eta_normalize(ctx, m, a, sig) == beta_eta_normalize(ctx, n, a, sig)


# ---------------------------------------------------------------- substitution

def shift(t, d: int, cutoff: int = 0):
    """Add ``d`` to every free index at or above ``cutoff``.

    A negative ``d`` raises ValueError if it would capture or underflow.
    """
    if d == 0:
        return t
    if isinstance(t, Var):
        if t.index < cutoff:
            return t
        if t.index + d < cutoff:
            raise ValueError("shift would capture a variable")
        return Var(t.index + d)
    if isinstance(t, (UnitIntro, Hole)):
        return t
    if isinstance(t, ConstApp):
        return ConstApp(t.op, tuple(shift(a, d, cutoff) for a in t.args))
    if isinstance(t, Lambda):
        return Lambda(t.ty, shift(t.body, d, cutoff + 1), t.hint)
    if isinstance(t, App):
        return App(shift(t.fun, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Pair):
        return Pair(shift(t.fst, d, cutoff), shift(t.snd, d, cutoff))
    if isinstance(t, Proj1):
        return Proj1(shift(t.arg, d, cutoff))
    if isinstance(t, Proj2):
        return Proj2(shift(t.arg, d, cutoff))
    raise TypeError(f"not a term: {t!r}")


def subst_term(m, subs: Sequence):
    """Simultaneous substitution: the context variable ``x_i`` becomes ``subs[i]``.

    ``subs`` is listed in context order, so ``Var(0)`` picks the last entry.
    """
    subs = tuple(subs)
    n = len(subs)
    cache: dict = {}

    def image(j, depth):
        key = (j, depth)
        if key not in cache:
            cache[key] = shift(subs[n - 1 - j], depth)
        return cache[key]

    def go(t, depth):
        if isinstance(t, Var):
            if t.index < depth:
                return t
            j = t.index - depth
            if j >= n:
                raise ArityMismatch(f"substitution of length {n} does not cover index {j}")
            return image(j, depth)
        if isinstance(t, (UnitIntro, Hole)):
            return t
        if isinstance(t, ConstApp):
            return ConstApp(t.op, tuple(go(a, depth) for a in t.args))
        if isinstance(t, Lambda):
            return Lambda(t.ty, go(t.body, depth + 1), t.hint)
        if isinstance(t, App):
            return App(go(t.fun, depth), go(t.arg, depth))
        if isinstance(t, Pair):
            return Pair(go(t.fst, depth), go(t.snd, depth))
        if isinstance(t, Proj1):
            return Proj1(go(t.arg, depth))
        if isinstance(t, Proj2):
            return Proj2(go(t.arg, depth))
        raise TypeError(f"not a term: {t!r}")

    return go(m, 0)


def free_vars(t, depth: int = 0) -> set:
    """Free indices of ``t`` relative to the outside of ``depth`` binders."""
    if isinstance(t, Var):
        return {t.index - depth} if t.index >= depth else set()
    if isinstance(t, Lambda):
        return free_vars(t.body, depth + 1)
    out = set()
    for c in children(t):
        out |= free_vars(c, depth)
    return out


def eta_contract(t):
    """Contract eta-redexes bottom-up (used to recognise bound variables)."""
    if isinstance(t, Lambda):
        body = eta_contract(t.body)
        if isinstance(body, App) and body.arg == Var(0) and 0 not in free_vars(body.fun):
            return shift(body.fun, -1)
        return Lambda(t.ty, body, t.hint)
    if isinstance(t, Pair):
        a, b = eta_contract(t.fst), eta_contract(t.snd)
        if isinstance(a, Proj1) and isinstance(b, Proj2) and a.arg == b.arg:
            return a.arg
        return Pair(a, b)
    if isinstance(t, (Var, UnitIntro, Hole)):
        return t
    return rebuild(t, tuple(eta_contract(c) for c in children(t)))


# ---------------------------------------------------------------- positions

def children(t) -> tuple:
    if isinstance(t, ConstApp):
        return t.args
    if isinstance(t, Lambda):
        return (t.body,)
    if isinstance(t, (App,)):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.fst, t.snd)
    if isinstance(t, (Proj1, Proj2)):
        return (t.arg,)
    return ()


def rebuild(t, kids: tuple):
    if isinstance(t, ConstApp):
        return ConstApp(t.op, kids)
    if isinstance(t, Lambda):
        return Lambda(t.ty, kids[0], t.hint)
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Pair):
        return Pair(kids[0], kids[1])
    if isinstance(t, Proj1):
        return Proj1(kids[0])
    if isinstance(t, Proj2):
        return Proj2(kids[0])
    return t


def subterm_at(t, path):
    for i in path:
        kids = children(t)
        if not 0 <= i < len(kids):
            raise IndexError(f"no child {i} at {t!r}")
        t = kids[i]
    return t


def replace_at(t, path, new):
    if not path:
        return new
    kids = list(children(t))
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"no child {i}")
    kids[i] = replace_at(kids[i], path[1:], new)
    return rebuild(t, tuple(kids))


def binders_along(t, path) -> tuple:
    """Types bound by the lambdas crossed when walking ``path`` (outermost first)."""
    out = []
    for i in path:
        if isinstance(t, Lambda):
            out.append(t.ty)
        t = children(t)[i]
    return tuple(out)


def subterms(t, path=()) -> Iterator:
    """Yield ``(path, subterm)`` in pre-order (leftmost-outermost)."""
    yield path, t
    for i, c in enumerate(children(t)):
        yield from subterms(c, path + (i,))


def term_size(t) -> int:
    return 1 + sum(term_size(c) for c in children(t))
