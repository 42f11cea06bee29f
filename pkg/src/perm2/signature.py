"""1- and 2-signatures, validation, the HRS conditions and morphisms."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import Perm2Error, UnknownRule
from .kernel import (
    ConstApp,
    Context,
    Lambda,
    OpTable,
    Sequent,
    Sort,
    Var,
    children,
    free_vars,
    infer_type,
    normalize_in,
    rebuild,
    subst_type,
    type_sorts,
)


@dataclass(frozen=True)
class RuleRef:
    """Op-id of a rule when a reduction is read as a term over the doubled signature."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class RewriteRule:
    name: str
    context: Context
    lhs: object
    rhs: object
    type: object

    @property
    def sequent(self) -> Sequent:
        return Sequent(self.context.types, self.type)


@dataclass(frozen=True, eq=False)
class Signature1:
    sorts: tuple
    ops: OpTable


@dataclass(frozen=True, eq=False)
class Signature2:
    base: Signature1
    rules: dict = field(default_factory=dict)

    @property
    def sorts(self) -> tuple:
        return self.base.sorts

    @property
    def ops(self) -> OpTable:
        return self.base.ops

    def rule(self, name) -> RewriteRule:
        try:
            return self.rules[name]
        except KeyError:
            raise UnknownRule(str(name)) from None

    @cached_property
    def doubled_ops(self) -> OpTable:
        d = dict(self.base.ops)
        for name, r in self.rules.items():
            d[RuleRef(name)] = r.sequent
        return OpTable(d)


def build_signature(sorts, ops, rules=()) -> Signature2:
    """Assemble a signature, storing rule sides in normal form where they typecheck."""
    base = Signature1(tuple(dict.fromkeys(sorts)), OpTable((k, v) for k, v in dict(ops).items()))
    stored = {}
    for r in rules:
        stored[r.name] = _normalized_rule(r, base.ops)
    return Signature2(base, stored)


def _normalized_rule(r: RewriteRule, ops) -> RewriteRule:
    types = r.context.types
    try:
        if infer_type(types, r.lhs, ops) != r.type or infer_type(types, r.rhs, ops) != r.type:
            return r
    except Perm2Error:
        return r
    return RewriteRule(r.name, r.context,
                       normalize_in(types, r.lhs, r.type, ops),
                       normalize_in(types, r.rhs, r.type, ops), r.type)


def with_rules(sig: Signature2, extra) -> Signature2:
    """A copy of ``sig`` with further (already normalized) rules."""
    rules = dict(sig.rules)
    for r in extra:
        rules[r.name] = r
    return Signature2(sig.base, rules)


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class Issue:
    kind: str
    item: str
    message: str = ""

    def __str__(self):
        return f"{self.kind}: {self.item}" + (f" ({self.message})" if self.message else "")


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind, item, message=""):
        self.issues.append(Issue(kind, str(item), message))

    def kinds(self) -> set:
        return {i.kind for i in self.issues}

    def __str__(self):
        return "valid" if self.ok else "\n".join(str(i) for i in self.issues)


def validate_signature(s: Signature2) -> ValidationReport:
    rep = ValidationReport()
    known = set(s.sorts)
    for name, seq in s.ops.items():
        for a in list(seq.premises) + [seq.conclusion]:
            for so in sorted(type_sorts(a) - known):
                rep.add("UnknownSort", name, f"sort {so}")
    for name, r in s.rules.items():
        bad = False
        for a in list(r.context.types) + [r.type]:
            for so in sorted(type_sorts(a) - known):
                rep.add("UnknownSort", name, f"sort {so}")
                bad = True
        if bad:
            continue
        types = r.context.types
        sides = []
        for label, t in (("lhs", r.lhs), ("rhs", r.rhs)):
            try:
                sides.append(infer_type(types, t, s.ops))
            except Perm2Error as e:
                rep.add("IllTyped", name, f"{label}: {e}")
                sides.append(None)
        if None in sides:
            continue
        if sides[0] != sides[1]:
            rep.add("ParallelismViolation", name, f"lhs : {sides[0]}, rhs : {sides[1]}")
        elif sides[0] != r.type:
            rep.add("TypeMismatch", name, f"declared {r.type}, sides have {sides[0]}")
        elif (normalize_in(types, r.lhs, r.type, s.ops) != r.lhs
              or normalize_in(types, r.rhs, r.type, s.ops) != r.rhs):
            rep.add("NotNormalized", name)
    return rep


def is_hrs(s: Signature2):
    """Check the three conditions of a higher-order rewrite system on every rule."""
    issues = []
    for name, r in s.rules.items():
        if isinstance(r.lhs, Var):
            issues.append(Issue("LhsIsVariable", name))
        if not isinstance(r.type, Sort):
            issues.append(Issue("ResultNotASort", name, str(r.type)))
        fv = free_vars(r.lhs)
        n = len(r.context)
        for i, (x, _) in enumerate(r.context.entries):
            if (n - 1 - i) not in fv:
                issues.append(Issue("VariableNotInLhs", name, x))
    return not issues, issues


# ---------------------------------------------------------------- morphisms

def _as_fn(f):
    if f is None:
        return lambda k: k
    if callable(f):
        return f
    return lambda k: f[k]


def rename_term(t, f0, f1):
    """Transport a term along sort and op maps."""
    f0, f1 = _as_fn(f0), _as_fn(f1)
    sm = lambda n: Sort(f0(n))

    def go(u):
        if isinstance(u, ConstApp):
            return ConstApp(f1(u.op), tuple(go(a) for a in u.args))
        if isinstance(u, Lambda):
            return Lambda(subst_type(u.ty, sm), go(u.body), u.hint)
        kids = children(u)
        return rebuild(u, tuple(go(c) for c in kids)) if kids else u

    return go(t)


def apply_morphism(f0, f1, f2, x: Signature2, y: Signature2) -> ValidationReport:
    rep = ValidationReport()
    g0, g1, g2 = _as_fn(f0), _as_fn(f1), _as_fn(f2)
    sm = lambda n: Sort(g0(n))
    for so in x.sorts:
        try:
            if g0(so) not in y.sorts:
                rep.add("MissingSort", so, f"image {g0(so)} not in target")
        except KeyError:
            rep.add("UnmappedSort", so)
    for c, seq in x.ops.items():
        try:
            d = g1(c)
        except KeyError:
            rep.add("UnmappedOp", c)
            continue
        if d not in y.ops:
            rep.add("MissingOp", c, f"image {d} not in target")
            continue
        try:
            moved = Sequent(tuple(subst_type(p, sm) for p in seq.premises), subst_type(seq.conclusion, sm))
        except Perm2Error:
            rep.add("UnmappedSort", c)
            continue
        if moved != y.ops[d]:
            rep.add("SequentSquare", c, f"{moved} vs {y.ops[d]}")
    if not rep.ok:
        return rep
    for name, r in x.rules.items():
        try:
            target = g2(name)
        except KeyError:
            rep.add("UnmappedRule", name)
            continue
        if target not in y.rules:
            rep.add("MissingRule", name, f"image {target} not in target")
            continue
        r2 = y.rules[target]
        types = tuple(subst_type(a, sm) for a in r.context.types)
        ty = subst_type(r.type, sm)
        if types != r2.context.types or ty != r2.type:
            rep.add("RuleSquare", name, "rule sequent does not commute")
            continue
        try:
            lhs = normalize_in(types, rename_term(r.lhs, g0, g1), ty, y.ops, check=True)
            rhs = normalize_in(types, rename_term(r.rhs, g0, g1), ty, y.ops, check=True)
        except Perm2Error as e:
            rep.add("RuleSquare", name, str(e))
            continue
        y_l = normalize_in(types, r2.lhs, ty, y.ops)
        y_r = normalize_in(types, r2.rhs, ty, y.ops)
        if (lhs, rhs) != (y_l, y_r):
            rep.add("RuleSquare", name, "transported sides differ")
    return rep
