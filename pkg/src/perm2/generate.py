"""Exhaustive and random generators of types, terms, reductions and signatures.

Random generators take a ``random.Random`` instance so runs are reproducible.
"""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import product as cartesian

from .errors import Perm2Error
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
    Sequent,
    Sort,
    UNIT,
    UNIT_TERM,
    Unit,
    Var,
    normalize_in,
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
    RuleApp,
    VarRefl,
    VComp,
    identity_reduction,
    typecheck_reduction,
)
from .signature import RewriteRule, build_signature


def subtypes(a) -> set:
    out = {a}
    if isinstance(a, Product):
        out |= subtypes(a.left) | subtypes(a.right)
    elif isinstance(a, Exponential):
        out |= subtypes(a.domain) | subtypes(a.codomain)
    return out


def type_universe(sig, types=(), extra=()) -> frozenset:
    """Types relevant to a signature and context: closed under components."""
    out = set()
    for seq in sig.ops.values():
        for a in list(seq.premises) + [seq.conclusion]:
            out |= subtypes(a)
    for r in sig.rules.values():
        for a in list(r.context.types) + [r.type]:
            out |= subtypes(a)
    for a in list(types) + list(extra):
        out |= subtypes(a)
    return frozenset(out)


def _sorted_types(ts):
    from .kernel import show_type
    return sorted(ts, key=show_type)


# ---------------------------------------------------------------- normal terms

def normal_terms(sig, types, ty, max_size: int) -> list:
    """Every eta-long beta-normal term of type ``ty`` with at most ``max_size`` nodes."""
    gen = _NormalEnum(sig)
    out = []
    for s in range(1, max_size + 1):
        out.extend(gen.nf(tuple(types), ty, s))
    return out


class _NormalEnum:
    def __init__(self, sig):
        self.sig = sig
        self.ops = sorted((k, v) for k, v in sig.ops.items() if isinstance(k, str))
        self.memo = {}

    def nf(self, types, ty, s):
        key = ("nf", types, ty, s)
        if key in self.memo:
            return self.memo[key]
        out = []
        if s >= 1:
            if isinstance(ty, Exponential):
                out = [Lambda(ty.domain, b) for b in self.nf(types + (ty.domain,), ty.codomain, s - 1)]
            elif isinstance(ty, Product):
                for i in range(1, s - 1):
                    for a in self.nf(types, ty.left, i):
                        for b in self.nf(types, ty.right, s - 1 - i):
                            out.append(Pair(a, b))
            elif isinstance(ty, Unit):
                out = [UNIT_TERM] if s == 1 else []
            else:
                out = self.neutral(types, ty, s)
        self.memo[key] = out
        return out

    def neutral(self, types, ty, s):
        out = []
        n = len(types)
        for i in range(n):
            h = types[n - 1 - i]
            out.extend(self.spine(types, Var(i), h, ty, s - 1))
        for name, seq in self.ops:
            k = len(seq.premises)
            budget = s - 1
            for args in self.arg_lists(types, seq.premises, budget):
                used = sum(_size(a) for a in args)
                head = ConstApp(name, args)
                out.extend(self.spine(types, head, seq.conclusion, ty, s - 1 - used))
        return out

    def arg_lists(self, types, prem, budget):
        """Argument tuples whose total size is at most ``budget``."""
        if not prem:
            yield ()
            return
        first, rest = prem[0], prem[1:]
        for k in range(1, budget - len(rest) + 1):
            for a in self.nf(types, first, k):
                for more in self.arg_lists(types, rest, budget - k):
                    yield (a,) + more

    def spine(self, types, head, hty, ty, budget):
        """Elimination spines taking ``head : hty`` to ``ty`` using exactly ``budget`` nodes."""
        if budget == 0:
            return [head] if hty == ty else []
        out = []
        if isinstance(hty, Exponential):
            for k in range(1, budget):
                for a in self.nf(types, hty.domain, k):
                    out.extend(self.spine(types, App(head, a), hty.codomain, ty, budget - 1 - k))
        elif isinstance(hty, Product):
            out.extend(self.spine(types, Proj1(head), hty.left, ty, budget - 1))
            out.extend(self.spine(types, Proj2(head), hty.right, ty, budget - 1))
        return out


def _reaches(h, ty) -> bool:
    if h == ty:
        return True
    if isinstance(h, Product):
        return _reaches(h.left, ty) or _reaches(h.right, ty)
    if isinstance(h, Exponential):
        return _reaches(h.codomain, ty)
    return False


def _size(t):
    from .kernel import term_size
    return term_size(t)


# ---------------------------------------------------------------- exhaustive reductions

class ReductionEnum:
    """All reductions up to a size bound, built bottom-up, with their triples."""

    def __init__(self, sig, universe, allow_vcomp: bool = True):
        self.sig = sig
        self.universe = _sorted_types(universe)
        self.allow_vcomp = allow_vcomp
        self.memo = {}

    def of_size(self, types, ty, s):
        key = (types, ty, s)
        if key in self.memo:
            return self.memo[key]
        out = []
        sig = self.sig
        if s == 1:
            n = len(types)
            for i in range(n):
                if types[n - 1 - i] == ty:
                    out.append(VarRefl(i))
            if isinstance(ty, Unit):
                out.append(UNIT_REFL)
            for name in sorted(k for k in sig.ops if isinstance(k, str)):
                seq = sig.ops[name]
                if not seq.premises and seq.conclusion == ty:
                    out.append(ConstCong(name, ()))
            for name in sorted(sig.rules):
                r = sig.rules[name]
                if not len(r.context) and r.type == ty:
                    out.append(RuleApp(name, ()))
        else:
            for name in sorted(k for k in sig.ops if isinstance(k, str)):
                seq = sig.ops[name]
                if seq.premises and seq.conclusion == ty:
                    for args in self.tuples(types, seq.premises, s - 1):
                        out.append(ConstCong(name, args))
            for name in sorted(sig.rules):
                r = sig.rules[name]
                if len(r.context) and r.type == ty:
                    for args in self.tuples(types, r.context.types, s - 1):
                        out.append(RuleApp(name, args))
            if isinstance(ty, Exponential):
                for b in self.of_size(types + (ty.domain,), ty.codomain, s - 1):
                    out.append(LambdaCong(ty.domain, b))
            if isinstance(ty, Product):
                for i in range(1, s - 1):
                    for a in self.of_size(types, ty.left, i):
                        for b in self.of_size(types, ty.right, s - 1 - i):
                            out.append(PairCong(a, b))
            for f in self.universe:
                if isinstance(f, Exponential) and f.codomain == ty:
                    for i in range(1, s - 1):
                        for a in self.of_size(types, f, i):
                            for b in self.of_size(types, f.domain, s - 1 - i):
                                out.append(AppCong(a, b))
                if isinstance(f, Product) and f.left == ty:
                    out.extend(Proj1Cong(a) for a in self.of_size(types, f, s - 1))
                if isinstance(f, Product) and f.right == ty:
                    out.extend(Proj2Cong(a) for a in self.of_size(types, f, s - 1))
            if self.allow_vcomp:
                for i in range(1, s - 1):
                    rights = {}
                    for b in self.of_size(types, ty, s - 1 - i):
                        rights.setdefault(self.triple(types, b)[0], []).append(b)
                    for a in self.of_size(types, ty, i):
                        mid = self.triple(types, a)[1]
                        for b in rights.get(mid, []):
                            out.append(VComp(a, mid, b))
        self.memo[key] = out
        return out

    def tuples(self, types, prem, total):
        if len(prem) == 1:
            return [(a,) for a in self.of_size(types, prem[0], total)]
        out = []
        for k in range(1, total - len(prem) + 2):
            for a in self.of_size(types, prem[0], k):
                for rest in self.tuples(types, prem[1:], total - k):
                    out.append((a,) + rest)
        return out

    def triple(self, types, p):
        key = ("t", types, p)
        if key not in self.memo:
            self.memo[key] = typecheck_reduction(types, p, self.sig)
        return self.memo[key]

    def up_to(self, types, ty, max_size):
        out = []
        for s in range(1, max_size + 1):
            out.extend(self.of_size(tuple(types), ty, s))
        return out


# ---------------------------------------------------------------- random terms

class RandomGen:
    """Random well-typed terms and reductions over a signature."""

    def __init__(self, sig, rng: random.Random, universe=None):
        self.sig = sig
        self.rng = rng
        self.universe = _sorted_types(universe or type_universe(sig))
        self.ops = sorted((k, v) for k, v in sig.ops.items() if isinstance(k, str))
        self.rules = sorted(sig.rules.items())

    def _vars(self, types, ty):
        n = len(types)
        return [i for i in range(n) if types[n - 1 - i] == ty]

    def _elims(self, types, ty):
        """Context variables from which ``ty`` is reachable by projections and applications."""
        n = len(types)
        return [i for i in range(n) if _reaches(types[n - 1 - i], ty)]

    def _eliminate(self, types, i, ty, depth):
        n = len(types)
        t, h = Var(i), types[n - 1 - i]
        while h != ty:
            if isinstance(h, Product):
                if _reaches(h.left, ty):
                    t, h = Proj1(t), h.left
                else:
                    t, h = Proj2(t), h.right
            else:
                t, h = App(t, self.term(types, h.domain, 1, depth + 1)), h.codomain
        return t

    def term(self, types, ty, size: int, depth: int = 0):
        """A random (usually non-normal) term of type ``ty``; ``size`` bounds its depth-ish budget."""
        if depth > 24:
            raise Perm2Error(f"no small term of type {ty}")
        rng = self.rng
        options = []
        vs = self._vars(types, ty)
        if vs:
            options.append("var")
        elims = [i for i in self._elims(types, ty) if i not in vs]
        if elims:
            options.append("elim")
        if isinstance(ty, Unit):
            options.append("unit")
        if size > 1 or not vs:
            if any(seq.conclusion == ty for _, seq in self.ops):
                options += ["const", "const"]
            if isinstance(ty, Exponential):
                options += ["lam", "lam"]
            if isinstance(ty, Product):
                options += ["pair", "pair"]
        if size > 1:
            if any(isinstance(f, Exponential) and f.codomain == ty for f in self.universe):
                options.append("app")
            options.append("beta")
            if any(isinstance(f, Product) and ty in (f.left, f.right) for f in self.universe):
                options.append("proj")
        if not options:
            options = [o for o in ("lam", "pair", "unit", "const") if self._can(types, ty, o)][:1]
            if not options:
                raise Perm2Error(f"no term of type {ty}")
        kind = rng.choice(options)
        sz = size - 1
        if kind == "var":
            return Var(rng.choice(vs))
        if kind == "elim":
            return self._eliminate(types, rng.choice(elims), ty, depth)
        if kind == "unit":
            return UNIT_TERM
        if kind == "const":
            cands = [(n, s) for n, s in self.ops if s.conclusion == ty]
            name, seq = rng.choice(cands)
            k = max(len(seq.premises), 1)
            return ConstApp(name, tuple(self.term(types, a, max(sz // k, 1), depth + 1) for a in seq.premises))
        if kind == "lam":
            return Lambda(ty.domain, self.term(types + (ty.domain,), ty.codomain, sz, depth + 1))
        if kind == "pair":
            return Pair(self.term(types, ty.left, max(sz // 2, 1), depth + 1), self.term(types, ty.right, max(sz // 2, 1), depth + 1))
        if kind == "app":
            f = rng.choice([f for f in self.universe if isinstance(f, Exponential) and f.codomain == ty])
            return App(self.term(types, f, max(sz // 2, 1), depth + 1), self.term(types, f.domain, max(sz // 2, 1), depth + 1))
        if kind == "beta":
            a = rng.choice(self.universe)
            body = self.term(types + (a,), ty, max(sz // 2, 1), depth + 1)
            return App(Lambda(a, body), self.term(types, a, max(sz // 2, 1), depth + 1))
        f = rng.choice([f for f in self.universe if isinstance(f, Product) and ty in (f.left, f.right)])
        if f.left == ty and (f.right != ty or rng.random() < 0.5):
            return Proj1(self.term(types, f, sz, depth + 1))
        return Proj2(self.term(types, f, sz, depth + 1))

    def _can(self, types, ty, kind):
        if kind == "const":
            return any(seq.conclusion == ty for _, seq in self.ops)
        if kind == "lam":
            return isinstance(ty, Exponential)
        if kind == "pair":
            return isinstance(ty, Product)
        if kind == "unit":
            return isinstance(ty, Unit)
        return False

    def normal_term(self, types, ty, size):
        return normalize_in(tuple(types), self.term(types, ty, size), ty, self.sig.ops)

    # ------------------------------------------------------------ reductions

    def reduction(self, types, ty, size: int, vcomp: bool = True):
        """A random reduction with roughly ``size`` nodes."""
        rng = self.rng
        options = []
        if self._vars(types, ty):
            options.append("var")
        elims = [i for i in self._elims(types, ty) if i not in self._vars(types, ty)]
        if elims:
            options.append("elim")
        if isinstance(ty, Unit):
            options.append("unit")
        if size > 1:
            if any(r.type == ty for _, r in self.rules):
                options += ["rule"] * 3
            if any(seq.conclusion == ty for _, seq in self.ops):
                options += ["const"] * 2
            if isinstance(ty, Exponential):
                options += ["lam"] * 2
            if isinstance(ty, Product):
                options += ["pair"] * 2
            if any(isinstance(f, Exponential) and f.codomain == ty for f in self.universe):
                options.append("app")
            if any(isinstance(f, Product) and ty in (f.left, f.right) for f in self.universe):
                options.append("proj")
            if vcomp and size > 2:
                options += ["vcomp"] * 2
        if not options:
            return identity_reduction(self.normal_term(types, ty, 3))
        kind = rng.choice(options)
        sz = size - 1
        if kind == "var":
            return VarRefl(rng.choice(self._vars(types, ty)))
        if kind == "elim":
            return identity_reduction(self._eliminate(types, rng.choice(elims), ty, 0))
        if kind == "unit":
            return UNIT_REFL
        if kind == "rule":
            name, r = rng.choice([(n, r) for n, r in self.rules if r.type == ty])
            k = max(len(r.context), 1)
            return RuleApp(name, tuple(self.reduction(types, a, max(sz // k, 1), vcomp) for a in r.context.types))
        if kind == "const":
            name, seq = rng.choice([(n, s) for n, s in self.ops if s.conclusion == ty])
            k = max(len(seq.premises), 1)
            return ConstCong(name, tuple(self.reduction(types, a, max(sz // k, 1), vcomp) for a in seq.premises))
        if kind == "lam":
            return LambdaCong(ty.domain, self.reduction(types + (ty.domain,), ty.codomain, sz, vcomp))
        if kind == "pair":
            return PairCong(self.reduction(types, ty.left, max(sz // 2, 1), vcomp),
                            self.reduction(types, ty.right, max(sz // 2, 1), vcomp))
        if kind == "app":
            f = rng.choice([f for f in self.universe if isinstance(f, Exponential) and f.codomain == ty])
            return AppCong(self.reduction(types, f, max(sz // 2, 1), vcomp),
                           self.reduction(types, f.domain, max(sz // 2, 1), vcomp))
        if kind == "proj":
            f = rng.choice([f for f in self.universe if isinstance(f, Product) and ty in (f.left, f.right)])
            inner = self.reduction(types, f, sz, vcomp)
            if f.left == ty and (f.right != ty or rng.random() < 0.5):
                return Proj1Cong(inner)
            return Proj2Cong(inner)
        first = self.reduction(types, ty, max(sz // 2, 1), vcomp)
        _, mid, _ = typecheck_reduction(types, first, self.sig)
        second = self.reduction_from(types, mid, ty, max(sz // 2, 1))
        return VComp(first, mid, second)

    def reduction_from(self, types, m, ty, size: int):
        """A random reduction whose source is the normal term ``m``."""
        from .rewrite import embed_step, rewrite_once
        rng = self.rng
        chain, mids, cur = [], [], m
        for _ in range(max(1, size // 3)):
            try:
                steps = rewrite_once(self.sig, types, cur)
            except Perm2Error:
                steps = []
            if not steps or rng.random() < 0.25:
                break
            s = rng.choice(steps)
            if chain:
                mids.append(cur)
            chain.append(embed_step(s, self.sig, types))
            cur = s.after
        if not chain:
            return identity_reduction(m)
        acc = chain[0]
        for mid, nxt in zip(mids, chain[1:]):
            acc = VComp(acc, mid, nxt)
        return acc


# ---------------------------------------------------------------- derivations with expected triples

def derivation(gen: RandomGen, types, ty, size: int):
    """A random reduction together with the triple computed by the typing rules.

    The expected triple is assembled here rule by rule (sources and targets
    built separately, substitution for rule applications) and only
    normalized at the end, independently of the checker.
    """
    sig = gen.sig
    p = gen.reduction(types, ty, size)
    s, t = _endpoints(sig, types, p)
    ops = sig.ops
    return p, (normalize_in(tuple(types), s, ty, ops), normalize_in(tuple(types), t, ty, ops), ty)


def _endpoints(sig, types, p):
    if isinstance(p, VarRefl):
        return Var(p.index), Var(p.index)
    if p == UNIT_REFL:
        return UNIT_TERM, UNIT_TERM
    if isinstance(p, RuleApp):
        r = sig.rule(p.rule)
        ends = [_endpoints(sig, types, a) for a in p.args]
        return subst_term(r.lhs, [e[0] for e in ends]), subst_term(r.rhs, [e[1] for e in ends])
    if isinstance(p, VComp):
        return _endpoints(sig, types, p.left)[0], _endpoints(sig, types, p.right)[1]
    if isinstance(p, ConstCong):
        ends = [_endpoints(sig, types, a) for a in p.args]
        return ConstApp(p.op, [e[0] for e in ends]), ConstApp(p.op, [e[1] for e in ends])
    if isinstance(p, LambdaCong):
        s, t = _endpoints(sig, types + (p.ty,), p.body)
        return Lambda(p.ty, s), Lambda(p.ty, t)
    if isinstance(p, AppCong):
        (a, b), (c, d) = _endpoints(sig, types, p.fun), _endpoints(sig, types, p.arg)
        return App(a, c), App(b, d)
    if isinstance(p, PairCong):
        (a, b), (c, d) = _endpoints(sig, types, p.fst), _endpoints(sig, types, p.snd)
        return Pair(a, c), Pair(b, d)
    if isinstance(p, Proj1Cong):
        a, b = _endpoints(sig, types, p.arg)
        return Proj1(a), Proj1(b)
    if isinstance(p, Proj2Cong):
        a, b = _endpoints(sig, types, p.arg)
        return Proj2(a), Proj2(b)
    raise TypeError(p)


def _vcomp_paths(p, path=()):
    from .proofterm import r_children
    if isinstance(p, VComp):
        yield path
    for i, c in enumerate(r_children(p)):
        yield from _vcomp_paths(c, path + (i,))


def mutations(gen: RandomGen, types, p, triple):
    """Single-premise corruptions of a derivation, each of which must be rejected.

    Yields (kind, proof, claimed_triple).  ``swap-ends`` claims the reversed
    triple, ``swap-premise`` exchanges the two premises of a composition,
    ``middle`` replaces a recorded middle term and ``right`` replaces the
    right premise by one starting elsewhere.  Only mutations that really
    change something are produced.
    """
    from .proofterm import r_binders_along, r_replace_at, r_subterm_at
    src, tgt, ty = triple
    if src != tgt:
        yield "swap-ends", p, (tgt, src, ty)
    for path in _vcomp_paths(p):
        node = r_subterm_at(p, path)
        local = tuple(types) + tuple(r_binders_along(p, path))
        nty = typecheck_reduction(local, node, gen.sig)[2]
        l_src, l_tgt, _ = typecheck_reduction(local, node.left, gen.sig)
        r_src, r_tgt, _ = typecheck_reduction(local, node.right, gen.sig)
        if len({l_src, l_tgt, r_src, r_tgt}) > 1:
            yield "swap-premise", r_replace_at(p, path, VComp(node.right, node.mid, node.left)), triple
        for _ in range(5):
            try:
                other = gen.normal_term(local, nty, 4)
            except Perm2Error:
                continue
            if other != node.mid:
                yield "middle", r_replace_at(p, path, VComp(node.left, other, node.right)), triple
                break
        for _ in range(5):
            try:
                other = gen.normal_term(local, nty, 4)
            except Perm2Error:
                continue
            if other != l_tgt:
                q = gen.reduction_from(local, other, nty, 3)
                yield "right", r_replace_at(p, path, VComp(node.left, node.mid, q)), triple
                break


# ---------------------------------------------------------------- random signatures

def random_signature(rng: random.Random, n_sorts: int = 2, n_ops: int = 3, n_rules: int = 2):
    """A small random signature whose rules are well typed (not necessarily rewriting systems)."""
    sorts = [f"s{i}" for i in range(n_sorts)]
    base = [Sort(s) for s in sorts]

    def rtype(depth=0):
        r = rng.random()
        if depth >= 2 or r < 0.55:
            return rng.choice(base)
        if r < 0.7:
            return UNIT if rng.random() < 0.3 else Product(rtype(depth + 1), rtype(depth + 1))
        return Exponential(rtype(depth + 1), rtype(depth + 1))

    ops = {}
    for i in range(n_ops):
        k = rng.randint(0, 2)
        ops[f"c{i}"] = Sequent(tuple(rtype(1) for _ in range(k)), rng.choice(base))
    prelim = build_signature(sorts, ops)
    gen = RandomGen(prelim, rng)
    rules = []
    for i in range(n_rules):
        names = [f"x{j}" for j in range(rng.randint(0, 2))]
        ctx = Context(tuple((x, rtype(1)) for x in names))
        ty = rng.choice(base)
        try:
            lhs = gen.term(ctx.types, ty, 4)
            rhs = gen.term(ctx.types, ty, 4)
        except Perm2Error:
            continue
        rules.append(RewriteRule(f"r{i}", ctx, lhs, rhs, ty))
    return build_signature(sorts, ops, rules)
