"""Ordinary higher-order rewriting on normal terms, and its correspondence
with reductions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidStep, NonPatternLhs, Perm2Error
from .kernel import (
    ConstApp,
    Context,
    Sort,
    infer_type,
    normalize_in,
    replace_at,
    subst_term,
    subterm_at,
    subterms,
    binders_along,
)
from .matching import check_pattern, match_pattern
from .proofterm import ReductionJudgment, VComp, compose_all, from_doubled, identity_reduction
from .signature import RuleRef, is_hrs

LEFTMOST_OUTERMOST = "leftmost-outermost"
PARALLEL_OUTERMOST = "parallel-outermost"
STRATEGIES = (LEFTMOST_OUTERMOST, PARALLEL_OUTERMOST)


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    position: tuple
    args: tuple  # in the context extended by the binders above the position
    before: object
    after: object


@dataclass(frozen=True)
class Trace:
    start: object
    steps: tuple = ()

    @property
    def end(self):
        return self.steps[-1].after if self.steps else self.start

    def __len__(self):
        return len(self.steps)


def format_path(path) -> str:
    return "[" + ",".join(str(i) for i in path) + "]"


def format_step(s: RewriteStep, ctx, sig) -> str:
    from .syntax import show_term
    return f"{s.rule} @ {format_path(s.position)} : {show_term(s.before, ctx, sig)} => {show_term(s.after, ctx, sig)}"


def format_trace(tr: Trace, ctx, sig) -> str:
    return "\n".join(format_step(s, ctx, sig) for s in tr.steps)


def _types(ctx):
    return ctx.types if isinstance(ctx, Context) else tuple(ctx)


def match_rule(rule, subject, ctx=None) -> list:
    """All matches (zero or one) of ``rule``'s lhs against a normal subject."""
    check_pattern(rule.lhs, rule.context.types)
    sigma = match_pattern(rule.lhs, subject, rule.context.types)
    return [] if sigma is None else [sigma]


def _rewritable_rules(sig):
    cached = getattr(sig, "_rewritable", None)
    if cached is not None:
        return cached
    out = []
    for name in sorted(sig.rules):
        r = sig.rules[name]
        if not isinstance(r.type, Sort):
            raise NonPatternLhs(f"rule {name} has result type {r.type}, not a sort")
        try:
            check_pattern(r.lhs, r.context.types)
        except NonPatternLhs as e:
            raise NonPatternLhs(f"rule {name}: {e}") from None
        out.append(r)
    object.__setattr__(sig, "_rewritable", out)
    return out


def _step_at(sig, types, m, path, sub, rule):
    sigma = match_pattern(rule.lhs, sub, rule.context.types)
    if sigma is None:
        return None
    local = types + binders_along(m, path)
    contractum = normalize_in(local, subst_term(rule.rhs, sigma), rule.type, sig.ops)
    top = infer_type(types, m, sig.ops)
    after = normalize_in(types, replace_at(m, path, contractum), top, sig.ops)
    return RewriteStep(rule.name, path, sigma, m, after)


def rewrite_once(sig, ctx, m) -> list:
    """Every redex of the normal form of ``m``, by position then rule name."""
    types = _types(ctx)
    rules = _rewritable_rules(sig)
    m = normalize_in(types, m, infer_type(types, m, sig.ops), sig.ops)
    out = []
    for path, sub in subterms(m):
        if not isinstance(sub, ConstApp):
            continue
        local = types + binders_along(m, path)
        try:
            ty = infer_type(local, sub, sig.ops)
        except Perm2Error:
            continue
        for r in rules:
            if r.type != ty:
                continue
            s = _step_at(sig, types, m, path, sub, r)
            if s is not None:
                out.append(s)
    return out


def embed_step(s: RewriteStep, sig, ctx):
    """The reduction contracting exactly the redex described by ``s``."""
    types = _types(ctx)
    try:
        ty = infer_type(types, s.before, sig.ops)
        if normalize_in(types, s.before, ty, sig.ops) != s.before:
            raise InvalidStep("before-term is not in normal form")
        r = sig.rule(s.rule)
        sub = subterm_at(s.before, s.position)
        check = _step_at(sig, types, s.before, s.position, sub, r)
    except InvalidStep:
        raise
    except (Perm2Error, IndexError, AttributeError) as e:
        raise InvalidStep(str(e)) from e
    if check is None or check.args != tuple(s.args) or check.after != s.after:
        raise InvalidStep(f"{s.rule} does not rewrite the given term at {format_path(s.position)} as claimed")
    return from_doubled(replace_at(s.before, s.position, ConstApp(RuleRef(s.rule), tuple(s.args))))


def flatten_proof(j: ReductionJudgment, sig) -> Trace:
    """The rewrite sequence read off the canonical form of ``j``."""
    from .permeq import canonicalize
    ok, issues = is_hrs(sig)
    if not ok:
        raise NonPatternLhs("not a higher-order rewrite system: " + "; ".join(map(str, issues)))
    cf = canonicalize(j, sig)
    steps = tuple(RewriteStep(e.rule, e.position, e.args, e.source, e.target) for e in cf.steps)
    return Trace(j.source, steps)


def validate_trace(sig, ctx, tr: Trace) -> bool:
    """Every step is one found by rewrite_once and the steps chain up."""
    cur = tr.start
    for s in tr.steps:
        if s.before != cur or s not in rewrite_once(sig, ctx, cur):
            return False
        cur = s.after
    return True


def trace_to_reduction(sig, ctx, tr: Trace):
    """Compose the embedded steps of a trace into one reduction."""
    if not tr.steps:
        return identity_reduction(tr.start)
    reds = [embed_step(s, sig, ctx) for s in tr.steps]
    return compose_all(reds, [s.after for s in tr.steps[:-1]])


def normalize_by_rules(sig, ctx, m, strategy: str = LEFTMOST_OUTERMOST, fuel: int = 100):
    """Rewrite until no redex remains or ``fuel`` steps were taken.

    Returns (trace, terminated).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    types = _types(ctx)
    cur = normalize_in(types, m, infer_type(types, m, sig.ops), sig.ops)
    start = cur
    steps = []
    while True:
        redexes = rewrite_once(sig, ctx, cur)
        if not redexes:
            return Trace(start, tuple(steps)), True
        if len(steps) >= fuel:
            return Trace(start, tuple(steps)), False
        if strategy == LEFTMOST_OUTERMOST:
            chosen = [redexes[0]]
        else:
            chosen = []
            for s in redexes:
                if all(not _prefix(c.position, s.position) for c in chosen):
                    if not chosen or chosen[-1].position != s.position:
                        chosen.append(s)
        for s in chosen:
            if len(steps) >= fuel:
                return Trace(start, tuple(steps)), False
            if s is not chosen[0]:
                sub = subterm_at(cur, s.position)
                s = _step_at(sig, types, cur, s.position, sub, sig.rule(s.rule))
            steps.append(s)
            cur = s.after


def _prefix(a, b) -> bool:
    return len(a) <= len(b) and tuple(b[:len(a)]) == tuple(a)


def has_cell(sig, ctx, m, n, fuel: int = 1000):
    """Semi-decision for the existence of a rewrite sequence from ``m`` to ``n``.

    Breadth-first over at most ``fuel`` distinct terms.  Returns a Trace when
    one is found and None otherwise; None does not mean that no sequence exists.
    """
    types = _types(ctx)
    ty = infer_type(types, m, sig.ops)
    m = normalize_in(types, m, ty, sig.ops)
    n = normalize_in(types, n, infer_type(types, n, sig.ops), sig.ops)
    parent = {m: None}
    queue = deque([m])
    while queue:
        cur = queue.popleft()
        if cur == n:
            steps = []
            while parent[cur] is not None:
                prev, s = parent[cur]
                steps.append(s)
                cur = prev
            return Trace(m, tuple(reversed(steps)))
        for s in rewrite_once(sig, ctx, cur):
            if s.after not in parent:
                if len(parent) >= fuel:
                    return None
                parent[s.after] = (cur, s)
                queue.append(s.after)
    return None
