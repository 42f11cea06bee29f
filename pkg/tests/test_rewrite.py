import dataclasses

import pytest

from perm2.errors import InvalidStep, NonPatternLhs
from perm2.kernel import Lambda, Sort, Var
from perm2.proofterm import judge, typecheck_reduction
from perm2.rewrite import (
    LEFTMOST_OUTERMOST,
    PARALLEL_OUTERMOST,
    Trace,
    embed_step,
    flatten_proof,
    format_step,
    format_trace,
    has_cell,
    match_rule,
    normalize_by_rules,
    rewrite_once,
    trace_to_reduction,
    validate_trace,
)
from perm2.syntax import parse_context, parse_signature, parse_term

T = Sort("t")
X = parse_context("x:t")
ID = r"l(\y:t. y)"


def test_match_rule(lam, parse):
    r = lam.rule("beta")
    assert match_rule(r, parse("term", rf"a({ID}, x)")) == [(Lambda(T, Var(0)), Var(0))]
    assert match_rule(r, Var(0)) == []
    assert match_rule(r, parse("term", "a(x, x)")) == []


def test_rewrite_once(lam, parse):
    steps = rewrite_once(lam, X, parse("term", rf"a({ID}, x)"))
    assert len(steps) == 1
    assert steps[0].after == Var(0) and steps[0].position == ()
    assert rewrite_once(lam, X, Var(0)) == []
    two = rewrite_once(lam, X, parse("term", rf"a(a({ID}, x), a({ID}, x))"))
    assert [s.position for s in two] == [(0,), (1,)]


def test_format(lam, parse):
    s = rewrite_once(lam, X, parse("term", rf"a({ID}, x)"))[0]
    assert format_step(s, X, lam) == r"beta @ [] : a(l(\y:t. y), x) => x"
    assert format_trace(Trace(s.before, (s,)), X, lam) == format_step(s, X, lam)


def test_embed_and_flatten(lam, parse):
    s = rewrite_once(lam, X, parse("term", rf"a({ID}, x)"))[0]
    p = embed_step(s, lam, X)
    assert typecheck_reduction(X, p, lam) == (s.before, s.after, T)
    assert flatten_proof(judge(X, p, lam), lam).steps == (s,)


def test_deep_step(lam, parse):
    m = parse("term", rf"l(\z:t. a(z, a({ID}, z)))")
    (s,) = rewrite_once(lam, X, m)
    assert s.position == (0, 0, 1)
    p = embed_step(s, lam, X)
    assert flatten_proof(judge(X, p, lam), lam).steps == (s,)


def test_stale_step(lam, parse):
    s = rewrite_once(lam, X, parse("term", rf"a({ID}, x)"))[0]
    with pytest.raises(InvalidStep):
        embed_step(dataclasses.replace(s, before=parse("term", "a(x, x)")), lam, X)
    with pytest.raises(InvalidStep):
        embed_step(dataclasses.replace(s, after=parse("term", "a(x, x)")), lam, X)


def test_flatten_sequence(lam, parse):
    j = judge(X, parse("proof", rf"a({ID}, beta<\y:t. y, x>) ; beta<\y:t. y, x>"), lam)
    tr = flatten_proof(j, lam)
    assert len(tr) == 2
    assert validate_trace(lam, X, tr)
    assert flatten_proof(judge(X, parse("proof", "x"), lam), lam).steps == ()


def test_normalize_by_rules(lam, parse):
    tr, done = normalize_by_rules(lam, X, parse("term", rf"a({ID}, x)"), fuel=10)
    assert done and tr.end == Var(0) and len(tr) == 1
    tr, done = normalize_by_rules(lam, X, Var(0), fuel=0)
    assert done and len(tr) == 0
    m = parse("term", rf"a(a({ID}, x), a({ID}, x))")
    lo, _ = normalize_by_rules(lam, X, m, LEFTMOST_OUTERMOST, 10)
    po, _ = normalize_by_rules(lam, X, m, PARALLEL_OUTERMOST, 10)
    assert lo.end == po.end
    assert validate_trace(lam, X, lo) and validate_trace(lam, X, po)
    with pytest.raises(ValueError):
        normalize_by_rules(lam, X, m, "random", 10)


def test_ccs_diverges(ccs):
    ctx = parse_context("")
    tr, done = normalize_by_rules(ccs, ctx, parse_term("par(a(), a())", ctx, ccs), fuel=5)
    assert not done and len(tr) == 5


def test_has_cell_and_local_fullness(lam, parse):
    m = parse("term", rf"a({ID}, a({ID}, x))")
    tr = has_cell(lam, X, m, Var(0))
    assert tr is not None and len(tr) == 2
    p = trace_to_reduction(lam, X, tr)
    assert typecheck_reduction(X, p, lam) == (m, Var(0), T)
    assert has_cell(lam, X, Var(0), m) is None


def test_non_pattern_rules_rejected():
    sig = parse_signature("sort t\nop c : (t) -> t\nrule r : [f: t ^ t, x: t] c(f x) => x : t")
    with pytest.raises(NonPatternLhs):
        rewrite_once(sig, parse_context("y:t"), parse_term("c(y)", parse_context("y:t"), sig))
