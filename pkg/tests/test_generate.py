import random

from perm2.generate import (
    RandomGen,
    ReductionEnum,
    derivation,
    mutations,
    normal_terms,
    random_signature,
    type_universe,
)
from perm2.kernel import Exponential, Sort, normalize_in, term_size
from perm2.proofterm import ReductionJudgment, check_judgment, reduction_size, typecheck_reduction
from perm2.signature import validate_signature
from perm2.syntax import parse_context

T = Sort("t")


def test_universe(lam):
    assert type_universe(lam) == {T, Exponential(T, T)}


def test_normal_terms_are_normal_and_distinct(lam):
    ctx = parse_context("x:t")
    terms = normal_terms(lam, ctx.types, T, 6)
    assert len(terms) == len(set(terms))
    for m in terms:
        assert normalize_in(ctx.types, m, T, lam.ops) == m
        assert term_size(m) <= 6


def test_reduction_enum_sizes(lam):
    ctx = parse_context("x:t")
    en = ReductionEnum(lam, type_universe(lam, ctx.types))
    for s in range(1, 6):
        for p in en.of_size(ctx.types, T, s):
            assert reduction_size(p) == s
            typecheck_reduction(ctx, p, lam)


def test_derivations_check(lam):
    gen = RandomGen(lam, random.Random(5))
    ctx = parse_context("x:t, f:t ^ t")
    for _ in range(50):
        p, triple = derivation(gen, ctx.types, T, 6)
        assert typecheck_reduction(ctx, p, lam) == triple
        for kind, q, claimed in mutations(gen, ctx.types, p, triple):
            assert not check_judgment(ReductionJudgment(ctx, q, *claimed), lam), kind


def test_random_signatures_validate():
    rng = random.Random(2)
    for _ in range(20):
        assert validate_signature(random_signature(rng)).ok
