"""Permutation equivalence of reductions: canonical forms, the equation
schemas, a decision procedure and an independent search oracle."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TypeMismatch
from ..proofterm import ReductionJudgment, judge
from .canonical import (
    CanonicalForm,
    ElementaryStep,
    canonicalize,
    decompose,
    representative,
    rule_occurrences,
    segments,
)
from .equations import EQUATIONS, eq_step, neighbours, root_moves
from .oracle import EXHAUSTED, NO, YES, OracleResult, oracle_equiv


@dataclass
class EquivCertificate:
    verdict: bool
    left: CanonicalForm | None
    right: CanonicalForm | None
    reason: str = ""
    oracle_trace: list | None = None

    def __bool__(self):
        return self.verdict


def perm_equiv(p: ReductionJudgment, q: ReductionJudgment, sig, strict: bool = False) -> EquivCertificate:
    """Decide equivalence by comparing canonical forms.

    Judgments with different endpoints get verdict False, or TypeMismatch
    when ``strict`` is set.
    """
    if p.context.types != q.context.types or p.triple != q.triple:
        if strict:
            raise TypeMismatch(p.triple, q.triple, "compared reductions")
        return EquivCertificate(False, None, None, "endpoints differ")
    cp = canonicalize(p, sig)
    cq = canonicalize(q, sig)
    same = cp == cq
    return EquivCertificate(same, cp, cq, "" if same else "canonical forms differ")


def equivalent(ctx, p, q, sig) -> bool:
    """Convenience wrapper on bare reductions."""
    return perm_equiv(judge(ctx, p, sig), judge(ctx, q, sig), sig).verdict


__all__ = [
    "CanonicalForm", "ElementaryStep", "EquivCertificate", "OracleResult", "EQUATIONS",
    "YES", "NO", "EXHAUSTED", "canonicalize", "decompose", "eq_step", "equivalent",
    "neighbours", "oracle_equiv", "perm_equiv", "representative", "root_moves",
    "rule_occurrences", "segments",
]
