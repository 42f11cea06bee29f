"""Bounded brute-force search for an equational derivation between two reductions.

The search never consults the canonicalizer: it only applies schema
instances (in both orientations) at every position.  It grows the closures
of both endpoints breadth-first and stops when they meet.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..proofterm import ReductionJudgment, normalize_mids, reduction_size
from .equations import Typer, neighbours

YES = "yes"
NO = "no-within-budget"
EXHAUSTED = "budget-exhausted"


@dataclass
class OracleResult:
    verdict: str
    explored: int
    trace: list = field(default_factory=list)  # (equation-id, path, reduction) from p to q

    def __bool__(self):
        return self.verdict == YES


def oracle_equiv(p: ReductionJudgment, q: ReductionJudgment, budget: int, sig, slack: int = 4) -> OracleResult:
    """Search until ``budget`` distinct reductions have been seen.

    Reductions larger than the bigger endpoint plus ``slack`` nodes are not
    explored, which keeps the closure finite.
    """
    if p.triple != q.triple or p.context.types != q.context.types:
        return OracleResult(NO, 0)
    types = p.context.types
    a = normalize_mids(types, p.proof, sig)
    b = normalize_mids(types, q.proof, sig)
    if a == b:
        return OracleResult(YES, 1)
    limit = max(reduction_size(a), reduction_size(b)) + slack
    typer = Typer(sig)
    seen = [{a: None}, {b: None}]
    queues = [deque([a]), deque([b])]
    count = 2
    while queues[0] or queues[1]:
        side = 0 if (queues[0] and (not queues[1] or len(queues[0]) <= len(queues[1]))) else 1
        # expand one full level of the chosen side
        for _ in range(len(queues[side])):
            cur = queues[side].popleft()
            for name, path, nxt in neighbours(types, cur, sig, typer):
                if nxt in seen[side]:
                    continue
                if reduction_size(nxt) > limit:
                    continue
                seen[side][nxt] = (cur, name, path)
                if nxt in seen[1 - side]:
                    return OracleResult(YES, count, _trace(seen, nxt, side))
                count += 1
                if count >= budget:
                    return OracleResult(EXHAUSTED, count)
                queues[side].append(nxt)
    return OracleResult(NO, count)


def _chain(seen, node):
    out = []
    while seen[node] is not None:
        prev, name, path = seen[node]
        out.append((prev, name, path, node))
        node = prev
    return out


def _trace(seen, meet, side):
    left = _chain(seen[0], meet)[::-1]
    right = _chain(seen[1], meet)
    steps = [(name, path, node) for _, name, path, node in left]
    steps += [(name, path, prev) for prev, name, path, _ in right]
    return steps
