"""Maximin-share computation and allocation on trees.

The allocator is a last-diminisher loop: the lowest-indexed remaining agent
walks the residual tree in postorder and takes the first subtree worth her
quota, which is automatically inclusion-minimal among qualifying subtrees.
Peeling minimal subtrees never destroys feasibility for the others, so with
quotas set to the agents' maximin shares the loop always terminates with a
full allocation.  The same loop run with n copies of a single agent decides
whether the tree splits into n connected parts all worth at least q, and a
binary search over the integer value grid turns that into the exact maximin
share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .graphs import ItemGraph, classify, root_tree
from .model import Allocation, InputError, Instance, SolveReport, make_report
from .serialize import rational_to_str

__all__ = [
    "DiminisherRound",
    "DiminisherTrace",
    "allocate_with_quotas",
    "mms_value_tree",
    "solve_mms_tree",
]


@dataclass(frozen=True)
class DiminisherRound:
    """One peeling step: who moved, what was taken, from which residual."""

    agent: int
    vertex: Optional[int]  # subtree root taken; None for whole-residual/empty awards
    awarded: frozenset[int]
    residual_before: frozenset[int]


@dataclass(frozen=True)
class DiminisherTrace:
    quotas: tuple[Fraction, ...]
    rounds: tuple[DiminisherRound, ...]

    def to_dict(self, labels: Sequence[str]) -> dict:
        return {
            "quotas": [rational_to_str(q) for q in self.quotas],
            "rounds": [
                {
                    "agent": r.agent,
                    "vertex": None if r.vertex is None else labels[r.vertex],
                    "awarded": sorted(labels[v] for v in r.awarded),
                    "residual_before": sorted(labels[v] for v in r.residual_before),
                }
                for r in self.rounds
            ],
        }


def _allocate(
    graph: ItemGraph,
    rows: Sequence[Sequence[Fraction]],
    quotas: Sequence[Fraction],
) -> Optional[tuple[list[frozenset[int]], DiminisherTrace]]:
    """Run the peeling loop with arbitrary nonnegative valuation rows.

    Kept independent of ``Instance`` so that the maximin search can run it
    with n copies of one integer-scaled row, which would violate the
    normalization an ``Instance`` enforces.
    """
    n = len(rows)
    m = graph.vertex_count
    bundles: list[frozenset[int]] = [frozenset()] * n
    residual = frozenset(range(m))
    remaining = list(range(n))
    rounds: list[DiminisherRound] = []

    def value(agent: int, vertices) -> Fraction:
        return sum((rows[agent][v] for v in vertices), Fraction(0))

    while remaining:
        for j in remaining:
            if value(j, residual) < quotas[j]:
                return None
        if len(remaining) == 1:
            i = remaining.pop()
            rounds.append(DiminisherRound(i, None, residual, residual))
            bundles[i] = residual
            residual = frozenset()
            continue
        i = remaining[0]
        if quotas[i] <= 0:
            # nothing to claim: step aside so agents still needing value
            # race for minimal subtrees undisturbed
            remaining.pop(0)
            rounds.append(DiminisherRound(i, None, frozenset(), residual))
            continue
        # The first postorder vertex whose subtree satisfies any claimant is
        # an inclusion-minimal qualifying subtree for every one of them;
        # awarding a non-minimal subtree could swallow the only piece some
        # other agent can reach her quota with.
        claimants = [j for j in remaining if quotas[j] > 0]
        view = root_tree(graph, min(residual), within=residual)
        taken: Optional[int] = None
        winner: Optional[int] = None
        for v in view.postorder:
            for j in claimants:
                if value(j, view.subtree[v]) >= quotas[j]:
                    taken, winner = v, j
                    break
            if taken is not None:
                break
        assert taken is not None and winner is not None  # the root qualifies
        awarded = frozenset(view.subtree[taken])
        rounds.append(DiminisherRound(winner, taken, awarded, residual))
        bundles[winner] = awarded
        residual = residual - awarded
        remaining.remove(winner)
    return bundles, DiminisherTrace(tuple(Fraction(q) for q in quotas), tuple(rounds))


def allocate_with_quotas(
    inst: Instance, quotas: Sequence[Fraction]
) -> Optional[tuple[Allocation, DiminisherTrace]]:
    """Connected bundles giving each agent at least her quota, or None.

    The item graph must be a tree.  Failure is honest only when the quotas
    are simultaneously satisfiable by no peeling order; with maximin-share
    quotas the call always succeeds.
    """
    if not classify(inst.graph).is_tree:
        raise InputError("the item graph is not a tree")
    if len(quotas) != inst.agent_count:
        raise InputError("one quota per agent is required")
    out = _allocate(inst.graph, inst.utilities, quotas)
    if out is None:
        return None
    bundles, trace = out
    return Allocation(tuple(bundles)), trace


def mms_value_tree(inst: Instance, agent: int) -> Fraction:
    """Exact maximin share of one agent over connected n-partitions of a tree.

    The agent's utilities are scaled to integers summing to L; feasibility of
    "n connected parts, each worth at least q" is monotone in q, so a binary
    search over q in [0, L] finds the share exactly.
    """
    if not classify(inst.graph).is_tree:
        raise InputError("the item graph is not a tree")
    n = inst.agent_count
    if inst.item_count < n:
        raise InputError("fewer items than agents: no complete connected partition")
    row = inst.utilities[agent]
    scale = lcm(*(x.denominator for x in row))
    weights = tuple(Fraction(int(x * scale)) for x in row)
    clones = [weights] * n

    def feasible(q: int) -> bool:
        return _allocate(inst.graph, clones, [Fraction(q)] * n) is not None

    lo, hi = 0, scale  # feasible(0) always; the total value is exactly scale
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid - 1
    return Fraction(lo, scale)


def solve_mms_tree(inst: Instance) -> SolveReport:
    """Maximin-share allocation on a tree; on trees one always exists."""
    quotas = tuple(mms_value_tree(inst, i) for i in range(inst.agent_count))
    out = allocate_with_quotas(inst, quotas)
    if out is None:  # pragma: no cover - contradicts the peeling guarantee
        raise RuntimeError("peeling failed with maximin quotas on a tree")
    alloc, _ = out
    return make_report(inst, "mms-tree", alloc, quotas=quotas)
