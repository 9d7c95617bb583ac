"""Exhaustive reference deciders for small instances.

Everything here trades speed for trustworthiness: decisions come from full
enumeration over connected bundles or connected partitions, guarded by an
explicit budget.  Pruning (value thresholds, minimal candidate bundles,
symmetric-agent canonicalization, forward checking) may only skip branches
that provably contain no witness, so pruned and unpruned runs decide alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .graphs import (
    classify,
    connected_set_masks,
    enumerate_connected_partitions,
    mask_is_connected,
)
from .model import (
    Allocation,
    BudgetExceeded,
    InputError,
    Instance,
    ItemGraph,
    SolveReport,
    compute_type_partition,
    make_report,
)

__all__ = [
    "OracleBudget",
    "oracle_prop",
    "oracle_ef_complete",
    "oracle_mms_values",
    "oracle_mms_exists",
    "mms_values_raw",
]


@dataclass(frozen=True)
class OracleBudget:
    """Hard limits for exhaustive search; exceeding any raises BudgetExceeded."""

    max_items: int = 10
    max_agents: int = 5
    max_enumerated: int = 5_000_000


DEFAULT_BUDGET = OracleBudget()


def _guard(inst: Instance, budget: Optional[OracleBudget]) -> OracleBudget:
    b = budget or DEFAULT_BUDGET
    if inst.item_count > b.max_items:
        raise BudgetExceeded(
            f"{inst.item_count} items exceed the oracle budget of {b.max_items}"
        )
    if inst.agent_count > b.max_agents:
        raise BudgetExceeded(
            f"{inst.agent_count} agents exceed the oracle budget of {b.max_agents}"
        )
    return b


class _NodeCounter:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded("oracle enumeration budget exhausted")


def _scaled_weights(
    inst: Instance, thresholds: Sequence[Fraction]
) -> tuple[list[list[int]], list[int]]:
    """Integer utility rows and thresholds under one common denominator."""
    scale = 1
    for row in inst.utilities:
        for x in row:
            scale = lcm(scale, x.denominator)
    for t in thresholds:
        scale = lcm(scale, Fraction(t).denominator)
    rows = [[int(x * scale) for x in row] for row in inst.utilities]
    scaled_thresholds = [int(Fraction(t) * scale) for t in thresholds]
    return rows, scaled_thresholds


def _minimal_candidates(
    g: ItemGraph, weights: Sequence[int], threshold: int, counter: _NodeCounter
) -> list[int]:
    """Minimal connected bundles meeting the threshold, as bitmasks.

    A qualifying set is minimal iff no single connected-preserving removal
    still qualifies; with nonnegative utilities that test is equivalent to
    having no qualifying connected proper subset at all.
    """
    if threshold <= 0:
        return [0]
    out = []
    for mask in connected_set_masks(g):
        counter.spend()
        total = 0
        rest = mask
        while rest:
            v = rest & -rest
            rest &= rest - 1
            total += weights[v.bit_length() - 1]
        if total < threshold:
            continue
        minimal = True
        rest = mask
        while rest:
            v = rest & -rest
            rest &= rest - 1
            w = v.bit_length() - 1
            shrunk = mask & ~v
            if total - weights[w] >= threshold and mask_is_connected(g, shrunk):
                minimal = False
                break
        if minimal:
            out.append(mask)
    return out


def _search_thresholds(
    inst: Instance,
    thresholds: Sequence[Fraction],
    budget: OracleBudget,
    prune: bool,
) -> Optional[list[int]]:
    """First assignment (in deterministic DFS order) meeting all thresholds."""
    g = inst.graph
    n = inst.agent_count
    counter = _NodeCounter(budget.max_enumerated)
    weights, scaled = _scaled_weights(inst, thresholds)

    if not prune:
        # Reference mode: every agent may take any connected bundle or nothing,
        # thresholds checked only at the leaves.  Tiny inputs only.
        all_sets = [0] + list(connected_set_masks(g))
        chosen: list[int] = []

        def rec_plain(i: int, used: int) -> Optional[list[int]]:
            if i == n:
                ok = all(
                    _mask_value(weights[a], chosen[a]) >= scaled[a] for a in range(n)
                )
                return list(chosen) if ok else None
            for mask in all_sets:
                if mask & used:
                    continue
                counter.spend()
                chosen.append(mask)
                found = rec_plain(i + 1, used | mask)
                if found is not None:
                    return found
                chosen.pop()
            return None

        return rec_plain(0, 0)

    types = compute_type_partition(inst)
    candidates: list[list[int]] = []
    per_type_cache: dict[int, list[int]] = {}
    for a in range(n):
        t = types.type_of_agent[a]
        if t not in per_type_cache:
            per_type_cache[t] = _minimal_candidates(g, weights[a], scaled[a], counter)
        candidates.append(per_type_cache[t])

    last_pick_of_type: dict[int, int] = {}
    chosen2: list[int] = []

    def rec(i: int, used: int) -> Optional[list[int]]:
        if i == n:
            return list(chosen2)
        t = types.type_of_agent[i]
        cand = candidates[i]
        for idx, mask in enumerate(cand):
            # same-type agents are interchangeable, so make their (nonempty)
            # bundle picks strictly increasing in candidate order; the empty
            # bundle is shareable and exempt
            if mask != 0 and idx <= last_pick_of_type.get(t, -1):
                continue
            if mask & used:
                continue
            counter.spend()
            taken = used | mask
            # forward check: every later agent still needs a disjoint candidate
            stuck = False
            for j in range(i + 1, n):
                if all(c & taken for c in candidates[j]):
                    stuck = True
                    break
            if stuck:
                continue
            prev = last_pick_of_type.get(t)
            if mask != 0:
                last_pick_of_type[t] = idx
            chosen2.append(mask)
            found = rec(i + 1, taken)
            if found is not None:
                return found
            chosen2.pop()
            if mask != 0:
                if prev is None:
                    del last_pick_of_type[t]
                else:
                    last_pick_of_type[t] = prev
        return None

    return rec(0, 0)


def _mask_value(weights: Sequence[int], mask: int) -> int:
    total = 0
    while mask:
        v = mask & -mask
        mask &= mask - 1
        total += weights[v.bit_length() - 1]
    return total


def _masks_to_allocation(masks: Iterable[int]) -> Allocation:
    return Allocation(
        tuple(frozenset(_bits(mask)) for mask in masks)
    )


def _bits(mask: int):
    while mask:
        v = mask & -mask
        yield v.bit_length() - 1
        mask &= mask - 1


def oracle_prop(
    inst: Instance,
    budget: Optional[OracleBudget] = None,
    prune: bool = True,
) -> SolveReport:
    """Exhaustive decision: does a proportional valid allocation exist?

    Completeness is not required; bundles may leave items on the table.
    """
    b = _guard(inst, budget)
    share = Fraction(1, inst.agent_count)
    masks = _search_thresholds(inst, [share] * inst.agent_count, b, prune)
    witness = None if masks is None else _masks_to_allocation(masks)
    return make_report(inst, "oracle", witness)


def oracle_mms_values(
    inst: Instance, budget: Optional[OracleBudget] = None
) -> tuple[Fraction, ...]:
    """Each agent's maximin share over connected n-partitions, by enumeration."""
    b = _guard(inst, budget)
    if not classify(inst.graph).is_connected:
        raise InputError("maximin shares are defined on connected item graphs only")
    if inst.item_count < inst.agent_count:
        raise InputError("maximin shares need at least as many items as agents")
    values = mms_values_raw(
        inst.graph, inst.utilities, inst.agent_count, b.max_enumerated
    )
    share = Fraction(1, inst.agent_count)
    assert all(v <= share for v in values), "maximin share above 1/n is impossible"
    return values


def mms_values_raw(
    g: ItemGraph,
    weight_rows: Sequence[Sequence[Fraction]],
    parts: int,
    node_limit: int = DEFAULT_BUDGET.max_enumerated,
) -> tuple[Fraction, ...]:
    """Max-over-partitions min-part value for arbitrary nonnegative rows.

    Shared by the oracle proper and by trace replays on residual subtrees,
    where utility rows no longer sum to 1.
    """
    counter = _NodeCounter(node_limit)
    best: list[Optional[Fraction]] = [None] * len(weight_rows)
    for partition in enumerate_connected_partitions(g, parts):
        counter.spend()
        for i, row in enumerate(weight_rows):
            worst = min(sum(row[v] for v in part) for part in partition)
            if best[i] is None or worst > best[i]:
                best[i] = worst
    if any(v is None for v in best):
        raise InputError(
            f"the graph admits no partition into {parts} connected parts"
        )
    return tuple(Fraction(v) for v in best)  # type: ignore[arg-type]


def oracle_mms_exists(
    inst: Instance, budget: Optional[OracleBudget] = None, prune: bool = True
) -> SolveReport:
    """Exhaustive decision: does an allocation meeting every maximin share exist?"""
    b = _guard(inst, budget)
    values = oracle_mms_values(inst, b)
    masks = _search_thresholds(inst, list(values), b, prune)
    witness = None if masks is None else _masks_to_allocation(masks)
    return make_report(inst, "oracle", witness, quotas=values)


def oracle_ef_complete(
    inst: Instance, budget: Optional[OracleBudget] = None
) -> SolveReport:
    """Exhaustive decision: does a complete, valid, envy-free allocation exist?

    Only partitions into exactly n parts can work: with utilities summing
    to 1, an agent holding an empty bundle values some assigned part
    positively and envies its owner.  For an n-part partition every part is
    owned, so envy-freeness says each agent receives a part she values at
    least as much as every other part — a perfect-matching condition between
    agents and their maximum-value parts.
    """
    b = _guard(inst, budget)
    n = inst.agent_count
    if inst.item_count < n:
        return make_report(inst, "oracle", None)
    counter = _NodeCounter(b.max_enumerated)

    scale = 1
    for row in inst.utilities:
        for x in row:
            scale = lcm(scale, x.denominator)
    weights = [[int(x * scale) for x in row] for row in inst.utilities]

    for partition in enumerate_connected_partitions(inst.graph, n):
        counter.spend()
        value = [
            [sum(weights[i][v] for v in part) for part in partition]
            for i in range(n)
        ]
        favorite = [max(row) for row in value]
        adj = [
            [p for p in range(n) if value[i][p] == favorite[i]] for i in range(n)
        ]
        if any(
            all(value[i][p] != favorite[i] for i in range(n)) for p in range(n)
        ):
            continue  # some part is nobody's favorite, so it cannot be owned
        assignment = _lex_perfect_assignment(adj, n)
        if assignment is not None:
            bundles: list[frozenset[int]] = [frozenset()] * n
            for agent, part_idx in enumerate(assignment):
                bundles[agent] = partition[part_idx]
            return make_report(inst, "oracle", Allocation(tuple(bundles)))
    return make_report(inst, "oracle", None)


def _lex_perfect_assignment(
    adj: Sequence[Sequence[int]], n: int
) -> Optional[list[int]]:
    """Lexicographically smallest perfect matching rows -> columns, or None."""

    def feasible(start: int, used: set[int]) -> bool:
        match_col: dict[int, int] = {}

        def kuhn(r: int, seen: set[int]) -> bool:
            for j in adj[r]:
                if j in used or j in seen:
                    continue
                seen.add(j)
                if j not in match_col or kuhn(match_col[j], seen):
                    match_col[j] = r
                    return True
            return False

        return all(kuhn(r, set()) for r in range(start, n))

    used: set[int] = set()
    out: list[int] = []
    for i in range(n):
        pick = None
        for j in adj[i]:
            if j in used:
                continue
            if feasible(i + 1, used | {j}):
                pick = j
                break
        if pick is None:
            return None
        used.add(pick)
        out.append(pick)
    return out
