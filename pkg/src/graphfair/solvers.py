"""Structure-aware solvers for proportional and envy-free division.

Each solver exploits one graph class: a matching formulation on stars, a
left-to-right sweep on paths with identical agents, prefix dynamic programs
on paths with few agent types, and a subtree dynamic program on trees that is
exponential only in the number of agents.  ``dispatch`` routes an instance to
the cheapest applicable solver and falls back to the exhaustive oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterator, Optional, Sequence

from .graphs import classify, root_tree
from .matching import ABSENT, MatchingProblem, solve_matching
from .model import (
    Allocation,
    InputError,
    Instance,
    SolveReport,
    bundle_value,
    compute_type_partition,
    make_report,
)
from .oracle import OracleBudget, oracle_ef_complete, oracle_mms_exists, oracle_prop

__all__ = [
    "PathDpTable",
    "TreeDpTable",
    "EfGuess",
    "prop_star",
    "prop_path_greedy",
    "prop_path_typed",
    "compute_path_dp_table",
    "prop_tree_fpt",
    "compute_tree_dp_table",
    "ef_path_typed",
    "ef_path_with_guess",
    "dispatch",
]

logger = logging.getLogger(__name__)


def path_order(inst: Instance) -> list[int]:
    """Vertices of a path graph from one end to the other.

    The walk starts at the lower-indexed endpoint, which fixes the meaning of
    "left" for every path solver.
    """
    g = inst.graph
    if not classify(g).is_path:
        raise InputError("the item graph is not a path")
    m = g.vertex_count
    if m == 1:
        return [0]
    start = min(v for v in range(m) if g.degree(v) == 1)
    order = [start]
    prev = -1
    cur = start
    while len(order) < m:
        nxt = [w for w in g.neighbors(cur) if w != prev][0]
        order.append(nxt)
        prev, cur = cur, nxt
    return order


# ---------------------------------------------------------------------------
# stars


def prop_star(inst: Instance) -> SolveReport:
    """Proportionality on stars via one assignment problem per center owner.

    For a candidate owner i of the center, every other agent must take a
    single leaf she values at 1/n or more; among such systems a min-weight
    matching minimizes what the center owner gives away, so i keeps 1/n
    exactly when the matching total stays within (n-1)/n.
    """
    g = inst.graph
    if not classify(g).is_star:
        raise InputError("the item graph is not a star")
    m, n = inst.item_count, inst.agent_count
    center = 0 if m <= 2 else max(range(m), key=g.degree)
    leaves = [v for v in range(m) if v != center]
    share = Fraction(1, n)

    if n - 1 > len(leaves):
        return make_report(inst, "star", None)

    for i in range(n):
        others = [j for j in range(n) if j != i]
        rows = []
        for j in others:
            rows.append(
                tuple(
                    inst.utilities[i][v] if inst.utilities[j][v] >= share else ABSENT
                    for v in leaves
                )
            )
        result = solve_matching(MatchingProblem(tuple(rows), "min"))
        if result is None or result.total > 1 - share:
            continue
        bundles = [frozenset()] * n
        matched = set()
        for j, col in zip(others, result.assignment):
            bundles[j] = frozenset({leaves[col]})
            matched.add(leaves[col])
        bundles[i] = frozenset({center} | (set(leaves) - matched))
        return make_report(inst, "star", Allocation(tuple(bundles)))
    return make_report(inst, "star", None)


# ---------------------------------------------------------------------------
# paths, single type


def prop_path_greedy(inst: Instance) -> SolveReport:
    """Left-to-right sweep for identical agents on a path.

    Close a piece as soon as its value reaches 1/n; the instance is a yes
    exactly when n pieces close, and the last piece then absorbs the suffix.
    """
    types = compute_type_partition(inst)
    if types.type_count != 1:
        raise InputError("the greedy path solver needs all agents identical")
    order = path_order(inst)
    n = inst.agent_count
    share = Fraction(1, n)
    row = inst.utilities[0]

    pieces: list[list[int]] = []
    current: list[int] = []
    acc = Fraction(0)
    for v in order:
        current.append(v)
        acc += row[v]
        if acc >= share:
            pieces.append(current)
            current = []
            acc = Fraction(0)
    if len(pieces) < n:
        return make_report(inst, "greedy", None)
    bundles = [frozenset(p) for p in pieces[: n - 1]]
    tail: set[int] = set()
    for p in pieces[n - 1 :]:
        tail |= set(p)
    tail |= set(current)
    bundles.append(frozenset(tail))
    return make_report(inst, "greedy", Allocation(tuple(bundles)))


# ---------------------------------------------------------------------------
# paths, few types


@dataclass(frozen=True)
class PathDpTable:
    """Reachable satisfied-count vectors after each path prefix.

    ``reachable[i]`` holds every vector (one entry per type, capped at the
    type's agent count) achievable by disjoint interval pieces inside the
    first i vertices, items in between may stay loose.
    """

    order: tuple[int, ...]
    type_counts: tuple[int, ...]
    reachable: tuple[frozenset[tuple[int, ...]], ...]


def _typed_path_setup(inst: Instance):
    order = path_order(inst)
    types = compute_type_partition(inst)
    reps = [members[0] for members in types.members]
    scale = lcm(inst.agent_count, *(
        x.denominator for agent in reps for x in inst.utilities[agent]
    ))
    prefix = []
    for agent in reps:
        row = inst.utilities[agent]
        acc = [0]
        for v in order:
            acc.append(acc[-1] + int(row[v] * scale))
        prefix.append(acc)
    return order, types, scale, prefix


def _path_dp_run(inst: Instance):
    """Prefix DP; returns (order, types, tables, backpointers)."""
    order, types, scale, prefix = _typed_path_setup(inst)
    threshold = scale // inst.agent_count
    m = len(order)
    p = types.type_count
    counts = types.agents_per_type

    zero = (0,) * p
    tables: list[dict[tuple[int, ...], Optional[tuple]]] = [{zero: None}]
    for i in range(1, m + 1):
        entry: dict[tuple[int, ...], Optional[tuple]] = {}
        for s in range(i):
            for t in range(p):
                if prefix[t][i] - prefix[t][s] < threshold:
                    continue
                for vec in tables[s]:
                    if vec[t] >= counts[t]:
                        continue
                    grown = vec[:t] + (vec[t] + 1,) + vec[t + 1 :]
                    if grown not in entry:
                        entry[grown] = ("piece", s, t, vec)
        for vec in tables[i - 1]:
            if vec not in entry:
                entry[vec] = ("skip",)
        tables.append(entry)
    return order, types, tables


def compute_path_dp_table(inst: Instance) -> PathDpTable:
    order, types, tables = _path_dp_run(inst)
    return PathDpTable(
        order=tuple(order),
        type_counts=types.agents_per_type,
        reachable=tuple(frozenset(t.keys()) for t in tables),
    )


def prop_path_typed(inst: Instance) -> SolveReport:
    """Proportionality on paths, exponential only in the number of types."""
    order, types, tables = _path_dp_run(inst)
    m = len(order)
    full = types.agents_per_type
    if full not in tables[m]:
        return make_report(inst, "path-dp", None)

    pieces: list[tuple[int, int, int]] = []  # (start, end, type), positions
    i, vec = m, full
    while i > 0:
        bp = tables[i][vec]
        if bp is None:
            break
        if bp[0] == "skip":
            i -= 1
        else:
            _, s, t, prev = bp
            pieces.append((s, i, t))
            i, vec = s, prev

    by_type: list[list[tuple[int, int]]] = [[] for _ in range(types.type_count)]
    for s, e, t in sorted(pieces):
        by_type[t].append((s, e))
    bundles = [frozenset()] * inst.agent_count
    for t, members in enumerate(types.members):
        for agent, (s, e) in zip(members, by_type[t]):
            bundles[agent] = frozenset(order[pos] for pos in range(s, e))
    return make_report(inst, "path-dp", Allocation(tuple(bundles)))


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class TreeDpTable:
    """Best owner value per (vertex, owner, satisfied-set) over the rooted tree.

    ``entries[(v, i, S)]`` is the maximum value the owner i can keep from a
    bundle containing v inside v's subtree while every agent in bitmask S is
    assigned a disjoint connected bundle there worth at least 1/n to her;
    ``None`` marks infeasibility.
    """

    root: int
    entries: dict[tuple[int, int, int], Optional[Fraction]]


def _set_partitions(members: Sequence[int], max_blocks: int) -> Iterator[list[int]]:
    """Partitions of ``members`` into at most ``max_blocks`` bitmask blocks.

    Restricted-growth order: deterministic and duplicate-free.
    """
    if not members:
        return
    blocks: list[int] = []

    def rec(idx: int) -> Iterator[list[int]]:
        if idx == len(members):
            yield list(blocks)
            return
        bit = 1 << members[idx]
        for b in range(len(blocks)):
            blocks[b] |= bit
            yield from rec(idx + 1)
            blocks[b] &= ~bit
        if len(blocks) < max_blocks:
            blocks.append(bit)
            yield from rec(idx + 1)
            blocks.pop()

    yield from rec(0)


def _tree_dp_run(inst: Instance):
    g = inst.graph
    if not classify(g).is_tree:
        raise InputError("the item graph is not a tree")
    n = inst.agent_count
    view = root_tree(g, 0)
    share = Fraction(1, n)

    subval = [
        [bundle_value(inst, i, view.subtree[v]) for v in range(g.vertex_count)]
        for i in range(n)
    ]

    entries: dict[tuple[int, int, int], Optional[Fraction]] = {}
    info: dict[tuple[int, int, int], tuple] = {}

    for v in view.postorder:
        kids = view.children[v]
        for i in range(n):
            others = [j for j in range(n) if j != i]
            for S in _submasks(others):
                key = (v, i, S)
                if not kids:
                    entries[key] = inst.utilities[i][v] if S == 0 else None
                    info[key] = ("leaf",)
                    continue
                if S == 0:
                    entries[key] = subval[i][v]
                    info[key] = ("whole",)
                    continue
                members = sorted(_bits(S))
                best: Optional[Fraction] = None
                best_info: Optional[tuple] = None
                for parts in _set_partitions(members, len(kids)):
                    rows = []
                    modes_per_part: list[list] = []
                    feasible = True
                    for part in parts:
                        row = []
                        modes = []
                        for z in kids:
                            ext = entries[(z, i, part)]
                            if ext is not None:
                                row.append(ext)
                                modes.append(("extend", None))
                                continue
                            owner = None
                            for j in sorted(_bits(part)):
                                sub = entries[(z, j, part & ~(1 << j))]
                                if sub is not None and sub >= share:
                                    owner = j
                                    break
                            if owner is None:
                                row.append(ABSENT)
                                modes.append(None)
                            else:
                                row.append(Fraction(0))
                                modes.append(("handoff", owner))
                        if all(w is ABSENT for w in row):
                            feasible = False
                            break
                        rows.append(tuple(row))
                        modes_per_part.append(modes)
                    if not feasible:
                        continue
                    for _ in range(len(kids) - len(parts)):
                        rows.append(tuple(subval[i][z] for z in kids))
                    result = solve_matching(MatchingProblem(tuple(rows), "max"))
                    if result is None:
                        continue
                    total = result.total
                    if best is None or total > best:
                        best = total
                        best_info = ("split", parts, result.assignment, modes_per_part)
                if best is None:
                    entries[key] = None
                else:
                    entries[key] = inst.utilities[i][v] + best
                    assert best_info is not None
                    info[key] = best_info
    return view, entries, info


def _submasks(members: Sequence[int]) -> Iterator[int]:
    for r in range(1 << len(members)):
        mask = 0
        for idx, agent in enumerate(members):
            if r >> idx & 1:
                mask |= 1 << agent
        yield mask


def _bits(mask: int) -> Iterator[int]:
    while mask:
        v = mask & -mask
        yield v.bit_length() - 1
        mask &= mask - 1


def compute_tree_dp_table(inst: Instance) -> TreeDpTable:
    view, entries, _ = _tree_dp_run(inst)
    return TreeDpTable(root=view.root, entries=entries)


def prop_tree_fpt(inst: Instance) -> SolveReport:
    """Proportionality on trees, exponential only in the number of agents."""
    view, entries, info = _tree_dp_run(inst)
    n = inst.agent_count
    share = Fraction(1, n)
    full = (1 << n) - 1

    owner = None
    for i in range(n):
        value = entries[(view.root, i, full & ~(1 << i))]
        if value is not None and value >= share:
            owner = i
            break
    if owner is None:
        return make_report(inst, "tree-fpt", None)

    bundles: list[set[int]] = [set() for _ in range(n)]

    def build(v: int, i: int, S: int) -> None:
        node = info[(v, i, S)]
        if node[0] == "leaf":
            bundles[i].add(v)
            return
        if node[0] == "whole":
            bundles[i] |= view.subtree[v]
            return
        _, parts, assignment, modes_per_part = node
        bundles[i].add(v)
        kids = view.children[v]
        taken = set()
        for p_idx, part in enumerate(parts):
            z = kids[assignment[p_idx]]
            taken.add(z)
            mode = modes_per_part[p_idx][assignment[p_idx]]
            assert mode is not None
            if mode[0] == "extend":
                build(z, i, part)
            else:
                j = mode[1]
                build(z, j, part & ~(1 << j))
        for z in kids:
            if z not in taken:
                bundles[i] |= view.subtree[z]

    build(view.root, owner, full & ~(1 << owner))
    return make_report(
        inst, "tree-fpt", Allocation(tuple(frozenset(b) for b in bundles))
    )


# ---------------------------------------------------------------------------
# envy-freeness on paths


@dataclass(frozen=True)
class EfGuess:
    """One guessed own-bundle value per agent type (0 admits empty bundles)."""

    values: tuple[Fraction, ...]


def ef_path_with_guess(inst: Instance, guess: EfGuess) -> Optional[Allocation]:
    """Complete envy-free allocation realizing the guess, if one exists.

    Every piece of the tiling owned by type t must be worth exactly
    ``guess.values[t]`` to t and at most ``guess.values[s]`` to every other
    type s; type t must own exactly its agent count of pieces unless its
    guess is 0, in which case fewer (empty bundles) are allowed.
    """
    order, types, scale, prefix = _typed_path_setup(inst)
    if len(guess.values) != types.type_count:
        raise InputError("one guessed value per agent type is required")
    targets = [int(Fraction(v) * scale) for v in guess.values]
    if any(Fraction(v) * scale != t for v, t in zip(guess.values, targets)):
        # a target that is not a multiple of the utility grid can never be hit
        return None
    return _ef_tile(inst, order, types, prefix, targets)


def _ef_tile(inst, order, types, prefix, targets) -> Optional[Allocation]:
    """Tile the whole path with pieces respecting exact/at-most constraints."""
    m = len(order)
    p = types.type_count
    counts = types.agents_per_type

    allowed: list[list[tuple[int, int]]] = [[] for _ in range(m + 1)]  # end -> (start, type)
    for s in range(m):
        for e in range(s + 1, m + 1):
            for t in range(p):
                if prefix[t][e] - prefix[t][s] != targets[t]:
                    continue
                if any(
                    prefix[o][e] - prefix[o][s] > targets[o]
                    for o in range(p)
                    if o != t
                ):
                    continue
                allowed[e].append((s, t))

    zero = (0,) * p
    tables: list[dict[tuple[int, ...], Optional[tuple]]] = [{zero: None}]
    for e in range(1, m + 1):
        entry: dict[tuple[int, ...], Optional[tuple]] = {}
        for s, t in allowed[e]:
            for vec in tables[s]:
                if vec[t] >= counts[t]:
                    continue
                grown = vec[:t] + (vec[t] + 1,) + vec[t + 1 :]
                if grown not in entry:
                    entry[grown] = (s, t, vec)
        tables.append(entry)

    accepted = None
    for vec in tables[m]:
        if all(
            vec[t] == counts[t] or (vec[t] < counts[t] and targets[t] == 0)
            for t in range(p)
        ):
            accepted = vec
            break
    if accepted is None:
        return None

    pieces: list[tuple[int, int, int]] = []
    e, vec = m, accepted
    while e > 0:
        bp = tables[e][vec]
        assert bp is not None
        s, t, prev = bp
        pieces.append((s, e, t))
        e, vec = s, prev

    by_type: list[list[tuple[int, int]]] = [[] for _ in range(p)]
    for s, e, t in sorted(pieces):
        by_type[t].append((s, e))
    bundles = [frozenset()] * inst.agent_count
    for t, members in enumerate(types.members):
        for agent, (s, e) in zip(members, by_type[t]):
            bundles[agent] = frozenset(order[pos] for pos in range(s, e))
    return Allocation(tuple(bundles))


def ef_path_typed(inst: Instance) -> SolveReport:
    """Complete envy-freeness on paths by guessing per-type own values.

    Candidate guesses per type are the values of contiguous intervals plus 0.
    A complete tiling into k <= n pieces forces every accepted guess g_t into
    [1/k, 1/n_t] (the path's total value 1 must be split among pieces each
    worth at most g_t to type t, and n_t own pieces worth exactly g_t each
    cannot exceed 1), so interval values outside [1/n, 1/n_t] are skipped.
    The surviving guesses are tried in lexicographic order.
    """
    order, types, scale, prefix = _typed_path_setup(inst)
    m = len(order)
    p = types.type_count
    n = inst.agent_count
    counts = types.agents_per_type

    candidate_lists: list[list[int]] = []
    for t in range(p):
        vals = {
            prefix[t][e] - prefix[t][s] for s in range(m) for e in range(s + 1, m + 1)
        }
        lo = Fraction(scale, n)
        hi = Fraction(scale, counts[t])
        keep = sorted(v for v in vals if lo <= v <= hi)
        candidate_lists.append([0] + keep)

    for targets in product(*candidate_lists):
        witness = _ef_tile(inst, order, types, prefix, list(targets))
        if witness is not None:
            quotas = tuple(
                Fraction(targets[types.type_of_agent[a]], scale)
                for a in range(inst.agent_count)
            )
            return make_report(inst, "ef-path", witness, quotas=quotas)
    return make_report(inst, "ef-path", None)


# ---------------------------------------------------------------------------
# routing


_METHODS_FOR_PROBLEM = {
    "prop": ("auto", "oracle", "greedy", "path-dp", "star", "tree-fpt"),
    "ef-complete": ("auto", "oracle", "ef-path"),
    "mms": ("auto", "oracle", "mms-tree"),
}


def dispatch(
    inst: Instance,
    problem: str,
    method: str = "auto",
    budget: Optional[OracleBudget] = None,
) -> SolveReport:
    """Route an instance to a solver and return its report.

    ``problem`` is one of prop, ef-complete, mms; ``method`` overrides the
    automatic choice and is validated against the problem and the graph class
    before any computation happens.
    """
    from .mms_tree import solve_mms_tree  # deferred: mms_tree builds on this module's peers

    problem = problem.replace("_", "-")
    if problem not in _METHODS_FOR_PROBLEM:
        raise InputError(f"unknown problem {problem!r}")
    if method not in _METHODS_FOR_PROBLEM[problem]:
        raise InputError(f"method {method!r} does not solve problem {problem!r}")

    cls = classify(inst.graph)
    single_type = compute_type_partition(inst).type_count == 1

    if method == "auto":
        if problem == "prop":
            if cls.is_path and single_type:
                method = "greedy"
            elif cls.is_path:
                method = "path-dp"
            elif cls.is_star:
                method = "star"
            elif cls.is_tree:
                method = "tree-fpt"
            else:
                method = "oracle"
        elif problem == "ef-complete":
            method = "ef-path" if cls.is_path else "oracle"
        else:
            method = (
                "mms-tree"
                if cls.is_tree and inst.item_count >= inst.agent_count
                else "oracle"
            )
    else:
        _validate_method(inst, cls, problem, method, single_type)

    logger.debug("dispatch: problem=%s method=%s", problem, method)

    if method == "greedy":
        return prop_path_greedy(inst)
    if method == "path-dp":
        return prop_path_typed(inst)
    if method == "star":
        return prop_star(inst)
    if method == "tree-fpt":
        return prop_tree_fpt(inst)
    if method == "ef-path":
        return ef_path_typed(inst)
    if method == "mms-tree":
        return solve_mms_tree(inst)
    if problem == "prop":
        return oracle_prop(inst, budget)
    if problem == "ef-complete":
        return oracle_ef_complete(inst, budget)
    return oracle_mms_exists(inst, budget)


def _validate_method(inst, cls, problem, method, single_type) -> None:
    if method == "oracle":
        return
    if method == "greedy" and not (cls.is_path and single_type):
        raise InputError("greedy needs a path and identical agents")
    if method == "path-dp" and not cls.is_path:
        raise InputError("the path solver needs a path graph")
    if method == "star" and not cls.is_star:
        raise InputError("the star solver needs a star graph")
    if method == "tree-fpt" and not cls.is_tree:
        raise InputError("the tree solver needs a tree graph")
    if method == "ef-path" and not cls.is_path:
        raise InputError("the envy-free path solver needs a path graph")
    if method == "mms-tree" and not (
        cls.is_tree and inst.item_count >= inst.agent_count
    ):
        raise InputError("the tree maximin solver needs a tree with enough items")
