"""Core data model: item graphs, utility profiles, allocations, verifiers.

An instance couples an undirected graph over indivisible items with one
additive utility row per agent; every row is made of exact ``Fraction``
values and must sum to exactly 1.  Bundles handed to an agent must induce
a connected subgraph, and an allocation never has to hand out every item
unless a predicate explicitly asks for completeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "InputError",
    "BudgetExceeded",
    "ItemGraph",
    "Instance",
    "AgentTypePartition",
    "Allocation",
    "SolveReport",
    "normalize_utilities",
    "bundle_value",
    "is_valid",
    "is_proportional",
    "is_envy_free",
    "is_complete",
    "is_mms_allocation",
    "compute_type_partition",
    "make_report",
]


class InputError(ValueError):
    """Malformed instance data or an impossible solve/verify request."""


class BudgetExceeded(RuntimeError):
    """An exhaustive-search budget (items, agents, or explored nodes) ran out."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class ItemGraph:
    """Undirected simple graph over items.

    Vertices are identified by index 0..m-1; ``labels`` carries the external
    names.  Edges are stored canonically as sorted index pairs.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    _adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) < 1:
            raise InputError("an item graph needs at least one vertex")
        if len(set(labels)) != len(labels):
            raise InputError("vertex labels must be distinct")
        m = len(labels)
        canon = []
        seen = set()
        for e in self.edges:
            a, b = e
            if not (0 <= a < m and 0 <= b < m):
                raise InputError(f"edge {e} has an endpoint outside 0..{m - 1}")
            if a == b:
                raise InputError(f"self-loop at vertex {a}")
            pair = (a, b) if a < b else (b, a)
            if pair in seen:
                raise InputError(f"duplicate edge {pair}")
            seen.add(pair)
            canon.append(pair)
        canon.sort()
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", tuple(canon))
        adj = [[] for _ in range(m)]
        for a, b in canon:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(x)) for x in adj))

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown vertex label {label!r}") from None


@dataclass(frozen=True)
class Instance:
    """An item graph plus one exactly-normalized utility row per agent."""

    graph: ItemGraph
    agent_names: tuple[str, ...]
    utilities: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        names = tuple(self.agent_names)
        if len(names) < 1:
            raise InputError("an instance needs at least one agent")
        if len(set(names)) != len(names):
            raise InputError("agent names must be distinct")
        m = self.graph.vertex_count
        if len(self.utilities) != len(names):
            raise InputError("one utility row per agent is required")
        rows = []
        for name, row in zip(names, self.utilities):
            vals = tuple(_as_fraction(x) for x in row)
            if len(vals) != m:
                raise InputError(f"utility row for {name!r} must have {m} entries")
            if any(v < 0 for v in vals):
                raise InputError(f"negative utility for agent {name!r}")
            if sum(vals) != 1:
                raise InputError(
                    f"utilities of agent {name!r} sum to {sum(vals)}, expected exactly 1"
                )
            rows.append(vals)
        object.__setattr__(self, "agent_names", names)
        object.__setattr__(self, "utilities", tuple(rows))

    @property
    def agent_count(self) -> int:
        return len(self.agent_names)

    @property
    def item_count(self) -> int:
        return self.graph.vertex_count

    def agent_index(self, name: str) -> int:
        try:
            return self.agent_names.index(name)
        except ValueError:
            raise InputError(f"unknown agent name {name!r}") from None


@dataclass(frozen=True)
class AgentTypePartition:
    """Agents grouped by identical utility rows, numbered in first-occurrence order."""

    type_of_agent: tuple[int, ...]

    @property
    def type_count(self) -> int:
        return max(self.type_of_agent) + 1

    @property
    def agents_per_type(self) -> tuple[int, ...]:
        counts = [0] * self.type_count
        for t in self.type_of_agent:
            counts[t] += 1
        return tuple(counts)

    @property
    def members(self) -> tuple[tuple[int, ...], ...]:
        groups: list[list[int]] = [[] for _ in range(self.type_count)]
        for agent, t in enumerate(self.type_of_agent):
            groups[t].append(agent)
        return tuple(tuple(g) for g in groups)


@dataclass(frozen=True)
class Allocation:
    """One bundle (possibly empty) per agent, in agent order.

    Disjointness and connectivity are judged by ``is_valid``, not enforced at
    construction, so a parsed allocation can be inspected even when broken.
    """

    bundles: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a solve: decision, method tag, optional witness and targets.

    ``achieved`` is always recomputed from the witness by :func:`make_report`;
    solvers never copy internal numbers into it.
    """

    decision: bool
    method: str
    witness: Optional[Allocation]
    achieved: Optional[tuple[Fraction, ...]]
    quotas: Optional[tuple[Fraction, ...]] = None


def normalize_utilities(values: Iterable) -> tuple[Fraction, ...]:
    """Scale a nonnegative rational vector so it sums to exactly 1.

    Offered as explicit preprocessing; the :class:`Instance` constructor never
    normalizes on its own.
    """
    vals = [_as_fraction(x) for x in values]
    if any(v < 0 for v in vals):
        raise InputError("cannot normalize a vector with negative entries")
    total = sum(vals)
    if total == 0:
        raise InputError("cannot normalize the all-zero vector")
    return tuple(v / total for v in vals)


def bundle_value(inst: Instance, agent: int, vertices: Iterable[int]) -> Fraction:
    """Additive value of a vertex set for one agent (empty set is worth 0)."""
    row = inst.utilities[agent]
    total = Fraction(0)
    for v in vertices:
        total += row[v]
    return total


def _check_alloc_shape(inst: Instance, alloc: Allocation) -> None:
    if len(alloc.bundles) != inst.agent_count:
        raise InputError(
            f"allocation has {len(alloc.bundles)} bundles for {inst.agent_count} agents"
        )
    m = inst.item_count
    for b in alloc.bundles:
        for v in b:
            if not (0 <= v < m):
                raise InputError(f"bundle vertex {v} outside 0..{m - 1}")


def is_valid(inst: Instance, alloc: Allocation) -> bool:
    """True iff bundles are pairwise disjoint and each induces a connected subgraph."""
    from .graphs import is_connected_set  # local import: graphs depends on model types

    _check_alloc_shape(inst, alloc)
    seen: set[int] = set()
    for b in alloc.bundles:
        if seen & b:
            return False
        seen |= b
    return all(is_connected_set(inst.graph, b) for b in alloc.bundles)


def is_proportional(inst: Instance, alloc: Allocation) -> bool:
    """True iff every agent values her own bundle at 1/n or more.

    Validity is a separate predicate; compose with ``is_valid`` when needed.

    >>> g = ItemGraph(("v1", "v2", "v3"), ((0, 1), (1, 2)))
    >>> u = (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    >>> inst = Instance(g, ("a", "b"), (u, u))
    >>> is_proportional(inst, Allocation((frozenset({0}), frozenset({1, 2}))))
    True
    """
    _check_alloc_shape(inst, alloc)
    share = Fraction(1, inst.agent_count)
    return all(
        bundle_value(inst, i, b) >= share for i, b in enumerate(alloc.bundles)
    )


def is_envy_free(inst: Instance, alloc: Allocation) -> bool:
    """True iff no agent values another agent's bundle above her own."""
    _check_alloc_shape(inst, alloc)
    values = [
        [bundle_value(inst, i, b) for b in alloc.bundles]
        for i in range(inst.agent_count)
    ]
    return all(
        values[i][i] >= values[i][j]
        for i in range(inst.agent_count)
        for j in range(inst.agent_count)
    )


def is_complete(inst: Instance, alloc: Allocation) -> bool:
    """True iff the bundles cover every item."""
    _check_alloc_shape(inst, alloc)
    covered: set[int] = set()
    for b in alloc.bundles:
        covered |= b
    return len(covered) == inst.item_count


def is_mms_allocation(
    inst: Instance, alloc: Allocation, mms: Sequence[Fraction]
) -> bool:
    """True iff the allocation is valid and meets each agent's maximin share."""
    if len(mms) != inst.agent_count:
        raise InputError("one maximin-share value per agent is required")
    if not is_valid(inst, alloc):
        return False
    return all(
        bundle_value(inst, i, b) >= mms[i] for i, b in enumerate(alloc.bundles)
    )


def compute_type_partition(inst: Instance) -> AgentTypePartition:
    """Group agents with identical utility rows.

    >>> g = ItemGraph(("v1", "v2"), ((0, 1),))
    >>> u = (Fraction(1, 2), Fraction(1, 2))
    >>> w = (Fraction(1), Fraction(0))
    >>> compute_type_partition(Instance(g, ("a", "b", "c"), (u, w, u))).type_of_agent
    (0, 1, 0)
    """
    first_seen: dict[tuple[Fraction, ...], int] = {}
    assignment = []
    for row in inst.utilities:
        if row not in first_seen:
            first_seen[row] = len(first_seen)
        assignment.append(first_seen[row])
    return AgentTypePartition(tuple(assignment))


def make_report(
    inst: Instance,
    method: str,
    witness: Optional[Allocation],
    quotas: Optional[Sequence[Fraction]] = None,
) -> SolveReport:
    """Assemble a report, recomputing achieved values from the witness."""
    achieved = None
    if witness is not None:
        achieved = tuple(
            bundle_value(inst, i, b) for i, b in enumerate(witness.bundles)
        )
    return SolveReport(
        decision=witness is not None,
        method=method,
        witness=witness,
        achieved=achieved,
        quotas=None if quotas is None else tuple(quotas),
    )
