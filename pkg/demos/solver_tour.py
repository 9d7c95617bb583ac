"""A tour of the specialized solvers behind `dispatch`.

The dispatcher looks at the graph's shape and the question being asked,
then routes to the cheapest routine that decides it exactly: a greedy
sweep for paths with identical agents, a prefix DP for paths with few
agent types, a matching step for stars, a subtree DP for trees, a
quota-guessing DP for envy-freeness on paths, and exhaustive search as
the fallback for everything else.

Run:  python3 demos/solver_tour.py
"""

from fractions import Fraction

from graphfair import Instance, ItemGraph, dispatch


def show(title, inst, problem="prop"):
    report = dispatch(inst, problem)
    verdict = "yes" if report.decision else "no"
    print(f"{title}")
    print(f"  routed to: {report.method:<8}  answer: {verdict}")
    if report.witness is not None:
        pretty = []
        for name, bundle in zip(inst.agent_names, report.witness.bundles):
            items = ",".join(inst.graph.labels[v] for v in sorted(bundle))
            pretty.append(f"{name}:{{{items}}}")
        print(f"  witness: {'  '.join(pretty)}")
    print()


def path(m):
    return ItemGraph(tuple(f"v{i}" for i in range(1, m + 1)), tuple((i, i + 1) for i in range(m - 1)))


F = Fraction

# 1. Path, all agents identical -> single left-to-right sweep.
uniform = (F(1, 4),) * 4
show(
    "Path, two identical agents (greedy sweep):",
    Instance(path(4), ("p1", "p2"), (uniform, uniform)),
)

# 2. Path, two distinct tastes -> prefix DP over per-type satisfied counts.
show(
    "Path, two disagreeing agents (prefix DP):",
    Instance(
        path(4),
        ("left", "right"),
        ((F(1, 2), F(1, 2), 0, 0), (0, 0, F(1, 2), F(1, 2))),
    ),
)

# 3. Star -> try each owner for the center, match leaves to the rest.
star = ItemGraph(("hub", "l1", "l2", "l3"), ((0, 1), (0, 2), (0, 3)))
show(
    "Star, three agents (center owner + leaf matching):",
    Instance(
        star,
        ("a", "b", "c"),
        (
            (F(7, 10), F(1, 10), F(1, 10), F(1, 10)),
            (0, F(1, 3), F(1, 3), F(1, 3)),
            (0, F(1, 3), F(1, 3), F(1, 3)),
        ),
    ),
)

# 4. A tree that is neither path nor star -> subtree DP.
broom = ItemGraph(("a", "b", "c", "d", "e"), ((0, 1), (1, 2), (2, 3), (2, 4)))
show(
    "Broom tree, two agents (subtree DP):",
    Instance(
        broom,
        ("x", "y"),
        (
            (F(1, 2), F(1, 8), F(1, 8), F(1, 8), F(1, 8)),
            (F(1, 10), F(1, 10), F(1, 10), F(7, 20), F(7, 20)),
        ),
    ),
)

# 5. Envy-freeness on a path -> guess each type's exact piece value,
#    then tile the path with pieces hitting those targets.
show(
    "Path, envy-free and complete (quota-guessing DP):",
    Instance(
        path(4),
        ("e1", "e2"),
        ((F(1, 2), F(1, 2), 0, 0), (0, 0, F(1, 2), F(1, 2))),
    ),
    problem="ef-complete",
)

# 6. Anything with a cycle falls back to exhaustive search.
ring = ItemGraph(("r1", "r2", "r3", "r4"), ((0, 1), (1, 2), (2, 3), (3, 0)))
show(
    "4-cycle, two agents (no shortcut, exhaustive oracle):",
    Instance(ring, ("u", "w"), ((F(1, 4),) * 4, (F(1, 4),) * 4)),
)
