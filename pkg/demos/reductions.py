"""Hardness gadgets: three classic problems disguised as fair division.

Deciding proportionality on a path, proportionality on a bipartite graph,
or envy-freeness on a star is NP-hard.  Each hardness proof is a gadget
that turns a source problem into an equivalent division instance, and the
gadgets are shipped as generators.  This script builds a yes and a no case
for each source problem, translates them, and lets the exhaustive oracle
confirm that the answers carry over.

Run:  python3 demos/reductions.py   (takes a few seconds; the no-cases
need the oracle to rule out every candidate allocation)
"""

from graphfair import (
    IndepSetInstance,
    ItemGraph,
    OracleBudget,
    PartitionInstance,
    X3cInstance,
    gen_indepset_ef_star,
    gen_partition_bipartite,
    gen_x3c_prop_path,
    oracle_ef_complete,
    oracle_prop,
)

budget = OracleBudget(max_items=15, max_agents=11, max_enumerated=50_000_000)


def check(title, inst, expected, problem="prop"):
    oracle = oracle_prop if problem == "prop" else oracle_ef_complete
    report = oracle(inst, budget=budget)
    verdict = "yes" if report.decision else "no"
    tag = "as expected" if report.decision == expected else "MISMATCH"
    print(f"  -> {inst.graph.vertex_count} items, {len(inst.agent_names)} agents;"
          f" oracle says {verdict} ({tag})")
    print()
    assert report.decision == expected, title


# --- exact cover by 3-sets --------------------------------------------------
print("Exact cover -> proportionality on a path")
print()

covered = X3cInstance(("x1", "x2", "x3"), (("x1", "x2", "x3"),))
print("  universe {x1,x2,x3}, one triple covering it exactly")
check("x3c yes", gen_x3c_prop_path(covered), expected=True)

stuck = X3cInstance(
    ("x1", "x2", "x3", "x4", "x5", "x6"),
    (("x1", "x2", "x3"), ("x1", "x4", "x5")),
)
print("  universe of six, two triples that overlap on x1 and miss x6")
check("x3c no", gen_x3c_prop_path(stuck), expected=False)

# --- number partition --------------------------------------------------------
print("Number partition -> proportionality on a double-hub bipartite graph")
print()

even = PartitionInstance((1, 2, 3))
print("  values 1,2,3 split as {1,2} vs {3}")
check("partition yes", gen_partition_bipartite(even), expected=True)

lopsided = PartitionInstance((1, 1, 4))
print("  values 1,1,4: no subset sums to 3")
check("partition no", gen_partition_bipartite(lopsided), expected=False)

# --- independent set ---------------------------------------------------------
print("Independent set -> envy-freeness on a star")
print()

path3 = ItemGraph(("a", "b", "c"), ((0, 1), (1, 2)))
print("  3-path, k=2: {a,c} is independent")
check("indepset yes", gen_indepset_ef_star(IndepSetInstance(path3, 2)),
      expected=True, problem="ef")

triangle = ItemGraph(("a", "b", "c"), ((0, 1), (1, 2), (0, 2)))
print("  triangle, k=2: every pair of vertices is adjacent")
check("indepset no", gen_indepset_ef_star(IndepSetInstance(triangle, 2)),
      expected=False, problem="ef")

print("All six translations agreed with the source problems.")
