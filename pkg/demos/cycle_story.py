"""The 8-cycle that defeats maximin fairness.

Four agents share eight items arranged in a ring; bundles must stay
connected (arcs of the ring).  Every agent can guarantee herself exactly 1/4
by proposing a suitable quartering — yet no single allocation gives all four
agents 1/4 at once.  This script walks through the numbers.

Run:  python3 demos/cycle_story.py
"""

from fractions import Fraction

from graphfair import (
    Allocation,
    bundle_value,
    compute_type_partition,
    is_mms_allocation,
    is_valid,
    oracle_mms_exists,
    oracle_mms_values,
)
from graphfair.generators import fixture_cycle8
from graphfair.graphs import enumerate_connected_partitions


def show(title):
    print()
    print(title)
    print("-" * len(title))


inst = fixture_cycle8()
labels = inst.graph.labels

show("The instance")
print(f"items: {', '.join(labels)} in a ring")
for name, row in zip(inst.agent_names, inst.utilities):
    cells = ", ".join(f"{labels[v]}={row[v]}" for v in range(8))
    print(f"{name}: {cells}")
types = compute_type_partition(inst)
print(f"agent types: {types.type_count} (agents {types.members[0]} and {types.members[1]} are identical)")

show("Everyone's maximin share is exactly 1/4")
values = oracle_mms_values(inst)
for name, v in zip(inst.agent_names, values):
    print(f"{name}: mms = {v}")

show("The two quarterings that witness those shares")
quarter = Fraction(1, 4)
for partition in enumerate_connected_partitions(inst.graph, 4):
    # a quartering witnesses an agent's share if she values every arc >= 1/4
    fans = [
        name
        for name, _ in zip(inst.agent_names, inst.utilities)
        if all(
            bundle_value(inst, inst.agent_names.index(name), part) >= quarter
            for part in partition
        )
    ]
    if fans:
        arcs = "  ".join("{" + ",".join(labels[v] for v in sorted(part)) + "}" for part in partition)
        print(f"{arcs}   satisfies {', '.join(fans)}")

show("But no allocation satisfies all four at once")
report = oracle_mms_exists(inst)
print(f"exhaustive search says: {'yes' if report.decision else 'no'}")
assert not report.decision

show("Spot-check: hand the first quartering to the agents directly")
first = next(
    p
    for p in enumerate_connected_partitions(inst.graph, 4)
    if all(len(part) == 2 for part in p)
)
alloc = Allocation(tuple(first))
print(f"valid (connected, disjoint): {is_valid(inst, alloc)}")
print(f"meets every maximin share:   {is_mms_allocation(inst, alloc, values)}")
for name, part in zip(inst.agent_names, alloc.bundles):
    agent = inst.agent_names.index(name)
    arc = "{" + ",".join(labels[v] for v in sorted(part)) + "}"
    print(f"  {name} holds {arc}, worth {bundle_value(inst, agent, part)} to her")
print()
print("Whichever of the two quarterings you hand out, one pair of identical")
print("agents ends up with an arc they value below 1/4 — the ring has no")
print("allocation meeting all four shares, even though each share is")
print("individually achievable.")
