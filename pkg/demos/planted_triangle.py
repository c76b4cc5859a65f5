"""
A planted triangle in two random graphs
=======================================

Both graphs start from the triangle A-B-C and are then grown at random to
15 nodes each.  The swarm has no idea where the triangle is; it only knows
which nodes share labels.  We watch the node pheromone drain away from
everything except the common structure.
"""

from assist import match
from assist.graph import DATA, PATTERN
from assist.pheromone import Params
from assist.swarm import run_until_converged
from assist.testkit import load_fixture

fx = load_fixture("planted_triangle")
print(fx.description)
print(f"pattern: {len(fx.pattern)} nodes, {len(fx.pattern.edges)} edges")
print(f"data:    {len(fx.data)} nodes, {len(fx.data.edges)} edges")

###############################################################################
# Every peered node starts with the same small amount of pheromone.  We print
# the pattern-side field every 20 waves.

snapshots = {}


def keep(stats, state):
    if stats.wave % 20 == 0 or stats.wave == 1:
        snapshots[stats.wave] = dict(state.node_field[PATTERN])


state, report = run_until_converged(fx.pattern, fx.data, Params(), seed=1, on_wave=keep)
print(f"\nconverged after {report.waves_run} waves ({report.terminated_by})")

nodes = fx.pattern.node_ids
print("wave " + " ".join(f"{fx.pattern.label(n):>5}" for n in nodes))
for wave, field in sorted(snapshots.items()):
    print(f"{wave:4d} " + " ".join(f"{field.get(n, 0.0):5.2f}" for n in nodes))

###############################################################################
# The extracted pattern subgraph keeps the triangle.  S hangs off A in both
# graphs, so it survives too; so does any other edge the two random growths
# happen to share.

result, _ = match(fx.pattern, fx.data, seed=1)
print("\npattern subgraph:", [fx.pattern.label(n) for n in result.pattern_subgraph.nodes])
print("data subgraph:   ", [fx.data.label(n) for n in result.data_subgraph.nodes])
for u, x in sorted(result.mapping.items()):
    print(f"  {u} ({fx.pattern.label(u)}) -> {x} ({fx.data.label(x)})")
print("data-side field on the planted images:",
      {x: round(state.node(DATA, x), 3) for x in sorted(fx.planted_map.values())})
