"""
How close does the swarm get to the optimum?
============================================

On small graphs the exact maximum common subgraph can be found by branch
and bound.  We plant fragments of 2 to 5 nodes in graphs of at most 10
nodes, run both, and compare mapping sizes.
"""

import numpy as np

from assist import match
from assist.graph import PATTERN
from assist.testkit import (PlantSpec, compare_to_oracle, exact_mcs, generate_pair,
                            random_connected_graph)

ratios = []
print("seed  planted  oracle  swarm  ratio")
for seed in range(10):
    rng = np.random.default_rng([2, seed])
    k = 2 + seed % 4
    fragment = random_connected_graph(k, "ABCDEF", rng, 0.3, role=PATTERN)
    pair = generate_pair(PlantSpec(fragment, extra_nodes=int(rng.integers(3, 10 - k + 1)),
                                   extra_edges=2, alphabet=tuple("ABCDEFGH"), rng_seed=seed))
    result, _ = match(pair.pattern, pair.data, seed=seed)
    oracle = exact_mcs(pair.pattern, pair.data)
    cmp = compare_to_oracle(result, oracle, pair.pattern, pair.data, pair.planted_map)
    ratios.append(cmp.size_ratio)
    print(f"{seed:4d}  {k:7d}  {oracle.size:6d}  {len(result.mapping):5d}  {cmp.size_ratio:5.2f}")

print(f"\nmedian size ratio {np.median(ratios):.2f}; "
      f"{sum(r >= 0.8 for r in ratios)}/{len(ratios)} runs at 0.8 or better")
