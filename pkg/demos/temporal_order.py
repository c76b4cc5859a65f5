"""
Edge order matters in temporal mode
===================================

In temporal mode an agent walks two data edges, the second strictly later
than the first, and must find two pattern edges in the same order on the
way home.  The same labeled path matches when the timestamps agree and
draws no pheromone at all when they are reversed.
"""

from assist import match
from assist.graph import DATA
from assist.pheromone import Params
from assist.swarm import run_until_converged
from assist.testkit import load_fixture

for name in ("temporal", "temporal_reversed"):
    fx = load_fixture(name)
    print(f"\n{name}: {fx.description}")
    for e in fx.data.edges:
        print(f"  data edge {e}")
    log = []
    state, report = run_until_converged(fx.pattern, fx.data, Params(), fx.mode, seed=0, log=log)
    print(f"  {len(log)} completed loops, {report.waves_run} waves")
    for e in fx.data.edges:
        print(f"  edge field {e}: {state.edge(DATA, e):.4f}")
    result, _ = match(fx.pattern, fx.data, mode=fx.mode, seed=0)
    print("  mapping:", result.mapping or "none")
