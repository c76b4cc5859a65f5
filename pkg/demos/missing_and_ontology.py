"""
Bridging a missing node, matching through an ontology
======================================================

Two relaxations of exact matching.

*Missing mode* lets an agent sense a wanted label up to two hops away and
jump across the gap, at a quality cost, so a planted node deleted from the
data no longer cuts its neighbours off.

*Imprecise mode* consults an ontology: a pattern node labeled ``person`` may
pair with data labeled ``Alice`` when ``person > Alice``, with reduced
quality and so a smaller deposit.
"""

from assist import match
from assist.extensions import Mode
from assist.graph import PATTERN
from assist.pheromone import Params
from assist.swarm import run_until_converged
from assist.testkit import load_fixture

fx = load_fixture("missing")
print(fx.description)
for mode in (Mode(), fx.mode):
    result, _ = match(fx.pattern, fx.data, mode=mode, seed=0)
    hits = sum(result.mapping.get(u) == x for u, x in fx.planted_map.items())
    print(f"  mode {str(mode) or 'exact':8s} mapping {result.mapping}  "
          f"recall {hits}/{len(fx.planted_map)}")

###############################################################################
# The ontology fixture: person-city is only matched through subsumption,
# city-org exactly.  The imprecise edge ends up with less pheromone.

fx = load_fixture("ontology")
print("\n" + fx.description)
state, _ = run_until_converged(fx.pattern, fx.data, Params(), fx.mode, seed=0,
                               ontology=fx.ontology)
for a, b in (("p", "c"), ("c", "o")):
    e = fx.pattern.edge_from(a, b)
    print(f"  {fx.pattern.label(a)}-{fx.pattern.label(b)}: edge field {state.edge(PATTERN, e):.3f}")
result, _ = match(fx.pattern, fx.data, mode=fx.mode, seed=0, ontology=fx.ontology)
print("  mapping:", result.mapping)
