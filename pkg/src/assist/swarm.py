"""Waves of stochastic agents and the outer loop to convergence.

An agent starts on a peered pattern node ``u`` and tries to close a loop:
jump to a data peer ``x`` of ``u``, walk one data edge to ``y``, jump back to
a pattern node ``v`` peered with ``y`` and adjacent to ``u``, and walk the
pattern edge ``v - u`` home.  A closed loop certifies that a pattern edge and
a data edge match; its deposit reinforces both.

Agents in a wave read one frozen snapshot and draw from their own random
stream, so a wave's outcome depends only on the seed and the wave number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._walk import AgentStream, Choice, CycleFailure, Snapshot, weighted_choice
from .extensions import Mode, Ontology, bridge_quality, temporal_cycle
from .graph import DATA, PATTERN, LabeledGraph
from .peering import PeerMap, build_label_index, peer_all
from .pheromone import (CycleRecord, Params, PheromoneState, Totals, evaporate,
                        field_totals, fold_wave, init_fields, propagate_quorum)

__all__ = [
    "weighted_choice",
    "Snapshot",
    "CycleFailure",
    "WaveStats",
    "ConvergenceReport",
    "agent_cycle",
    "agents_for",
    "run_wave",
    "prepare",
    "run_until_converged",
]

_DRAWS_PER_AGENT = 6


@dataclass(frozen=True)
class WaveStats:
    wave: int
    launched: int
    completed: int
    failed: int
    deposits_applied: int
    pattern_sum: float
    data_sum: float
    delta: float


@dataclass
class ConvergenceReport:
    waves_run: int
    terminated_by: str
    final_totals: Totals
    initial_totals: Totals
    seed: int
    history: list[WaveStats] = field(default_factory=list)
    peer_map: PeerMap | None = None


def agent_cycle(snap: Snapshot, u: str, rng) -> CycleRecord | CycleFailure:
    """Run one agent from pattern node `u`.

    Returns a :class:`CycleRecord` on success or a :class:`CycleFailure`
    naming the arrow (2: no data move, 3: no pattern neighbor to return to)
    where the loop broke.

    Raises
    ------
    ValueError
        If `u` has no peers.
    """
    if snap.mode is not None and snap.mode.temporal:
        return temporal_cycle(snap, u, rng)
    x = snap.entry(u).draw(rng)
    moves = snap.moves(u, x)
    if moves is None:
        return CycleFailure(2, "no data move")
    mv = moves.draw(rng)
    closes = snap.closures(u, mv)
    if closes is None:
        return CycleFailure(3, "no peered pattern neighbor")
    v, f = closes.draw(rng)
    quality = snap.peer_map.quality
    hops = len(mv.path)
    q = quality[(u, x)] * quality[(v, mv.target)]
    if hops > 1:
        q *= bridge_quality(hops, snap.params.imprecise_quality)
    return CycleRecord((u, v), (x, mv.target), mv.path, (f,), q, 3 + hops,
                       bridge_nodes=mv.bridge)


def agents_for(peer_map: PeerMap, params: Params) -> int:
    if params.agents_per_wave is not None:
        return params.agents_per_wave if peer_map.peered else 0
    return 10 * len(peer_map.peered)


def run_wave(state: PheromoneState, pattern: LabeledGraph, data: LabeledGraph,
             peer_map: PeerMap, params: Params, mode: Mode | None = None, seed: int = 0,
             log: list | None = None) -> tuple[PheromoneState, WaveStats]:
    """Launch one wave of agents, fold their deposits, evaporate, refresh quorum.

    Completed cycles are appended to `log` when one is given.
    """
    mode = mode or Mode()
    wave = state.wave_counter + 1
    before = field_totals(state)
    snap = Snapshot(state, pattern, data, peer_map, params, mode)
    peered = peer_map.peered
    n_agents = agents_for(peer_map, params)
    cycles: list[CycleRecord] = []
    if n_agents:
        tau0 = params.initial_node_pheromone
        nf, qf = state.node_field[PATTERN], state.quorum_field[PATTERN]
        weights = [tau0 + nf.get(u, 0.0) + (qf.get(u, 0.0) if params.quorum_modulation else 0.0)
                   for u in peered]
        starts = Choice(peered, weights)
        rows = np.random.default_rng([seed, wave]).random((n_agents, _DRAWS_PER_AGENT)).tolist()
        for i, row in enumerate(rows):
            rng = AgentStream(row, (seed, wave, i))
            out = agent_cycle(snap, starts.draw(rng), rng)
            if isinstance(out, CycleRecord):
                cycles.append(out)
    applied = fold_wave(state, cycles, params)
    evaporate(state, params)
    propagate_quorum(state, pattern, data, params)
    state.wave_counter = wave
    if log is not None:
        log.extend(cycles)
    after = field_totals(state)
    delta = max(abs(after.pattern_sum - before.pattern_sum), abs(after.data_sum - before.data_sum))
    stats = WaveStats(wave, n_agents, len(cycles), n_agents - len(cycles), applied,
                      after.pattern_sum, after.data_sum, delta)
    return state, stats


def prepare(pattern: LabeledGraph, data: LabeledGraph, params: Params | None = None,
            mode: Mode | None = None, ontology: Ontology | None = None):
    """Peer the graphs and initialise fields; returns (pattern, data, peer_map, state)."""
    params = params or Params()
    mode = mode or Mode()
    if pattern.role != PATTERN:
        pattern = pattern.with_role(PATTERN)
    if data.role != DATA:
        data = data.with_role(DATA)
    mode.check_graphs(pattern, data)
    index = build_label_index(data)
    peer_map = peer_all(pattern, index, ontology if mode.imprecise else None,
                        params.imprecise_quality)
    radius = params.propagation_radius or (mode.missing_radius if mode.missing else 1)
    if mode.missing:
        radius = max(radius, mode.missing_radius)
    state = init_fields(pattern, data, peer_map, params, radius)
    return pattern, data, peer_map, state


def run_until_converged(pattern: LabeledGraph, data: LabeledGraph, params: Params | None = None,
                        mode: Mode | None = None, seed: int = 0, *,
                        ontology: Ontology | None = None, log: list | None = None,
                        on_wave: Callable[[WaveStats, PheromoneState], None] | None = None,
                        ) -> tuple[PheromoneState, ConvergenceReport]:
    """Run waves until both graphs' totals move by less than epsilon, or max_waves.

    Deterministic for fixed inputs, params, mode and seed.
    """
    params = params or Params()
    mode = mode or Mode()
    pattern, data, peer_map, state = prepare(pattern, data, params, mode, ontology)
    initial = field_totals(state)
    history: list[WaveStats] = []
    terminated_by = "max_waves"
    eps = params.termination_epsilon
    prev = initial
    for _ in range(params.max_waves):
        state, stats = run_wave(state, pattern, data, peer_map, params, mode, seed, log)
        history.append(stats)
        if on_wave is not None:
            on_wave(stats, state)
        now = Totals(stats.pattern_sum, stats.data_sum)
        if abs(now.pattern_sum - prev.pattern_sum) < eps and abs(now.data_sum - prev.data_sum) < eps:
            terminated_by = "epsilon"
            break
        prev = now
    report = ConvergenceReport(len(history), terminated_by, field_totals(state), initial,
                               seed, history, peer_map)
    return state, report
