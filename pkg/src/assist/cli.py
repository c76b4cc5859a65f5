"""Command-line front end: ``assist run | trace | bench``.

Exit codes: 0 a match was found (or the command succeeded), 3 the run
completed but found no match, 1 bad input of any kind.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .extensions import Mode, read_ontology
from .extraction import extract_matches
from .graph import DATA, PATTERN, read_graph
from .peering import build_label_index, peer_all
from .pheromone import Params
from .swarm import run_until_converged
from .testkit import PlantSpec, generate_pair, random_connected_graph

EXIT_OK, EXIT_INPUT, EXIT_EMPTY = 0, 1, 3

# flag -> Params field
PARAM_FLAGS = {
    "rho": "evaporation_rate",
    "q": "deposit_constant",
    "tau0": "initial_node_pheromone",
    "delta": "propagation_decay",
    "radius": "propagation_radius",
    "epsilon": "termination_epsilon",
    "agents": "agents_per_wave",
    "max_waves": "max_waves",
    "gamma": "imprecise_quality",
    "theta": "extraction_threshold",
}
TRACE_LEVELS = ("summary", "per-wave", "per-node")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    pattern: str | None = None
    data: str | None = None
    ontology: str | None = None
    mode: Mode = field(default_factory=Mode)
    params: Params = field(default_factory=Params)
    seed: int = 0
    out: str | None = None
    trace: str | None = None
    trace_level: str = "per-wave"
    trace_every: int = 10


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"config: cannot read {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _convert(name: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    if name in ("propagation_radius", "agents_per_wave", "max_waves", "quorum_sweeps"):
        if raw.lower() in ("", "none"):
            return None
        conv = int
    elif name in ("quorum_modulation", "normalize_wave_deposits"):
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise InputError(f"{name}: expected a boolean, got {raw!r}")
        return raw.lower() in ("true", "1", "yes")
    else:
        conv = float
    try:
        return conv(raw)
    except ValueError:
        raise InputError(f"{name}: cannot parse {raw!r}") from None


def build_config(args: argparse.Namespace, env=None) -> RunConfig:
    """Merge flags over the config file over defaults."""
    env = os.environ if env is None else env
    file_vals = read_config_file(args.config) if getattr(args, "config", None) else {}
    known = set(Params.field_names()) | {"pattern", "data", "ontology", "mode", "seed", "out",
                                         "trace", "trace_level", "trace_every", "missing_radius"}
    unknown = set(file_vals) - known
    if unknown:
        raise InputError(f"config: unknown key(s) {sorted(unknown)}")

    values = {}
    for name in Params.field_names():
        if name in file_vals:
            values[name] = _convert(name, file_vals[name])
    for flag, name in PARAM_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    try:
        params = Params(**values)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc

    def pick(name, default=None):
        v = getattr(args, name, None)
        if v is not None:
            return v
        return file_vals.get(name, default)

    try:
        radius = int(pick("missing_radius", 2))
        mode = Mode.parse(pick("mode", ""), radius)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    seed = getattr(args, "seed", None)
    if seed is None:
        raw = file_vals.get("seed", env.get("ASSIST_SEED"))
        try:
            seed = int(raw) if raw not in (None, "") else 0
        except ValueError:
            raise InputError(f"seed: cannot parse {raw!r}") from None
    if seed < 0:
        raise InputError("seed: must be non-negative")
    level = pick("trace_level", "per-wave")
    if level not in TRACE_LEVELS:
        raise InputError(f"trace_level: must be one of {TRACE_LEVELS}")
    every = int(pick("trace_every", 10))
    if every < 1:
        raise InputError("trace_every: must be >= 1")
    return RunConfig(pick("pattern"), pick("data"), pick("ontology"), mode, params, seed,
                     pick("out"), pick("trace"), level, every)


def _load_inputs(cfg: RunConfig):
    if not cfg.pattern or not cfg.data:
        raise InputError("both --pattern and --data are required")
    try:
        pattern = read_graph(cfg.pattern, PATTERN)
        data = read_graph(cfg.data, DATA)
        ontology = read_ontology(cfg.ontology) if cfg.ontology else None
        cfg.mode.check_graphs(pattern, data)
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return pattern, data, ontology


class _TraceWriter:
    def __init__(self, stream, level: str, every: int):
        self.level = level
        self.every = every
        self.writer = csv.writer(stream, lineterminator="\n")
        header = ["wave", "pattern_sum", "data_sum", "delta", "completed", "failed"]
        if level == "per-node":
            header += ["graph", "node", "node_field", "quorum_field"]
        self.writer.writerow(header)
        self._last = None

    def wave(self, stats, state, final=False):
        pad = ["", "", "", ""] if self.level == "per-node" else []
        self.writer.writerow([stats.wave, repr(stats.pattern_sum), repr(stats.data_sum),
                              repr(stats.delta), stats.completed, stats.failed] + pad)
        if self.level == "per-node" and (stats.wave % self.every == 0 or final):
            self._nodes(stats, state)

    def _nodes(self, stats, state):
        for g in (PATTERN, DATA):
            nf, qf = state.node_field[g], state.quorum_field[g]
            for n in sorted(set(nf) | set(qf)):
                self.writer.writerow([stats.wave, "", "", "", "", "", g, n,
                                      repr(nf.get(n, 0.0)), repr(qf.get(n, 0.0))])


def _execute(cfg: RunConfig, trace_stream=None):
    pattern, data, ontology = _load_inputs(cfg)
    tracer = None
    if trace_stream is not None:
        tracer = _TraceWriter(trace_stream, cfg.trace_level, cfg.trace_every)
    last = []

    def on_wave(stats, state):
        last[:] = [stats]
        if tracer is not None:
            tracer.wave(stats, state)

    state, report = run_until_converged(pattern, data, cfg.params, cfg.mode, cfg.seed,
                                        ontology=ontology, on_wave=on_wave)
    if tracer is not None and tracer.level == "per-node" and last and last[0].wave % cfg.trace_every:
        tracer._nodes(last[0], state)
    result = extract_matches(state, pattern, data, cfg.params, mode=cfg.mode)
    return pattern, data, state, report, result


def result_document(cfg: RunConfig, report, result) -> str:
    doc = {
        "result": result.to_document(),
        "convergence": {
            "waves": report.waves_run,
            "terminated_by": report.terminated_by,
            "final_totals": {"pattern_sum": report.final_totals.pattern_sum,
                             "data_sum": report.final_totals.data_sum},
            "seed": report.seed,
            "peering_comparisons": report.peer_map.comparisons if report.peer_map else 0,
        },
        "mode": str(cfg.mode),
        "params": dataclasses.asdict(cfg.params),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(path: str | None, text: str, stdout) -> None:
    if path and path != "-":
        Path(path).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def cmd_run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    trace_buf = io.StringIO() if cfg.trace else None
    _, _, _, report, result = _execute(cfg, trace_buf)
    if cfg.trace:
        Path(cfg.trace).write_text(trace_buf.getvalue(), encoding="utf-8")
    _write(cfg.out, result_document(cfg, report, result), stdout)
    return EXIT_EMPTY if result.empty else EXIT_OK


def cmd_trace(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    buf = io.StringIO()
    _execute(cfg, buf)
    _write(cfg.trace or cfg.out, buf.getvalue(), stdout)
    return EXIT_OK


BENCH_COLUMNS = ["d", "p", "rep", "seed", "comparisons", "comparisons_per_node", "log2_d",
                 "waves", "terminated_by", "wall_time_s", "recall"]


def bench_instance(d: int, p: int, seed: int):
    """A planted pair with `p` pattern nodes inside `d` data nodes.

    The label alphabet grows with `d` (one label per eight data nodes, at
    least eight) so the index has many keys to search.
    """
    if p < 1 or d < p:
        raise InputError(f"bench: need 1 <= p <= d, got p={p}, d={d}")
    n_labels = max(8, d // 8)
    width = len(str(n_labels - 1))
    alphabet = tuple(f"L{i:0{width}d}" for i in range(n_labels))
    rng = np.random.default_rng([seed, d, p])
    fragment = random_connected_graph(p, alphabet, rng, role=PATTERN)
    return generate_pair(PlantSpec(fragment, extra_nodes=(0, d - p), alphabet=alphabet,
                                   rng_seed=seed))


def cmd_bench(cfg: RunConfig, d_values, p_values, reps: int, peer_only: bool = False,
              stdout=None) -> int:
    stdout = stdout or sys.stdout
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    if any(v <= 0 for v in list(d_values) + list(p_values)) or reps < 0:
        raise InputError("bench: sweep values must be positive")
    for d in d_values:
        for p in p_values:
            for rep in range(reps):
                seed = cfg.seed + rep
                pair = bench_instance(d, p, seed)
                t0 = time.perf_counter()
                peer_map = peer_all(pair.pattern, build_label_index(pair.data))
                waves, why, recall = "", "", ""
                if not peer_only:
                    state, report = run_until_converged(pair.pattern, pair.data, cfg.params,
                                                        cfg.mode, seed)
                    result = extract_matches(state, pair.pattern, pair.data, cfg.params,
                                             mode=cfg.mode)
                    hits = sum(1 for u, x in pair.planted_map.items()
                               if result.mapping.get(u) == x)
                    waves, why = report.waves_run, report.terminated_by
                    recall = hits / len(pair.planted_map)
                wall = time.perf_counter() - t0
                writer.writerow([d, p, rep, seed, peer_map.comparisons,
                                 peer_map.comparisons / p, math.log2(d), waves, why,
                                 f"{wall:.4f}", recall])
    _write(cfg.out, buf.getvalue(), stdout)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="assist", description="Approximate subgraph matching by stigmergic swarming.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--pattern")
    common.add_argument("--data")
    common.add_argument("--ontology")
    common.add_argument("--mode", help="comma list of imprecise,temporal,missing")
    common.add_argument("--missing-radius", dest="missing_radius", type=int)
    common.add_argument("--rho", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--tau0", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--radius", type=int)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--agents", type=int)
    common.add_argument("--max-waves", dest="max_waves", type=int)
    common.add_argument("--gamma", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--trace")
    common.add_argument("--trace-level", dest="trace_level", choices=TRACE_LEVELS)
    common.add_argument("--trace-every", dest="trace_every", type=int)

    sub.add_parser("run", parents=[common], help="match a pattern against a data graph")
    sub.add_parser("trace", parents=[common], help="write the per-wave field trace as CSV")
    bench = sub.add_parser("bench", parents=[common], help="peering/convergence sweep")
    bench.add_argument("--d", dest="d_values", type=_int_list, default=[])
    bench.add_argument("--p", dest="p_values", type=_int_list, default=[])
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--peer-only", action="store_true")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        args = make_parser().parse_args(argv)
        if args.command is None:
            raise InputError("missing command (run, trace or bench)")
        cfg = build_config(args)
        if args.command == "run":
            return cmd_run(cfg, stdout)
        if args.command == "trace":
            return cmd_trace(cfg, stdout)
        return cmd_bench(cfg, args.d_values, args.p_values, args.reps, args.peer_only, stdout)
    except InputError as exc:
        print(f"assist: error: {exc}", file=stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"assist: error: {exc}", file=stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        # --help exits 0; anything else argparse raises counts as bad input
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
