import csv
import io
import json
import subprocess
import sys

import pytest

from assist.cli import build_config, main, make_parser
from assist.testkit import fixture_path


def paths(name):
    return ["--pattern", str(fixture_path(f"{name}.pattern.json")),
            "--data", str(fixture_path(f"{name}.data.json"))]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_triangle_run_finds_three_pairs():
    code, out, _ = run(["run", *paths("triangle"), "--seed", "1"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["result"]["mapping"]) == 3
    assert doc["convergence"]["terminated_by"] == "epsilon"


def test_disjoint_labels_exit_3():
    code, out, _ = run(["run", *paths("disjoint")])
    assert code == 3 and json.loads(out)["result"]["pairs"] == []


@pytest.mark.parametrize("argv", [
    ["run", "--pattern", "nowhere.json", "--data", "nowhere.json"],
    ["run"],
    ["run", "--rho", "2.0", *paths("triangle")],
    ["run", "--bogus"],
    [],
    ["run", "--mode", "fuzzy", *paths("triangle")],
])
def test_input_errors_exit_1(argv):
    code, _, err = run(argv)
    assert code == 1 and "error" in err


def test_invalid_param_is_named():
    _, _, err = run(["run", *paths("triangle"), "--rho", "1.5"])
    assert "evaporation_rate" in err


def test_temporal_mode_on_untimed_graphs_is_an_input_error():
    code, _, err = run(["run", *paths("triangle"), "--mode", "temporal"])
    assert code == 1 and "temporal" in err


def test_malformed_graph_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, _ = run(["run", "--pattern", str(bad), "--data", str(bad)])
    assert code == 1


def test_run_writes_out_and_trace_files(tmp_path):
    out, trace = tmp_path / "r.json", tmp_path / "t.csv"
    code, stdout, _ = run(["run", *paths("triangle"), "--out", str(out), "--trace", str(trace)])
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["result"]["summary"]["size"] == 3
    assert trace.read_text().startswith("wave,pattern_sum,data_sum,delta,completed,failed\n")


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["run", *paths("planted_triangle"), "--seed", "7", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


# -- trace -------------------------------------------------------------------------------------

def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_trace_of_no_peer_fixture_is_one_row():
    code, out, _ = run(["trace", *paths("disjoint")])
    assert code == 0
    (only,) = rows(out)
    assert only["wave"] == "1" and float(only["delta"]) == 0.0


def test_trace_delta_falls_below_epsilon():
    _, out, _ = run(["trace", *paths("planted_edge"), "--seed", "3"])
    table = rows(out)
    assert float(table[-1]["delta"]) < 1e-6
    sums = [float(r["pattern_sum"]) for r in table]
    late = sums[len(sums) // 2:]
    assert all(b >= a - 1e-12 for a, b in zip(late, late[1:]))


def test_per_node_trace_adds_node_rows():
    _, out, _ = run(["trace", *paths("triangle"), "--trace-level", "per-node",
                     "--trace-every", "50"])
    table = rows(out)
    assert set(table[0]) >= {"graph", "node", "node_field", "quorum_field"}
    node_rows = [r for r in table if r["node"]]
    assert {r["wave"] for r in node_rows} >= {"50", "100"}
    assert {r["graph"] for r in node_rows} == {"pattern", "data"}


# -- bench -------------------------------------------------------------------------------------

def test_empty_sweep_is_an_empty_table():
    code, out, _ = run(["bench"])
    assert code == 0 and out.strip().count("\n") == 0 and out.startswith("d,p,rep")


def test_bench_reps_use_distinct_seeds():
    code, out, _ = run(["bench", "--d", "64", "--p", "5", "--reps", "3", "--seed", "10"])
    assert code == 0
    table = rows(out)
    assert [r["seed"] for r in table] == ["10", "11", "12"]
    assert all(r["terminated_by"] == "epsilon" for r in table)
    assert all(0.0 <= float(r["recall"]) <= 1.0 for r in table)


def test_bench_rejects_bad_sweep():
    assert run(["bench", "--d", "0", "--p", "5"])[0] == 1
    assert run(["bench", "--d", "4", "--p", "9"])[0] == 1


# -- configuration -------------------------------------------------------------------------

def config_for(argv, env=None):
    return build_config(make_parser().parse_args(argv), env=env or {})


def test_flags_beat_config_file_beat_defaults(tmp_path):
    cfg_file = tmp_path / "assist.cfg"
    cfg_file.write_text("# run settings\nevaporation_rate = 0.2\ntermination_epsilon = 1e-5\n"
                        "seed = 4\n")
    cfg = config_for(["run", "--config", str(cfg_file), "--rho", "0.3"])
    assert cfg.params.evaporation_rate == 0.3
    assert cfg.params.termination_epsilon == 1e-5
    assert cfg.params.deposit_constant == 1.0
    assert cfg.seed == 4


def test_unknown_config_key(tmp_path):
    cfg_file = tmp_path / "assist.cfg"
    cfg_file.write_text("colour = blue\n")
    code, _, err = run(["run", "--config", str(cfg_file)])
    assert code == 1 and "colour" in err


def test_env_seed_applies_only_without_flag():
    assert config_for(["run"], env={"ASSIST_SEED": "42"}).seed == 42
    assert config_for(["run", "--seed", "5"], env={"ASSIST_SEED": "42"}).seed == 5
    assert config_for(["run"]).seed == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "assist", "run", *paths("disjoint")],
                          capture_output=True, text=True)
    assert proc.returncode == 3
