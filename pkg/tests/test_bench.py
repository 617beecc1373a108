import json
import subprocess
import sys

import pytest

from ltlplan.bench import (
    ExperimentConfig,
    ResultRow,
    Variant,
    dump_tree,
    export_results,
    load_experiment,
    read_results,
    run_experiment,
    run_manual_baseline,
)
from ltlplan.planner import PlannerConfig, search
from ltlplan.prior import uniform_prior
from ltlplan.sim import Status, spawn_scenario


def small_cfg(environment="NO_STOPPED_CAR", variants=None, n=3):
    return ExperimentConfig(
        environment=environment,
        variants=variants or [Variant(low_level="options_mcts", prior="uniform")],
        n_worlds=n,
        planner={"iterations": 25},
    )


def test_unobstructed_world_succeeds_with_positive_reward():
    cfg = ExperimentConfig(n_worlds=1, seeds=[6],  # seed 6 -> 0 other vehicles
                           variants=[Variant(prior="manual")],
                           planner={"iterations": 40})
    rows = run_experiment(cfg)
    assert rows[0].total_failures == 0
    assert rows[0].avg_reward > 0


def test_manual_baseline_is_clean_without_stopped_car():
    cfg = small_cfg(variants=[Variant(low_level="manual_policy", prior="none")], n=6)
    rows = run_experiment(cfg)
    assert rows[0].constraint_violations == 0
    assert rows[0].collisions == 0
    assert rows[0].total_failures == 0


def test_batch_is_deterministic():
    cfg = small_cfg(n=4)
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a == b


def test_outcomes_partition_episodes():
    cfg = small_cfg(environment="STOPPED_CAR_AHEAD", n=6)
    rows = run_experiment(cfg)
    row = rows[0]
    successes = 6 - row.total_failures
    assert 0 <= row.total_failures <= 6
    assert successes + row.total_failures == 6


def test_invalid_environment_rejected():
    with pytest.raises(ValueError):
        ExperimentConfig(environment="WRONG")


def test_seed_length_mismatch_rejected():
    with pytest.raises(ValueError):
        ExperimentConfig(n_worlds=3, seeds=[1, 2])


def test_experiment_json_round_trip(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({
        "environment": "STOPPED_CAR_AHEAD",
        "n_worlds": 2,
        "variants": [{"low_level": "options_mcts", "prior": "manual"}],
        "planner": {"iterations": 10},
    }), encoding="utf-8")
    cfg = load_experiment(str(path))
    assert cfg.environment == "STOPPED_CAR_AHEAD"
    assert cfg.variants[0].prior == "manual"
    assert cfg.seeds == [1, 2]


def test_export_results_round_trip(tmp_path):
    rows = [
        ResultRow("NO_STOPPED_CAR", "Options+MCTS", "Manual", 0, 1, 2, 117.8125, 60.4),
        ResultRow("NO_STOPPED_CAR", "Manual Policy", "None", 0, 0, 0, 95.5, 10.25),
    ]
    path = tmp_path / "results.csv"
    export_results(rows, str(path), seeds=[1, 2, 3])
    assert read_results(str(path)) == rows
    manifest = json.loads((path.parent / "results.csv.seeds.json").read_text())
    assert manifest == {"seeds": [1, 2, 3]}


def test_export_header_only_for_empty_rows(tmp_path):
    path = tmp_path / "empty.csv"
    export_results([], str(path))
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("environment,")


def test_byte_identical_exports(tmp_path):
    cfg = small_cfg(n=3)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    export_results(run_experiment(cfg), str(p1), seeds=cfg.seeds)
    export_results(run_experiment(cfg), str(p2), seeds=cfg.seeds)
    assert p1.read_bytes() == p2.read_bytes()


def test_dump_tree_writes_valid_dot(tmp_path):
    w = spawn_scenario(seed=9, n_vehicles=2, stopped_car=True)
    result = search(w, PlannerConfig(iterations=40, seed=2), uniform_prior())
    path = tmp_path / "tree.dot"
    dump_tree(result.root, str(path))
    text = path.read_text()
    assert text.startswith("digraph search {")
    assert text.rstrip().endswith("}")
    assert 'label="0"' in text
    # at least one edge and balanced braces/brackets
    assert "->" in text
    assert text.count("[") == text.count("]")


def test_dump_tree_marks_failure_leaves_red(tmp_path):
    # boxed in: everything the planner tries crashes or violates
    w = spawn_scenario(seed=8, n_vehicles=0, stopped_car=True)
    w.actors[0].vehicle.v = 11.18
    w.actors[1].vehicle.p_x = w.actors[0].vehicle.p_x + 14.0
    result = search(w, PlannerConfig(iterations=60, seed=3), uniform_prior())
    path = tmp_path / "tree.dot"
    dump_tree(result.root, str(path))
    assert "fillcolor=red" in path.read_text()


def test_manual_baseline_classifies_goal():
    w = spawn_scenario(seed=6, n_vehicles=0, stopped_car=False)
    record = run_manual_baseline(w)
    assert record.status is Status.GOAL_REACHED
    assert record.reward > 0


def test_cli_plan_round_trip(tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"seed": 6, "n_vehicles": 0,
                                    "stopped_car": False}), encoding="utf-8")
    config = tmp_path / "planner.json"
    config.write_text(json.dumps({"iterations": 30}), encoding="utf-8")
    trace = tmp_path / "trace.csv"
    tree = tmp_path / "tree.dot"
    proc = subprocess.run(
        [sys.executable, "-m", "ltlplan.cli", "plan",
         "--scenario", str(scenario), "--config", str(config),
         "--prior", "manual", "--seed", "3",
         "--trace", str(trace), "--tree", str(tree)],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert "status: goal_reached" in proc.stdout
    assert trace.exists() and tree.exists()


def test_cli_bench_round_trip(tmp_path):
    exp = tmp_path / "exp.json"
    exp.write_text(json.dumps({
        "environment": "NO_STOPPED_CAR",
        "n_worlds": 2,
        "seeds": [6, 12],
        "variants": [{"low_level": "manual_policy", "prior": "none"}],
    }), encoding="utf-8")
    out = tmp_path / "results.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "ltlplan.cli", "bench",
         "--experiment", str(exp), "--out", str(out)],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    rows = read_results(str(out))
    assert rows[0].total_failures == 0
