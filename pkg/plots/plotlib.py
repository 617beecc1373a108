"""Figure builders for benchmark outputs.

Consumes only the planner's file interfaces: episode trace CSVs, the
scenario JSON, and the results CSV. Road geometry is re-derived from
the scenario fields using the documented layout: two one-way two-lane
roads crossing at the world origin, each road `2 * lane_width_m` wide,
segment span centered on the crossing, 5 m stop regions butting the
intersection box.

Each builder returns (figure, data) where `data` holds the exact arrays
plotted, so tests can compare them against the source files.
"""

from __future__ import annotations

import csv
import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

TRACE_COLUMNS = ("t", "actor", "p_x", "p_y", "theta", "v", "psi",
                 "a", "psi_dot", "lane", "predicates")
RESULT_COLUMNS = ("environment", "low_level", "high_level",
                  "constraint_violations", "collisions", "total_failures",
                  "avg_reward", "std_reward")
STOP_REGION_DEPTH = 5.0
SCENARIO_KEYS = ("lane_width_m", "segment_length_m")


class SchemaError(ValueError):
    pass


def load_trace(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in TRACE_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"trace is missing column '{missing[0]}'")
        rows = list(reader)
    if not rows:
        raise SchemaError("trace has no data rows")
    return rows


def load_scenario(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        scenario = json.load(fh)
    for key in SCENARIO_KEYS:
        if key not in scenario:
            raise SchemaError(f"scenario is missing key '{key}'")
    return scenario


def load_results(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in RESULT_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"results file is missing column '{missing[0]}'")
        rows = list(reader)
    if not rows:
        raise SchemaError("results file has no data rows")
    return rows


def trajectories_by_actor(rows: list[dict]) -> dict[int, tuple[list, list]]:
    paths: dict[int, tuple[list, list]] = {}
    for row in rows:
        xs, ys = paths.setdefault(int(row["actor"]), ([], []))
        xs.append(float(row["p_x"]))
        ys.append(float(row["p_y"]))
    return paths


def _draw_road(ax, scenario: dict) -> None:
    half_road = float(scenario["lane_width_m"])
    span = float(scenario["segment_length_m"]) / 2.0
    road_style = dict(facecolor="0.92", edgecolor="none", zorder=0)
    ax.add_patch(Rectangle((-span, -half_road), 2 * span, 2 * half_road, **road_style))
    ax.add_patch(Rectangle((-half_road, -span), 2 * half_road, 2 * span, **road_style))
    for sign in (-1, 0, 1):
        y = sign * half_road
        style = dict(color="0.6", lw=0.8, ls="--" if sign == 0 else "-", zorder=1)
        ax.plot([-span, -half_road], [y, y], **style)
        ax.plot([half_road, span], [y, y], **style)
        ax.plot([y, y], [-span, -half_road], **style)
        ax.plot([y, y], [half_road, span], **style)
    stop_style = dict(facecolor="tab:red", alpha=0.25, edgecolor="none", zorder=1)
    ax.add_patch(Rectangle((-half_road - STOP_REGION_DEPTH, -half_road),
                           STOP_REGION_DEPTH, 2 * half_road, **stop_style))
    ax.add_patch(Rectangle((-half_road, -half_road - STOP_REGION_DEPTH),
                           2 * half_road, STOP_REGION_DEPTH, **stop_style))
    ax.add_patch(Rectangle((-half_road, -half_road), 2 * half_road, 2 * half_road,
                           facecolor="none", edgecolor="tab:orange", lw=1.2, zorder=2))


def trajectory_figure(rows: list[dict], scenario: dict):
    paths = trajectories_by_actor(rows)
    fig, ax = plt.subplots(figsize=(8, 8))
    _draw_road(ax, scenario)
    for actor in sorted(paths):
        xs, ys = paths[actor]
        if actor == 0:
            ax.plot(xs, ys, color="tab:red", lw=2.0, zorder=4, label="planner")
            ax.plot(xs[0], ys[0], "o", color="tab:red", zorder=5)
        else:
            ax.plot(xs, ys, lw=1.2, zorder=3, label=f"actor {actor}")
            ax.plot(xs[0], ys[0], "o", ms=3, color="0.4", zorder=5)
    span = float(scenario["segment_length_m"]) / 2.0 + 2.0
    ax.set_xlim(-span, span)
    ax.set_ylim(-span, span)
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend(loc="upper left", fontsize=8)
    return fig, paths


def results_figure(rows: list[dict]):
    labels = [f"{r['low_level']}\n{r['high_level']}" for r in rows]
    avg = [float(r["avg_reward"]) for r in rows]
    std = [float(r["std_reward"]) for r in rows]
    failures = [int(r["total_failures"]) for r in rows]
    data = {"labels": labels, "avg_reward": avg, "std_reward": std,
            "total_failures": failures}

    fig, ax = plt.subplots(figsize=(1.6 * len(rows) + 3, 5))
    positions = range(len(rows))
    bars = ax.bar(positions, avg, yerr=std, capsize=4, color="tab:blue")
    for pos, bar, n_fail in zip(positions, bars, failures):
        ax.annotate(f"{n_fail} fail", (bar.get_x() + bar.get_width() / 2,
                                       bar.get_height()),
                    ha="center", va="bottom", fontsize=8)
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("average reward")
    ax.axhline(0.0, color="0.5", lw=0.8)
    return fig, data


def save_figure(fig, path: str) -> None:
    # drop volatile metadata so identical inputs give identical bytes
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
