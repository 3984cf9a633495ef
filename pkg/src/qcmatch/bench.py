"""Benchmark harness: seeded scaling runs with CSV output.

Reproduces the runtime-scaling experiment protocol: for each point (gate
count or qubit count), generate ``trials`` seeded random circuits over
{x, cx, ccx}, run the requested engine, and record the canonical-form build
time separately from the matching time. Summary rows carry per-point
mean/stddev of the timing columns; timing columns are the only
nondeterministic fields for a fixed seed.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field

from .brute import brute_force_matches
from .circuit import Circuit
from .dag import create_canonical_form
from .gates import Gate
from .heuristics import HeuristicConfig
from .matching import MatchOptions, pattern_match
from .optimizer import UNIT_COST, find_longest_subcircuits, template_optimize
from .randgen import random_circuit
from .templates import builtin_templates

CSV_COLUMNS = [
    "mode", "point", "trial", "row_type", "seed", "engine",
    "heuristic_f", "heuristic_l", "heuristic_s",
    "n_gates", "n_qubits", "match_count", "max_match_size",
    "gates_after", "gain_percent",
    "canon_seconds", "run_seconds", "canon_seconds_std", "run_seconds_std",
]

MODES = ("scaling-gates", "scaling-qubits", "optimize-random", "peephole")


def scaling_pattern() -> Circuit:
    """The 6-gate, 3-qubit pattern used by the gate-count scaling benchmark."""
    return Circuit([
        Gate("x", (0,)),
        Gate("x", (2,)),
        Gate("cx", (2, 1)),
        Gate("cx", (1, 2)),
        Gate("x", (1,)),
        Gate("ccx", (0, 1, 2)),
    ])


@dataclass
class BenchConfig:
    """One benchmark run. ``points`` are gate counts (or qubit counts for
    scaling-qubits); seeded runs are bit-reproducible."""

    mode: str = "scaling-gates"
    points: list[int] = field(default_factory=lambda: list(range(10, 251, 30)))
    n_qubits: int = 6
    n_gates: int = 50
    trials: int = 5
    seed: int = 0
    engine: str = "exact"
    heuristic: HeuristicConfig | None = None
    pattern: Circuit | None = None
    peephole_width: int = 2
    out_path: str | None = None
    plot_path: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown bench mode {self.mode!r}")
        if self.engine not in ("exact", "brute"):
            raise ValueError(f"unknown engine {self.engine!r}")


def run_benchmark(cfg: BenchConfig) -> list[dict]:
    """Execute the run; returns all CSV rows (data rows then summaries per point)."""
    rows: list[dict] = []
    heur = cfg.heuristic
    base = {
        "mode": cfg.mode,
        "engine": cfg.engine,
        "heuristic_f": heur.qubit_exploration_F if heur else "",
        "heuristic_l": heur.backward_depth_L if heur else "",
        "heuristic_s": heur.backward_survivors_S if heur else "",
    }
    for point in cfg.points:
        point_rows = []
        for trial in range(cfg.trials):
            seed = cfg.seed + 1000 * point + trial
            row = dict(base, point=point, trial=trial, row_type="data", seed=seed)
            row.update(_run_trial(cfg, point, seed))
            point_rows.append(row)
        rows.extend(point_rows)
        rows.append(_summary_row(base, point, point_rows))
    if cfg.out_path:
        write_csv(rows, cfg.out_path)
    if cfg.plot_path:
        plot_benchmark(rows, cfg.plot_path, cfg)
    return rows


def _run_trial(cfg: BenchConfig, point: int, seed: int) -> dict:
    if cfg.mode == "scaling-gates":
        circuit = random_circuit(point, cfg.n_qubits, seed)
    elif cfg.mode == "scaling-qubits":
        circuit = random_circuit(cfg.n_gates, point, seed)
    else:
        circuit = random_circuit(point, cfg.n_qubits, seed)
    out = {"n_gates": len(circuit), "n_qubits": circuit.num_qubits,
           "match_count": "", "max_match_size": "", "gates_after": "",
           "gain_percent": "", "canon_seconds": "", "run_seconds": "",
           "canon_seconds_std": "", "run_seconds_std": ""}

    t0 = time.perf_counter()
    create_canonical_form(circuit)
    out["canon_seconds"] = f"{time.perf_counter() - t0:.6f}"

    t0 = time.perf_counter()
    if cfg.mode in ("scaling-gates", "scaling-qubits"):
        pattern = cfg.pattern or scaling_pattern()
        if cfg.engine == "brute":
            matches = brute_force_matches(circuit, pattern, max_circuit=len(circuit))
        else:
            matches = pattern_match(
                circuit, pattern, MatchOptions(heuristic=cfg.heuristic)
            )
        out["match_count"] = len(matches)
        out["max_match_size"] = max((m.size for m in matches), default=0)
    elif cfg.mode == "optimize-random":
        optimized, _ = template_optimize(
            circuit, builtin_templates(), UNIT_COST,
            opts=MatchOptions(heuristic=cfg.heuristic),
        )
        out["gates_after"] = len(optimized)
        out["gain_percent"] = (
            f"{100.0 * (len(circuit) - len(optimized)) / len(circuit):.2f}"
            if len(circuit) else "0.00"
        )
    else:  # peephole
        runs = find_longest_subcircuits(circuit, cfg.peephole_width)
        out["match_count"] = len(runs)
        out["max_match_size"] = max((len(r[1]) for r in runs), default=0)
    out["run_seconds"] = f"{time.perf_counter() - t0:.6f}"
    return out


def _summary_row(base: dict, point: int, point_rows: list[dict]) -> dict:
    canon = [float(r["canon_seconds"]) for r in point_rows]
    run = [float(r["run_seconds"]) for r in point_rows]
    row = dict(base, point=point, trial="", row_type="summary", seed="")
    row.update({
        "n_gates": point_rows[0]["n_gates"], "n_qubits": point_rows[0]["n_qubits"],
        "match_count": "", "max_match_size": "", "gates_after": "", "gain_percent": "",
        "canon_seconds": f"{statistics.fmean(canon):.6f}",
        "run_seconds": f"{statistics.fmean(run):.6f}",
        "canon_seconds_std": f"{statistics.pstdev(canon):.6f}",
        "run_seconds_std": f"{statistics.pstdev(run):.6f}",
    })
    return row


def write_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({col: row.get(col, "") for col in CSV_COLUMNS})


def plot_benchmark(rows: list[dict], path: str, cfg: BenchConfig) -> None:
    """Render the mean/stddev runtime curve next to the CSV output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    summaries = [r for r in rows if r["row_type"] == "summary"]
    xs = [r["point"] for r in summaries]
    means = [float(r["run_seconds"]) for r in summaries]
    stds = [float(r["run_seconds_std"]) for r in summaries]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(xs, means, yerr=stds, marker="o", capsize=3)
    xlabel = "circuit qubits" if cfg.mode == "scaling-qubits" else "circuit gates"
    ax.set_xlabel(xlabel)
    ax.set_ylabel("runtime (s)")
    title = f"{cfg.mode} ({cfg.engine}"
    if cfg.heuristic:
        title += f", F={cfg.heuristic.qubit_exploration_F}" \
                 f" L={cfg.heuristic.backward_depth_L}" \
                 f" S={cfg.heuristic.backward_survivors_S}"
    ax.set_title(title + ")")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
