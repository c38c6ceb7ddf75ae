"""Boost-vs-baseline sweep: runs both procedures over a seed grid and writes
a CSV of the results plus matplotlib figures next to it."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from math import comb

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .generators import random_colouring
from .pipeline import SelectionParams, baseline_random_embedding, boost


@dataclass
class ReportParams:
    orders: tuple = (13, 15, 19, 21)
    colours: tuple = (2, 3)
    runs: int = 10
    trials: int = 50
    seed: int = 0
    target: int = 50
    vertex_cap: int = 6


def collect_rows(params: ReportParams) -> list:
    rows = []
    for n in params.orders:
        for r in params.colours:
            for i in range(params.runs):
                seed = params.seed + i
                chi = random_colouring(n, r, seed=1000 * r + seed)
                rep = boost(
                    chi,
                    SelectionParams(
                        target_count=params.target,
                        vertex_cap=params.vertex_cap,
                        seed=seed,
                    ),
                )
                _, base = baseline_random_embedding(chi, params.trials, seed)
                rows.append(
                    {
                        "n": n,
                        "r": r,
                        "seed": seed,
                        "selected": rep.selected,
                        "boost_discrepancy": float(rep.discrepancy),
                        "baseline_discrepancy": float(base),
                        "balanced_value": comb(n, 2) / 3 / r,
                        "win": int(rep.discrepancy >= base),
                    }
                )
    return rows


def write_csv(rows: list, path: str) -> None:
    fields = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def render_figures(rows: list, outdir: str) -> list:
    paths = []
    configs = sorted({(row["n"], row["r"]) for row in rows})

    fig, ax = plt.subplots(figsize=(7, 5))
    for n, r in configs:
        pts = [row for row in rows if row["n"] == n and row["r"] == r]
        xs = [row["baseline_discrepancy"] for row in pts]
        ys = [row["boost_discrepancy"] for row in pts]
        ax.scatter(xs, ys, label=f"n={n}, r={r}", alpha=0.7)
    lo = min(min(row["baseline_discrepancy"], row["boost_discrepancy"]) for row in rows)
    hi = max(max(row["baseline_discrepancy"], row["boost_discrepancy"]) for row in rows)
    ax.plot([lo, hi], [lo, hi], "k--", linewidth=1, label="equal")
    ax.set_xlabel("baseline discrepancy (best of random embeddings)")
    ax.set_ylabel("boost discrepancy")
    ax.set_title("Gadget boosting vs random-embedding baseline")
    ax.legend(fontsize=8)
    fig.tight_layout()
    scatter_path = os.path.join(outdir, "boost_vs_baseline.png")
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)
    paths.append(scatter_path)

    fig, ax = plt.subplots(figsize=(7, 4))
    labels = [f"n={n}\nr={r}" for n, r in configs]
    margins = []
    for n, r in configs:
        pts = [row for row in rows if row["n"] == n and row["r"] == r]
        margins.append(
            [row["boost_discrepancy"] - row["baseline_discrepancy"] for row in pts]
        )
    ax.boxplot(margins, tick_labels=labels)
    ax.axhline(0.0, color="k", linewidth=1, linestyle="--")
    ax.set_ylabel("boost minus baseline discrepancy")
    ax.set_title("Boosting margin per configuration")
    fig.tight_layout()
    margin_path = os.path.join(outdir, "boost_margin.png")
    fig.savefig(margin_path, dpi=150)
    plt.close(fig)
    paths.append(margin_path)
    return paths


def run_report(params: ReportParams, outdir: str) -> list:
    """Returns the list of files written: the CSV first, then the figures."""
    os.makedirs(outdir, exist_ok=True)
    rows = collect_rows(params)
    csv_path = os.path.join(outdir, "boost_runs.csv")
    write_csv(rows, csv_path)
    return [csv_path] + render_figures(rows, outdir)
