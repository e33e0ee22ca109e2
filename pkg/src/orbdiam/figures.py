"""Matplotlib figures rendered next to the JSON/CSV outputs (Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .diameter import DiameterReport
from .powersums import FrontierRow
from .witness import CertificationResult

MAX_CURVES = 48


def render_growth_figure(report: DiameterReport, path) -> Path:
    """Sumset coverage fraction per step for each orbit (largest diameters first)."""
    total = report.p**report.d
    rows = sorted(report.rows, key=lambda r: (-r.directed, r.orbit_id))[:MAX_CURVES]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for r in rows:
        steps = range(1, len(r.coverage_by_step) + 1)
        fractions = [c / total for c in r.coverage_by_step]
        ax.plot(steps, fractions, alpha=0.6, lw=1.2, label=f"orbit {r.orbit_id} (diam {r.directed})")
    ax.set_xlabel("sumset steps m")
    ax.set_ylabel("fraction of V covered")
    ax.set_title(f"{report.label or 'instance'}: p={report.p}, d={report.d}, "
                 f"diameter {report.overall_directed}")
    ax.set_ylim(0, 1.02)
    ax.grid(True, alpha=0.3)
    if len(rows) <= 8:
        ax.legend(fontsize=8)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_certification_figure(result: CertificationResult, path) -> Path:
    """Per-orbit maximum witness lengths against the certified bounds."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ids = [r.orbit_id for r in result.rows]
    lengths = [r.max_length for r in result.rows]
    ax.bar(ids, lengths, color="steelblue", label="max witness length")
    ax.axhline(result.branch_bound, color="darkorange", ls="--",
               label=f"branch bound {result.branch_bound}")
    ax.axhline(result.bound, color="firebrick", ls=":",
               label=f"certified bound {result.bound}")
    ax.set_xlabel("orbit id")
    ax.set_ylabel("witness length")
    ax.set_title(f"{result.label or 'instance'}: {result.branch} branch, "
                 f"max length {result.max_length}")
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_frontier_figure(rows: list[FrontierRow], path) -> Path:
    """Unsolvable right-hand-side counts as the unknown count m grows."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ms = [r.m for r in rows]
    missing = [r.unsolvable_count for r in rows]
    ax.plot(ms, missing, "o-", color="steelblue")
    first_full = next((r.m for r in rows if r.all_solvable), None)
    if first_full is not None:
        ax.axvline(first_full, color="seagreen", ls="--",
                   label=f"all solvable from m = {first_full}")
        ax.legend(fontsize=8)
    p, k = rows[0].p, rows[0].k
    ax.set_xlabel("unknowns m")
    ax.set_ylabel("unsolvable right-hand sides")
    ax.set_title(f"power-sum solvability frontier: p={p}, k={k}")
    ax.grid(True, alpha=0.3)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
