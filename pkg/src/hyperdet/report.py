"""Rendering of suite reports: delimited records plus diagnostic figures.

The records file holds one JSON object per line, in check order.  Figures
are rendered with the Agg backend so the report path works headless; they
land next to the records file and the caller gets every written path back.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .verify import SuiteReport

# floor for log-scale plots; exact zeros are common and log10(0) is not
_LOG_FLOOR = 1e-18


def _log_hist(ax, data, title: str, xlabel: str) -> None:
    logs = np.log10(np.maximum(np.abs(np.asarray(data, dtype=np.float64)), _LOG_FLOOR))
    ax.hist(logs, bins=40, color="tab:blue", alpha=0.85)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")


def _fig_props(report: SuiteReport, out: Path) -> list[Path]:
    panels = (
        ("order2_errors", "order-2 sum vs determinant", "log10 relative error"),
        ("product_values", "product-state measure", "log10 value"),
        ("lu_drift", "local-unitary drift", "log10 |before - after|"),
    )
    present = [p for p in panels if p[0] in report.extras]
    if not present:
        return []
    fig, axes = plt.subplots(1, len(present), figsize=(4.0 * len(present), 3.4), squeeze=False)
    for ax, (key, title, xlabel) in zip(axes[0], present):
        _log_hist(ax, report.extras[key], title, xlabel)
    fig.tight_layout()
    path = out / "props_errors.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def _fig_locc(report: SuiteReport, out: Path) -> list[Path]:
    keys = [k for k in report.extras if k.startswith("margins_")]
    if not keys:
        return []
    cols = 3
    rows = (len(keys) + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(4.0 * cols, 3.1 * rows), squeeze=False)
    flat = axes.reshape(-1)
    for ax, key in zip(flat, keys):
        ax.hist(np.asarray(report.extras[key]), bins=50, color="tab:green", alpha=0.85)
        ax.axvline(0.0, color="tab:red", lw=1.0)
        ax.set_title(key.removeprefix("margins_"))
        ax.set_xlabel("margin before - after")
        ax.set_ylabel("count")
    for ax in flat[len(keys):]:
        ax.axis("off")
    fig.tight_layout()
    path = out / "locc_margins.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def _fig_lemma1(report: SuiteReport, out: Path) -> list[Path]:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    if "bound_samples" in report.extras:
        ax1.hist(np.asarray(report.extras["bound_samples"]), bins=60, color="tab:blue", alpha=0.85)
        ax1.axvline(1.0, color="tab:red", lw=1.0, label="bound 1")
        for rec in report.records():
            if rec["check"].startswith("averaging_bound_violated"):
                ax1.axvline(rec["observed"], color="tab:orange", lw=1.0, ls="--")
        ax1.set_title("sampled f (validity range) and pinned violations")
        ax1.set_xlabel("f")
        ax1.set_ylabel("count")
        ax1.legend()
    if "dominance_gaps" in report.extras:
        gaps = np.asarray(report.extras["dominance_gaps"])
        ax2.plot(gaps, "o", ms=3.5, color="tab:blue")
        ax2.axhline(0.0, color="tab:red", lw=1.0)
        ax2.set_title("grid max f minus critical value (d=2, eta=2)")
        ax2.set_xlabel("alpha draw")
        ax2.set_ylabel("gap")
    fig.tight_layout()
    path = out / "lemma1_bound.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def _fig_roof(report: SuiteReport, out: Path) -> list[Path]:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    if "separable_values" in report.extras:
        vals = np.maximum(np.asarray(report.extras["separable_values"]), _LOG_FLOOR)
        ax1.bar(np.arange(vals.size), vals, color="tab:blue")
        ax1.axhline(1e-6, color="tab:red", lw=1.0, label="certification bound")
        ax1.set_yscale("log")
        ax1.set_title("separable instances: certified upper bounds")
        ax1.set_xlabel("instance")
        ax1.set_ylabel("bound value")
        ax1.legend()
    if "separable_history" in report.extras:
        hist = np.maximum(np.asarray(report.extras["separable_history"]), _LOG_FLOOR)
        ax2.plot(hist, lw=1.2, color="tab:blue")
        ax2.set_yscale("log")
        ax2.set_title("first instance: best bound per restart")
        ax2.set_xlabel("restart")
        ax2.set_ylabel("best upper bound")
    fig.tight_layout()
    path = out / "roof_convergence.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


_FIGURES = {
    "props": _fig_props,
    "locc": _fig_locc,
    "lemma1": _fig_lemma1,
    "roof": _fig_roof,
}


def write_report(report: SuiteReport, directory) -> list[Path]:
    """Write ``<suite>.jsonl`` and the suite's figures under ``directory``.

    Creates the directory if needed and returns every path written, records
    file first.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    records = out / f"{report.suite}.jsonl"
    with records.open("w", encoding="utf-8") as fh:
        for rec in report.records():
            fh.write(json.dumps(rec) + "\n")
    paths = [records]
    paths.extend(_FIGURES[report.suite](report, out))
    return paths
