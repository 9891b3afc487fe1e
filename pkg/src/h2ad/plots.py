"""Static SVG figures for experiment summaries."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .array import GroupConfig  # noqa: E402
from .crlb import baseline_arrays, energy_efficiency  # noqa: E402

_LABELS = {"snr_db": "SNR (dB)", "snapshots": "snapshots N", "subarray_count": "subarrays per group K"}
_NAMES = {"wgmd": "WGMD", "wlmd": "WLMD", "alw_kmeans": "ALW-K-means", "improved_dbscan": "improved DBSCAN"}

plt.rcParams["svg.hashsalt"] = "h2ad"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def sweep_plots(rows, spec, target: Path) -> list[Path]:
    x = sorted({r.sweep_value for r in rows})
    methods = list(dict.fromkeys(r.method for r in rows))
    by = {(r.sweep_value, r.method): r for r in rows}

    fig, ax = plt.subplots(figsize=(5, 3.6))
    for m in methods:
        ax.plot(x, [by[v, m].rmse_deg for v in x], marker="o", label=_NAMES[m.value])
    ax.plot(x, [by[v, methods[0]].aggregate_crlb_deg for v in x], "k--", label="CRLB")
    ax.set_yscale("log")
    ax.set_xlabel(_LABELS[spec.sweep])
    ax.set_ylabel("RMSE (deg)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    paths = [_save(fig, target / f"rmse_vs_{spec.sweep}.svg")]

    fig, ax = plt.subplots(figsize=(5, 3.6))
    for m in methods:
        ax.plot(x, [by[v, m].accuracy for v in x], marker="s", label=_NAMES[m.value])
    ax.set_xlabel(_LABELS[spec.sweep])
    ax.set_ylabel("accuracy")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    paths.append(_save(fig, target / f"accuracy_vs_{spec.sweep}.svg"))
    return paths


def energy_efficiency_curves(array, sim, power, subarray_counts):
    """Antenna totals and efficiency per architecture as the subarray count grows."""
    curves = {}
    for k in subarray_counts:
        scaled = replace(array, groups=tuple(GroupConfig(int(k), g.antennas_per_subarray) for g in array.groups))
        for name, arr in baseline_arrays(scaled).items():
            n, eta = curves.setdefault(name, ([], []))
            n.append(arr.antenna_count)
            eta.append(energy_efficiency(arr, sim, power))
    return curves


def energy_efficiency_plot(spec, target: Path, subarray_counts=(4, 8, 16, 32, 64)) -> Path:
    curves = energy_efficiency_curves(spec.array, spec.sim, spec.power, subarray_counts)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for name, (n, eta) in curves.items():
        ax.plot(n, eta, marker="o", label=name.replace("_", "-"))
    ax.set_xlabel("number of antennas")
    ax.set_ylabel(r"$\eta_{EE}$ (1/degree/W)")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, Path(target) / "energy_efficiency.svg")

