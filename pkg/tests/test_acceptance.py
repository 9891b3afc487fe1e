"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import itertools
import math
import time
from dataclasses import replace

import numpy as np
import pytest

from h2ad.array import ArrayConfig, reference_config
from h2ad.clustering import Method, improved_dbscan, wgmd, wgmd_exhaustive, wlmd
from h2ad.crlb import baseline_arrays, energy_efficiency, fim_group, fused_mse, fusion_weights
from h2ad.experiment import ExperimentSpec, emit_outputs, run_experiment, run_trials
from h2ad.pipeline import candidate_sets, estimate_doa
from h2ad.crlb import information_weights
from h2ad.signal import SimulationConfig, synthesize
from oracles import random_simplex, trace_fim

pytestmark = pytest.mark.slow

REFERENCE = reference_config()
SIM41 = SimulationConfig(math.radians(41), snapshot_count=100, snr_db=0.0)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def by_point(summary):
    out = {}
    for row in summary:
        out.setdefault((row.series_value, row.sweep_value), {})[row.method] = row
    return out


def test_criterion_1_noiseless_round_trip(report):
    start = time.perf_counter()
    worst = {m: (0.0, None) for m in Method}
    for deg in range(-90, 91):
        theta = math.radians(deg)
        sim = SimulationConfig(theta, snapshot_count=4, noiseless=True)
        cands = candidate_sets(synthesize(REFERENCE, sim, 0))
        w = information_weights(REFERENCE, sim)
        for m in Method:
            est = estimate_doa(REFERENCE, cands, m, w)
            err = abs(est.angle - theta) if est.success else math.inf
            if err > worst[m][0]:
                worst[m] = (err, deg)
    elapsed = time.perf_counter() - start
    bad = {m.value: f"{e:.3g} rad at {d} deg" for m, (e, d) in worst.items() if e > 1e-6}
    ok = not bad and elapsed < 10
    report(1, "noiseless round trip on 181 angles, all methods, 1e-6 rad, < 10 s", ok,
           f"runtime {elapsed:.1f} s; worst errors {bad or 'none'}")


def test_criterion_2_rmse_vs_snr(report):
    start = time.perf_counter()
    spec = ExperimentSpec(REFERENCE, SIM41, "snr_db", (-10.0, -5.0, 0.0, 5.0, 10.0), trials=500, seed=2024)
    _, summary = run_experiment(spec)
    elapsed = time.perf_counter() - start
    problems = []
    for (_, snr), rows in by_point(summary).items():
        if snr < -5:
            continue
        rmse = {m.value: r.rmse_deg for m, r in rows.items()}
        crlb = next(iter(rows.values())).aggregate_crlb_deg
        for m, v in rmse.items():
            if not v <= 2 * crlb:
                problems.append(f"{snr:g} dB {m}: RMSE/CRLB {v / crlb:.3g}")
        lo, hi = min(rmse.values()), max(rmse.values())
        if not hi <= 1.05 * lo:
            problems.append(f"{snr:g} dB: method spread {hi / lo - 1:.1%}")
    ok = not problems and elapsed < 300
    report(2, "RMSE within 2x CRLB and methods within 5% for SNR >= -5 dB, < 5 min", ok,
           f"runtime {elapsed:.0f} s; " + ("; ".join(problems) or "all points within bounds"))


def test_criterion_3_rmse_vs_snapshots(report):
    spec = ExperimentSpec(REFERENCE, SIM41, "snapshots", (100, 200, 300, 400), trials=300, seed=2025,
                          series=("snr_db", (0.0, 10.0, 20.0)))
    _, summary = run_experiment(spec)
    points = by_point(summary)
    problems = []
    # one standard error of an RMSE from n trials is about RMSE / sqrt(2 n); allow two
    slack = 2 / math.sqrt(2 * 300)
    for snr in (0.0, 10.0, 20.0):
        for m in Method:
            curve = [points[snr, n][m] for n in (100, 200, 300, 400)]
            for r in curve:
                ratio = r.rmse_deg / r.aggregate_crlb_deg
                if not ratio <= 1.5:
                    problems.append(f"{snr:g} dB N={r.sweep_value:g} {m.value}: ratio {ratio:.3g}")
            for a, b in zip(curve, curve[1:]):
                if not b.rmse_deg < a.rmse_deg * (1 + slack):
                    problems.append(f"{snr:g} dB {m.value}: RMSE rises from N={a.sweep_value:g} to {b.sweep_value:g}")
    report(3, "RMSE/CRLB <= 1.5 on the snapshot grid, RMSE decreasing in N", not problems,
           "; ".join(problems) or "all 48 points within bounds")


def test_criterion_4_accuracy_ordering(report):
    arr = ArrayConfig.from_sizes(16, (18, 19, 20, 21))
    sim = replace(SIM41, snr_db=-15.0)
    spec = ExperimentSpec(arr, sim, "snr_db", (-15.0,), trials=5000, seed=2026)
    _, low = run_experiment(spec)
    acc = {r.method: r.accuracy for r in low}
    slack = 0.02
    problems = []
    if not acc[Method.WGMD] >= acc[Method.IMPROVED_DBSCAN] - slack:
        problems.append("WGMD < improved DBSCAN")
    if not acc[Method.IMPROVED_DBSCAN] >= acc[Method.ALW_K_MEANS] - slack:
        problems.append("improved DBSCAN < ALW-K-means")
    if not acc[Method.WGMD] >= acc[Method.WLMD] - slack:
        problems.append("WGMD < WLMD")
    _, high = run_experiment(replace(spec, grid=(-5.0, 0.0, 5.0, 10.0), trials=500))
    short = [f"{r.method.value}@{r.sweep_value:g}dB={r.accuracy:.3f}" for r in high if r.accuracy < 1.0]
    if short:
        problems.append("accuracy below 1 at " + ", ".join(short))
    report(4, "accuracy ordering at -15 dB (5000 trials) and 100% accuracy at SNR >= -5 dB", not problems,
           "accuracy at -15 dB " + ", ".join(f"{m.value}={a:.4f}" for m, a in acc.items())
           + ("; " + "; ".join(problems) if problems else ""))


def test_criterion_5_fim_oracle(report):
    worst = 0.0
    for deg, snr_db, q in itertools.product((-60, -30, 0, 41, 75), (-20, -10, 0, 10, 20), range(3)):
        sim = SimulationConfig(math.radians(deg), snr_db=snr_db)
        g = REFERENCE.group(q)
        ref = trace_fim(g.subarray_count, g.antennas_per_subarray, REFERENCE.spacing, sim.true_angle, sim.snr)
        worst = max(worst, abs(fim_group(REFERENCE, sim, q) / ref - 1))
    report(5, "closed-form FIM vs finite-difference trace formula, 5x5x3 grid, 1e-3", worst < 1e-3,
           f"worst relative error {worst:.2e}")


def test_criterion_6_weight_optimality(report):
    rng = np.random.default_rng(6)
    violations, worst_identity = 0, 0.0
    for _ in range(100):
        c = rng.uniform(1e-4, 1.0, 3) ** 2
        w = fusion_weights(c)
        best = fused_mse(c, w)
        trial = np.sum(random_simplex(rng, 3, 1000) ** 2 * c, axis=1)
        violations += int(np.sum(trial < best))
        worst_identity = max(worst_identity, abs(best - 1 / np.sum(1 / c)) / best)
    ok = violations == 0 and worst_identity <= 1e-12
    report(6, "optimal weights beat 1000 random simplex weights; MSE identity to 1e-12", ok,
           f"{violations} violations, identity error {worst_identity:.1e}")


def test_criterion_7_method_equivalences(report):
    rng = np.random.default_rng(7)
    pairs_ok = dp_ok = 0
    for _ in range(1000):
        sets = [np.sort(rng.uniform(-1.5, 1.5, rng.integers(1, 14))) for _ in range(2)]
        pairs_ok += wlmd(sets).indices == wgmd(sets).indices
    for _ in range(1000):
        sets = [np.sort(rng.uniform(-1.5, 1.5, rng.integers(1, 14))) for _ in range(rng.integers(2, 5))]
        dp_ok += wgmd(sets).indices == wgmd_exhaustive(sets).indices
    both = agree = 0
    for snr in (0.0, 5.0, 10.0):
        sim = replace(SIM41, snr_db=snr)
        for t in range(400):
            cands = candidate_sets(synthesize(REFERENCE, sim, np.random.SeedSequence(7, spawn_key=(int(snr), t))))
            d = improved_dbscan(cands)
            if d.success:
                both += 1
                agree += d.indices == wgmd(cands).indices
    frac = agree / both if both else 0.0
    ok = pairs_ok == 1000 and dp_ok == 1000 and frac >= 0.99
    report(7, "WLMD = WGMD for two groups, DP = exhaustive, DBSCAN = WGMD at SNR >= 0 dB", ok,
           f"{pairs_ok}/1000, {dp_ok}/1000, {agree}/{both} = {frac:.3%}")


def test_criterion_8_energy_efficiency(report):
    arr = ArrayConfig.from_sizes(16, (9, 10, 11))
    archs = baseline_arrays(arr)
    eta = {name: energy_efficiency(a, SIM41) for name, a in archs.items()}
    close = abs(eta["h2ad"] / eta["homogeneous"] - 1) <= 0.10
    above = min(eta["h2ad"], eta["homogeneous"]) >= 2 * eta["fully_digital"]
    report(8, "H2AD within 10% of homogeneous, both >= 2x fully digital, equal antennas", close and above,
           ", ".join(f"{k}={v:.3g}" for k, v in eta.items()))


def test_criterion_9_determinism(report, tmp_path):
    blobs = []
    for i, workers in enumerate((1, 1, 2, 4)):
        spec = ExperimentSpec(REFERENCE, SIM41, "snr_db", (-5.0, 5.0), trials=40, seed=99, workers=workers,
                              output_dir=tmp_path / str(i))
        emit_outputs(run_trials(spec, chunk_size=7), spec, plots=False)
        blobs.append((tmp_path / str(i) / "trials.csv").read_bytes())
    report(9, "byte-identical trial CSV across runs and worker counts", len(set(blobs)) == 1,
           f"{len(set(blobs))} distinct outputs from {len(blobs)} runs")
