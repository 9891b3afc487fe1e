"""Noiseless round trip over -90..90 deg; prints the worst error per method."""

import math

from h2ad.array import reference_config
from h2ad.clustering import Method
from h2ad.crlb import information_weights
from h2ad.pipeline import candidate_sets, estimate_doa
from h2ad.signal import SimulationConfig, synthesize

if __name__ == "__main__":
    arr = reference_config()
    for m in Method:
        errs = []
        for deg in range(-90, 91):
            sim = SimulationConfig(math.radians(deg), snapshot_count=4, noiseless=True)
            est = estimate_doa(arr, candidate_sets(synthesize(arr, sim, 0)), m, information_weights(arr, sim))
            errs.append((abs(est.angle - sim.true_angle), deg))
        err, deg = max(errs)
        print(f"{m.value:16s} worst {err:.3g} rad at {deg} deg")
