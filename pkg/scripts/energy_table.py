"""Print energy efficiency of the heterogeneous, homogeneous and fully digital arrays.

Usage: python scripts/energy_table.py [true_angle_deg] [snr_db]
"""

import math
import sys

from h2ad.array import ArrayConfig
from h2ad.plots import energy_efficiency_curves
from h2ad.crlb import PowerModel
from h2ad.signal import SimulationConfig

if __name__ == "__main__":
    angle = float(sys.argv[1]) if len(sys.argv) > 1 else 41.0
    snr = float(sys.argv[2]) if len(sys.argv) > 2 else 0.0
    sim = SimulationConfig(math.radians(angle), snapshot_count=100, snr_db=snr)
    arr = ArrayConfig.from_sizes(16, (9, 10, 11))
    curves = energy_efficiency_curves(arr, sim, PowerModel(), (4, 8, 16, 32, 64))
    print(f"theta0 = {angle:g} deg, SNR = {snr:g} dB, eta in 1/degree/W")
    print(f"{'antennas':>9} " + " ".join(f"{k:>14}" for k in curves))
    counts = next(iter(curves.values()))[0]
    for i, n in enumerate(counts):
        print(f"{n:>9} " + " ".join(f"{curves[k][1][i]:>14.4g}" for k in curves))
