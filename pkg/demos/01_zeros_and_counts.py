"""Walkthrough: critical-line zeros and the classical counting formulas.

Run with ``python demos/01_zeros_and_counts.py``.
"""

import numpy as np

from critline.special import hardy_z, riemann_siegel_theta
from critline.zeros import (
    count_profile,
    find_zeros_upto,
    gap_statistics,
    min_gap_bound,
    riemann_count_estimate,
)

# %% Hardy's Z is real on the critical line; its sign changes are the zeros.
ts = np.linspace(10, 30, 9)
for t in ts:
    print(f"Z({t:5.1f}) = {hardy_z(t):+.6f}")
print("theta(100) =", riemann_siegel_theta(100.0))

# %% Scan and refine every zero below 200.
zt = find_zeros_upto(200)
print(f"\n{len(zt)} zeros below 200; first five:")
print(np.array(zt.ordinates[:5]))

# %% Observed count against Riemann's estimate and the refined count theta/pi + 1.
print("\n     T  found  estimate  refined  rel.dev")
for row in count_profile(zt, [50, 100, 150, 200]):
    print(
        f"{row['T']:6.0f} {row['found']:6d} {row['estimate']:9.3f}"
        f" {row['refined']:8.3f} {row['rel_deviation']:8.3%}"
    )

# %% Gaps: the smallest observed gap sits well inside the bound.
stats = gap_statistics(zt)
print(f"\nmin gap {stats.min_gap:.4f}, bound at 200: {min_gap_bound(200):.4f}")
print(f"max gap {stats.max_gap:.4f}, mean gap {stats.mean_gap:.4f}")

# %% Density per window: the quoted average density runs low; differencing
# the count estimate tracks the data closely.
print("\nwindow        count  empirical  quoted  from-estimate")
for row in stats.density_profile:
    if "average_density" in row:
        print(
            f"[{row['a']:5.0f},{row['b']:5.0f}] {row['count']:5d} {row['empirical']:10.4f}"
            f" {row['average_density']:7.4f} {row['estimate_density']:14.4f}"
        )
print("\nN(2 pi e) =", riemann_count_estimate(2 * np.pi * np.e))
