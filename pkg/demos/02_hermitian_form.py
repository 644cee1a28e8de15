"""Walkthrough: the overlap G(z12) of coherent-state eigenfunctions.

Run with ``python demos/02_hermitian_form.py``.
"""

import numpy as np

from critline.hermitian_form import (
    EigenLabel,
    FormConfig,
    compass_profile,
    eigenfunction,
    g_closed,
    g_quadrature,
    hermiticity_residual,
    norm_squared,
    overlap,
)
from critline.errors import NonRealNormError

cfg = FormConfig(K=1.0)
print("calibration constant:", cfg.calibration)
print("probe residuals (closed vs quadrature):", cfg.calibration_residuals)

# %% Eigenfunctions t^z F(t) on a few points.
for t in (0.5, 1.0, 5.0):
    print(f"Psi_(1/2+i)({t}) = {eigenfunction(0.5 + 1j, t):.6f}")

# %% Two independent routes to G agree to roundoff (G(2) is an exact zero).
print()
for z in (2.0, 1.5 + 2j, 0.75 - 3j, 3 + 10j):
    c, q = g_closed(z, cfg), g_quadrature(z, cfg)
    print(f"G({z}): closed {c:.12g}, quadrature {q:.12g}, |diff| {abs(c - q):.1e}")

# %% Growth along vertical lines: |G| ~ exp(pi |Im z| / 2).
for y in (0, 10, 20, 40):
    print(f"|G(1/2 + {y}i)| = {abs(g_closed(complex(0.5, y), cfg)):.3e}")

# %% Overlaps depend on conj(z1) + z2 only.
z1, z2 = 0.3 + 2j, 0.4 - 1j
print("\noverlap:", overlap(z1, z2, cfg), "=", g_closed(z1.conjugate() + z2, cfg))

# %% Special values and the compass around z = 1.
print("G(1) =", g_closed(1, cfg), " G(0) =", g_closed(0, cfg))
centre, ring = compass_profile(1.0, 0.05, cfg)
print("compass |G|:", np.round(ring, 5), "centre", centre)

# %% Hermiticity residual: zero on integer lines, large at generic points.
for z in (1 + 3.7j, 2 - 5j, 0.8 + 2j):
    print(f"residual at {z}: {abs(hermiticity_residual(z, cfg)):.3e}")

# %% Norms by label role.
print("\nnorm of critical label:", norm_squared(EigenLabel.critical(14.13), cfg))
print("norm of vacuum:", norm_squared(0, cfg))
try:
    norm_squared(0.3 + 5j, cfg)
except NonRealNormError as exc:
    print("generic label:", exc)
