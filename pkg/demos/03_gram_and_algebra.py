"""Walkthrough: Gram matrices over zeros and the bracket engine.

Run with ``python demos/03_gram_and_algebra.py``.
"""

import numpy as np

from critline.algebra import MetricOracle, bracket, jacobi_check, sugawara_check, sym, vacuum_rep_check
from critline.gram import build_gram, gaussian_model, positivity_report, schwarz_scan
from critline.hermitian_form import FormConfig
from critline.zeros import find_zeros_upto

cfg = FormConfig()
zt = find_zeros_upto(60)

# %% Gram matrix of the first zeros and its spectrum.
gm = build_gram(zt, cfg, 5)
np.set_printoptions(precision=3, linewidth=110)
print("|entries|:\n", np.abs(gm.entries))
rep = positivity_report(gm)
print("eigenvalues:", np.array(rep.eigenvalues))
print("Cholesky succeeded:", rep.cholesky_succeeded)
print("Schwarz violations:", len(schwarz_scan(gm)), "of", gm.n * (gm.n - 1) // 2, "pairs")

# %% Gaussian model of the y-difference profile.
for y in (0, 2, 4, 8):
    print(f"|model({y})| = {abs(gaussian_model(y)):.4f}")

# %% Brackets and Jacobi identities.
metric = MetricOracle.from_config(cfg)
print("\n[L_1, L_i] =", bracket(sym("L", 1), sym("L", 1j), metric))
print("{Q_0, Q+_0} =", bracket(sym("Q", 0), sym("Q_dag", 0), metric))
print("pure-L Jacobi:", jacobi_check(sym("L", 0.2), sym("L", 1j), sym("L", 0.7 - 0.3j), metric))
a, b, c = 0.3 + 0.1j, 0.6 - 0.2j, 0.1 + 0.5j
print("(L, T+, T) Jacobi:", jacobi_check(sym("L", a), sym("T_dag", b), sym("T", c), metric))

# %% Sugawara contraction on the first three zeros.
labels = zt.labels()[:3]
res = sugawara_check(labels, 0j, labels[0], metric)
print(f"\nSugawara t = {res.t_coefficient:.12f}")
print(f"condition numbers: raw {res.condition_raw:.2e}, scaled {res.condition_equilibrated:.2f}")

# %% Vacuum checks and the two reported mismatches.
vac = vacuum_rep_check(metric, [0j, 2.0, labels[0]])
print("G(0) =", vac["G0"])
for m in vac["paper_mismatches"]:
    print(f"- {m['id']}: derived {m['derived']!r}, stated {m['stated']!r}")
for p in vac["probes"]:
    print("probe", p["label"], p["class"], f"{p['value']:.2e}")
