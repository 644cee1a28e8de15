"""Gram matrix of coherent states on critical-line zeros and its audits.

For labels ``z_k = 1/2 + i y_k`` the overlap is ``G(1 + i(y_j - y_i))``.
The audits are Hermiticity, the Schwarz bound ``|G_ij| <= K``, Cholesky,
and a cyclic Jacobi eigensolver run in extended precision
(``np.longdouble``) so the smallest eigenvalue can be compared with the
closed-form roots of the characteristic polynomial for ``n <= 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import AccuracyError, ConvergenceError, DimensionError, InsufficientDataError
from .hermitian_form import FormConfig, default_config, g_closed
from .zeros import ZeroTable

SCHWARZ_TOL = 1e-10
HERMITIAN_TOL = 1e-8
JACOBI_TOL = 1e-10


@dataclass(frozen=True)
class GramMatrix:
    labels: tuple
    entries: np.ndarray
    K: float

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        n = len(self.labels)
        if n < 1:
            raise DimensionError("a Gram matrix needs at least one label")
        if a.shape != (n, n):
            raise DimensionError(f"entries have shape {a.shape}, expected {(n, n)}")
        if np.any(np.diag(a) != self.K):
            raise ValueError("diagonal entries must equal K exactly")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "labels", tuple(complex(z) for z in self.labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    def leading(self, m: int) -> "GramMatrix":
        return GramMatrix(self.labels[:m], self.entries[:m, :m], self.K)


def build_gram(zt: ZeroTable, cfg: FormConfig | None = None, n: int | None = None) -> GramMatrix:
    """Overlaps of the first ``n`` zeros (all of them by default)."""
    cfg = cfg or default_config()
    ys = zt.ordinates if n is None else zt.head(n).ordinates
    if not ys:
        raise InsufficientDataError("the zero table is empty")
    m = len(ys)
    a = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            if i == j:
                a[i, j] = cfg.K
                continue
            try:
                a[i, j] = g_closed(complex(1.0, ys[j] - ys[i]), cfg)
            except AccuracyError as exc:
                raise AccuracyError(f"entry ({i}, {j}): {exc}") from exc
    gm = GramMatrix(tuple(complex(0.5, y) for y in ys), a, cfg.K)
    res = hermitian_residual(gm)
    if res >= HERMITIAN_TOL:
        raise AccuracyError(f"Gram matrix fails the Hermiticity check ({res:.3e})")
    return gm


def hermitian_residual(gm: GramMatrix) -> float:
    a = gm.entries
    return float(np.max(np.abs(a - a.conj().T)))


def schwarz_scan(gm: GramMatrix, tol: float = SCHWARZ_TOL) -> list[tuple[int, int, float]]:
    """Pairs ``i < j`` with ``|G_ij| > K + tol``."""
    mags = np.abs(gm.entries)
    out = []
    for i in range(gm.n):
        for j in range(i + 1, gm.n):
            if mags[i, j] > gm.K + tol:
                out.append((i, j, float(mags[i, j])))
    return out


# ---------------------------------------------------------------------------
# eigenvalues


def jacobi_eigenvalues(a, tol: float = JACOBI_TOL, max_sweeps: int | None = None):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Runs in ``np.clongdouble``.  Stops when the off-diagonal Frobenius norm
    is below ``tol * max(1, ||A||_F)``.  Returns ``(sorted eigenvalues as
    np.longdouble, sweeps)``.
    """
    A = np.array(a, dtype=np.clongdouble)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError("matrix must be square")
    limit = max_sweeps if max_sweeps is not None else 100 * n * n
    scale = max(np.longdouble(1), np.sqrt(np.sum(np.abs(A) ** 2)))
    target = np.longdouble(tol) * scale

    def off_norm():
        off = np.abs(A) ** 2
        off[np.diag_indices(n)] = 0
        return np.sqrt(np.sum(off))

    sweeps = 0
    while off_norm() > target:
        if sweeps >= limit:
            raise ConvergenceError(f"Jacobi did not converge in {limit} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                g = abs(apq)
                if g == 0:
                    continue
                e = apq / g
                tau = (A[q, q].real - A[p, p].real) / (2 * g)
                if tau == 0:
                    t = np.longdouble(1)
                else:
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                se, sce = s * e, s * np.conj(e)
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - sce * col_q
                A[:, q] = se * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - se * row_q
                A[q, :] = sce * row_p + c * row_q
                A[p, q] = A[q, p] = 0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    return np.sort(np.diag(A).real), sweeps


def polynomial_eigenvalues(a):
    """Closed-form eigenvalues of a Hermitian matrix with ``n <= 3``.

    Uses the trigonometric solution of the characteristic cubic, in
    ``np.longdouble``.
    """
    A = np.array(a, dtype=np.clongdouble)
    n = A.shape[0]
    if n == 1:
        return np.array([A[0, 0].real])
    if n == 2:
        a11, a22 = A[0, 0].real, A[1, 1].real
        mid = (a11 + a22) / 2
        rad = np.sqrt(((a11 - a22) / 2) ** 2 + abs(A[0, 1]) ** 2)
        return np.array([mid - rad, mid + rad])
    if n != 3:
        raise DimensionError("closed form implemented for n <= 3")
    d = A.diagonal().real
    p1 = abs(A[0, 1]) ** 2 + abs(A[0, 2]) ** 2 + abs(A[1, 2]) ** 2
    q = d.sum() / 3
    if p1 == 0:
        return np.sort(d)
    p2 = ((d - q) ** 2).sum() + 2 * p1
    p = np.sqrt(p2 / 6)
    B = (A - q * np.eye(3, dtype=np.clongdouble)) / p
    detB = (
        B[0, 0] * (B[1, 1] * B[2, 2] - B[1, 2] * B[2, 1])
        - B[0, 1] * (B[1, 0] * B[2, 2] - B[1, 2] * B[2, 0])
        + B[0, 2] * (B[1, 0] * B[2, 1] - B[1, 1] * B[2, 0])
    ).real
    r = np.clip(detB / 2, np.longdouble(-1), np.longdouble(1))
    phi = np.arccos(r) / 3
    two_pi_3 = 2 * np.arccos(np.longdouble(-1)) / 3
    hi = q + 2 * p * np.cos(phi)
    lo = q + 2 * p * np.cos(phi + two_pi_3)
    mid = 3 * q - hi - lo
    return np.sort(np.array([lo, mid, hi]))


@dataclass
class PositivityReport:
    min_eigenvalue: float
    cholesky_succeeded: bool
    schwarz_violations: list
    eigenvalues: list = field(default_factory=list)
    jacobi_sweeps: int = 0
    polynomial_eigenvalues: list | None = None
    polynomial_max_diff: float | None = None
    # difference of the smallest eigenvalues, taken before rounding to float64
    polynomial_min_diff: float | None = None

    def to_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "cholesky_succeeded": self.cholesky_succeeded,
            "schwarz_violations": [list(v) for v in self.schwarz_violations],
            "eigenvalues": self.eigenvalues,
            "jacobi_sweeps": self.jacobi_sweeps,
            "polynomial_eigenvalues": self.polynomial_eigenvalues,
            "polynomial_max_diff": self.polynomial_max_diff,
            "polynomial_min_diff": self.polynomial_min_diff,
        }


def cholesky_ok(a) -> bool:
    try:
        np.linalg.cholesky(np.asarray(a, dtype=complex))
    except np.linalg.LinAlgError:
        return False
    return True


def positivity_report(gm: GramMatrix, tol: float = JACOBI_TOL) -> PositivityReport:
    eig, sweeps = jacobi_eigenvalues(gm.entries, tol)
    rep = PositivityReport(
        min_eigenvalue=float(eig[0]),
        cholesky_succeeded=cholesky_ok(gm.entries),
        schwarz_violations=schwarz_scan(gm),
        eigenvalues=[float(v) for v in eig],
        jacobi_sweeps=sweeps,
    )
    if gm.n <= 3:
        poly = polynomial_eigenvalues(gm.entries)
        rep.polynomial_eigenvalues = [float(v) for v in poly]
        rep.polynomial_max_diff = float(np.max(np.abs(poly - eig)))
        rep.polynomial_min_diff = float(abs(poly[0] - eig[0]))
    return rep


def correlation_form(f, g, gm: GramMatrix) -> complex:
    """``<f|g> = Σ conj(f_i) G_ij g_j``."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != (gm.n,) or g.shape != (gm.n,):
        raise DimensionError(
            f"coefficient lengths {f.shape}, {g.shape} do not match n = {gm.n}"
        )
    return complex(f.conj() @ gm.entries @ g)


# ---------------------------------------------------------------------------
# Gaussian model and almost-zero experiment

_SQRT_2_OVER_PI = math.sqrt(2 / math.pi)
_E_RATIO = math.e / (math.e - 1)


def _sinhc_pi(y: float) -> float:
    # sinh(πy)/(πy)
    x = math.pi * y
    if abs(x) < 1e-4:
        return 1.0 + x * x / 6
    return math.sinh(x) / x


def gaussian_model(y: float) -> complex:
    """``-(√2/(√π i)) sinh(πy) e^(-y²/2) [1/(iy) + e/(e-1)]``.

    ``sinh(πy)/(iy)`` is taken as ``-iπ sinh(πy)/(πy)`` so ``y = 0`` gives
    the limit ``√(2π)``.
    """
    y = float(y)
    pref = -_SQRT_2_OVER_PI / 1j * math.exp(-0.5 * y * y)
    bracket = -1j * math.pi * _sinhc_pi(y) + math.sinh(math.pi * y) * _E_RATIO
    return complex(pref * bracket)


def gaussian_profile(cfg: FormConfig | None = None, y_max: float = 10.0, step: float = 0.1):
    """Rows ``(y, model, closed form, relative deviation)`` for report only."""
    rows = []
    n = int(round(y_max / step))
    for k in range(n + 1):
        y = k * step
        model = gaussian_model(y)
        exact = g_closed(complex(1.0, y), cfg)
        rows.append(
            {
                "y": y,
                "model_re": model.real,
                "model_im": model.imag,
                "closed_re": exact.real,
                "closed_im": exact.imag,
                "rel_dev": abs(model - exact) / abs(exact),
            }
        )
    return rows


def almost_zero_scan(zt: ZeroTable, cfg: FormConfig | None = None, sums: bool = False):
    """One row per pair ``i < j``: ``|ζ(1+iy12)|``, ``|G(1+iy12)|`` and
    ``exp(-π y12)`` with ``y12 = y_j - y_i``; sorted by ``y12``.

    ``sums=True`` adds the same columns for ``y_i + y_j``.
    """
    cfg = cfg or default_config()
    ys = zt.ordinates
    rows = []
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            y12 = ys[j] - ys[i]
            z = complex(1.0, y12)
            row = {
                "y12": y12,
                "abs_zeta": abs(special.zeta(z, cfg.acc)),
                "abs_G": abs(g_closed(z, cfg)),
                "exp_bound": math.exp(-math.pi * y12),
            }
            if sums:
                ysum = ys[i] + ys[j]
                zs = complex(1.0, ysum)
                row.update(
                    y_sum=ysum,
                    abs_zeta_sum=abs(special.zeta(zs, cfg.acc)),
                    abs_G_sum=abs(g_closed(zs, cfg)),
                )
            rows.append(row)
    rows.sort(key=lambda r: r["y12"])
    return rows


def gram_to_dict(gm: GramMatrix, report: PositivityReport | None = None) -> dict:
    return {
        "k": gm.n,
        "labels": [[z.real, z.imag] for z in gm.labels],
        "entries": [[v.real, v.imag] for v in gm.entries.ravel()],
        "report": report.to_dict() if report is not None else None,
    }
