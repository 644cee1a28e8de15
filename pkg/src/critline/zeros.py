"""Critical-line zeros of ζ from sign changes of Hardy's Z, plus the
classical zero-count and gap formulas they are compared against.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import (
    CacheFormatError,
    CacheStaleError,
    DomainError,
    InsufficientDataError,
    ScanError,
)
from .special import DEFAULT_ACCURACY, EvalAccuracy, hardy_z, riemann_siegel_theta

T_MAX_LIMIT = 500.0
MIN_TOL = 1e-10
BASE_STEP = 0.1
BASE_HEIGHT = 100.0
COUNT_BAND = 0.05
TWO_PI = 2 * math.pi
CACHE_MAGIC = "# critline-zeros"
CACHE_VERSION = "v1"


@dataclass(frozen=True)
class ZeroTable:
    """Increasing zero ordinates below ``t_max``, located to ``tol``."""

    ordinates: tuple
    t_max: float
    tol: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ys = tuple(float(y) for y in self.ordinates)
        object.__setattr__(self, "ordinates", ys)
        if any(not y > 0 for y in ys):
            raise DomainError("ordinates must be positive")
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise DomainError("ordinates must be strictly increasing")
        if ys and ys[-1] >= self.t_max:
            raise DomainError("ordinates must lie below t_max")

    def __len__(self):
        return len(self.ordinates)

    def head(self, n: int) -> "ZeroTable":
        if n > len(self.ordinates):
            raise InsufficientDataError(
                f"table holds {len(self.ordinates)} zeros, {n} requested"
            )
        return ZeroTable(self.ordinates[:n], self.t_max, self.tol)

    def labels(self) -> list[complex]:
        return [complex(0.5, y) for y in self.ordinates]


# ---------------------------------------------------------------------------
# classical formulas


def riemann_count_estimate(T: float) -> float:
    """Riemann's ``N(T) ≈ (T/2π)(log(T/2π) - 1)``; negative for small T."""
    T = float(T)
    if not T > 0:
        raise DomainError("N(T) needs T > 0")
    x = T / TWO_PI
    return x * (math.log(x) - 1.0)


def refined_count(T: float) -> float:
    """``θ(T)/π + 1``, the smooth part of the Riemann-von Mangoldt count."""
    return riemann_siegel_theta(T, method="exact") / math.pi + 1.0


def min_gap_bound(T: float) -> float:
    """Upper bound ``2π/(log(T/2π) - 1)`` on the smallest gap below T."""
    T = float(T)
    if not T > TWO_PI * math.e:
        raise DomainError("the gap bound needs T > 2πe")
    return TWO_PI / (math.log(T / TWO_PI) - 1.0)


def average_density(T: float) -> float:
    """``(1/2π)(log(T/2π) - 1)``, the average density quoted with N(T)."""
    return (math.log(T / TWO_PI) - 1.0) / TWO_PI


def local_density(T: float) -> float:
    """``dN/dT = (1/2π) log(T/2π)`` of the count estimate."""
    return math.log(T / TWO_PI) / TWO_PI


# ---------------------------------------------------------------------------
# scanning


def scan_step(t: float) -> float:
    """Pre-scan step: 0.1 up to height 100, then shrink with the density."""
    if t <= BASE_HEIGHT:
        return BASE_STEP
    return BASE_STEP * local_density(BASE_HEIGHT) / local_density(t)


def _scan_grid(t_max: float) -> np.ndarray:
    pts = [0.0]
    t = 0.0
    while t < t_max:
        t = min(t + scan_step(t), t_max)
        pts.append(t)
    return np.array(pts)


def _refine_interval(args):
    a, b, za, zb, tol, acc = args
    return brentq(lambda t: hardy_z(t, acc), a, b, xtol=tol, rtol=4 * np.finfo(float).eps)


def bracket_ok(y: float, tol: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> bool:
    """Sign change of Z across ``[y - tol, y + tol]``."""
    return hardy_z(y - tol, acc) * hardy_z(y + tol, acc) < 0


def verify_ordinate(y: float, tol: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> bool:
    """Bracketing sign change and ``|Z(y)| < 10 tol |Z'(y)|``."""
    lo, hi = hardy_z(y - tol, acc), hardy_z(y + tol, acc)
    if not lo * hi < 0:
        return False
    slope = abs(hi - lo) / (2 * tol)
    return abs(hardy_z(y, acc)) < 10 * tol * slope


def find_zeros_upto(
    t_max: float,
    tol: float = 1e-10,
    acc: EvalAccuracy = DEFAULT_ACCURACY,
    workers: int = 1,
) -> ZeroTable:
    """All sign changes of Z on ``[0, t_max]``, refined by Brent's method.

    The count is compared with :func:`riemann_count_estimate` for
    ``t_max >= 50``; the outcome is stored in ``meta`` rather than raised.
    """
    t_max = float(t_max)
    if not 0 < t_max <= T_MAX_LIMIT:
        raise DomainError(f"t_max must lie in (0, {T_MAX_LIMIT:g}]")
    if not tol >= MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL:g}")

    grid = _scan_grid(t_max)
    z = np.array([hardy_z(t, acc) for t in grid])
    jobs = []
    for i in range(len(grid) - 1):
        if z[i] == 0.0:
            # exact hit on a grid point: bracket it with its neighbours
            continue
        j = i + 1
        if z[j] == 0.0 and j + 1 < len(grid):
            j += 1
        if z[i] * z[j] < 0:
            jobs.append((grid[i], grid[j], z[i], z[j], tol, acc))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            roots = list(pool.map(_refine_interval, jobs))
    else:
        roots = [_refine_interval(job) for job in jobs]
    roots = sorted(set(r for r in roots if 0 < r < t_max))

    gaps = np.diff(roots)
    for k, gap in enumerate(gaps):
        step = scan_step(roots[k])
        if gap < 4 * step:
            raise ScanError(
                f"zeros at {roots[k]:.6f} and {roots[k + 1]:.6f} are closer "
                f"than 4 scan steps ({step:.3g}); rescan finer"
            )

    meta = {"scan_points": int(len(grid))}
    if t_max >= 50:
        est = riemann_count_estimate(t_max)
        found = len(roots)
        dev = abs(found - est) / found if found else math.inf
        meta.update(count_estimate=est, count_deviation=dev, count_ok=dev < COUNT_BAND)
    return ZeroTable(tuple(roots), t_max, tol, meta)


def count_profile(zt: ZeroTable, heights) -> list[dict]:
    """Observed count vs Riemann's estimate and the refined smooth count."""
    ys = np.asarray(zt.ordinates)
    rows = []
    for T in heights:
        found = int(np.searchsorted(ys, T))
        est = riemann_count_estimate(T)
        rows.append(
            {
                "T": float(T),
                "found": found,
                "estimate": est,
                "refined": refined_count(T),
                "rel_deviation": abs(found - est) / found if found else math.inf,
            }
        )
    return rows


@dataclass(frozen=True)
class GapStatistics:
    min_gap: float
    max_gap: float
    mean_gap: float
    argmin: int
    density_profile: list


def gap_statistics(zt: ZeroTable, window: float = 50.0) -> GapStatistics:
    """Consecutive-gap statistics and per-window zero densities.

    Each window row carries the empirical density, the average density
    quoted with N(T) at the window midpoint, the exact derivative of the
    estimate there, and the density implied by differencing the estimate.
    """
    ys = np.asarray(zt.ordinates)
    if ys.size < 2:
        raise InsufficientDataError("gap statistics need at least two ordinates")
    gaps = np.diff(ys)
    k = int(np.argmin(gaps))
    profile = []
    a = 0.0
    while a < zt.t_max:
        b = min(a + window, zt.t_max)
        count = int(np.searchsorted(ys, b) - np.searchsorted(ys, a))
        mid = 0.5 * (a + b)
        emp = count / (b - a)
        row = {"a": a, "b": b, "mid": mid, "count": count, "empirical": emp}
        if mid > TWO_PI * math.e:
            pd = average_density(mid)
            row.update(
                average_density=pd,
                average_rel_dev=abs(emp - pd) / emp if emp else math.inf,
                local_density=local_density(mid),
                estimate_density=(
                    riemann_count_estimate(b)
                    - (riemann_count_estimate(a) if a > 0 else 0.0)
                ) / (b - a),
            )
            row["estimate_rel_dev"] = (
                abs(emp - row["estimate_density"]) / emp if emp else math.inf
            )
        profile.append(row)
        a = b
    return GapStatistics(
        float(gaps.min()), float(gaps.max()), float(gaps.mean()), k, profile
    )


# ---------------------------------------------------------------------------
# cache


def format_cache(zt: ZeroTable) -> str:
    lines = [f"{CACHE_MAGIC} {CACHE_VERSION} tmax={zt.t_max:.15g} tol={zt.tol:.15g}"]
    lines += [f"{k},{y:.15g}" for k, y in enumerate(zt.ordinates, start=1)]
    return "\n".join(lines) + "\n"


def write_cache(zt: ZeroTable, path) -> Path:
    """Atomic write through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(format_cache(zt))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_cache(path) -> ZeroTable:
    """Parse a cache file without re-verifying ordinates."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise CacheFormatError(f"{path}: empty cache file")
    head = lines[0].split()
    if len(head) != 5 or " ".join(head[:2]) != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad header {lines[0]!r}")
    if head[2] != CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {head[2]!r}")
    try:
        fields = dict(item.split("=", 1) for item in head[3:])
        t_max = float(fields["tmax"])
        tol = float(fields["tol"])
    except (KeyError, ValueError) as exc:
        raise CacheFormatError(f"{path}: bad header fields {lines[0]!r}") from exc
    ys = []
    for n, line in enumerate(lines[1:], start=1):
        parts = line.split(",")
        if len(parts) != 2:
            raise CacheFormatError(f"{path}:{n + 1}: expected 'k,y_k'")
        try:
            k, y = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise CacheFormatError(f"{path}:{n + 1}: unparsable row") from exc
        if k != n:
            raise CacheFormatError(f"{path}:{n + 1}: index {k} out of sequence")
        ys.append(y)
    try:
        return ZeroTable(tuple(ys), t_max, tol)
    except DomainError as exc:
        raise CacheFormatError(f"{path}: {exc}") from exc


def validate_cache(path, acc: EvalAccuracy = DEFAULT_ACCURACY) -> ZeroTable:
    """Read a cache and re-check each ordinate's bracketing sign change."""
    zt = read_cache(path)
    for k, y in enumerate(zt.ordinates, start=1):
        if not bracket_ok(y, zt.tol, acc):
            raise CacheStaleError(
                f"{path}: ordinate {k} = {y!r} no longer brackets a zero of Z"
            )
    return zt
