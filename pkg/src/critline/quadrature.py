"""Double-exponential quadrature for Mellin-type integrals.

Every integral here has the shape

    M[f](s) = ∫_0^∞ f(t) t^s dt/t

with ``f`` analytic in the right half-plane apart from isolated poles on the
imaginary axis and a Laurent expansion ``f(t) = Σ c_k t^(k+p)`` at the origin.

Two devices keep this well conditioned in double precision:

* the path is the rotated ray ``arg t = φ``.  The ``exp(-π|Im s|/2)`` decay
  of the result is then carried by ``|t^s|`` itself instead of emerging
  from cancellation between O(1) oscillations;
* the piece ``|t| < 1`` is integrated term by term from the Laurent series,
  and the rest, ``t = exp(u + iφ)`` with ``u`` in ``[0, U]``, by the tanh-sinh
  rule.  The integrand is below ``exp(-50)`` of its scale at ``u = U``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError

# Closest approach of the rotated ray to the imaginary axis.
MIN_GAP_ANGLE = 0.03
# Target ``gap angle * |Im s|``: bounds the cancellation factor by exp(4).
ROTATION_BUDGET = 4.0
_TAIL_LOG = 50.0
_TAU_MAX = 3.2


@dataclass(frozen=True)
class MellinKernel:
    """Kernel ``f`` with its Laurent coefficients at the origin.

    ``f(t) = Σ_k coeffs[k] * t**(k + power)`` must converge for ``|t| <= 1``
    fast enough that the listed coefficients reach double precision there.
    """

    func: Callable[[np.ndarray], np.ndarray]
    coeffs: Sequence[float]
    power: int = 0


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    nodes: int
    angle: float


def rotation_angle(im_s: float) -> float:
    """Ray angle ``φ`` used for an exponent with imaginary part ``im_s``."""
    if im_s == 0.0:
        return 0.0
    gap = min(math.pi / 2, max(MIN_GAP_ANGLE, ROTATION_BUDGET / abs(im_s)))
    return math.copysign(math.pi / 2 - gap, im_s)


def _series_part(kernel: MellinKernel, s: complex, phi: float) -> complex:
    # ∫_0^{e^{iφ}} t^(k+p+s-1) dt = e^{iφ(k+p+s)} / (k+p+s)
    total = 0j
    for k, c in enumerate(kernel.coeffs):
        if c == 0:
            continue
        a = s + k + kernel.power
        total += c * cmath.exp(1j * phi * a) / a
    return total


def tanh_sinh_nodes(a: float, b: float, h: float, offset: float = 0.0):
    """Tanh-sinh abscissae and weights on ``[a, b]`` for step ``h``.

    ``offset=0.5`` gives the midpoints used when halving ``h``.
    """
    n = int(math.ceil(_TAU_MAX / h))
    tau = h * (np.arange(-n, n + (0 if offset else 1)) + offset)
    q = 0.5 * math.pi * np.sinh(tau)
    # 1 + tanh(q) = 2 / (1 + e^{-2q}); avoids cancellation at the left end
    with np.errstate(over="ignore"):
        x_plus = 2.0 / (1.0 + np.exp(-2.0 * q))
        w = 0.5 * math.pi * np.cosh(tau) / np.cosh(q) ** 2
    nodes = a + 0.5 * (b - a) * x_plus
    weights = 0.5 * (b - a) * w * h
    keep = weights > 0
    return nodes[keep], weights[keep]


def mellin(
    kernel: MellinKernel,
    s: complex,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
    max_nodes: int = 200_000,
) -> QuadResult:
    """Integrate ``∫_0^∞ f(t) t^s dt/t`` along a rotated ray.

    Requires ``Re(s) + kernel.power > 0`` and that ``f`` has no singularity
    in the closed sector between the positive axis and the ray.
    """
    s = complex(s)
    if not s.real + kernel.power > 0:
        raise ValueError("integral diverges at the origin")
    phi = rotation_angle(s.imag)
    cos_phi = math.cos(phi)
    phase = complex(math.cos(phi), math.sin(phi))

    sigma = max(s.real, 0.0)
    r_max = (_TAIL_LOG + 10.0) / cos_phi
    r_max = (_TAIL_LOG + 10.0 + sigma * math.log1p(r_max)) / cos_phi
    u_max = math.log(max(r_max, 2.0))

    head = _series_part(kernel, s, phi)

    def integrand(u: np.ndarray) -> np.ndarray:
        t = np.exp(u) * phase
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            vals = kernel.func(t) * np.exp(s * (u + 1j * phi))
        vals[~np.isfinite(vals)] = 0.0
        return vals

    # start with enough nodes to resolve every oscillation of the integrand
    total_phase = abs(s.imag) * u_max + r_max * abs(math.sin(phi))
    needed = 8.0 * total_phase / (2 * math.pi) + 16.0
    h = 0.5
    while 2 * _TAU_MAX / h < needed:
        h *= 0.5
    nodes, weights = tanh_sinh_nodes(0.0, u_max, h)
    wf = weights * integrand(nodes)
    estimate = complex(np.sum(wf))
    mag = float(np.sum(np.abs(wf)))
    count = nodes.size
    agreed = 0
    while True:
        mid, mid_w = tanh_sinh_nodes(0.0, u_max, h, offset=0.5)
        mid_wf = mid_w * integrand(mid)
        count += mid.size
        # halving h halves every old weight; midpoints enter at the new step
        refined = 0.5 * estimate + 0.5 * complex(np.sum(mid_wf))
        mag = 0.5 * mag + 0.5 * float(np.sum(np.abs(mid_wf)))
        h *= 0.5
        err = abs(refined - estimate)
        value = head + refined
        floor = 64 * np.finfo(float).eps * (mag + abs(head))
        if err <= max(abs_tol + rel_tol * abs(value), floor):
            agreed += 1
        else:
            agreed = 0
        # two consecutive agreements guard against aliasing coincidences
        if agreed >= 2:
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise AccuracyError("quadrature produced a non-finite value")
            return QuadResult(value, float(max(err, floor)), count, phi)
        if 2 * count > max_nodes:
            raise AccuracyError(
                f"quadrature did not converge within {max_nodes} nodes "
                f"(s={s}, last change {err:.3e})"
            )
        estimate = refined
