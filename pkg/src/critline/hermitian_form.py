"""Coherent-state eigenfunctions and their Hermitian form G(z12).

The eigenfunctions are ``Ψ_z(t) = t^z F(t)`` with ``F(t)^2 = e^-t/(1-e^-t)``.
Their overlap depends only on ``z12 = conj(z1) + z2``; the contour integral
around the positive axis evaluates to

    G(z) = c K sin(πz) Γ(z) ζ(z) / π = c K ζ(z) / Γ(1 - z),

where ``c`` is a calibration constant fixed once from the quadrature route by
demanding ``G(1) = K`` (it comes out as -1).

Two evaluation routes are provided:

* :func:`g_closed` uses the Euler-Maclaurin ζ and Lanczos Γ;
* :func:`g_quadrature` integrates the Bose-Einstein kernel on a rotated ray
  (``Re z > 1``) or the subtracted form ``Γ z/(z-1) + I`` in the strip.
  It shares no truncation logic with the closed route.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import special
from .errors import DomainError, NonRealNormError
from .special import DEFAULT_ACCURACY, EvalAccuracy

CRITICAL_RE_TOL = 1e-12
NORM_REALITY_TOL = 1e-9


class Role(str, Enum):
    VACUUM = "vacuum"
    CRITICAL_LINE = "critical_line"
    GENERIC = "generic"


def classify(z: complex) -> Role:
    z = complex(z)
    if z == 0:
        return Role.VACUUM
    if abs(z.real - 0.5) <= CRITICAL_RE_TOL:
        return Role.CRITICAL_LINE
    return Role.GENERIC


@dataclass(frozen=True)
class EigenLabel:
    """Eigenvalue ``z`` of a coherent state, tagged by its role."""

    z: complex
    role: Role = None

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("label must be finite")
        object.__setattr__(self, "z", z)
        inferred = classify(z)
        if self.role is None:
            object.__setattr__(self, "role", inferred)
        elif Role(self.role) != inferred:
            raise DomainError(f"label {z} has role {inferred.value}, not {self.role}")
        else:
            object.__setattr__(self, "role", Role(self.role))

    @classmethod
    def critical(cls, y: float) -> "EigenLabel":
        return cls(complex(0.5, y))


def _as_complex(z) -> complex:
    return z.z if isinstance(z, EigenLabel) else complex(z)


# ---------------------------------------------------------------------------
# uncalibrated contour form  sin(πz) Γ(z) ζ(z) / π


def _sinc(w: complex) -> complex:
    # sin(πw)/(πw), entire
    if w == 0:
        return 1.0 + 0j
    if abs(w) < 1e-4:
        return 1.0 - (math.pi * w) ** 2 / 6.0
    return special.csinpi(w) / (math.pi * w)


def raw_closed(z: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """``ζ(z)/Γ(1-z)`` with its limits at 0 and 1 (no calibration, no K)."""
    z = complex(z)
    if abs(z - 1) < 1e-8:
        # ζ(z)/Γ(1-z) = -1 + O((z-1)^2)
        return -1.0 + 0j
    if z == 0:
        return -0.5 + 0j
    if z.real < -0.5:
        # functional equation keeps ζ away from Re < 0:
        # ζ(z)/Γ(1-z) = 2^z π^(z-1) sin(πz/2) ζ(1-z)
        return (
            cmath.exp(z * math.log(2) + (z - 1) * math.log(math.pi))
            * special.csinpi(0.5 * z)
            * special.zeta(1 - z, acc)
        )
    return special.zeta(z, acc) * special.rgamma(1 - z)


def raw_quadrature(z: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """Contour form by quadrature only, ``Re z > 0``."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError("the real-axis representation needs Re z12 > 0")
    if z.real > 1:
        return special.csinpi(z) / math.pi * special.gamma_zeta_quad(z, acc)
    # Γζ = Γ z/(z-1) + I and sin(πz)/(π(z-1)) = -sinc(z-1)
    head = -_sinc(z - 1) * z * special.gamma_quad(z, acc)
    return head + special.csinpi(z) / math.pi * special.mellin_I(z, acc)


# ---------------------------------------------------------------------------
# configuration and calibration

CALIBRATION_PROBES = (2.0 + 0j, 1.5 + 2j, 0.75 - 3j)


@functools.lru_cache(maxsize=None)
def _calibrate(acc: EvalAccuracy) -> tuple[complex, tuple[float, ...]]:
    c = 1.0 / raw_quadrature(1.0, acc)
    residuals = tuple(
        abs(c * raw_closed(z, acc) - c * raw_quadrature(z, acc))
        for z in CALIBRATION_PROBES
    )
    return c, residuals


@dataclass(frozen=True)
class FormConfig:
    """Normalization ``K`` and accuracy; calibration fixed at construction."""

    K: float = 1.0
    acc: EvalAccuracy = DEFAULT_ACCURACY
    calibration: complex = field(init=False)
    calibration_residuals: tuple = field(init=False, repr=False)

    def __post_init__(self):
        K = float(self.K)
        if K == 0 or not math.isfinite(K):
            raise DomainError("K must be finite and nonzero")
        object.__setattr__(self, "K", K)
        c, res = _calibrate(self.acc)
        object.__setattr__(self, "calibration", c)
        object.__setattr__(self, "calibration_residuals", res)

    def metadata(self) -> dict:
        return {
            "K": self.K,
            "calibration": [self.calibration.real, self.calibration.imag],
            "calibration_probes": [[z.real, z.imag] for z in CALIBRATION_PROBES],
            "calibration_residuals": list(self.calibration_residuals),
        }


DEFAULT_CONFIG = None


def default_config() -> FormConfig:
    global DEFAULT_CONFIG
    if DEFAULT_CONFIG is None:
        DEFAULT_CONFIG = FormConfig()
    return DEFAULT_CONFIG


# ---------------------------------------------------------------------------
# public operations


def eigenfunction(z, t: float) -> complex:
    """``Ψ_z(t) = t^z (e^-t / (1 - e^-t))^(1/2)`` for ``t > 0``."""
    z = _as_complex(z)
    t = float(t)
    if not t > 0:
        raise DomainError("eigenfunctions live on t > 0")
    # e^-t/(1-e^-t) = 1/expm1(t)
    F = 1.0 / math.sqrt(math.expm1(t)) if t < 700 else math.exp(-0.5 * t)
    return cmath.exp(z * math.log(t)) * F


def g_closed(z12, cfg: FormConfig | None = None) -> complex:
    """Closed-form Hermitian form G(z12).

    Limits: ``G(1) = K`` and, by the small-circle residue convention,
    ``G(0) = -K/2``.
    """
    cfg = cfg or default_config()
    z = _as_complex(z12)
    if z == 1:
        return complex(cfg.K)
    if z == 0:
        return complex(-0.5 * cfg.K)
    return cfg.calibration * cfg.K * raw_closed(z, cfg.acc)


def g_quadrature(z12, cfg: FormConfig | None = None) -> complex:
    """Quadrature route for G(z12), ``Re z12 > 0``."""
    cfg = cfg or default_config()
    z = _as_complex(z12)
    return cfg.calibration * cfg.K * raw_quadrature(z, cfg.acc)


def overlap(z1, z2, cfg: FormConfig | None = None) -> complex:
    """``<Ψ_z1|Ψ_z2>``: a function of ``conj(z1) + z2`` only."""
    return g_closed(_as_complex(z1).conjugate() + _as_complex(z2), cfg)


def conjugation_factor(z12) -> complex:
    """Ratio ``conj(G(conj z))/G(z) = -conj(S)/S`` with ``S = sin(πz)``.

    The ratio follows from moving the fork-shaped contour onto the real
    u-axis; it is 1 exactly when ``Re z`` is an integer.
    """
    z = _as_complex(z12)
    if special.sinpi(z.real) == 0.0:
        return 1.0 + 0j
    s = special.csinpi(z)
    return -s.conjugate() / s


def hermiticity_residual(z12, cfg: FormConfig | None = None) -> complex:
    """``G(z) - conj(G(conj z))`` under the fork-contour conjugation rule.

    Equals ``2 G(z) Re(S)/S`` and vanishes on ``Re z12 ∈ Z`` or where G does.
    """
    z = _as_complex(z12)
    if special.sinpi(z.real) == 0.0:
        return 0j
    g = g_closed(z, cfg)
    return g * (1.0 - conjugation_factor(z))


def reflection_residual(z12, cfg: FormConfig | None = None) -> complex:
    """Literal ``g_closed(z) - conj(g_closed(conj z))``.

    Zero up to roundoff everywhere, because ζ and Γ are real on the real
    axis; kept as a diagnostic next to :func:`hermiticity_residual`.
    """
    z = _as_complex(z12)
    return g_closed(z, cfg) - g_closed(z.conjugate(), cfg).conjugate()


def norm_squared(z, cfg: FormConfig | None = None) -> float:
    """``<Ψ_z|Ψ_z>``.

    Critical-line labels give K and the vacuum gives -K/2.  For a generic
    label the value is ``G(2 Re z)``; it is accepted only when the
    Hermiticity residual there is below ``NORM_REALITY_TOL``.
    """
    cfg = cfg or default_config()
    label = z if isinstance(z, EigenLabel) else EigenLabel(z)
    if label.role is Role.VACUUM:
        return -0.5 * cfg.K
    if label.role is Role.CRITICAL_LINE:
        return cfg.K
    z12 = complex(2.0 * label.z.real, 0.0)
    value = g_closed(z12, cfg)
    residual = hermiticity_residual(z12, cfg)
    if abs(residual) >= NORM_REALITY_TOL or abs(value.imag) >= NORM_REALITY_TOL:
        raise NonRealNormError(
            f"norm of generic label {label.z} fails the Hermiticity test "
            f"(|residual| = {abs(residual):.3e})",
            value=value,
            residual=residual,
        )
    return value.real


COMPASS = tuple(cmath.exp(0.25j * math.pi * k) for k in range(8))


def compass_profile(center=1.0, radius=0.05, cfg: FormConfig | None = None):
    """``|G|`` at the centre and on an 8-point compass around it."""
    c = _as_complex(center)
    centre_value = abs(g_closed(c, cfg))
    ring = np.array([abs(g_closed(c + radius * d, cfg)) for d in COMPASS])
    return centre_value, ring
