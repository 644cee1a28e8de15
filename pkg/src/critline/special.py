"""Complex special functions: log-Gamma, zeta, the Mellin remainder I(s),
the Riemann-Siegel theta function and Hardy's Z function.

Scalars are plain Python ``complex``/``float``.  Any non-finite result is
raised as :class:`AccuracyError` instead of being returned.

Branch conventions: ``ln_gamma`` is the principal log-Gamma (continuous on
the plane cut along the non-positive real axis) for ``Re z >= 0``; for
``Re z < 0`` it is defined through the reflection formula with the principal
``Log`` and may differ from the continuous branch by a multiple of ``2πi``.
All complex powers ``a**s`` are ``exp(s Log a)`` with the principal ``Log``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import quadrature
from .errors import AccuracyError, DomainError, PoleError

__all__ = [
    "EvalAccuracy",
    "DEFAULT_ACCURACY",
    "sinpi",
    "cospi",
    "csinpi",
    "ln_gamma",
    "gamma",
    "rgamma",
    "gamma_quad",
    "zeta",
    "zeta_em_terms",
    "mellin_I",
    "gamma_zeta_quad",
    "riemann_siegel_theta",
    "hardy_z",
]


@dataclass(frozen=True)
class EvalAccuracy:
    """Truncation control shared by every series and quadrature."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 200_000

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if int(self.max_terms) < 1:
            raise ValueError("max_terms must be >= 1")

    def tolerance(self, scale: float) -> float:
        return self.abs_tol + self.rel_tol * abs(scale)


DEFAULT_ACCURACY = EvalAccuracy()


def _finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise AccuracyError(f"{what} produced a non-finite value")
    return value


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# elementary helpers with exact zeros at the integers


def sinpi(x: float) -> float:
    """``sin(pi x)`` for real ``x``, exactly zero at integers."""
    n = round(x)
    r = x - n
    val = math.sin(math.pi * r)
    return -val if n % 2 else val


def cospi(x: float) -> float:
    """``cos(pi x)`` for real ``x``, exactly zero at half-integers."""
    n = round(x)
    r = x - n
    if abs(r) == 0.5:
        return 0.0
    val = math.cos(math.pi * r)
    return -val if n % 2 else val


def csinpi(z: complex) -> complex:
    """``sin(pi z)`` for complex ``z`` with exact zeros at real integers."""
    z = complex(z)
    y = math.pi * z.imag
    return complex(sinpi(z.real) * math.cosh(y), cospi(z.real) * math.sinh(y))


# ---------------------------------------------------------------------------
# Gamma

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)


def _lanczos_ln_gamma(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = _LANCZOS[0]
    for k in range(1, 9):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def ln_gamma(z: complex) -> complex:
    """Principal log-Gamma (Lanczos, g=7, nine coefficients).

    >>> round(ln_gamma(5).real, 10)
    3.1780538303
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.imag == 0.0 and z.real > 0.0:
        # stdlib lgamma on the positive axis: exact zeros at 1 and 2
        out = complex(math.lgamma(z.real), 0.0)
    elif z.real >= 0.5:
        out = _lanczos_ln_gamma(z)
    elif z.real >= 0.0:
        out = _lanczos_ln_gamma(z + 1.0) - cmath.log(z)
    else:
        # reflection: ln Γ(z) = ln π - ln sin(πz) - ln Γ(1-z)
        out = _LOG_PI - cmath.log(csinpi(z)) - _lanczos_ln_gamma(1.0 - z)
    return _finite(out, "ln_gamma")


def gamma(z: complex) -> complex:
    return _finite(cmath.exp(ln_gamma(z)), "gamma")


def rgamma(z: complex) -> complex:
    """``1/Γ(z)``, entire; exactly zero at the non-positive integers."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return _finite(cmath.exp(-ln_gamma(z)), "rgamma")


def _euler_kernel(t: np.ndarray) -> np.ndarray:
    with np.errstate(under="ignore"):
        return np.exp(-t)


def _bose_kernel(t: np.ndarray) -> np.ndarray:
    """e^-t / (1 - e^-t) = 1/expm1(t)."""
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(t)


def _remainder_kernel(t: np.ndarray) -> np.ndarray:
    """[1/(1-e^-t) - 1/t - 1] e^-t = 1/expm1(t) - e^-t/t - e^-t.

    Only called with |t| >= 1 by the quadrature, where the two terms do not
    cancel catastrophically.
    """
    with np.errstate(over="ignore", under="ignore"):
        e = np.exp(-t)
        return 1.0 / np.expm1(t) - e / t - e


def _inverse_expm1_series(n_terms: int) -> list[float]:
    # t/(e^t - 1) = Σ a_n t^n, by series division of (e^t - 1)/t = Σ t^k/(k+1)!
    a = [1.0]
    for n in range(1, n_terms):
        a.append(-sum(a[n - k] / math.factorial(k + 1) for k in range(1, n + 1)))
    return a


_SERIES_TERMS = 40
_A = _inverse_expm1_series(_SERIES_TERMS + 1)

EULER_KERNEL = quadrature.MellinKernel(
    _euler_kernel, [(-1) ** k / math.factorial(k) for k in range(_SERIES_TERMS)], 0
)
BOSE_KERNEL = quadrature.MellinKernel(_bose_kernel, _A[:_SERIES_TERMS], -1)
REMAINDER_KERNEL = quadrature.MellinKernel(
    _remainder_kernel,
    [
        _A[k + 1] - (-1) ** (k + 1) / math.factorial(k + 1) - (-1) ** k / math.factorial(k)
        for k in range(_SERIES_TERMS)
    ],
    0,
)


def gamma_quad(z: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """Γ(z) from Euler's integral ``∫ exp(-t) t^z dt/t`` (Re z > 0).

    Shares no code with :func:`ln_gamma`; used as its oracle.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Euler's integral needs Re z > 0")
    res = quadrature.mellin(
        EULER_KERNEL,
        z,
        abs_tol=acc.abs_tol,
        rel_tol=acc.rel_tol,
        max_nodes=acc.max_terms,
    )
    return res.value


# ---------------------------------------------------------------------------
# Zeta by Euler-Maclaurin


def _bernoulli_even(count: int) -> list[Fraction]:
    """B_2, B_4, ..., B_{2*count} (Akiyama-Tanigawa)."""
    nmax = 2 * count
    out = []
    a = [Fraction(0)] * (nmax + 1)
    for m in range(nmax + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


_BERNOULLI = tuple(_bernoulli_even(15))  # B_2 .. B_30
# B_{2k} / (2k)!
_EM_COEFFS = tuple(
    float(b / math.factorial(2 * k)) for k, b in enumerate(_BERNOULLI, start=1)
)
EM_ORDER = 10


def _em_cutoff(s: complex) -> int:
    return max(12, math.ceil(1.3 * abs(s.imag)))


def zeta_em_terms(s: complex, n: int, order: int = EM_ORDER) -> tuple[complex, float]:
    """Euler-Maclaurin sum with cutoff ``n`` and ``order`` Bernoulli terms.

    Returns the value and the magnitude of the first omitted correction,
    used as the truncation estimate.
    """
    if order + 1 > len(_EM_COEFFS):
        raise ValueError(f"order must be <= {len(_EM_COEFFS) - 1}")
    k = np.arange(1, n, dtype=float)
    head = complex(np.sum(np.exp(-s * np.log(k)))) if n > 1 else 0j
    n_pow = cmath.exp(-s * math.log(n))  # n^{-s}
    value = head + n * n_pow / (s - 1.0) + 0.5 * n_pow
    # corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * n^{-s-2j+1}
    rising = s
    npow = n_pow / n
    inv_n2 = 1.0 / (n * n)
    omitted = 0.0
    for j in range(1, order + 2):
        term = _EM_COEFFS[j - 1] * rising * npow
        if j == order + 1:
            omitted = abs(term)
            break
        value += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        npow *= inv_n2
    return value, omitted


def zeta(s: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """Riemann zeta by Euler-Maclaurin summation.

    Valid for ``Re s > -19`` (ten Bernoulli corrections).  The cutoff starts
    at ``max(12, ceil(1.3 |Im s|))`` and grows until the first omitted
    correction is below ``acc``.

    >>> abs(zeta(2) - math.pi**2 / 6) < 1e-14
    True
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= -(2 * EM_ORDER - 1):
        raise DomainError("Euler-Maclaurin order too low for Re s <= -19")
    n = _em_cutoff(s)
    while True:
        if n > acc.max_terms:
            raise AccuracyError(
                f"zeta({s}) needs more than {acc.max_terms} terms for the "
                "requested tolerance"
            )
        value, err = zeta_em_terms(s, n)
        if err <= acc.tolerance(abs(value)):
            return _finite(value, "zeta")
        n = int(n * 1.5) + 1


# ---------------------------------------------------------------------------
# Mellin remainder I(s) and Γ(s)ζ(s) by quadrature


def mellin_I(s: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """I(s) = ∫_0^∞ [1/(1-e^-t) - 1/t - 1] e^-t t^s dt/t  for Re s > 0.

    Together with Γ it continues zeta into the strip:
    ``ζ(s) = 1 + 1/(s-1) + I(s)/Γ(s)``.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError("I(s) diverges at the origin for Re s <= 0")
    res = quadrature.mellin(
        REMAINDER_KERNEL,
        s,
        abs_tol=acc.abs_tol,
        rel_tol=acc.rel_tol,
        max_nodes=acc.max_terms,
    )
    return res.value


def gamma_zeta_quad(s: complex, acc: EvalAccuracy = DEFAULT_ACCURACY) -> complex:
    """Γ(s)ζ(s) = ∫_0^∞ t^s/(e^t - 1) dt/t by quadrature, Re s > 1."""
    s = complex(s)
    if not s.real > 1:
        raise DomainError("the Bose integral needs Re s > 1")
    res = quadrature.mellin(
        BOSE_KERNEL,
        s,
        abs_tol=acc.abs_tol,
        rel_tol=acc.rel_tol,
        max_nodes=acc.max_terms,
    )
    return res.value


# ---------------------------------------------------------------------------
# Riemann-Siegel theta and Hardy Z

THETA_SWITCH = 10.0


def _theta_exact(t: float) -> float:
    return ln_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * _LOG_PI


def _theta_asymptotic(t: float) -> float:
    return (
        0.5 * t * math.log(t / (2 * math.pi))
        - 0.5 * t
        - math.pi / 8
        + 1.0 / (48 * t)
        + 7.0 / (5760 * t**3)
    )


def riemann_siegel_theta(t: float, method: str = "auto") -> float:
    """θ(t) = arg Γ(1/4 + it/2) - (t/2) log π.

    ``method`` is ``"exact"`` (through :func:`ln_gamma`), ``"asymptotic"``
    (Stirling series through the ``7/(5760 t^3)`` term) or ``"auto"``, which
    takes the asymptotic path for ``t >= 10``.
    """
    t = float(t)
    if t < 0:
        raise DomainError("theta is evaluated for t >= 0 only")
    if method == "exact":
        return _theta_exact(t)
    if method == "asymptotic":
        if t == 0:
            raise DomainError("asymptotic series is singular at t = 0")
        return _theta_asymptotic(t)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return _theta_asymptotic(t) if t >= THETA_SWITCH else _theta_exact(t)


HARDY_IMAG_TOL = 1e-9


def hardy_z(t: float, acc: EvalAccuracy = DEFAULT_ACCURACY) -> float:
    """Z(t) = exp(iθ(t)) ζ(1/2 + it), real for real ``t``.

    θ is taken on the exact route: the asymptotic series leaves an imaginary
    residue of a few 1e-9 near t = 10.
    """
    t = float(t)
    if t < 0:
        raise DomainError("hardy_z is evaluated for t >= 0 only")
    value = cmath.exp(1j * _theta_exact(t)) * zeta(complex(0.5, t), acc)
    if abs(value.imag) >= HARDY_IMAG_TOL:
        raise AccuracyError(
            f"hardy_z({t}) has imaginary residue {value.imag:.3e}"
        )
    return value.real
