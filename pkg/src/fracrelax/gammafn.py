"""Real-argument gamma function and its reciprocal.

Everything downstream (Mittag-Leffler series, power-law operator rules,
quadrature weights) funnels through these two functions, so they carry the
tightest accuracy contract in the package: relative error <= 1e-13 on
[-170, 170] away from the poles.

Implementation: Lanczos rational approximation (g = 7, 9 coefficients) for
moderate arguments.  Large positive arguments climb with the recurrence
Gamma(x) = (x-1) Gamma(x-1) instead of evaluating the Lanczos power term
directly: t**(z+0.5) loses ~|z| * ulp of relative accuracy once the exponent
is large, while ~160 extra multiplications stay near machine precision.
Negative arguments use the reflection formula in the form

    Gamma(x) = -pi / (x * sin(pi x) * Gamma(-x)),

which only needs -x (exact) rather than 1 - x (rounds for large |x|).

``reciprocal_gamma`` is total on the reals and returns exactly 0.0 at the
poles, so series code can let pole terms vanish instead of branching.
"""

from __future__ import annotations

import math

__all__ = [
    "GammaDomainError",
    "GammaOverflowError",
    "gamma",
    "reciprocal_gamma",
    "sinpi",
]

# Largest x with Gamma(x) below double overflow.
OVERFLOW_ARG = 171.624376956302725

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
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
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Above this the Lanczos power term degrades; switch to the recurrence climb.
_RECURRENCE_CUT = 12.0

# Correctly rounded Gamma(k) = (k-1)! for integer arguments.
_FACTORIALS = tuple(float(math.factorial(k)) for k in range(171))


class GammaDomainError(ValueError):
    """Gamma evaluated at a pole (non-positive integer) or invalid argument."""

    def __init__(self, argument: float, message: str | None = None):
        self.argument = argument
        super().__init__(message or f"gamma is undefined at {argument!r}")


class GammaOverflowError(OverflowError):
    """Result exceeds double range; reported explicitly, never wrapped."""

    def __init__(self, argument: float):
        self.argument = argument
        super().__init__(
            f"gamma({argument!r}) overflows double precision (result +inf)"
        )


def sinpi(x: float) -> float:
    """sin(pi*x) with exact argument reduction to [-1/2, 1/2]."""
    r = x - round(x)
    s = math.sin(math.pi * r)
    if round(x) % 2:
        s = -s
    return s


def _lanczos(y: float) -> float:
    # y in [0.5, _RECURRENCE_CUT + 1)
    z = y - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, 9):
        acc += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * t ** (z + 0.5) * math.exp(-t) * acc


def _gamma_positive(y: float) -> float:
    # y >= 0.5, below the overflow threshold
    if y <= 171.0 and y == math.floor(y):
        return _FACTORIALS[int(y) - 1]
    if y < _RECURRENCE_CUT:
        return _lanczos(y)
    m = int(math.ceil(y - _RECURRENCE_CUT))
    y0 = y - m
    val = _lanczos(y0)
    for i in range(m):
        val *= y0 + i
    return val


def gamma(x: float) -> float:
    """Gamma(x) for real x away from the poles.

    Raises GammaDomainError at non-positive integers and GammaOverflowError
    for x > ~171.62 where the result exceeds double range.
    """
    x = float(x)
    if math.isnan(x):
        raise GammaDomainError(x, "gamma argument is NaN")
    if x > OVERFLOW_ARG:
        raise GammaOverflowError(x)
    if x <= 0.0 and x == math.floor(x):
        raise GammaDomainError(x)
    if x >= 0.5:
        val = _gamma_positive(x)
        if math.isinf(val):
            raise GammaOverflowError(x)
        return val
    if x > -0.5:
        # (-0.5, 0.5) excluding 0: one step of the recurrence keeps the
        # argument in the well-conditioned core range.
        return _gamma_positive(x + 1.0) / x
    s = sinpi(x)
    if -x <= OVERFLOW_ARG:
        return -math.pi / (x * s * _gamma_positive(-x))
    # |Gamma(x)| underflows far below -OVERFLOW_ARG; go through logs so the
    # result degrades to subnormal/zero instead of raising spuriously.
    mag = math.exp(math.log(math.pi) - math.lgamma(-x) - math.log(abs(x * s)))
    return math.copysign(mag, -(x * s))


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x); total on the reals, exactly 0.0 at non-positive integers."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > OVERFLOW_ARG:
        # 1/Gamma underflows smoothly; exp(-lgamma) covers x up to +inf.
        return math.exp(-math.lgamma(x))
    if x >= 0.5:
        return 1.0 / _gamma_positive(x)
    if x > -0.5:
        return x / _gamma_positive(x + 1.0)
    s = sinpi(x)
    if -x <= OVERFLOW_ARG:
        return -(x * s) * _gamma_positive(-x) / math.pi
    mag = math.exp(math.lgamma(-x) + math.log(abs(x * s) / math.pi))
    return math.copysign(mag, -(x * s))
