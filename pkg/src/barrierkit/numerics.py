"""Standard-normal distribution functions and 1-D search primitives.

The distribution pair (cdf, quantile) is accurate to well below 1e-12,
which matters because the whole package hinges on resolving normal tail
masses like 1e-6 and far smaller. Cheap polynomial cdf approximations
with 1e-7 error would poison every downstream cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_SQRT2 = math.sqrt(2.0)

# rational approximation coefficients for the initial quantile guess
# (relative error ~1e-9 before polishing)
_A = (
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00,
)
_B = (
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01,
)
_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00,
)
_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00,
)
_P_LOW = 0.02425


def std_normal_cdf(x: float) -> float:
    """Phi(x) via the complementary error function.

    Absolute error below 1e-15 across the working range and monotone in x;
    survival masses stay meaningful far beyond |x| = 8 because erfc does
    not lose the tail to cancellation.
    """
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_sf(x: float) -> float:
    """Survival function 1 - Phi(x), exact in the upper tail."""
    return 0.5 * math.erfc(x / _SQRT2)


def _quantile_guess(p: float) -> float:
    # piecewise rational map, lower tail / central / upper tail
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    q = p - 0.5
    s = q * q
    return (((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * q / (
        ((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0
    )


def std_normal_quantile(p: float) -> float:
    """Inverse of std_normal_cdf on (0, 1).

    A rational first guess refined by two Halley steps against the erfc
    cdf; the round-trip |cdf(quantile(p)) - p| lands near machine noise,
    far inside the 1e-12 contract.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"quantile defined on (0,1), got {p}")
    x = _quantile_guess(p)
    for _ in range(2):
        err = std_normal_cdf(x) - p
        if err == 0.0:
            break
        pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if pdf == 0.0:
            break
        u = err / pdf
        x -= u / (1.0 + 0.5 * x * u)  # Halley correction
    return x


def nu_for_accuracy(pi: float) -> float:
    """Smallest cutoff nu with Phi(nu) >= 1 - pi, i.e. upper-tail mass <= pi.

    Computed as -quantile(pi), which is identical to quantile(1 - pi) but
    does not lose pi to rounding when it is tiny.
    """
    if not (0.0 < pi < 0.5):
        raise ValueError(f"pi must lie in (0, 0.5), got {pi}")
    return -std_normal_quantile(pi)


@dataclass(frozen=True)
class IntervalResult:
    argument: float
    value: float
    iterations: int


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

COARSE_SCAN_POINTS = 1001
DEFAULT_TOL_T = 1e-10


def maximize_on_interval(
    f,
    a: float,
    b: float,
    tol_t: float = DEFAULT_TOL_T,
    scan_points: int = COARSE_SCAN_POINTS,
) -> IntervalResult:
    """Maximum of a continuous f on [a, b]: coarse scan then golden section.

    The scan (1001 uniform samples by default) locates the best bracket,
    golden-section refinement narrows it to tol_t. Scan ties break toward
    the smaller argument so results are deterministic. Finds the global
    maximum provided f does not oscillate faster than the scan grid (a few
    hundred humps); the curves this package feeds in have at most one.
    """
    if not (a < b):
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if not (tol_t > 0.0):
        raise ValueError(f"tolerance must be positive, got {tol_t}")
    if scan_points < 3:
        raise ValueError("scan needs at least 3 points")

    h = (b - a) / (scan_points - 1)
    best_i = 0
    best_v = -math.inf
    for i in range(scan_points):
        v = f(a + i * h)
        if v > best_v:  # strict: ties keep the earlier (smaller) argument
            best_v = v
            best_i = i
    lo = a + max(best_i - 1, 0) * h
    hi = a + min(best_i + 1, scan_points - 1) * h

    # golden-section on [lo, hi]
    iters = scan_points
    x1 = lo + _INV_PHI2 * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    while hi - lo > tol_t:
        if f1 >= f2:  # ties move the window left, toward smaller t
            hi = x2
            x2, f2 = x1, f1
            x1 = lo + _INV_PHI2 * (hi - lo)
            f1 = f(x1)
        else:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
        iters += 1

    t_star = 0.5 * (lo + hi)
    v_star = f(t_star)
    # the scan's best sample can only be beaten, never lost
    if best_v > v_star:
        t_star, v_star = a + best_i * h, best_v
    return IntervalResult(argument=t_star, value=v_star, iterations=iters)


def find_root_bisect(f, a: float, b: float, tol_x: float = 1e-12) -> float:
    """Root of f on [a, b] by bisection; requires a sign change."""
    if not (a < b):
        raise ValueError(f"need a < b, got [{a}, {b}]")
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise ValueError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    while b - a > tol_x:
        m = 0.5 * (a + b)
        if m <= a or m >= b:  # interval at floating resolution
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)
