"""Numeric critical prices from the pricing engine and their implied nu.

The analytic critical price says where a barrier option should become
indistinguishable from its vanilla twin at a chosen accuracy theta.
This module measures where that actually happens for a given pricer:
scan s0 outward from the barrier until |barrier price - vanilla price|
stays below 0.5*theta, then invert the analytic formula to find which
nu reproduces the measured onset.

Precision floor: the two closed forms are IEEE doubles, so their
difference is quantized to ulps of the price. Once theta drops below
roughly 1e-16 times the price, the 0.5*theta test degenerates into
exact float equality of the two prices; no smaller theta can change the
answer. FLOOR_THETA is a canonical theta (still a power of ten) deep
inside that regime, used to probe the floor itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .critical import s_ml_flat, s_mu_flat
from .model import DomainError, MarketParams, NumericsError, Payoff
from .pricing.closed import bs_vanilla, down_and_out_call_closed

BISECT_TOL_S = 1e-6
SWEEP_POINTS = 64
NU_TOL = 1e-4
NU_MAX = 20.0
FLOOR_THETA = 1e-30

TABLE1_STRIKE = 100.0
TABLE1_BARRIER = 70.0
TABLE1_RATE = 0.10
TABLE1_ROWS = ((0.25, 0.15), (0.25, 0.30), (0.50, 0.15), (0.50, 0.30))


def _check_theta(theta: float) -> None:
    if theta <= 0.0:
        raise DomainError(f"theta must be positive, got {theta}")
    m = -math.log10(theta)
    if abs(m - round(m)) > 1e-9:
        raise DomainError(f"theta must be a power of ten, got {theta}")


def numeric_critical_price(
    params: MarketParams,
    strike: float,
    barrier: float,
    side: str,
    theta: float,
    pricer: Callable,
) -> float:
    """Measured onset of indistinguishability from the vanilla price.

    Lower side: smallest s0 (within 1e-6) such that
    |pricer(s0) - vanilla(s0)| < 0.5*theta holds there and at every
    point of a 64-point verification sweep up to the bracket end.
    Upper side: mirrored (largest s0, sweep runs downward). Bisection
    runs on the indicator between barrier*(1 +- 1e-9) and barrier times
    e^(+-10 sigma sqrt(T)); if even the far end is distinguishable the
    accuracy is unreachable and the search fails. The sweep guards
    against non-monotone onsets: any violation restarts the bisection
    beyond it.
    """
    _check_theta(theta)
    if side not in ("lower", "upper"):
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    if barrier <= 0.0:
        raise DomainError(f"barrier must be positive, got {barrier}")
    half = 0.5 * theta

    def close(s: float) -> bool:
        return abs(pricer(params, strike, barrier, s).value
                   - bs_vanilla(params, Payoff.CALL, strike, s).value) < half

    span = math.exp(10.0 * params.sigma * math.sqrt(params.T))
    if side == "lower":
        near, far = barrier * (1.0 + 1e-9), barrier * span
    else:
        near, far = barrier * (1.0 - 1e-9), barrier / span

    if not close(far):
        raise NumericsError(
            f"accuracy theta={theta} unreachable within the search bracket"
        )
    if close(near):
        return near

    def bisect(bad: float, good: float) -> float:
        # invariant: close(good) holds, close(bad) does not
        while abs(good - bad) > BISECT_TOL_S:
            mid = 0.5 * (bad + good)
            if close(mid):
                good = mid
            else:
                bad = mid
        return good

    s_star = bisect(near, far)
    for _ in range(SWEEP_POINTS):
        pts = np.linspace(s_star, far, SWEEP_POINTS)
        violations = [s for s in pts if not close(float(s))]
        if not violations:
            return s_star
        # worst violation is the one deepest into the supposed-close zone
        worst = max(violations) if side == "lower" else min(violations)
        s_star = bisect(float(worst), far)
    raise NumericsError("verification sweep never stabilized")


def implied_nu(params: MarketParams, barrier: float, side: str, s_crit: float) -> float:
    """The nu whose analytic critical price equals the measured one.

    Bisection on nu in (0, 20] against the flat closed form (branch
    logic included at every trial nu), tolerance 1e-4. The analytic
    critical price moves monotonically in nu (outward from the barrier),
    so a sign check at the ends decides attainability.
    """
    if side not in ("lower", "upper"):
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    flat = s_ml_flat if side == "lower" else s_mu_flat

    def gap(nu: float) -> float:
        return flat(params, barrier, nu)[0] - s_crit

    lo, hi = 1e-9, NU_MAX
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if g_lo * g_hi > 0.0:
        raise NumericsError(
            f"s_crit={s_crit} outside the attainable range for nu in (0, {NU_MAX}]"
        )
    while hi - lo > NU_TOL:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if g_mid == 0.0:
            return mid
        if g_mid * g_lo < 0.0:
            hi = mid
        else:
            lo, g_lo = mid, g_mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CalibrationRow:
    """One (T, sigma) experiment: analytic vs measured critical price."""

    T: float
    sigma: float
    analytic_s_ml: float
    numeric_s_ml: float
    implied_nu: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.T, self.sigma, self.analytic_s_ml, self.numeric_s_ml, self.implied_nu)


def reproduce_table1(reference_nu: float = 4.9, theta: float = FLOOR_THETA):
    """Run the four-row calibration: K=100, lower barrier 70, r=0.10.

    Each row reports the analytic critical price at reference_nu, the
    measured onset for the down-and-out call at the requested theta,
    and the nu implied by that measurement.
    """
    rows = []
    for T, sigma in TABLE1_ROWS:
        params = MarketParams(mu=TABLE1_RATE, sigma=sigma, r=TABLE1_RATE, T=T)
        analytic = s_ml_flat(params, TABLE1_BARRIER, reference_nu)[0]
        numeric = numeric_critical_price(
            params, TABLE1_STRIKE, TABLE1_BARRIER, "lower", theta, down_and_out_call_closed
        )
        if numeric <= TABLE1_BARRIER:
            raise NumericsError("measured critical price fell at or below the barrier")
        nu = implied_nu(params, TABLE1_BARRIER, "lower", numeric)
        rows.append(
            CalibrationRow(
                T=T, sigma=sigma, analytic_s_ml=analytic, numeric_s_ml=numeric, implied_nu=nu
            )
        )
    return rows
