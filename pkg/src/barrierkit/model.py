"""Domain types shared by every other module.

All types are immutable after construction and safe to share across
threads. Validation happens eagerly in ``__post_init__`` so that an
instance that exists is an instance that is valid; ``validate`` re-runs
the cross-field checks that depend on more than one object.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class ValidationError(ValueError):
    """Base class for every input rejection raised by this package."""


class DomainError(ValidationError):
    """A scalar field is outside its admissible range (sigma, T, K, ...)."""


class BarrierOrderError(ValidationError):
    """Lower barrier does not stay strictly below the upper barrier."""


class RebateError(ValidationError):
    """A rebate was supplied for a side that has no barrier."""


class KnotOrderError(ValidationError):
    """Tabulated barrier knots are not strictly increasing or do not cover [0, T]."""


class NumericsError(RuntimeError):
    """A numerical procedure failed to converge or to bracket its target.

    Distinct from ValidationError: the inputs were admissible, the
    computation itself could not deliver (no sign change in a bracket,
    sweep never stabilizing, target outside an attainable range).
    """


# grid used wherever "holds for all t" must be checked numerically
ORDERING_GRID_POINTS = 1001


@dataclass(frozen=True)
class MarketParams:
    """Lognormal market bundle: drift, volatility, rate, horizon.

    The risk-neutral construction sets ``mu = r - dividend_yield``; with the
    default zero dividend yield that is ``mu = r``. ``from_rate`` builds that
    directly.
    """

    mu: float
    sigma: float
    r: float
    T: float
    dividend_yield: float = 0.0

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.T > 0.0) or not math.isfinite(self.T):
            raise DomainError(f"T must be positive and finite, got {self.T}")
        for name in ("mu", "r", "dividend_yield"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @classmethod
    def from_rate(
        cls, sigma: float, r: float, T: float, dividend_yield: float = 0.0
    ) -> "MarketParams":
        """Risk-neutral parameters: drift pinned to r - dividend_yield."""
        return cls(mu=r - dividend_yield, sigma=sigma, r=r, T=T, dividend_yield=dividend_yield)


class BarrierShape(enum.Enum):
    FLAT = "flat"
    EXPONENTIAL = "exponential"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class BarrierCurve:
    """One absorbing boundary level as a function of time.

    Three shapes: a constant level, an exponentially growing or decaying
    level ``B * exp(growth * t)``, and a table of knots interpolated
    linearly in log-level (so positivity is automatic and exponential
    segments are represented exactly).
    """

    shape: BarrierShape
    level: float = math.nan
    growth: float = 0.0
    knots: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.shape in (BarrierShape.FLAT, BarrierShape.EXPONENTIAL):
            if not (self.level > 0.0) or not math.isfinite(self.level):
                raise DomainError(f"barrier level must be positive, got {self.level}")
            if not math.isfinite(self.growth):
                raise DomainError("barrier growth must be finite")
        else:
            if len(self.knots) < 2:
                raise KnotOrderError("tabulated barrier needs at least two knots")
            ts = [t for t, _ in self.knots]
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise KnotOrderError(f"knot times must be strictly increasing, got {ts}")
            if any(not (lv > 0.0 and math.isfinite(lv)) for _, lv in self.knots):
                raise DomainError("tabulated barrier levels must be positive and finite")
            if ts[0] > 0.0:
                raise KnotOrderError(f"first knot must be at t <= 0, got {ts[0]}")

    @classmethod
    def flat(cls, level: float) -> "BarrierCurve":
        return cls(shape=BarrierShape.FLAT, level=level)

    @classmethod
    def exponential(cls, level: float, growth: float) -> "BarrierCurve":
        return cls(shape=BarrierShape.EXPONENTIAL, level=level, growth=growth)

    @classmethod
    def tabulated(cls, knots) -> "BarrierCurve":
        return cls(shape=BarrierShape.TABULATED, knots=tuple((float(t), float(v)) for t, v in knots))

    def value_at(self, t: float, T: float) -> float:
        """Level at time t; t must lie in [0, T]."""
        if t < 0.0 or t > T:
            raise DomainError(f"t={t} outside [0, {T}]")
        if self.shape is BarrierShape.FLAT:
            return self.level
        if self.shape is BarrierShape.EXPONENTIAL:
            return self.level * math.exp(self.growth * t)
        knots = self.knots
        if t > knots[-1][0]:
            raise KnotOrderError(
                f"tabulated barrier covers [0, {knots[-1][0]}], asked for t={t}"
            )
        if t <= knots[0][0]:
            return knots[0][1]
        for (t0, v0), (t1, v1) in zip(knots, knots[1:]):
            if t <= t1:
                if t == t1:
                    return v1  # keep knots exact, exp(log v) can drift an ulp
                w = (t - t0) / (t1 - t0)
                return math.exp((1.0 - w) * math.log(v0) + w * math.log(v1))
        return knots[-1][1]  # unreachable, bounds checked above

    def covers(self, T: float) -> bool:
        if self.shape is BarrierShape.TABULATED:
            return self.knots[-1][0] >= T
        return True


def barrier_at(curve: BarrierCurve, t: float, T: float = math.inf) -> float:
    """Evaluate one barrier curve at time t (module-level convenience)."""
    return curve.value_at(t, T)


@dataclass(frozen=True)
class BarrierSet:
    """Optional lower and upper absorbing curves; at most one of each."""

    lower: BarrierCurve | None = None
    upper: BarrierCurve | None = None

    @property
    def any_present(self) -> bool:
        return self.lower is not None or self.upper is not None

    def check_ordering(self, T: float) -> None:
        """Require lower(t) < upper(t) on a 1001-point grid plus all knots."""
        if self.lower is None or self.upper is None:
            return
        ts = {i * T / (ORDERING_GRID_POINTS - 1) for i in range(ORDERING_GRID_POINTS)}
        for curve in (self.lower, self.upper):
            if curve.shape is BarrierShape.TABULATED:
                ts.update(t for t, _ in curve.knots if 0.0 <= t <= T)
        for t in sorted(ts):
            lo = self.lower.value_at(t, T)
            hi = self.upper.value_at(t, T)
            if lo >= hi:
                raise BarrierOrderError(
                    f"lower barrier {lo} not below upper barrier {hi} at t={t}"
                )


class Payoff(enum.Enum):
    CALL = "call"
    PUT = "put"


@dataclass(frozen=True)
class OptionSpec:
    """Knock-out option: payoff, strike, barriers, and expiry-paid rebates."""

    payoff: Payoff
    strike: float
    barriers: BarrierSet = field(default_factory=BarrierSet)
    rebate_lower: float = 0.0
    rebate_upper: float = 0.0

    def __post_init__(self) -> None:
        # accept the string forms "call"/"put"; identity checks downstream
        # must never silently route a misspelled payoff to the put branch
        try:
            object.__setattr__(self, "payoff", Payoff(self.payoff))
        except ValueError:
            raise DomainError(f"payoff must be 'call' or 'put', got {self.payoff!r}") from None
        if not (self.strike > 0.0) or not math.isfinite(self.strike):
            raise DomainError(f"strike must be positive, got {self.strike}")
        if self.rebate_lower < 0.0 or self.rebate_upper < 0.0:
            raise DomainError("rebates must be nonnegative")
        if self.rebate_lower > 0.0 and self.barriers.lower is None:
            raise RebateError("lower rebate given but no lower barrier")
        if self.rebate_upper > 0.0 and self.barriers.upper is None:
            raise RebateError("upper rebate given but no upper barrier")


@dataclass(frozen=True)
class AccuracySpec:
    """Accuracy triple: price digits m (theta = 10^-m), tail mass pi, cutoff nu.

    nu must be consistent with pi: Phi(nu) >= 1 - pi while any materially
    smaller cutoff fails. Use ``from_pi`` to construct a consistent triple.
    """

    digits: int
    theta: float
    pi: float
    nu: float

    NU_RESOLUTION = 1e-6

    def __post_init__(self) -> None:
        if self.digits < 1:
            raise DomainError(f"digits must be a positive integer, got {self.digits}")
        if self.theta != 10.0 ** (-self.digits):
            raise DomainError(
                f"theta must equal 10^-digits exactly, got {self.theta} for m={self.digits}"
            )
        if not (0.0 < self.pi < 1.0):
            raise DomainError(f"pi must lie in (0,1), got {self.pi}")
        if not (self.nu > 0.0):
            raise DomainError(f"nu must be positive, got {self.nu}")
        from .numerics import std_normal_cdf

        if std_normal_cdf(self.nu) < 1.0 - self.pi - 1e-15:
            raise DomainError(
                f"nu={self.nu} too small for pi={self.pi}: Phi(nu) < 1 - pi"
            )
        if std_normal_cdf(self.nu - self.NU_RESOLUTION) >= 1.0 - self.pi:
            raise DomainError(
                f"nu={self.nu} not minimal for pi={self.pi} at resolution {self.NU_RESOLUTION}"
            )

    @classmethod
    def from_pi(cls, digits: int, pi: float) -> "AccuracySpec":
        from .numerics import nu_for_accuracy

        return cls(digits=digits, theta=10.0 ** (-digits), pi=pi, nu=nu_for_accuracy(pi))


@dataclass(frozen=True)
class CriticalPrices:
    """Extremal critical prices per side with the times attaining them.

    ``s_ml``: the smallest initial price at which a lower barrier stays
    irrelevant at the stated accuracy over the whole horizon (maximum of
    the lower critical curve). ``s_mu``: the mirror value for an upper
    barrier (minimum of the upper critical curve). Sides are None when the
    corresponding barrier is absent.
    """

    s_ml: float | None = None
    t_at_max: float | None = None
    s_mu: float | None = None
    t_at_min: float | None = None


class Classification(enum.Enum):
    VANILLA = "Vanilla"
    DOWN_AND_OUT = "DownAndOut"
    UP_AND_OUT = "UpAndOut"
    TYPICAL_DOUBLE_BARRIER = "TypicalDoubleBarrier"
    KNOCKED_OUT_AT_INCEPTION = "KnockedOutAtInception"


class PricingMethod(enum.Enum):
    CLOSED = "Closed"
    MONTE_CARLO = "MonteCarlo"
    PDE = "Pde"


@dataclass(frozen=True)
class PriceEstimate:
    value: float
    std_error: float = 0.0
    method: PricingMethod = PricingMethod.CLOSED

    def __post_init__(self) -> None:
        if self.std_error < 0.0:
            raise DomainError("standard error cannot be negative")


def validate(params: MarketParams, spec: OptionSpec) -> tuple[MarketParams, OptionSpec]:
    """Cross-check a parameter/option bundle; returns it unchanged when valid.

    Field-level invariants were enforced at construction; this adds the
    checks that need both objects: barrier ordering over [0, T] and knot
    coverage of the horizon. Idempotent by construction.
    """
    for side, curve in (("lower", spec.barriers.lower), ("upper", spec.barriers.upper)):
        if curve is not None and not curve.covers(params.T):
            raise KnotOrderError(f"{side} barrier knots do not cover [0, {params.T}]")
    spec.barriers.check_ordering(params.T)
    return params, spec
