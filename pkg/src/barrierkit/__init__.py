"""barrierkit: when does a barrier option degenerate into a simpler one?

Critical initial prices for knock-out options (flat and curved
barriers), classification of the effective option type at a given
accuracy, closed-form and Monte Carlo pricing to validate the
boundaries, first-passage probabilities, and the calibration loop that
measures where prices actually become indistinguishable.
"""

from .calibrate import (
    FLOOR_THETA,
    CalibrationRow,
    implied_nu,
    numeric_critical_price,
    reproduce_table1,
)
from .classify import classify_double, classify_down_and_out, classify_up_and_out
from .critical import (
    critical_prices,
    lower_critical_curve,
    mu1,
    s_ml_flat,
    s_mu_flat,
    turning_point,
    upper_critical_curve,
)
from .model import (
    AccuracySpec,
    BarrierCurve,
    BarrierOrderError,
    BarrierSet,
    Classification,
    CriticalPrices,
    DomainError,
    KnotOrderError,
    MarketParams,
    NumericsError,
    OptionSpec,
    Payoff,
    PriceEstimate,
    PricingMethod,
    RebateError,
    ValidationError,
    validate,
)
from .numerics import nu_for_accuracy, std_normal_cdf, std_normal_quantile
from .passage import (
    BreachEstimate,
    PdeGrid,
    breach_prob_closed_flat,
    breach_prob_mc,
    breach_prob_pde,
    default_grid,
)
from .pricing import (
    HAVE_COMPILED_KERNEL,
    McConfig,
    bs_vanilla,
    double_knockout_closed,
    down_and_out_call_closed,
    mc_price,
    up_and_out_call_closed,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracySpec",
    "BarrierCurve",
    "BarrierOrderError",
    "BarrierSet",
    "BreachEstimate",
    "CalibrationRow",
    "Classification",
    "CriticalPrices",
    "DomainError",
    "FLOOR_THETA",
    "HAVE_COMPILED_KERNEL",
    "KnotOrderError",
    "MarketParams",
    "McConfig",
    "NumericsError",
    "OptionSpec",
    "Payoff",
    "PdeGrid",
    "PriceEstimate",
    "PricingMethod",
    "RebateError",
    "ValidationError",
    "breach_prob_closed_flat",
    "breach_prob_mc",
    "breach_prob_pde",
    "bs_vanilla",
    "classify_double",
    "classify_down_and_out",
    "classify_up_and_out",
    "critical_prices",
    "default_grid",
    "double_knockout_closed",
    "down_and_out_call_closed",
    "implied_nu",
    "lower_critical_curve",
    "mc_price",
    "mu1",
    "nu_for_accuracy",
    "numeric_critical_price",
    "reproduce_table1",
    "s_ml_flat",
    "s_mu_flat",
    "std_normal_cdf",
    "std_normal_quantile",
    "turning_point",
    "up_and_out_call_closed",
    "upper_critical_curve",
    "validate",
]
