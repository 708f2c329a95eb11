"""Decide which simpler instrument a knock-out option degenerates into.

Given the initial price, the barrier values at inception, and the
critical prices from the critical module, each classifier picks exactly
one category. The rules depend only on those price levels, never on the
strike, payoff kind, or rebates. Boundary conventions: sitting exactly at
a critical price counts as degenerate (the closed comparisons go to
Vanilla), and starting exactly on a barrier counts as knocked out.
"""

from __future__ import annotations

from .model import Classification


def classify_down_and_out(s0: float, b_l0: float, s_ml: float) -> Classification:
    """Category of a down-and-out option started at s0.

    At or above s_ml the barrier is irrelevant at the stated accuracy and
    the option prices like a vanilla; between the barrier and s_ml it is a
    typical down-and-out; at or below the barrier it is dead on arrival.
    """
    if s0 <= b_l0:
        return Classification.KNOCKED_OUT_AT_INCEPTION
    if s0 >= s_ml:
        return Classification.VANILLA
    return Classification.DOWN_AND_OUT


def classify_up_and_out(s0: float, b_u0: float, s_mu: float) -> Classification:
    """Category of an up-and-out option started at s0 (mirror rules)."""
    if s0 >= b_u0:
        return Classification.KNOCKED_OUT_AT_INCEPTION
    if s0 <= s_mu:
        return Classification.VANILLA
    return Classification.UP_AND_OUT


def classify_double(
    s0: float, b_l0: float, b_u0: float, s_ml: float, s_mu: float
) -> Classification:
    """Category of a double knock-out started at s0.

    Below both critical prices only the lower barrier matters; above both
    only the upper one does. When the critical prices cross (s_ml <= s_mu)
    there is a band where neither barrier matters and the option is
    effectively vanilla; in the opposite ordering the band (s_mu, s_ml)
    keeps both barriers live, a typical double knock-out. Ties go to the
    degenerate reading: the vanilla comparison is closed, the double-live
    band is open.
    """
    if s0 <= b_l0 or s0 >= b_u0:
        return Classification.KNOCKED_OUT_AT_INCEPTION
    lower_live = s0 < s_ml  # below s_ml the lower barrier still matters
    upper_live = s0 > s_mu  # above s_mu the upper barrier still matters
    if lower_live and upper_live:
        return Classification.TYPICAL_DOUBLE_BARRIER
    if lower_live:
        return Classification.DOWN_AND_OUT
    if upper_live:
        return Classification.UP_AND_OUT
    return Classification.VANILLA
