"""Measured critical prices, implied nu, and the four-row calibration.

The crossing references come from a separate 40-digit computation that
solves |barrier price - vanilla| = theta/2 directly on the closed forms,
so they are independent of the bisection logic under test.
"""

import pytest

from barrierkit.calibrate import (
    FLOOR_THETA,
    CalibrationRow,
    implied_nu,
    numeric_critical_price,
    reproduce_table1,
)
from barrierkit.critical import s_ml_flat, s_mu_flat
from barrierkit.model import DomainError, MarketParams, NumericsError
from barrierkit.pricing.closed import down_and_out_call_closed, up_and_out_call_closed


def mk_params(sigma=0.30, T=0.25, r=0.10):
    return MarketParams(mu=r, sigma=sigma, r=r, T=T)


# (theta, crossing, nu at the crossing) for the lower barrier 70, K=100
ORACLE_CROSSINGS = [
    (1e-2, 77.978580549279580342, 0.811259590573),
    (1e-4, 91.857004387847790905, 1.90325217127),
    (1e-6, 105.10482411787030738, 2.80141956697),
]


class TestThetaValidation:
    @pytest.mark.parametrize("theta", [2e-3, 1.5e-6, 3e-1, 0.0, -1e-4])
    def test_rejects_non_powers_of_ten(self, theta):
        with pytest.raises(DomainError):
            numeric_critical_price(
                mk_params(), 100.0, 70.0, "lower", theta, down_and_out_call_closed
            )

    def test_side_and_barrier_validation(self):
        with pytest.raises(DomainError):
            numeric_critical_price(
                mk_params(), 100.0, 70.0, "sideways", 1e-2, down_and_out_call_closed
            )
        with pytest.raises(DomainError):
            numeric_critical_price(
                mk_params(), 100.0, -70.0, "lower", 1e-2, down_and_out_call_closed
            )


class TestLowerCrossings:
    @pytest.mark.parametrize("theta,s_ref,nu_ref", ORACLE_CROSSINGS)
    def test_measured_onset_matches_oracle(self, theta, s_ref, nu_ref):
        p = mk_params()
        s = numeric_critical_price(p, 100.0, 70.0, "lower", theta, down_and_out_call_closed)
        assert s == pytest.approx(s_ref, abs=5e-6)  # bisection stops at 1e-6
        nu = implied_nu(p, 70.0, "lower", s)
        assert nu == pytest.approx(nu_ref, abs=1e-4)

    def test_onset_recedes_as_theta_tightens(self):
        p = mk_params()
        onsets = [
            numeric_critical_price(p, 100.0, 70.0, "lower", th, down_and_out_call_closed)
            for th in (1e-2, 1e-4, 1e-6)
        ]
        assert onsets[0] < onsets[1] < onsets[2]


class TestUpperSide:
    def test_measured_onset(self):
        p = mk_params()
        s = numeric_critical_price(p, 100.0, 130.0, "upper", 1e-2, up_and_out_call_closed)
        assert s == pytest.approx(72.99353657342664, rel=1e-9)
        assert implied_nu(p, 130.0, "upper", s) == pytest.approx(3.7560653694645403, rel=1e-6)

    def test_floor_unreachable(self):
        # the up-and-out correction never underflows to zero inside the
        # bracket, so a below-ulp theta cannot be certified
        p = mk_params()
        with pytest.raises(NumericsError, match="unreachable"):
            numeric_critical_price(
                p, 100.0, 130.0, "upper", FLOOR_THETA, up_and_out_call_closed
            )


class TestNearEnd:
    def test_degenerate_at_the_barrier(self):
        # low vol and a far barrier: even one tick above the barrier the
        # two prices already agree, so the near end itself comes back
        p = mk_params(sigma=0.15)
        s = numeric_critical_price(p, 100.0, 70.0, "lower", 1e-2, down_and_out_call_closed)
        assert s == 70.0 * (1.0 + 1e-9)


class TestImpliedNu:
    @pytest.mark.parametrize("nu0", [0.5, 2.0, 4.9, 6.0])
    def test_round_trip_lower(self, nu0):
        p = mk_params()
        s_crit = s_ml_flat(p, 70.0, nu0)[0]
        assert implied_nu(p, 70.0, "lower", s_crit) == pytest.approx(nu0, abs=1e-4)

    @pytest.mark.parametrize("nu0", [0.5, 2.0, 4.9, 6.0])
    def test_round_trip_upper(self, nu0):
        p = mk_params()
        s_crit = s_mu_flat(p, 130.0, nu0)[0]
        assert implied_nu(p, 130.0, "upper", s_crit) == pytest.approx(nu0, abs=1e-4)

    def test_unattainable_raises(self):
        p = mk_params()
        with pytest.raises(NumericsError, match="attainable"):
            implied_nu(p, 70.0, "lower", 60.0)  # below every critical price
        with pytest.raises(NumericsError, match="attainable"):
            implied_nu(p, 70.0, "lower", 1e9)  # beyond nu = 20

    def test_side_validation(self):
        with pytest.raises(DomainError):
            implied_nu(mk_params(), 70.0, "both", 90.0)


class TestFloorTable:
    def test_floor_is_saturated(self):
        # every theta below one ulp of the price gives the same answer:
        # the indicator has already collapsed to exact float equality
        p = mk_params(sigma=0.15, T=0.50)
        a = numeric_critical_price(p, 100.0, 70.0, "lower", 1e-20, down_and_out_call_closed)
        b = numeric_critical_price(p, 100.0, 70.0, "lower", FLOOR_THETA, down_and_out_call_closed)
        assert a == b

    def test_four_row_regression(self):
        rows = reproduce_table1()
        assert [(r.T, r.sigma) for r in rows] == [
            (0.25, 0.15), (0.25, 0.30), (0.50, 0.15), (0.50, 0.30),
        ]
        analytic = [98.870186482869048, 143.990200049647579,
                    112.600226384315822, 192.566627435925147]
        # measured onsets and implied nu at the precision floor; pinned
        # values are deterministic outputs of this code path
        numeric = [91.451143, 158.512737, 112.581003, 248.868203]
        nus = [3.859978, 5.540581, 4.898415, 6.109047]
        for row, a, n, v in zip(rows, analytic, numeric, nus):
            assert row.analytic_s_ml == pytest.approx(a, rel=1e-12)
            assert row.numeric_s_ml == pytest.approx(n, abs=1e-4)
            assert row.implied_nu == pytest.approx(v, abs=1e-4)
            assert row.as_tuple() == (
                row.T, row.sigma, row.analytic_s_ml, row.numeric_s_ml, row.implied_nu
            )
        assert isinstance(rows[0], CalibrationRow)

    def test_reference_nu_changes_analytic_column_only(self):
        base = reproduce_table1()[0]
        other = reproduce_table1(reference_nu=2.0)[0]
        assert other.analytic_s_ml == pytest.approx(
            s_ml_flat(mk_params(sigma=0.15), 70.0, 2.0)[0], rel=1e-12
        )
        assert other.numeric_s_ml == base.numeric_s_ml
