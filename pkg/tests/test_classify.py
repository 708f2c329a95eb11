"""Degeneracy classification rules for single and double knock-outs."""

import random

import pytest

from barrierkit.classify import (
    classify_double,
    classify_down_and_out,
    classify_up_and_out,
)
from barrierkit.model import Classification as C


class TestDownAndOut:
    def test_three_bands(self):
        assert classify_down_and_out(60.0, 70.0, 99.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_down_and_out(80.0, 70.0, 99.0) is C.DOWN_AND_OUT
        assert classify_down_and_out(120.0, 70.0, 99.0) is C.VANILLA

    def test_boundaries(self):
        # on the barrier counts as knocked out, on the critical price as vanilla
        assert classify_down_and_out(70.0, 70.0, 99.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_down_and_out(99.0, 70.0, 99.0) is C.VANILLA


class TestUpAndOut:
    def test_three_bands(self):
        assert classify_up_and_out(140.0, 130.0, 88.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_up_and_out(100.0, 130.0, 88.0) is C.UP_AND_OUT
        assert classify_up_and_out(80.0, 130.0, 88.0) is C.VANILLA

    def test_boundaries(self):
        assert classify_up_and_out(130.0, 130.0, 88.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_up_and_out(88.0, 130.0, 88.0) is C.VANILLA


class TestDouble:
    def test_crossed_criticals_open_a_vanilla_band(self):
        # s_mu < s_ml reversed: here s_ml=88 < s_mu=99 so (88, 99) is vanilla
        assert classify_double(93.0, 70.0, 130.0, 88.0, 99.0) is C.VANILLA
        assert classify_double(80.0, 70.0, 130.0, 88.0, 99.0) is C.DOWN_AND_OUT
        assert classify_double(110.0, 70.0, 130.0, 88.0, 99.0) is C.UP_AND_OUT

    def test_typical_band(self):
        # s_mu=88 < s0 < s_ml=99 keeps both barriers live
        assert classify_double(93.0, 70.0, 130.0, 99.0, 88.0) is C.TYPICAL_DOUBLE_BARRIER

    def test_inception_knockout(self):
        assert classify_double(70.0, 70.0, 130.0, 99.0, 88.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_double(130.0, 70.0, 130.0, 99.0, 88.0) is C.KNOCKED_OUT_AT_INCEPTION
        assert classify_double(65.0, 70.0, 130.0, 99.0, 88.0) is C.KNOCKED_OUT_AT_INCEPTION

    def test_tie_goes_to_degenerate(self):
        # exactly at a critical price the closed comparison wins
        assert classify_double(99.0, 70.0, 130.0, 99.0, 88.0) is C.UP_AND_OUT
        assert classify_double(88.0, 70.0, 130.0, 99.0, 88.0) is C.DOWN_AND_OUT
        assert classify_double(99.0, 70.0, 130.0, 99.0, 99.0) is C.VANILLA

    def test_consistency_with_single_side(self):
        # once one barrier is settled the double rule must agree with the
        # matching single-barrier rule
        rng = random.Random(7)
        for _ in range(2000):
            b_l0 = rng.uniform(10.0, 90.0)
            b_u0 = rng.uniform(b_l0 + 1.0, 300.0)
            s_ml = rng.uniform(b_l0, 250.0)
            s_mu = rng.uniform(20.0, b_u0)
            s0 = rng.uniform(b_l0 + 1e-9, b_u0 - 1e-9)
            cat = classify_double(s0, b_l0, b_u0, s_ml, s_mu)
            if s0 <= s_mu:  # upper barrier settled as irrelevant
                assert cat is classify_down_and_out(s0, b_l0, s_ml)
            if s0 >= s_ml:  # lower barrier settled as irrelevant
                assert cat is classify_up_and_out(s0, b_u0, s_mu)

    def test_exactly_one_category(self):
        rng = random.Random(11)
        cats = set()
        for _ in range(2000):
            args = sorted(rng.uniform(10.0, 300.0) for _ in range(5))
            order = list(range(5))
            rng.shuffle(order)
            s0, b_l0, b_u0, s_ml, s_mu = (args[i] for i in order)
            if not b_l0 < b_u0:
                b_l0, b_u0 = min(b_l0, b_u0), max(b_l0, b_u0) + 1.0
            cat = classify_double(s0, b_l0, b_u0, s_ml, s_mu)
            assert isinstance(cat, C)
            cats.add(cat)
        assert len(cats) >= 4  # the sampler reached every regime
