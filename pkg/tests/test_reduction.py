"""Channel quantization, analytic degeneracy, and the oracle reconciliation."""

import math

import numpy as np
import pytest

from zml.errors import ClusterResolutionError, PaddingError
from zml.profiles import Grid1D, box
from zml.reduction import (ReductionConfig, admissible_channels,
                           constant_field_degeneracy, default_n_range,
                           degeneracy_general, quantize_ky, verify_degeneracy)

TWO_PI = 2.0 * math.pi


class TestQuantizeKy:
    def test_unit_spacing(self):
        np.testing.assert_allclose(quantize_ky(TWO_PI, (-2, 2)),
                                   [-2, -1, 0, 1, 2], atol=1e-14)

    def test_half_period(self):
        assert quantize_ky(math.pi, (1, 1))[0] == pytest.approx(2.0)

    def test_zero_channel(self):
        assert quantize_ky(5.0, (0, 0))[0] == 0.0

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            quantize_ky(TWO_PI, (3, 1))
        with pytest.raises(ValueError):
            quantize_ky(-1.0, (0, 1))


class TestAdmissibleChannels:
    def test_q10_window(self):
        rep = admissible_channels(box(1.0, 5.0),
                                  ReductionConfig(L_y=TWO_PI, n_range=(-8, 8)))
        admissible = [ch.n for ch in rep.channels if ch.admissible]
        assert admissible == list(range(-4, 5))
        assert rep.g_analytic == 10
        assert rep.discrepancy == 1

    def test_q4_window(self):
        rep = admissible_channels(box(1.0, 2.0),
                                  ReductionConfig(L_y=TWO_PI, n_range=(-4, 4)))
        assert [ch.n for ch in rep.channels if ch.admissible] == [-1, 0, 1]
        assert rep.g_analytic == 4
        assert rep.discrepancy == 1

    def test_zero_flux(self):
        rep = admissible_channels(box(0.0, 1.0),
                                  ReductionConfig(L_y=TWO_PI, n_range=(-3, 3)))
        assert rep.admissible_count == 0
        assert rep.g_analytic == 0

    def test_negative_flux_same_window(self):
        rep = admissible_channels(box(-1.0, 5.0),
                                  ReductionConfig(L_y=TWO_PI, n_range=(-8, 8)))
        assert rep.admissible_count == 9
        assert rep.g_analytic == 10

    def test_window_count_stable_under_gauge_shift(self, rng):
        # the window has fixed length |Q|; shifting it moves at most one
        # lattice point in or out
        p = box(1.0, 5.0)
        for _ in range(40):
            kg = float(rng.uniform(-10.0, 10.0))
            ly = float(rng.uniform(0.5, 9.0))
            nr = default_n_range(10.0, ly, kg)
            rep = admissible_channels(
                p, ReductionConfig(L_y=ly, k_gauge=kg, n_range=nr))
            assert abs(rep.admissible_count - rep.g_analytic) <= 1

    def test_scaling_in_period(self, rng):
        p = box(1.0, 5.0)
        for _ in range(20):
            ly = float(rng.uniform(0.3, 8.0))
            g1 = admissible_channels(p, ReductionConfig(L_y=ly)).g_analytic
            g2 = admissible_channels(p, ReductionConfig(L_y=2 * ly)).g_analytic
            assert abs(g2 - 2 * g1) <= 1


class TestDegeneracyGeneral:
    def test_flux_formula(self):
        assert degeneracy_general(box(1.0, 5.0), TWO_PI) == 10

    def test_constant_field_consistency(self):
        cfg = ReductionConfig(L_y=TWO_PI, B_const=1.0, L_x=10.0)
        assert constant_field_degeneracy(cfg) == 10
        assert degeneracy_general(box(1.0, 5.0), TWO_PI) == \
            constant_field_degeneracy(cfg)
        assert cfg.l_B == 1.0

    def test_zero_flux(self):
        assert degeneracy_general(box(0.0, 3.0), TWO_PI) == 0

    def test_negative_flux_rejected(self):
        with pytest.raises(ValueError):
            degeneracy_general(box(-1.0, 2.0), TWO_PI)


@pytest.fixture(scope="module")
def setup6():
    # Q = 6 strip: integer channels sit >= 1 inside the window, so the
    # sweep padding stays at 30 and the grids stay small
    profile = box(1.0, 3.0)
    cfg = ReductionConfig(L_y=TWO_PI, n_range=(-4, 4), B_const=1.0, L_x=6.0)
    grid = Grid1D(-36.0, 36.0, 1202)
    return profile, cfg, grid


class TestVerifyDegeneracy:

    def test_level0_matches_analytic(self, setup6):
        profile, cfg, grid = setup6
        rep = verify_degeneracy(profile, cfg, 0, grid)
        assert rep.g_analytic == 6
        assert abs(rep.g_numeric - rep.g_analytic) <= 1
        counts = {ch.n: ch.near_zero_count for ch in rep.channels}
        for ch in rep.channels:
            if ch.admissible:
                assert counts[ch.n] == 1

    def test_level1_within_one_of_level0(self, setup6):
        profile, cfg, grid = setup6
        rep0 = verify_degeneracy(profile, cfg, 0, grid)
        rep1 = verify_degeneracy(profile, cfg, 1, grid)
        assert rep1.cluster_center == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert abs(rep1.g_numeric - rep0.g_numeric) <= 1

    def test_detected_center_matches_theory(self, setup6):
        profile, _, grid = setup6
        cfg = ReductionConfig(L_y=TWO_PI, n_range=(-4, 4))  # no B_const
        rep = verify_degeneracy(profile, cfg, 1, grid)
        assert rep.cluster_center == pytest.approx(math.sqrt(2.0), rel=0.01)

    def test_unresolvable_level_raises(self, setup6):
        profile, _, grid = setup6
        cfg = ReductionConfig(L_y=TWO_PI, n_range=(-4, 4))
        with pytest.raises(ClusterResolutionError):
            verify_degeneracy(profile, cfg, 40, grid)

    def test_zero_flux_counts_zero(self):
        profile = box(0.0, 2.0)
        cfg = ReductionConfig(L_y=TWO_PI, n_range=(-2, 2))
        rep = verify_degeneracy(profile, cfg, 0, Grid1D(-12.0, 12.0, 402))
        assert rep.g_numeric == 0
        assert rep.g_analytic == 0

    def test_insufficient_padding_names_channel(self):
        profile = box(1.0, 2.5)
        cfg = ReductionConfig(L_y=TWO_PI, n_range=(-4, 4))
        with pytest.raises(PaddingError):
            verify_degeneracy(profile, cfg, 0, Grid1D(-8.0, 8.0, 402))
