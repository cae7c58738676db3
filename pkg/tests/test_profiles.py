"""Field profiles: evaluation, support exactness, fluxes, and properties."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from zml.errors import ProfileError
from zml.profiles import (DIM_RADIAL, Grid1D, box, bump, make_profile,
                          piecewise_linear, sample, scale_profile, total_flux,
                          truncated_gaussian)


class TestMakeProfile:
    def test_box_values(self):
        p = box(1.0, 2.0)
        assert p(0.0) == 1.0
        assert p(3.0) == 0.0
        assert p.support == (-2.0, 2.0)

    def test_zero_amplitude_box_is_identically_zero(self):
        p = box(0.0, 1.0)
        assert np.all(p(np.linspace(-2, 2, 101)) == 0.0)
        assert total_flux(p).value == 0.0

    def test_truncated_gaussian_cutoff(self):
        p = truncated_gaussian(1.0, 1.0, 4.0)
        assert p(4.0) == 0.0
        assert p(4.0 + 1e-12) == 0.0
        # shifted formula inside the cutoff
        x = 1.3
        expected = math.exp(-x * x / 2.0) - math.exp(-8.0)
        assert p(x) == pytest.approx(expected, rel=1e-15)
        # continuity at the cutoff
        assert abs(p(4.0 - 1e-8)) < 1e-8

    def test_bump_compact_and_smooth(self):
        p = bump(2.0, 1.5)
        assert p(0.0) == 2.0
        assert p(1.5) == 0.0
        assert p(-1.5) == 0.0
        assert p(1.4) > 0.0

    def test_piecewise_linear_interpolation(self):
        p = piecewise_linear([(-1.0, 0.0), (0.0, 2.0), (2.0, 0.0)])
        assert p(-0.5) == 1.0
        assert p(1.0) == 1.0
        assert p(-1.5) == 0.0
        assert p(2.5) == 0.0
        assert p.seeds == (0.0,)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ProfileError):
            box(1.0, -2.0)
        with pytest.raises(ProfileError):
            box(1.0, 0.0)
        with pytest.raises(ProfileError):
            box(math.nan, 1.0)
        with pytest.raises(ProfileError):
            truncated_gaussian(1.0, -1.0, 2.0)
        with pytest.raises(ProfileError):
            piecewise_linear([(0.0, 1.0)])
        with pytest.raises(ProfileError):
            piecewise_linear([(0.0, 1.0), (0.0, 2.0)])
        with pytest.raises(ProfileError):
            make_profile("vortex", B0=1.0)
        with pytest.raises(ProfileError):
            make_profile("box", B0=1.0, a=1.0, sigma=3.0)

    def test_radial_piecewise_requires_nonnegative_radii(self):
        with pytest.raises(ProfileError):
            piecewise_linear([(-1.0, 0.0), (1.0, 1.0)], dimension=DIM_RADIAL)


class TestSample:
    def test_box_on_coarse_grid(self):
        vals = sample(box(1.0, 2.0), Grid1D(-4.0, 4.0, 9))
        np.testing.assert_array_equal(vals, [0, 0, 1, 1, 1, 1, 1, 0, 0])

    def test_zero_profile_all_zero(self):
        vals = sample(box(0.0, 1.0), Grid1D(-4.0, 4.0, 17))
        assert np.all(vals == 0.0)

    def test_truncated_gaussian_exact_zero_at_cutoff(self):
        # cutoff lands exactly on a grid node
        vals = sample(truncated_gaussian(1.0, 1.0, 2.0), Grid1D(-4.0, 4.0, 9))
        assert vals[2] == 0.0 and vals[6] == 0.0

    def test_support_exactness_random_grids(self, rng):
        profiles = [box(1.0, 1.7), truncated_gaussian(2.0, 0.7, 2.1),
                    bump(1.0, 1.2),
                    piecewise_linear([(-1.1, 0.5), (0.3, -2.0), (0.9, 0.0)])]
        for p in profiles:
            lo, hi = p.support
            for _ in range(20):
                g = Grid1D(lo - 10 * rng.random() - 0.1,
                           hi + 10 * rng.random() + 0.1,
                           int(rng.integers(3, 200)))
                x = g.points()
                vals = sample(p, g)
                outside = (x < lo) | (x > hi)
                assert np.all(vals[outside] == 0.0)


class TestTotalFlux:
    def test_box_analytic(self):
        f = total_flux(box(1.0, 2.0))
        assert f.value == 4.0
        assert f.method == "analytic"

    def test_radial_disc(self):
        f = total_flux(box(1.0, 2.0, dimension=DIM_RADIAL))
        assert f.value == pytest.approx(4.0 * math.pi, rel=1e-15)

    def test_quadrature_agrees_with_analytic(self):
        for p in (box(1.3, 2.2), truncated_gaussian(0.9, 1.2, 3.0),
                  piecewise_linear([(-2.0, 0.0), (0.0, 3.0), (1.0, 1.0)]),
                  box(-0.8, 1.5, dimension=DIM_RADIAL),
                  truncated_gaussian(1.1, 0.8, 2.0, dimension=DIM_RADIAL),
                  piecewise_linear([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)],
                                   dimension=DIM_RADIAL)):
            fa = total_flux(p, method="analytic")
            fq = total_flux(p, method="quadrature")
            assert fq.value == pytest.approx(fa.value, rel=1e-10, abs=1e-12)

    def test_bump_flux_quadrature_vs_quadpack(self):
        p = bump(1.5, 2.0)
        f = total_flux(p)
        assert f.method == "quadrature"
        ref = quad(p, -2.0, 2.0, epsabs=1e-13, epsrel=1e-13)[0]
        assert f.value == pytest.approx(ref, rel=1e-10)
        with pytest.raises(ProfileError):
            total_flux(p, method="analytic")

    def test_radial_bump_flux_vs_quadpack(self):
        p = bump(1.5, 2.0, dimension=DIM_RADIAL)
        ref = 2.0 * math.pi * quad(lambda r: r * p(r), 0.0, 2.0,
                                   epsabs=1e-13, epsrel=1e-13)[0]
        assert total_flux(p).value == pytest.approx(ref, rel=1e-10)

    def test_additivity_on_representable_sums(self):
        # the sum of two piecewise-linear profiles with merged breakpoints
        # is exactly representable, so additivity can be checked in-library
        pts_a = [(-2.0, 0.0), (-1.0, 2.0), (1.0, 1.0), (2.0, 0.0)]
        pts_b = [(-2.0, 1.0), (0.0, -1.0), (2.0, 0.5)]
        pa = piecewise_linear(pts_a)
        pb = piecewise_linear(pts_b)
        xs = sorted({x for x, _ in pts_a} | {x for x, _ in pts_b})
        psum = piecewise_linear([(x, pa(x) + pb(x)) for x in xs])
        total = total_flux(psum).value
        assert total == pytest.approx(total_flux(pa).value
                                      + total_flux(pb).value, rel=1e-10)

    def test_scaling(self, rng):
        p = truncated_gaussian(1.1, 0.9, 2.7)
        base = total_flux(p).value
        for c in (-3.5, -1.0, 0.0, 0.25, 7.0):
            assert total_flux(scale_profile(p, c)).value == pytest.approx(
                c * base, rel=1e-12, abs=1e-12)
