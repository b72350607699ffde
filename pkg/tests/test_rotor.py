import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from relwave.errors import DomainError
from relwave.numerics import TWO_PI, ExtendedReal
from relwave.rotor import (
    AngularDensity,
    analytic_moments,
    angular_momentum_moments,
    density,
    omega,
    quadrature_moments,
    spinor_weights,
    theta_grid,
)
from relwave.spectra import RotorModel, Theory
from relwave.wavepacket import EvolvedCoefficients, evolve, gaussian_coefficients

T_REV = TWO_PI * 2e6


def single_mode(n, theory):
    return EvolvedCoefficients(0.0, theory, np.array([n]), np.array([1.0 + 0j]))


class TestSpinorWeights:
    def test_ground(self, rotor):
        w = spinor_weights(rotor, 0)
        assert w.N[0] == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
        assert w.k[0] == 0

    def test_normalisation_and_sign(self, rotor):
        ns = np.arange(-50, 51)
        w = spinor_weights(rotor, ns)
        np.testing.assert_allclose(2 * math.pi * w.N ** 2 * (1 + w.k ** 2), 1.0, atol=1e-12)
        np.testing.assert_array_equal(np.sign(w.k), np.sign(ns))
        assert np.all(np.abs(w.k) < 1e-3)

    def test_k1(self, rotor):
        # oracle: 3.6486762858447331e-06
        assert spinor_weights(rotor, 1).k[0] == pytest.approx(3.648676285844733e-06, rel=1e-12)


class TestOmega:
    def test_diagonal(self, rotor):
        w = spinor_weights(rotor, np.arange(-10, 11))
        np.testing.assert_allclose(np.diag(omega(w, w)), 1.0, atol=1e-15)

    def test_pair_against_oracle(self, rotor):
        w1, w2 = spinor_weights(rotor, 1), spinor_weights(rotor, 2)
        got = omega(w1, w2)[0, 0]
        assert abs(mp.mpf(got) - oracles.omega(1, 2)) <= 1e-12
        assert 0 < got <= 1

    def test_nr_limit(self):
        w = spinor_weights(RotorModel(R=1e12), np.arange(-3, 4))
        np.testing.assert_allclose(omega(w, w), 1.0, atol=1e-15)


class TestDensity:
    @pytest.mark.parametrize("theory", list(Theory))
    def test_single_mode_uniform(self, rotor, theory):
        n = 5
        d = density(single_mode(n, theory), spinor_weights(rotor, [n]), 64)
        np.testing.assert_allclose(d.values, 1 / (2 * math.pi), rtol=1e-12)

    def test_initial_bump(self, rotor, fig1_packet):
        w = spinor_weights(rotor, fig1_packet.ns)
        for th in Theory:
            d = density(evolve(fig1_packet, rotor, 0.0, th), w)
            assert d.theta[np.argmax(d.values)] == pytest.approx(math.pi, abs=2 * math.pi / 2048)
            assert d.integral() == pytest.approx(1.0, abs=1e-8)
            assert np.all(d.values >= 0)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0, 3e16))
    def test_nr_exact_revival(self, t):
        m = RotorModel()
        c = gaussian_coefficients(1, 0.271, math.pi)
        a = density(evolve(c, m, t, Theory.NR), None, 512).values
        b = density(evolve(c, m, ExtendedReal.of(t) + T_REV, Theory.NR), None, 512).values
        assert np.max(np.abs(a - b)) <= 1e-8

    def test_rel_imperfect_revival_grows(self, rotor, fig1_packet):
        w = spinor_weights(rotor, fig1_packet.ns)
        d0 = density(evolve(fig1_packet, rotor, 0.0, Theory.REL), w, 512).values
        diffs = []
        for k in range(1, 11):
            dk = density(evolve(fig1_packet, rotor, T_REV * float(k), Theory.REL), w, 512).values
            diffs.append(np.max(np.abs(dk - d0)))
        assert diffs[0] > 0
        slope = np.polyfit(np.arange(1, 11), diffs, 1)[0]
        assert slope > 0 and diffs[-1] > diffs[0]

    def test_grid_too_coarse(self, rotor, fig1_packet):
        with pytest.raises(DomainError):
            density(evolve(fig1_packet, rotor, 0.0, Theory.NR), None, 16)

    def test_density_normalised_over_time(self, rotor, fig1_packet):
        w = spinor_weights(rotor, fig1_packet.ns)
        for t in (1e3, 1e9, 2.2e14, 3.1e16):
            for th in Theory:
                d = density(evolve(fig1_packet, rotor, t, th), w)
                assert d.integral() == pytest.approx(1.0, abs=1e-8)


class TestMoments:
    @pytest.mark.parametrize("theory", list(Theory))
    def test_single_mode(self, rotor, theory):
        m = analytic_moments(single_mode(3, theory), spinor_weights(rotor, [3]), theory)
        assert m.mean == pytest.approx(math.pi, rel=1e-15)
        assert m.variance == pytest.approx(math.pi ** 2 / 3, rel=1e-14)

    def test_initial_packet(self, rotor, fig1_packet):
        w = spinor_weights(rotor, fig1_packet.ns)
        for th in Theory:
            m = analytic_moments(evolve(fig1_packet, rotor, 0.0, th), w, th)
            assert m.mean == pytest.approx(math.pi, abs=1e-9)
            assert m.variance == pytest.approx(0.271 ** 2, rel=0.15)

    def test_quadrature_uniform(self):
        th = theta_grid(1024)
        m = quadrature_moments(AngularDensity(th, np.full(1024, 1 / (2 * math.pi))))
        assert m.mean == pytest.approx(math.pi, rel=1e-12)
        assert m.variance == pytest.approx(math.pi ** 2 / 3, rel=1e-12)

    def test_quadrature_narrow(self):
        th = theta_grid(8192)
        for width in (0.1, 0.03, 0.01):
            rho = np.exp(-((th - 2.0) ** 2) / (2 * width ** 2))
            rho /= rho.sum() * th[1]
            m = quadrature_moments(AngularDensity(th, rho))
            assert m.mean == pytest.approx(2.0, abs=1e-9)
            assert m.variance == pytest.approx(width ** 2, rel=1e-6)

    def test_quadrature_rejects_unnormalised(self):
        th = theta_grid(64)
        with pytest.raises(DomainError):
            quadrature_moments(AngularDensity(th, np.ones(64)))

    def test_fig1_state_oracle(self, rotor, fig1_packet):
        w = spinor_weights(rotor, fig1_packet.ns)
        for th in Theory:
            ev = evolve(fig1_packet, rotor, 1e6, th)
            a = analytic_moments(ev, w, th)
            q = quadrature_moments(density(ev, w))
            assert a.mean == pytest.approx(q.mean, rel=1e-6)
            assert a.variance == pytest.approx(q.variance, rel=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.2, 0.6), st.floats(0, 2 * math.pi), st.floats(0, 5), st.floats(0, 1e16))
    def test_oracle_equivalence(self, sigma0, theta0, nbar, t):
        m = RotorModel()
        c = gaussian_coefficients(nbar, sigma0, theta0)
        w = spinor_weights(m, c.ns)
        for th in Theory:
            ev = evolve(c, m, t, th)
            a = analytic_moments(ev, w, th)
            q = quadrature_moments(density(ev, w))
            assert a.mean == pytest.approx(q.mean, rel=1e-6)
            assert a.variance == pytest.approx(q.variance, rel=1e-6)
            assert 0 <= a.mean <= 2 * math.pi
            assert 0 <= a.variance <= 4 * math.pi ** 2 / 3

    def test_vectorised_matches_scalar(self, rotor, fig1_packet):
        from relwave.wavepacket import make_times

        w = spinor_weights(rotor, fig1_packet.ns)
        times = make_times(2.1e15, 3e6, 1e6)
        table = analytic_moments(evolve(fig1_packet, rotor, times, Theory.REL), w, Theory.REL)
        for i in range(len(times)):
            s = analytic_moments(evolve(fig1_packet, rotor, times[i], Theory.REL), w, Theory.REL)
            assert table.mean[i] == pytest.approx(s.mean, rel=1e-15)

    def test_angular_momentum_invariant(self, rotor, fig1_packet):
        ref = angular_momentum_moments(evolve(fig1_packet, rotor, 0.0, Theory.NR))
        assert ref[0] == pytest.approx(1.0, abs=1e-12)
        assert ref[1] == pytest.approx(1 / (4 * 0.271 ** 2), rel=1e-6)
        for t in (1e8, 2.2e14, 3.1e16):
            for th in Theory:
                got = angular_momentum_moments(evolve(fig1_packet, rotor, t, th))
                assert got[0] == pytest.approx(ref[0], rel=1e-14)
                assert got[1] == pytest.approx(ref[1], rel=1e-14)
