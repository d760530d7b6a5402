import math

import pytest
import scipy.special

from calindex import (
    BoundaryData,
    OnLattice,
    eta_index_identity,
    eta_bar_lim,
    eta_mu_closed,
    eta_mu_spectral,
    hurwitz_zeta_em,
    index_total,
)
from calindex.sampling import random_boundary_data, random_fredholm_shift


class TestHurwitzZeta:
    def test_against_scipy_for_s_above_one(self):
        for s in (1.5, 2.0, 3.25, 6.0):
            for a in (0.1, 0.3, 0.5, 0.9, 1.7):
                ours = hurwitz_zeta_em(s, a, terms=40)
                ref = float(scipy.special.zeta(s, a))
                assert ours == pytest.approx(ref, abs=1e-12, rel=1e-12)

    def test_zeta_minus_half_via_functional_equation(self):
        # zeta(-1/2) = 2^(-1/2) pi^(-3/2) sin(-pi/4) Gamma(3/2) zeta(3/2)
        ref = (
            2.0 ** (-0.5)
            * math.pi ** (-1.5)
            * math.sin(-math.pi / 4.0)
            * scipy.special.gamma(1.5)
            * float(scipy.special.zeta(1.5, 1.0))
        )
        assert hurwitz_zeta_em(-0.5, 1.0, terms=50) == pytest.approx(ref, abs=1e-12)

    def test_value_at_zero_matches_half_minus_a(self):
        for a in (0.2, 0.5, 0.8):
            for terms in (10, 100, 1000):
                assert hurwitz_zeta_em(0.0, a, terms) == pytest.approx(0.5 - a, abs=1e-10)


class TestEtaClosed:
    def test_examples(self):
        assert eta_mu_closed(0.3, 1.0) == pytest.approx(0.4)
        assert eta_mu_closed(0.5, 1.0) == pytest.approx(0.0)
        assert eta_mu_closed(-0.3, 1.0) == pytest.approx(-0.4)

    def test_rejects_lattice(self):
        with pytest.raises(OnLattice):
            eta_mu_closed(3.0, 1.0)

    def test_range_periodicity_oddness(self, rng):
        for _ in range(300):
            mu0 = float(rng.choice([0.5, 1.0, 2.0]))
            mu = float(rng.uniform(-4 * mu0, 4 * mu0))
            if abs(mu / mu0 - round(mu / mu0)) < 1e-3:
                continue
            eta = eta_mu_closed(mu, mu0)
            assert -1.0 < eta < 1.0
            assert eta_mu_closed(mu + mu0, mu0) == pytest.approx(eta, abs=1e-12)
            assert eta_mu_closed(-mu, mu0) == pytest.approx(-eta, abs=1e-12)


class TestEtaSpectral:
    def test_examples(self):
        assert eta_mu_spectral(0.3, 1.0, 10_000) == pytest.approx(0.4, abs=1e-6)
        assert eta_mu_spectral(0.5, 1.0, 64) == 0.0
        assert eta_mu_spectral(0.25, 1.0, 10_000) == pytest.approx(0.5, abs=1e-6)

    def test_oracle_agreement_100_random(self, rng):
        for _ in range(100):
            mu0 = float(rng.choice([0.5, 1.0, 2.0]))
            mu = float(rng.uniform(-3 * mu0, 3 * mu0))
            if abs(mu / mu0 - round(mu / mu0)) < 1e-3:
                continue
            spectral = eta_mu_spectral(mu, mu0, 10_000)
            assert spectral == pytest.approx(eta_mu_closed(mu, mu0), abs=1e-6)

    def test_error_bound_reported(self):
        value, c_bound = eta_mu_spectral(0.3, 1.0, 512, full_output=True)
        assert abs(value - 0.4) <= c_bound / 512**2

    def test_rejects_small_cutoff_and_lattice(self):
        with pytest.raises(ValueError):
            eta_mu_spectral(0.3, 1.0, 4)
        with pytest.raises(OnLattice):
            eta_mu_spectral(2.0, 1.0, 100)


class TestEtaBar:
    def test_examples(self, data_a):
        assert eta_bar_lim(data_a, 0.0) == pytest.approx(0.8)
        d2 = BoundaryData.make(1.0, [(0.25, 2), (-0.25, -2)], 0)
        assert eta_bar_lim(d2, 0.0) == pytest.approx(2.0)
        flat = BoundaryData.make(1.0, [(0.4, 0), (0.9, 0)], 3)
        assert eta_bar_lim(flat, 0.0) == 0.0


class TestEtaIndexIdentity:
    def test_examples(self, data_a):
        rep = eta_index_identity(data_a, 0.0)
        assert rep.index_via_eta == pytest.approx(-2.0, abs=1e-12)
        assert rep.residual == pytest.approx(0.0, abs=1e-12)
        d2 = BoundaryData.make(1.0, [(0.25, 2), (-0.25, -2)], 0)
        rep = eta_index_identity(d2, 0.0)
        assert rep.index_via_eta == pytest.approx(-2.0, abs=1e-12)
        flat = BoundaryData.make(1.0, [(0.4, 0), (0.9, 0)], 3)
        rep = eta_index_identity(flat, 0.0)
        assert rep.index_via_eta == pytest.approx(-3.0, abs=1e-12)

    def test_eta_bar_two_expressions_agree(self, rng):
        for _ in range(200):
            data = random_boundary_data(rng)
            t = random_fredholm_shift(rng, data)
            rep = eta_index_identity(data, t)
            assert rep.eta_bar_lim == pytest.approx(rep.eta_bar_lim_alt, abs=1e-12)

    def test_index_via_eta_is_integer(self, rng):
        for _ in range(200):
            data = random_boundary_data(rng)
            t = random_fredholm_shift(rng, data)
            rep = eta_index_identity(data, t)
            assert abs(rep.index_via_eta - round(rep.index_via_eta)) <= 1e-9
            assert rep.index_reference == index_total(data, t).total
