import math

import pytest

from calindex import (
    BoundaryData,
    ChernSumNonzero,
    NonPositivePeriod,
    OnLattice,
    fredholm_check,
    indicial_invertible,
    reduce_eigenvalue,
    spectral_gap,
    validate,
)
from calindex.sampling import random_boundary_data, random_fredholm_shift


def gap_bruteforce(data, t):
    # independent oracle: scan a wide window of lattice translates
    best = math.inf
    for line in data.lines:
        for k in range(-50, 51):
            best = min(best, abs((line.mu - t) + k * data.mu0))
    return best


def test_validate_accepts_balanced_data(data_a):
    assert validate(data_a) is data_a


def test_validate_rejects_nonzero_chern_sum():
    bad = BoundaryData.make(1.0, [(0.3, 1)], 0)
    with pytest.raises(ChernSumNonzero) as err:
        validate(bad)
    assert err.value.total == 1


def test_validate_rejects_nonpositive_period():
    bad = BoundaryData.make(-1.0, [(0.5, 0)], 0)
    with pytest.raises(NonPositivePeriod):
        validate(bad)


def test_fredholm_examples():
    ok = BoundaryData.make(1.0, [(0.5, 0), (-0.5, 0)], 0)
    assert fredholm_check(ok, 0.0)
    lattice = BoundaryData.make(1.0, [(2.0, 0), (-2.0, 0)], 0)
    assert not fredholm_check(lattice, 0.0)
    # 1 - exp(0) = 0 is singular, so an eigenvalue at 0 also blocks Fredholmness
    zero = BoundaryData.make(1.0, [(0.0, 0), (0.3, 0), (-0.3, 0)], 0)
    assert not fredholm_check(zero, 0.0)


def test_spectral_gap_examples():
    d1 = BoundaryData.make(1.0, [(0.3, 1), (-0.3, -1)], 0)
    assert spectral_gap(d1, 0.0) == pytest.approx(0.3, abs=1e-15)
    d2 = BoundaryData.make(2.0, [(0.5, 0)], 0)
    assert spectral_gap(d2, 0.0) == pytest.approx(0.5, abs=1e-15)
    d3 = BoundaryData.make(1.0, [(1.0, 0)], 0)
    assert spectral_gap(d3, 0.0) == 0.0


def test_gap_matches_bruteforce_and_fredholm(rng):
    for _ in range(200):
        data = random_boundary_data(rng)
        t = float(rng.uniform(-3.0, 3.0))
        gap = spectral_gap(data, t)
        assert gap == pytest.approx(gap_bruteforce(data, t), abs=1e-12)
        assert fredholm_check(data, t) == (gap > 1e-9 * data.mu0)


def test_gap_periodicity(rng):
    for _ in range(100):
        data = random_boundary_data(rng)
        t = float(rng.uniform(-2.0, 2.0))
        assert spectral_gap(data, t) == pytest.approx(
            spectral_gap(data, t + data.mu0), abs=1e-12
        )
    # exact on dyadic values
    data = BoundaryData.make(1.0, [(0.3125, 1), (-0.3125, -1)], 2)
    assert spectral_gap(data, 0.125) == spectral_gap(data, 1.125)


def test_reduce_examples():
    red = reduce_eigenvalue(0.3, 1.0)
    assert (red.n, red.eps) == (0, pytest.approx(0.3))
    red = reduce_eigenvalue(-0.3, 1.0)
    assert (red.n, red.eps) == (-1, pytest.approx(0.7))
    with pytest.raises(OnLattice):
        reduce_eigenvalue(2.0, 1.0)


def test_reduce_reconstruction_within_4_ulps(rng):
    for _ in range(500):
        mu0 = float(rng.choice([0.5, 1.0, 2.0, 0.75]))
        mu = float(rng.uniform(-10 * mu0, 10 * mu0))
        if abs(mu / mu0 - round(mu / mu0)) < 1e-6:
            continue
        red = reduce_eigenvalue(mu, mu0)
        assert 0.0 < red.eps < mu0
        assert abs(red.n * mu0 + red.eps - mu) <= 4 * math.ulp(max(abs(mu), 1.0))


def test_indicial_examples():
    lattice = BoundaryData.make(1.0, [(2.0, 0)], 0)
    assert indicial_invertible(lattice, 1.0, 0.0, 0.0, 0.0)
    assert not indicial_invertible(lattice, 0.0, 0.0, 0.0, 0.0)
    good = BoundaryData.make(1.0, [(0.5, 0)], 0)
    assert indicial_invertible(good, 0.0, 0.0, 0.0, 0.0)


def test_indicial_nonzero_parameters_always_invertible(rng):
    for _ in range(100):
        data = random_boundary_data(rng)
        eta1, eta2, xi = rng.normal(size=3)
        if eta1 * eta1 + eta2 * eta2 + xi * xi == 0.0:
            continue
        assert indicial_invertible(data, eta1, eta2, xi, 0.0)
        # at the parameter origin the test reduces to the Fredholm predicate
        t = random_fredholm_shift(rng, data)
        assert indicial_invertible(data, 0.0, 0.0, 0.0, t) == fredholm_check(data, t)
