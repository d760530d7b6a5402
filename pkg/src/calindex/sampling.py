"""Seeded random boundary data for property suites.

Used by the command-line verify suite and the tests: draws validated
Fredholm boundary records with bounded rank and charges, and shift values
that keep a safe distance from every jump point.
"""

from __future__ import annotations

import numpy as np

from .boundary import BoundaryData, fredholm_check, spectral_gap, validate

_MU0_CHOICES = (0.5, 1.0, 2.0, 0.75)


def random_boundary_data(
    rng: np.random.Generator,
    max_lines: int = 6,
    max_k: int = 5,
    max_k0: int = 5,
) -> BoundaryData:
    """Validated boundary data with off-lattice eigenvalues and zero Chern sum."""
    while True:
        mu0 = float(rng.choice(_MU0_CHOICES))
        n = int(rng.integers(1, max_lines + 1))
        mus = []
        for _ in range(n):
            while True:
                mu = float(rng.uniform(-3.0 * mu0, 3.0 * mu0))
                off = abs(mu / mu0 - round(mu / mu0))
                if off > 1e-3:
                    mus.append(mu)
                    break
        ks = [int(rng.integers(-max_k, max_k + 1)) for _ in range(n - 1)]
        last = -sum(ks)
        if abs(last) > max_k:
            continue
        ks.append(last)
        k0 = int(rng.integers(-max_k0, max_k0 + 1))
        data = BoundaryData.make(mu0, zip(mus, ks), k0)
        return validate(data)


def random_fredholm_shift(
    rng: np.random.Generator, data: BoundaryData, span: float = 2.0, min_gap: float = 1e-3
) -> float:
    """A shift t with spectral gap at least min_gap * mu0."""
    while True:
        t = float(rng.uniform(-span * data.mu0, span * data.mu0))
        if fredholm_check(data, t) and spectral_gap(data, t) > min_gap * data.mu0:
            return t
