"""Boundary data of a framed caloron and its spectral-side predicates.

Everything exact in this toolkit is a function of one small record: the
circle-length parameter mu0 (the circle has length 2*pi/mu0), the eigen-lines
(mu_j, k_j) into which the Higgs field at infinity splits the boundary bundle,
and the framed second Chern number k0.  This module owns that record plus the
predicates that depend only on where the mu_j sit relative to the lattice
mu0*Z: Fredholmness, the spectral gap, the (N, eps) reduction and the
indicial-operator invertibility test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ChernSumNonzero, NonPositivePeriod, OnLattice

#: Base relative tolerance deciding "mu equals N*mu0".  The formulas downstream
#: are discontinuous across the lattice, so the cut has to be deterministic:
#: a point counts as on-lattice when its distance to mu0*Z, measured in units
#: of mu0, is below 1e-9 * max(1, |mu|/mu0).
REL_LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class Line:
    """One eigen-line: the Higgs field acts by i*mu on it, and the line has
    first Chern number k over the boundary sphere."""

    mu: float
    k: int


@dataclass(frozen=True)
class BoundaryData:
    """Admissible boundary record (mu0; (mu_j, k_j) lines; k0)."""

    mu0: float
    lines: tuple[Line, ...]
    k0: int

    @classmethod
    def make(cls, mu0: float, pairs, k0: int) -> "BoundaryData":
        """Build from an iterable of (mu, k) pairs."""
        return cls(float(mu0), tuple(Line(float(m), int(k)) for m, k in pairs), int(k0))

    @property
    def rank(self) -> int:
        return len(self.lines)

    @property
    def period(self) -> float:
        """Circle length 2*pi/mu0."""
        return 2.0 * math.pi / self.mu0

    def mus(self) -> tuple[float, ...]:
        return tuple(line.mu for line in self.lines)

    def ks(self) -> tuple[int, ...]:
        return tuple(line.k for line in self.lines)


@dataclass(frozen=True)
class EigenvalueReduction:
    """Decomposition mu = n*mu0 + eps with 0 < eps < mu0."""

    n: int
    eps: float


def lattice_tolerance(mu: float, mu0: float) -> float:
    """On-lattice tolerance for mu, in units of mu0."""
    return REL_LATTICE_TOL * max(1.0, abs(mu) / mu0)


def lattice_offset(mu: float, mu0: float) -> float:
    """Signed distance of mu to the nearest lattice point, in units of mu0."""
    x = mu / mu0
    return x - round(x)


def on_lattice(mu: float, mu0: float) -> bool:
    return abs(lattice_offset(mu, mu0)) <= lattice_tolerance(mu, mu0)


def nearest_lattice_point(mu: float, mu0: float) -> float:
    return round(mu / mu0) * mu0


def validate(data: BoundaryData) -> BoundaryData:
    """Check admissibility and return the data unchanged.

    Raises NonPositivePeriod unless mu0 > 0, and ChernSumNonzero unless the
    line Chern numbers sum to zero (triviality of the boundary bundle).
    """
    if not (data.mu0 > 0.0) or not math.isfinite(data.mu0):
        raise NonPositivePeriod(data.mu0)
    if not data.lines:
        raise ValueError("boundary data needs at least one line")
    for line in data.lines:
        if not math.isfinite(line.mu):
            raise ValueError(f"non-finite eigenvalue {line.mu!r}")
    total = sum(line.k for line in data.lines)
    if total != 0:
        raise ChernSumNonzero(total)
    return data


def shift(data: BoundaryData, t: float) -> BoundaryData:
    """Boundary data of the shifted family: every mu_j replaced by mu_j - t."""
    return BoundaryData(
        data.mu0, tuple(Line(line.mu - t, line.k) for line in data.lines), data.k0
    )


def fredholm_check(data: BoundaryData, t: float = 0.0) -> bool:
    """True iff no (mu_j - t)/mu0 is an integer, i.e. the shifted operator is
    Fredholm (equivalently 1 - exp(2*pi*(Phi_inf - i*t)/mu0) is invertible)."""
    return all(not on_lattice(line.mu - t, data.mu0) for line in data.lines)


def spectral_gap(data: BoundaryData, t: float = 0.0) -> float:
    """min over lines j and integers N of |(mu_j - t) + N*mu0|.

    Zero exactly when fredholm_check fails; this is the gap quantity entering
    the lower bound on the operator away from a compact set.
    """
    return min(abs(lattice_offset(line.mu - t, data.mu0)) * data.mu0 for line in data.lines)


def reduce_eigenvalue(mu: float, mu0: float) -> EigenvalueReduction:
    """Write mu = n*mu0 + eps with strict 0 < eps < mu0.

    Raises OnLattice when mu is within tolerance of mu0*Z; the strict
    convention is forced by Fredholmness (eps = 0 only occurs in
    non-Fredholm data).
    """
    n = math.floor(mu / mu0)
    eps = mu - n * mu0
    tol = lattice_tolerance(mu, mu0)
    if eps / mu0 <= tol or eps / mu0 >= 1.0 - tol:
        raise OnLattice(mu, mu0, nearest_lattice_point(mu, mu0))
    return EigenvalueReduction(n, eps)


def indicial_invertible(
    data: BoundaryData, eta1: float, eta2: float, xi: float, t: float = 0.0
) -> bool:
    """Invertibility of the boundary model operator at Fourier parameters
    (eta1, eta2, xi).

    The operator is a commuting sum of a self-adjoint Clifford part of size
    sqrt(eta1^2 + eta2^2 + xi^2) and the skew-adjoint circle derivative, so it
    is invertible iff the Clifford part is nonzero or the circle operator has
    no kernel (the Fredholm condition).
    """
    if eta1 * eta1 + eta2 * eta2 + xi * xi > 0.0:
        return True
    return fredholm_check(data, t)
