"""Closed-form L2-index of the coupled Dirac operator.

The index decomposes over Fourier modes of the circle: mode k contributes
minus the first Chern number of the sub-bundle on which k*mu0 - i*Phi_inf is
positive-definite, and the framed second Chern number k0 contributes -k0.
Only finitely many modes have a proper positive sub-bundle, so the sum is
finite.  Everything here is integer arithmetic once the positivity of
k*mu0 + (mu_j - t) has been decided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .boundary import (
    BoundaryData,
    lattice_tolerance,
    nearest_lattice_point,
    on_lattice,
)
from .errors import NotFredholm


@dataclass(frozen=True)
class IndexBreakdown:
    """Index total with its k0 term and per-Fourier-mode terms.

    mode_terms maps k to minus the positive sub-bundle Chern number; modes
    whose sub-bundle is empty or everything contribute zero and are omitted.
    active_range is the closed integer interval that was scanned.
    """

    total: int
    k0_term: int
    mode_terms: dict[int, int] = field(default_factory=dict)
    active_range: tuple[int, int] = (0, 0)


def _require_fredholm(data: BoundaryData, t: float) -> None:
    for j, line in enumerate(data.lines):
        if on_lattice(line.mu - t, data.mu0):
            raise NotFredholm(j, line.mu, t, nearest_lattice_point(line.mu - t, data.mu0) + t)


def _line_positive(mu: float, k_mode: int, t: float, mu0: float) -> bool:
    # Strict positivity of k*mu0 + (mu - t); exact lattice hits are excluded
    # by the Fredholm precondition, decided with the shared tolerance.
    value = k_mode * mu0 + (mu - t)
    return value > lattice_tolerance(mu - t, mu0) * mu0


def positive_subbundle_c1(data: BoundaryData, k: int, t: float = 0.0) -> int:
    """First Chern number of the sub-bundle on which k*mu0 - i*Phi_inf
    (shifted by -t) is positive-definite: the sum of k_j over lines with
    k*mu0 + (mu_j - t) > 0."""
    _require_fredholm(data, t)
    return sum(line.k for line in data.lines if _line_positive(line.mu, k, t, data.mu0))


def callias_index_mode(data: BoundaryData, k: int, t: float = 0.0) -> int:
    """Index of the k-th Fourier-mode operator on R^3: minus the positive
    sub-bundle Chern number."""
    return -positive_subbundle_c1(data, k, t)


def mode_range(data: BoundaryData, t: float = 0.0) -> tuple[int, int]:
    """Closed integer interval of modes that can carry a proper sub-bundle.

    A mode k is proper only when k*mu0 + mu_j - t changes sign across lines,
    which confines k to [ceil((t - max mu)/mu0) - 1, floor((t - min mu)/mu0) + 1].
    """
    mus = data.mus()
    lo = math.ceil((t - max(mus)) / data.mu0) - 1
    hi = math.floor((t - min(mus)) / data.mu0) + 1
    return lo, hi


def index_total(data: BoundaryData, t: float = 0.0) -> IndexBreakdown:
    """Evaluate the closed-form index: -k0 - sum over modes of the positive
    sub-bundle Chern numbers.

    Raises NotFredholm (with the offending line and nearest lattice point)
    when some mu_j - t sits on the lattice.
    """
    _require_fredholm(data, t)
    lo, hi = mode_range(data, t)
    n = data.rank
    mode_terms: dict[int, int] = {}
    mode_sum = 0
    for k in range(lo, hi + 1):
        flags = [_line_positive(line.mu, k, t, data.mu0) for line in data.lines]
        npos = sum(flags)
        if npos == 0 or npos == n:
            # Empty or full sub-bundle: c1 is 0 (triviality), omitted.
            continue
        c1 = sum(line.k for line, f in zip(data.lines, flags) if f)
        mode_terms[k] = -c1
        mode_sum += c1
    total = -data.k0 - mode_sum
    return IndexBreakdown(total, -data.k0, mode_terms, (lo, hi))


def charge_closed_form(data: BoundaryData) -> float:
    """Closed-form Chern character integral: -k0 - (1/mu0) * sum_j mu_j*k_j."""
    return -data.k0 - sum(line.mu * line.k for line in data.lines) / data.mu0
