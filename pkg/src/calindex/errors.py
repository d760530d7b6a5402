"""Exception types shared across the toolkit."""

from __future__ import annotations


class CalindexError(ValueError):
    """Base class for all toolkit errors."""


class NonPositivePeriod(CalindexError):
    """The circle-length parameter mu0 must be strictly positive."""

    def __init__(self, mu0: float):
        self.mu0 = mu0
        super().__init__(f"mu0 must be positive, got {mu0!r}")


class ChernSumNonzero(CalindexError):
    """The line Chern numbers must sum to zero (the boundary bundle is trivial)."""

    def __init__(self, total: int):
        self.total = total
        super().__init__(f"sum of line Chern numbers must vanish, got {total}")


class OnLattice(CalindexError):
    """An eigenvalue sits on the lattice mu0*Z, where the reduction is undefined."""

    def __init__(self, mu: float, mu0: float, nearest: float):
        self.mu = mu
        self.mu0 = mu0
        self.nearest = nearest
        super().__init__(
            f"eigenvalue {mu!r} lies on the lattice {mu0!r}*Z (nearest point {nearest!r})"
        )


class NotFredholm(CalindexError):
    """The shifted operator is not Fredholm: some mu_j - t hits the lattice."""

    def __init__(self, line_index: int, mu: float, t: float, nearest: float):
        self.line_index = line_index
        self.mu = mu
        self.t = t
        self.nearest = nearest
        super().__init__(
            f"not Fredholm at t={t!r}: line {line_index} has mu={mu!r} with "
            f"mu - t on the lattice (nearest point {nearest!r})"
        )


class RankTooSmall(CalindexError):
    """A nontrivial clutching map needs at least a 2x2 unitary block."""

    def __init__(self, n: int, d: int):
        self.n = n
        self.d = d
        super().__init__(f"rank {n} cannot carry a degree-{d} clutching map (need n >= 2)")


class SupportCollision(CalindexError):
    """The clutching support overlaps a region where the patch gauges disagree."""


class PatchBoundaryStencil(CalindexError):
    """A finite-difference stencil crossed a gauge-patch validity boundary."""
