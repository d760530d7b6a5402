"""Fredholm intervals, jump points and the rank profile of the shifted family.

Shifting the connection by -i*t*dz moves every eigenvalue to mu_j - t, so the
operator family is Fredholm away from the translates t = mu_j mod mu0 and its
index is constant on each open interval in between.  The (co)kernel rank is
minus the index, jumps across t = mu_j (mod mu0) by the Chern numbers
congruent to that point, and repeats with period mu0.  The informal
partial-sum sequence m_j = k0 + k_1 + ... + k_j (lines ordered by decreasing
fractional part) is computed as advisory data and compared, but only asserted
when every k_j vanishes; for nontrivial charges its labeling convention is
not pinned down, so both sequences are reported side by side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import permutations

from .boundary import (
    BoundaryData,
    lattice_tolerance,
    on_lattice,
    reduce_eigenvalue,
)
from .callias import index_total
from .errors import NotFredholm

MATCH = "MATCH"
MATCH_UP_TO_RELABELING = "MATCH_UP_TO_RELABELING"
MISMATCH = "MISMATCH"

#: Annotation attached to jump points coming from on-lattice eigenvalues
#: (those t-translates are never Fredholm; the rest of the profile stands).
NON_FREDHOLM_LINE = "NON_FREDHOLM_LINE"


@dataclass(frozen=True)
class Segment:
    """Open t-interval carrying a constant index (rank = -index)."""

    t_lo: float
    t_hi: float
    index: int
    rank: int


@dataclass(frozen=True)
class NahmProfile:
    mu0: float
    jump_points: tuple[float, ...]
    segments: tuple[Segment, ...]
    mj_advisory: tuple[tuple[int, int], ...]
    annotations: tuple[str, ...] = ()


def jump_points(data: BoundaryData) -> list[float]:
    """Sorted translates {mu_j mod mu0} in [0, mu0), deduplicated within the
    lattice tolerance.  On-lattice eigenvalues map to 0.0 (their translates
    are permanently non-Fredholm; flagged by the profile, not fatal)."""
    eps_values = []
    for line in data.lines:
        if on_lattice(line.mu, data.mu0):
            eps_values.append(0.0)
        else:
            eps_values.append(reduce_eigenvalue(line.mu, data.mu0).eps)
    eps_values.sort()
    tol = max(lattice_tolerance(line.mu, data.mu0) for line in data.lines) * data.mu0
    out: list[float] = []
    for e in eps_values:
        if not out or e - out[-1] > tol:
            out.append(e)
    # A value within tolerance of mu0 wraps around to the representative of 0.
    if len(out) > 1 and data.mu0 - out[-1] <= tol and out[0] <= tol:
        out.pop()
    return out


def _advisory_m_sequence(data: BoundaryData) -> tuple[tuple[int, int], ...]:
    # Lines ordered by decreasing eps (stable for ties), partial sums of k0.
    reduced = _line_eps(data)
    order = sorted(range(len(reduced)), key=lambda j: -reduced[j])
    seq = [(0, data.k0)]
    m = data.k0
    for pos, j in enumerate(order[:-1], start=1):
        m += data.lines[j].k
        seq.append((pos, m))
    return tuple(seq)


def _segment_midpoint(lo: float, hi: float, jumps: list[float], mu0: float) -> float:
    """Midpoint of (lo, hi), subdividing if it lands too near a jump translate."""
    guard = 10.0 * 1e-9 * mu0
    candidates = [0.5, 0.25, 0.75, 0.375, 0.625]
    for frac in candidates:
        t = lo + frac * (hi - lo)
        dist = min(abs((t - p) / mu0 - round((t - p) / mu0)) * mu0 for p in jumps)
        if dist > guard:
            return t
    raise NotFredholm(-1, lo, 0.5 * (lo + hi), lo)  # segment thinner than the guard


def rank_profile(data: BoundaryData) -> NahmProfile:
    """Evaluate the index on every open interval of one period.

    Segments run from each jump point to the next, the last one wrapping to
    the first point plus mu0; each is evaluated at an interior point via the
    mode-sum index.  The advisory m_j sequence is attached for comparison.
    """
    jumps = jump_points(data)
    annotations = []
    if any(on_lattice(line.mu, data.mu0) for line in data.lines):
        annotations.append(NON_FREDHOLM_LINE)
    segments = []
    for i, lo in enumerate(jumps):
        hi = jumps[i + 1] if i + 1 < len(jumps) else jumps[0] + data.mu0
        t_mid = _segment_midpoint(lo, hi, jumps, data.mu0)
        idx = index_total(data, t_mid).total
        segments.append(Segment(lo, hi, idx, -idx))
    return NahmProfile(
        mu0=data.mu0,
        jump_points=tuple(jumps),
        segments=tuple(segments),
        mj_advisory=_advisory_m_sequence(data),
        annotations=tuple(annotations),
    )


def extend_profile(profile: NahmProfile, t_min: float, t_max: float) -> list[Segment]:
    """Periodic extension of the one-period segments, clipped to [t_min, t_max]."""
    if not (t_min < t_max):
        raise ValueError(f"need t_min < t_max, got [{t_min!r}, {t_max!r}]")
    out = []
    base = profile.segments
    shift0 = math.floor((t_min - base[0].t_lo) / profile.mu0) - 1
    shift1 = math.ceil((t_max - base[0].t_lo) / profile.mu0) + 1
    for n in range(shift0, shift1 + 1):
        off = n * profile.mu0
        for seg in base:
            lo, hi = seg.t_lo + off, seg.t_hi + off
            if hi <= t_min or lo >= t_max:
                continue
            out.append(Segment(max(lo, t_min), min(hi, t_max), seg.index, seg.rank))
    out.sort(key=lambda s: s.t_lo)
    return out


@dataclass(frozen=True)
class ConsistencyReport:
    verdict: str
    profile_ranks: tuple[int, ...]
    advisory_m: tuple[int, ...]
    segments: tuple[tuple[float, float], ...]
    note: str = ""


def _line_eps(data: BoundaryData) -> list[float]:
    return [
        0.0 if on_lattice(line.mu, data.mu0) else reduce_eigenvalue(line.mu, data.mu0).eps
        for line in data.lines
    ]


def _expected_m_per_segment(
    data: BoundaryData,
    perm_ks: tuple[int, ...],
    eps_desc: list[float],
    profile: NahmProfile,
) -> tuple[int, ...]:
    """Advisory m value on each profile segment for one labeling of
    the Chern numbers across the eps-descending slots."""
    # m_j holds on the interval (eps_{j+1}, eps_j); j = 0 is the wraparound.
    m = [data.k0]
    for pos in range(len(eps_desc) - 1):
        m.append(m[-1] + perm_ks[pos])
    expected = []
    n = len(eps_desc)
    for seg in profile.segments:
        t = 0.5 * (seg.t_lo + seg.t_hi)
        # reduce t into [eps_n, eps_n + mu0) and locate its interval label
        tt = t - data.mu0 * math.floor((t - eps_desc[-1]) / data.mu0)
        label = 0
        for j in range(1, n):
            if eps_desc[j] < tt < eps_desc[j - 1]:
                label = j
                break
        expected.append(m[label])
    return tuple(expected)


def profile_consistency_check(data: BoundaryData) -> ConsistencyReport:
    """Compare profile ranks with the advisory m_j sequence.

    MATCH when the canonical eps-descending labeling reproduces every
    segment rank; MATCH_UP_TO_RELABELING when some assignment of the Chern
    numbers to the eps slots does; MISMATCH otherwise (both sequences are
    reported).  Equality is only guaranteed when all k_j vanish.
    """
    profile = rank_profile(data)
    ranks = tuple(seg.rank for seg in profile.segments)
    bounds = tuple((seg.t_lo, seg.t_hi) for seg in profile.segments)
    reduced = _line_eps(data)
    order = sorted(range(len(reduced)), key=lambda j: -reduced[j])
    eps_desc = [reduced[j] for j in order]
    canonical_ks = tuple(data.lines[j].k for j in order)
    canonical = _expected_m_per_segment(data, canonical_ks, eps_desc, profile)
    if canonical == ranks:
        return ConsistencyReport(MATCH, ranks, canonical, bounds)
    for perm in set(permutations(canonical_ks)):
        if _expected_m_per_segment(data, perm, eps_desc, profile) == ranks:
            return ConsistencyReport(
                MATCH_UP_TO_RELABELING,
                ranks,
                canonical,
                bounds,
                note=f"matches under charge labeling {perm}",
            )
    return ConsistencyReport(
        MISMATCH,
        ranks,
        canonical,
        bounds,
        note="no charge labeling reproduces the profile; both sequences reported",
    )


def profile_rows(segments) -> list[tuple[float, float, int, int]]:
    """CSV-ready rows (t_lo, t_hi, index, rank)."""
    return [(s.t_lo, s.t_hi, s.index, s.rank) for s in segments]


def profile_to_json(profile: NahmProfile) -> str:
    doc = {
        "mu0": profile.mu0,
        "jump_points": list(profile.jump_points),
        "segments": [
            {"t_lo": s.t_lo, "t_hi": s.t_hi, "index": s.index, "rank": s.rank}
            for s in profile.segments
        ],
        "mj_advisory": [list(pair) for pair in profile.mj_advisory],
        "annotations": list(profile.annotations),
    }
    return json.dumps(doc, indent=2, sort_keys=True)
