"""Evaluators for the exponential sums behind the ratio-congruence counts.

The workhorse is the double ratio sum

    S(a) = sum_{x in I} sum_{y in J, y != 0} e_p(a * x / y),

evaluated row by row: for fixed y the inner sum over x is a geometric
character sum with closed form, so a K x L box costs O(L), not O(KL).
The same row decomposition handles arbitrary convex regions and disks.

Also here: short Kloosterman sums over an interval, the exact second moment
sum_{a=1}^{p-1} |S(a)|^2 (tied to the ratio-coincidence count by a Parseval
identity, see counting.cross_ratio_count), and the centered-residue level
set counts (R, T_j) that the interval bound's proof partitions rows into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fpcore import DomainError, PrimeContext, char_sum_table
from .geometry import BoxRegion, Interval, Region, check_bounds, rows_arrays

__all__ = [
    "SumValue",
    "LevelSetCounts",
    "ratio_double_sum",
    "ratio_double_sum_region",
    "kloosterman_interval",
    "second_moment_over_a",
    "level_set_counts",
]


@dataclass(frozen=True)
class SumValue:
    """A finite character sum: its value, term count, and skipped y==0 rows."""

    value: complex
    terms: int
    skipped_rows: int


@dataclass(frozen=True)
class LevelSetCounts:
    """Partition of rows by the size of the centered residue of a/y.

    I_star = floor(log(2p/K)), J_star = floor(log 2p).  R counts rows with
    |rho(a/y)| < e^I_star; T[j - I_star] counts rows with
    e^j <= |rho(a/y)| < e^(j+1) for j = I_star..J_star.  Together with the
    skipped y==0 rows these cover the whole y-interval.
    """

    I_star: int
    J_star: int
    R: int
    T: tuple
    skipped_rows: int

    @property
    def total(self) -> int:
        return self.R + sum(self.T)


def _row_char_sums(c: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                   ctx: PrimeContext) -> np.ndarray:
    """Closed-form sum_{x=lo..hi} e_p(c*x) per row; c must be nonzero mod p."""
    p = ctx.p
    root = ctx.root_table
    num = root[c * ((hi + 1) % p) % p] - root[c * (lo % p) % p]
    return num / (root[c] - 1.0)


def ratio_double_sum(a: int, x_interval: Interval, y_interval: Interval,
                     ctx: PrimeContext) -> SumValue:
    """sum_{x in I} sum_{y in J, y != 0} e_p(a*x/y) in O(L) row steps."""
    return ratio_double_sum_region(a, BoxRegion(x_interval, y_interval), ctx)


def ratio_double_sum_region(a: int, region: Region, ctx: PrimeContext) -> SumValue:
    """The ratio sum over any region presented row by row.

    Coincides with :func:`ratio_double_sum` when the region is a box.  The
    multiplier a must be nonzero mod p; callers handle the a == 0 main term
    themselves (it is just the point count).
    """
    ctx.require_tables()
    p = ctx.p
    a %= p
    if a == 0:
        raise DomainError("a == 0 (mod p): the main term is handled by callers")
    check_bounds(region, p)
    ys, lo, hi, skipped = rows_arrays(region, p)
    if len(ys) == 0:
        return SumValue(0j, 0, skipped)
    c = a * ctx.inv_table[ys % p] % p
    value = _row_char_sums(c, lo, hi, ctx).sum()
    terms = int((hi - lo + 1).sum())
    return SumValue(complex(value), terms, skipped)


def kloosterman_interval(lam: int, y_interval: Interval,
                         ctx: PrimeContext) -> SumValue:
    """Short Kloosterman sum K(lam; J) = sum_{u in J, u != 0} e_p(lam/u).

    For lam == 0 the value is the number of nonzero u in J.
    """
    ctx.require_tables()
    p = ctx.p
    y_interval.check_in_field(p)
    lam %= p
    if y_interval.is_empty:
        return SumValue(0j, 0, 0)
    us = np.arange(y_interval.lo, y_interval.hi + 1, dtype=np.int64)
    keep = us % p != 0
    skipped = int((~keep).sum())
    us = us[keep]
    if lam == 0:
        return SumValue(complex(len(us)), len(us), skipped)
    value = ctx.root_table[lam * ctx.inv_table[us % p] % p].sum()
    return SumValue(complex(value), len(us), skipped)


def second_moment_over_a(x_interval: Interval, y_interval: Interval,
                         ctx: PrimeContext, chunk: int = 512) -> float:
    """sum_{a=1}^{p-1} |S(a)|^2 for the box I x J.

    Exactly equals p * T - (K * L')^2 where T is the number of ratio
    coincidences x1/y1 == x2/y2 over (I x J)^2 and L' is the number of
    nonzero y in J -- an orthogonality identity, tested to 1e-8 relative.
    """
    ctx.require_tables()
    p = ctx.p
    x_interval.check_in_field(p)
    y_interval.check_in_field(p)
    if x_interval.is_empty or y_interval.is_empty:
        return 0.0
    G = char_sum_table(x_interval.lo, x_interval.hi, ctx)
    ys = np.arange(y_interval.lo, y_interval.hi + 1, dtype=np.int64)
    ys = ys[ys % p != 0]
    if len(ys) == 0:
        return 0.0
    inv_y = ctx.inv_table[ys % p]
    total = 0.0
    for start in range(1, p, chunk):
        a = np.arange(start, min(start + chunk, p), dtype=np.int64)
        idx = a[:, None] * inv_y[None, :] % p
        S = G[idx].sum(axis=1)
        total += float((S.real * S.real + S.imag * S.imag).sum())
    return total


def level_set_counts(a: int, K: int, y_interval: Interval,
                     ctx: PrimeContext) -> LevelSetCounts:
    """Classify each row y by the magnitude of the centered residue of a/y.

    K is the x-interval length the caller is bounding rows against; it only
    enters through I_star = floor(log(2p/K)).  The counts partition the
    nonzero-y rows exactly.
    """
    ctx.require_tables()
    p = ctx.p
    if not 1 <= K <= p:
        raise DomainError(f"need 1 <= K <= p, got K={K}")
    a %= p
    if a == 0:
        raise DomainError("a == 0 (mod p) has no level sets")
    y_interval.check_in_field(p)
    I_star = math.floor(math.log(2 * p / K))
    J_star = math.floor(math.log(2 * p))
    n_levels = J_star - I_star + 1
    if y_interval.is_empty:
        return LevelSetCounts(I_star, J_star, 0, (0,) * n_levels, 0)
    ys = np.arange(y_interval.lo, y_interval.hi + 1, dtype=np.int64)
    keep = ys % p != 0
    skipped = int((~keep).sum())
    ys = ys[keep]
    v = a * ctx.inv_table[ys % p] % p
    w = np.where(2 * v > p, v - p, v)
    t = np.abs(w)  # a != 0 so t >= 1
    small = t < math.exp(I_star)
    R = int(small.sum())
    T = [0] * n_levels
    if (~small).any():
        j = np.floor(np.log(t[~small])).astype(np.int64)
        j = np.clip(j, I_star, J_star)  # guard float edges; log t < log 2p
        counts = np.bincount(j - I_star, minlength=n_levels)
        T = [int(x) for x in counts]
    return LevelSetCounts(I_star, J_star, R, tuple(T), skipped)
