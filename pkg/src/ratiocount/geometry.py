"""Integer regions in the (x, y)-plane and lattice-point counting.

A region is a set of integer points inside [0, p-1]^2 presented row by row:
for each height y the x-values form one contiguous interval.  Three concrete
shapes are provided (axis-aligned boxes, convex regions given by a row
oracle, and disks rasterized exactly), plus products of per-variable-pair
factors.

Intervals follow the offset/length convention: Interval(A, K) is the set
[A+1, A+K], empty iff K == 0.  Rows at y == 0 (mod p) are never dropped
here -- the sum and count layers skip them and report how many were skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

import numpy as np

from .fpcore import DomainError

__all__ = [
    "Interval",
    "BoxRegion",
    "ConvexRegion",
    "DiskRegion",
    "ProductRegion",
    "Region",
    "row_slice",
    "lattice_count",
    "nonzero_row_count",
    "check_bounds",
]


@dataclass(frozen=True)
class Interval:
    """The integer interval [offset+1, offset+length]; empty iff length == 0."""

    offset: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"interval length must be >= 0, got {self.length}")

    @classmethod
    def from_endpoints(cls, lo: int, hi: int) -> "Interval":
        """Interval covering lo..hi inclusive; empty when hi < lo."""
        if hi < lo:
            return cls(0, 0)
        return cls(lo - 1, hi - lo + 1)

    @property
    def lo(self) -> int:
        return self.offset + 1

    @property
    def hi(self) -> int:
        return self.offset + self.length

    @property
    def is_empty(self) -> bool:
        return self.length == 0

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def check_in_field(self, p: int) -> None:
        """Require the interval to lie inside [0, p-1]."""
        if self.length and (self.lo < 0 or self.hi > p - 1):
            raise DomainError(
                f"interval [{self.lo}, {self.hi}] not inside [0, {p - 1}]")


@dataclass(frozen=True)
class BoxRegion:
    """Product of an x-interval and a y-interval."""

    x_interval: Interval
    y_interval: Interval

    def row_at(self, y: int) -> Interval:
        return self.x_interval if y in self.y_interval else Interval(0, 0)

    @property
    def y_extent(self) -> Interval:
        return self.y_interval


@dataclass(frozen=True, eq=False)
class ConvexRegion:
    """Convex set presented by a per-row oracle y -> (lo, hi) of x-values.

    ``rows`` is either a mapping or a callable; it may return None (or an
    inverted pair) for an empty row.  Convexity -- every row and every
    column contiguous -- is the caller's contract; tests validate it for
    the shapes they use.
    """

    y_interval: Interval
    rows: Union[Mapping[int, tuple[int, int]], Callable[[int], object]]

    def row_at(self, y: int) -> Interval:
        if y not in self.y_interval:
            return Interval(0, 0)
        if callable(self.rows):
            r = self.rows(y)
        else:
            r = self.rows.get(y)
        if r is None:
            return Interval(0, 0)
        lo, hi = r
        return Interval.from_endpoints(int(lo), int(hi))

    @property
    def y_extent(self) -> Interval:
        return self.y_interval


def _floor_sqrt(q: Fraction) -> int:
    """floor(sqrt(q)) for a nonnegative rational, exactly."""
    if q < 0:
        raise DomainError("negative radicand")
    n, d = q.numerator, q.denominator
    return math.isqrt(n * d) // d


@dataclass(frozen=True)
class DiskRegion:
    """Integer points with (x-b)^2 + (y-c)^2 <= r^2, rasterized exactly.

    The radius is kept as an exact rational so membership never depends on
    floating-point boundary behavior.
    """

    b: int
    c: int
    radius: Fraction

    def __post_init__(self):
        r = Fraction(self.radius)
        if r <= 0:
            raise DomainError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", r)

    @property
    def r2(self) -> Fraction:
        return self.radius * self.radius

    def row_at(self, y: int) -> Interval:
        s = self.r2 - Fraction((y - self.c) ** 2)
        if s < 0:
            return Interval(0, 0)
        m = _floor_sqrt(s)
        return Interval.from_endpoints(self.b - m, self.b + m)

    @property
    def y_extent(self) -> Interval:
        m = _floor_sqrt(self.r2)
        return Interval.from_endpoints(self.c - m, self.c + m)


Region = Union[BoxRegion, ConvexRegion, DiskRegion]


@dataclass(frozen=True)
class ProductRegion:
    """One factor region per variable pair (x_j, y_j)."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 1:
            raise DomainError("a product region needs at least one factor")

    @property
    def n(self) -> int:
        return len(self.factors)


def row_slice(region: Region, y: int) -> Interval:
    """The contiguous x-range of the region at height y (possibly empty)."""
    return region.row_at(y)


def lattice_count(region) -> int:
    """Exact number of integer points of a region or product region."""
    if isinstance(region, ProductRegion):
        total = 1
        for f in region.factors:
            total *= lattice_count(f)
        return total
    if isinstance(region, BoxRegion):
        return region.x_interval.length * region.y_interval.length
    ext = region.y_extent
    return sum(region.row_at(y).length for y in range(ext.lo, ext.hi + 1))


def nonzero_row_count(region: Region, p: int) -> int:
    """Integer points on rows with y != 0 (mod p)."""
    ext = region.y_extent
    total = 0
    for y in range(ext.lo, ext.hi + 1):
        if y % p == 0:
            continue
        total += region.row_at(y).length
    return total


def rows_arrays(region: Region, p: int):
    """(ys, lo, hi, skipped) arrays over the nonempty rows with y != 0.

    ``skipped`` counts nonempty rows at y == 0 (mod p).  Vectorized
    consumers (sum evaluators, factor tables) are built on this.
    """
    ext = region.y_extent
    if ext.is_empty:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), e.copy(), 0
    if isinstance(region, BoxRegion) and not region.x_interval.is_empty:
        ys = np.arange(ext.lo, ext.hi + 1, dtype=np.int64)
        keep = ys % p != 0
        skipped = int((~keep).sum())
        ys = ys[keep]
        lo = np.full(ys.shape, region.x_interval.lo, dtype=np.int64)
        hi = np.full(ys.shape, region.x_interval.hi, dtype=np.int64)
        return ys, lo, hi, skipped
    ys_l, lo_l, hi_l = [], [], []
    skipped = 0
    for y in range(ext.lo, ext.hi + 1):
        row = region.row_at(y)
        if row.is_empty:
            continue
        if y % p == 0:
            skipped += 1
            continue
        ys_l.append(y)
        lo_l.append(row.lo)
        hi_l.append(row.hi)
    ys = np.array(ys_l, dtype=np.int64)
    lo = np.array(lo_l, dtype=np.int64)
    hi = np.array(hi_l, dtype=np.int64)
    return ys, lo, hi, skipped


def check_bounds(region, p: int) -> None:
    """Validate once, at binding time, that a region lies in [0, p-1]^2."""
    if isinstance(region, ProductRegion):
        for f in region.factors:
            check_bounds(f, p)
        return
    if isinstance(region, BoxRegion):
        region.x_interval.check_in_field(p)
        region.y_interval.check_in_field(p)
        return
    ext = region.y_extent
    if ext.is_empty:
        return
    if ext.lo < 0 or ext.hi > p - 1:
        raise DomainError(f"region rows span [{ext.lo}, {ext.hi}], "
                          f"outside [0, {p - 1}]")
    for y in range(ext.lo, ext.hi + 1):
        row = region.row_at(y)
        if not row.is_empty:
            row.check_in_field(p)
