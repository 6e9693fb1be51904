"""Counters for solutions of  sum_j a_j * x_j / y_j == a_0  (mod p).

Two independent routes to N(a; S):

  * :func:`count_bruteforce` enumerates.  The default mode fixes all pairs
    but the first, solves for x_1 per y_1-row, and tests row membership in
    O(1); a full-enumeration mode exists purely for cross-validation.
  * :func:`count_fast` expands the solution indicator by orthogonality of
    additive characters:  N = (1/p) sum_{lam=0}^{p-1} e_p(-lam*a_0) *
    prod_j S_j(lam*a_j), with each factor sum S_j evaluated through the
    O(1)-per-row geometric closed form.  The lam = 0 term -- the exact
    point count -- is kept in integer arithmetic, so the float part only
    carries the error term and rounding is safe far beyond desk scale.

The two must agree exactly; the acceptance suite checks that on hundreds of
randomized instances.  Also here: the per-class ratio distribution
d[t] = #{(x, y) : x == t*y}, the four-interval ratio-coincidence count (an
exact Parseval partner of expsums.second_moment_over_a), the concentration
count of (B+y)z == 1 with small z, and the coprimality-restricted (Farey)
variant via Mobius inversion over scaled intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fpcore import (DomainError, PrecisionError, PrimeContext, SizeError,
                     char_sum_table, mobius)
from .geometry import (BoxRegion, Interval, ProductRegion, check_bounds,
                       lattice_count, nonzero_row_count, rows_arrays)

__all__ = [
    "CoefficientVector",
    "RatioDistribution",
    "CountResult",
    "count_bruteforce",
    "count_fast",
    "build_factor_tables",
    "ratio_distribution",
    "cross_ratio_count",
    "inverse_concentration_count",
    "coprime_count",
]

_ENUM_BUDGET = 10**9
_ARRAY_BUDGET = 2 * 10**7

# Rounding guard below 0.5 on purpose: residuals creeping past it flag
# precision collapse instead of silently mis-rounding.
_ROUND_GUARD = 0.4


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients (a_0; a_1, ..., a_n) with a_1..a_n nonzero mod p."""

    a0: int
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if len(self.a) < 1:
            raise DomainError("need at least one ratio coefficient")

    @property
    def n(self) -> int:
        return len(self.a)

    def validate(self, ctx: PrimeContext) -> None:
        for j, aj in enumerate(self.a, start=1):
            if aj % ctx.p == 0:
                raise DomainError(f"coefficient a_{j} == 0 (mod {ctx.p})")


@dataclass(frozen=True)
class RatioDistribution:
    """d[t] = #{(x, y) in region, y != 0 : x == t*y (mod p)}."""

    d: np.ndarray
    region: BoxRegion


@dataclass(frozen=True)
class CountResult:
    """A counted instance: the integer count plus rounding diagnostics.

    ``main_term`` is the lam = 0 contribution (point count / p);
    ``residual`` is the distance of the pre-rounding value from the
    returned integer.  ``uncovered_bound`` is only set by the blow-up
    counter: a measure bound on what its cube cover may have missed.
    """

    count: int
    main_term: float
    residual: float
    skipped_rows: int
    uncovered_bound: float | None = None


def _factor_points(region, aj: int, ctx: PrimeContext):
    """All values a_j * x * y^{-1} mod p over the factor's points, y != 0."""
    p = ctx.p
    ys, lo, hi, _ = rows_arrays(region, p)
    chunks = []
    for y, l, h in zip(ys, lo, hi):
        m = aj % p * ctx.inv_table[y % p] % p
        xs = np.arange(l, h + 1, dtype=np.int64) % p
        chunks.append(xs * m % p)
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def count_bruteforce(coeffs: CoefficientVector, regions: ProductRegion,
                     ctx: PrimeContext, full_enumeration: bool = False) -> int:
    """Exact N(a; S) by enumeration.

    Default mode: enumerate pairs 2..n, then for each y_1 solve
    x_1 == (a_0 - sum_{j>=2} a_j x_j / y_j) * y_1 / a_1 and count matching
    residues in row 1, giving O(N_total / K_1) work.  With
    ``full_enumeration`` every tuple is tested (slower; cross-validation).
    """
    p = ctx.p
    ctx.require_tables()
    coeffs.validate(ctx)
    if coeffs.n != regions.n:
        raise DomainError(f"{coeffs.n} coefficients vs {regions.n} factors")
    check_bounds(regions, p)
    if lattice_count(regions) > _ENUM_BUDGET:
        raise SizeError("instance exceeds the brute-force enumeration budget")

    a0 = coeffs.a0 % p
    if full_enumeration:
        total = np.zeros(1, dtype=np.int64)
        for f, aj in zip(regions.factors, coeffs.a):
            pts = _factor_points(f, aj, ctx)
            if len(total) * max(len(pts), 1) > _ARRAY_BUDGET:
                raise SizeError("full enumeration exceeds the array budget")
            total = (total[:, None] + pts[None, :]).ravel() % p
        return int((total == a0).sum())

    partial = np.zeros(1, dtype=np.int64)
    for f, aj in zip(regions.factors[1:], coeffs.a[1:]):
        pts = _factor_points(f, aj, ctx)
        if len(partial) * max(len(pts), 1) > _ARRAY_BUDGET:
            raise SizeError("semi-smart enumeration exceeds the array budget")
        partial = (partial[:, None] + pts[None, :]).ravel() % p

    inv_a1 = ctx.inv(coeffs.a[0])
    ys, lo, hi, _ = rows_arrays(regions.factors[0], p)
    count = 0
    for y, l, h in zip(ys, lo, hi):
        m = int(y) % p * inv_a1 % p
        x1 = (a0 - partial) % p * m % p
        count += int(((h - x1) // p - (l - 1 - x1) // p).sum())
    return count


def build_factor_tables(regions: ProductRegion, ctx: PrimeContext) -> list:
    """Per-factor tables T_j[c] = sum over factor j of e_p(c*x/y), c = 0..p-1.

    Built once per (region, p) and reusable across coefficient sweeps: the
    factor sum at multiplier lam*a_j is just T_j[lam*a_j mod p].
    """
    ctx.require_tables()
    p = ctx.p
    root = ctx.root_table
    cs = np.arange(p, dtype=np.int64)
    tables = []
    for f in regions.factors:
        check_bounds(f, p)
        ys, lo, hi, _ = rows_arrays(f, p)
        T = np.zeros(p, dtype=np.complex128)
        if isinstance(f, BoxRegion):
            if len(ys):
                G = char_sum_table(f.x_interval.lo, f.x_interval.hi, ctx)
                for iy in ctx.inv_table[ys % p]:
                    T += G[cs * int(iy) % p]
        else:
            for y, l, h in zip(ys, lo, hi):
                c = cs * int(ctx.inv_table[int(y) % p]) % p
                T[0] += h - l + 1
                cn = c[1:]
                num = root[cn * ((h + 1) % p) % p] - root[cn * (l % p) % p]
                T[1:] += num / (root[cn] - 1.0)
        tables.append(T)
    return tables


def _assemble_count(tables, mains, coeffs: CoefficientVector,
                    ctx: PrimeContext, skipped: int) -> CountResult:
    """Shared lam-sum assembly: N = (main + sum_{lam>=1} ...) / p, rounded."""
    p = ctx.p
    lam = np.arange(1, p, dtype=np.int64)
    prod = np.ones(p - 1, dtype=np.complex128)
    for T, aj in zip(tables, coeffs.a):
        prod *= T[lam * (aj % p) % p]
    phase = ctx.root_table[lam * ((-coeffs.a0) % p) % p]
    rest = float((prod * phase).sum().real)

    main = 1
    for m in mains:
        main *= m
    value = (main + rest) / p
    count = round(value)
    residual = abs(value - count)
    if residual >= _ROUND_GUARD:
        raise PrecisionError(
            f"residual {residual:.3f} >= {_ROUND_GUARD}: instance too large "
            "for the accumulation scheme")
    return CountResult(count=int(count), main_term=main / p,
                       residual=residual, skipped_rows=skipped)


def count_fast(coeffs: CoefficientVector, regions: ProductRegion,
               ctx: PrimeContext, tables: list | None = None) -> CountResult:
    """N(a; S) through character orthogonality; exact after rounding.

    ``tables`` may be precomputed with :func:`build_factor_tables` when many
    coefficient vectors share the same regions.
    """
    p = ctx.p
    coeffs.validate(ctx)
    if coeffs.n != regions.n:
        raise DomainError(f"{coeffs.n} coefficients vs {regions.n} factors")
    if tables is None:
        tables = build_factor_tables(regions, ctx)
    mains, skipped = [], 0
    for f in regions.factors:
        mains.append(nonzero_row_count(f, p))
        ext = f.y_extent
        skipped += sum(1 for y in range(ext.lo, ext.hi + 1)
                       if y % p == 0 and not f.row_at(y).is_empty)
    return _assemble_count(tables, mains, coeffs, ctx, skipped)


def ratio_distribution(x_interval: Interval, y_interval: Interval,
                       ctx: PrimeContext) -> RatioDistribution:
    """The length-p table d[t] = #{(x, y) in I x J, y != 0 : x == t*y}."""
    ctx.require_tables()
    p = ctx.p
    region = BoxRegion(x_interval, y_interval)
    check_bounds(region, p)
    d = np.zeros(p, dtype=np.int64)
    if x_interval.is_empty or y_interval.is_empty:
        return RatioDistribution(d, region)
    if x_interval.length * y_interval.length > 5 * 10**8:
        raise SizeError("ratio distribution table exceeds the O(KL) budget")
    ys = np.arange(y_interval.lo, y_interval.hi + 1, dtype=np.int64)
    ys = ys[ys % p != 0]
    xs = np.arange(x_interval.lo, x_interval.hi + 1, dtype=np.int64) % p
    row_chunk = max(1, 10**7 // max(len(xs), 1))
    for start in range(0, len(ys), row_chunk):
        inv_y = ctx.inv_table[ys[start:start + row_chunk] % p]
        idx = (xs[None, :] * inv_y[:, None] % p).ravel()
        d += np.bincount(idx, minlength=p)
    return RatioDistribution(d, region)


def cross_ratio_count(I1: Interval, J1: Interval, I2: Interval, J2: Interval,
                      ctx: PrimeContext) -> int:
    """#{x_1*y_2 == x_2*y_1 (mod p)} over I1 x J1 x I2 x J2, y_i != 0.

    Computed as sum_t d1[t]*d2[t] over the two ratio distributions; the
    quadruple-loop oracle and the Parseval identity with
    second_moment_over_a pin this down in the tests.
    """
    d1 = ratio_distribution(I1, J1, ctx).d
    d2 = ratio_distribution(I2, J2, ctx).d
    return int(np.dot(d1, d2))


def inverse_concentration_count(B: int, L: int, M: int, ctx: PrimeContext) -> int:
    """#{(y, z) : (B+y)*z == 1 (mod p), B+1 <= y <= B+L, 1 <= z <= M}."""
    p = ctx.p
    if not (0 <= B and B < B + L < p):
        raise DomainError(f"need 0 <= B < B+L < p, got B={B}, L={L}, p={p}")
    if not 0 <= M < p:
        raise DomainError(f"need 0 <= M < p, got M={M}")
    if M == 0:
        return 0
    ctx.require_tables()
    vals = (B + np.arange(B + 1, B + L + 1, dtype=np.int64)) % p
    vals = vals[vals != 0]
    z = ctx.inv_table[vals]
    return int((z <= M).sum())


def _scaled(interval: Interval, d: int) -> Interval:
    """{m : d*m in interval} -- the interval [ceil(lo/d), floor(hi/d)]."""
    return Interval.from_endpoints(-((-interval.lo) // d), interval.hi // d)


def _box_table(I: Interval, J: Interval, ctx: PrimeContext) -> np.ndarray:
    if I.is_empty or J.is_empty:
        return np.zeros(ctx.p, dtype=np.complex128)
    tables = build_factor_tables(ProductRegion((BoxRegion(I, J),)), ctx)
    return tables[0]


def coprime_count(coeffs: CoefficientVector, regions: ProductRegion,
                  ctx: PrimeContext) -> int:
    """N(a; S) restricted to gcd(x_j, y_j) = 1 for every j (box factors).

    Mobius inversion per factor: pairs with d | x and d | y contribute the
    same ratio sum over the d-scaled intervals, since x/y is d-invariant.
    gcd(0, y) = y, so a pair (0, y) counts as coprime only for y = 1; the
    inversion realizes that convention automatically because d then runs
    over all divisors of y, up to the top of the y-interval.
    """
    p = ctx.p
    coeffs.validate(ctx)
    if coeffs.n != regions.n:
        raise DomainError(f"{coeffs.n} coefficients vs {regions.n} factors")
    for f in regions.factors:
        if not isinstance(f, BoxRegion):
            raise DomainError("coprime counting supports box factors only")
    check_bounds(regions, p)

    tables, mains = [], []
    skipped = 0
    for f in regions.factors:
        I, J = f.x_interval, f.y_interval
        T = np.zeros(p, dtype=np.complex128)
        main = 0
        if not I.is_empty and not J.is_empty:
            # d must reach every possible common divisor: up to hi(J) when
            # 0 in I (the x = 0 column), else min(hi(I), hi(J)).
            d_max = J.hi if I.lo <= 0 else min(I.hi, J.hi)
            for dd in range(1, max(d_max, 0) + 1):
                mu = mobius(dd)
                if mu == 0:
                    continue
                Id, Jd = _scaled(I, dd), _scaled(J, dd)
                if Id.is_empty or Jd.is_empty:
                    continue
                T += mu * _box_table(Id, Jd, ctx)
                main += mu * nonzero_row_count(BoxRegion(Id, Jd), p)
        tables.append(T)
        mains.append(main)
        if 0 in f.y_interval and not f.x_interval.is_empty:
            skipped += 1
    return _assemble_count(tables, mains, coeffs, ctx, skipped).count
