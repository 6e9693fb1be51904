"""Sum evaluators against term-by-term oracles and exact identities."""

import math
import random

import pytest

from ratiocount.fpcore import DomainError, PrimeContext, e_p
from ratiocount.geometry import BoxRegion, DiskRegion, Interval, lattice_count
from ratiocount.expsums import (kloosterman_interval, level_set_counts,
                                ratio_double_sum, ratio_double_sum_region,
                                second_moment_over_a)
from ratiocount.counting import cross_ratio_count

RNG_SEED = 20260809


def oracle_ratio_sum(a, region, ctx):
    """Term-by-term double loop; the independent reference."""
    p = ctx.p
    total = 0j
    terms = 0
    ext = region.y_extent
    for y in range(ext.lo, ext.hi + 1):
        if y % p == 0:
            continue
        row = region.row_at(y)
        iy = pow(y % p, -1, p)
        for x in range(row.lo, row.hi + 1):
            total += ctx.root(a * (x % p) * iy)
            terms += 1
    return total, terms


def test_ratio_double_sum_examples():
    ctx = PrimeContext(11)
    sv = ratio_double_sum(1, Interval(-1, 11), Interval(0, 10), ctx)
    assert abs(sv.value) < 1e-9  # every row sums a full period
    assert sv.terms == 110

    ctx5 = PrimeContext(5)
    sv = ratio_double_sum(1, Interval(0, 1), Interval(1, 1), ctx5)
    assert sv.value == pytest.approx(e_p(3, ctx5))  # 1/2 == 3 (mod 5)

    ctx101 = PrimeContext(101)
    I, J = Interval(0, 10), Interval(0, 10)
    sv = ratio_double_sum(7, I, J, ctx101)
    ov, terms = oracle_ratio_sum(7, BoxRegion(I, J), ctx101)
    assert sv.value == pytest.approx(ov, abs=1e-9 * terms)

    with pytest.raises(DomainError):
        ratio_double_sum(0, I, J, ctx101)
    with pytest.raises(DomainError):
        ratio_double_sum(101, I, J, ctx101)


def test_ratio_double_sum_oracle_equivalence():
    rng = random.Random(RNG_SEED)
    primes = [p for p in range(11, 300)
              if all(p % q for q in range(2, int(p**0.5) + 1))]
    for _ in range(500):
        p = rng.choice(primes)
        ctx = PrimeContext(p)
        K = rng.randrange(0, p)
        L = rng.randrange(0, p)
        A = rng.randrange(-1, p - 1 - K) if K else 0
        B = rng.randrange(-1, p - 1 - L) if L else 0
        a = rng.randrange(1, p)
        I, J = Interval(A, K), Interval(B, L)
        sv = ratio_double_sum(a, I, J, ctx)
        ov, terms = oracle_ratio_sum(a, BoxRegion(I, J), ctx)
        assert abs(sv.value - ov) <= 1e-9 * max(1, K * L)
        assert sv.terms == terms
        assert abs(sv.value) <= sv.terms + 1e-9 * max(1, sv.terms)


def test_region_sum_box_consistency_and_disk():
    ctx = PrimeContext(101)
    I, J = Interval(3, 9), Interval(10, 12)
    box_direct = ratio_double_sum(5, I, J, ctx)
    box_region = ratio_double_sum_region(5, BoxRegion(I, J), ctx)
    assert box_region == box_direct

    disk = DiskRegion(20, 20, 5)
    sv = ratio_double_sum_region(3, disk, ctx)
    ov, terms = oracle_ratio_sum(3, disk, ctx)
    assert sv.value == pytest.approx(ov, abs=1e-9 * max(1, terms))
    assert sv.terms == terms == lattice_count(disk)

    # single-point region
    pt = BoxRegion(Interval.from_endpoints(9, 9), Interval.from_endpoints(4, 4))
    sv = ratio_double_sum_region(2, pt, ctx)
    assert sv.value == pytest.approx(ctx.root(2 * 9 * pow(4, -1, 101)))


def test_skipped_rows_reported():
    ctx = PrimeContext(7)
    sv = ratio_double_sum(3, Interval(0, 3), Interval(-1, 7), ctx)
    assert sv.skipped_rows == 1      # the y = 0 row
    assert sv.terms == 3 * 6


def test_kloosterman_examples():
    ctx13 = PrimeContext(13)
    sv = kloosterman_interval(5, Interval(0, 12), ctx13)
    assert sv.value == pytest.approx(-1.0, abs=1e-9 * 13)

    ctx101 = PrimeContext(101)
    assert kloosterman_interval(0, Interval(0, 20), ctx101).value == 20

    sv = kloosterman_interval(3, Interval(0, 20), ctx101)
    direct = sum(ctx101.root(3 * pow(u, -1, 101)) for u in range(1, 21))
    assert sv.value == pytest.approx(direct)


def test_second_moment_parseval():
    # singleton: each |S(a)| = 1, so the moment is p - 1
    ctx = PrimeContext(31)
    assert second_moment_over_a(Interval(4, 1), Interval(9, 1), ctx) \
        == pytest.approx(30.0)
    # complete intervals: everything cancels
    ctx7 = PrimeContext(7)
    full = second_moment_over_a(Interval(-1, 7), Interval(0, 6), ctx7)
    assert full == pytest.approx(0.0, abs=1e-6)
    assert cross_ratio_count(Interval(-1, 7), Interval(0, 6),
                             Interval(-1, 7), Interval(0, 6), ctx7) == 7 * 36
    # generic instance against the exact identity
    I, J = Interval(0, 5), Interval(0, 6)
    m = second_moment_over_a(I, J, ctx)
    T = cross_ratio_count(I, J, I, J, ctx)
    assert m == pytest.approx(31 * T - (5 * 6) ** 2, rel=1e-10)


def test_level_set_counts():
    ctx = PrimeContext(101)
    # 1/y is a bijection on nonzero residues: R counts |w| < e^I_star
    ls = level_set_counts(1, 10, Interval(0, 100), ctx)
    assert ls.I_star == math.floor(math.log(2 * 101 / 10))
    assert ls.J_star == math.floor(math.log(2 * 101))
    assert ls.R == 2 * math.floor(math.exp(ls.I_star))
    assert ls.total == 100

    # partition invariant, including a skipped y = 0 row
    ls = level_set_counts(17, 10, Interval(-1, 51), ctx)
    assert ls.total == 50
    assert ls.skipped_rows == 1

    # single-row interval: exactly one bucket is hit
    ls = level_set_counts(17, 10, Interval(4, 1), ctx)
    assert ls.R + sum(ls.T) == 1

    # direct-loop oracle for the full vector
    ls = level_set_counts(17, 10, Interval(0, 50), ctx)
    R = 0
    T = [0] * (ls.J_star - ls.I_star + 1)
    for y in range(1, 51):
        w = 17 * pow(y, -1, 101) % 101
        if 2 * w > 101:
            w -= 101
        t = abs(w)
        if t < math.exp(ls.I_star):
            R += 1
        else:
            T[min(max(math.floor(math.log(t)), ls.I_star), ls.J_star) - ls.I_star] += 1
    assert ls.R == R and list(ls.T) == T
