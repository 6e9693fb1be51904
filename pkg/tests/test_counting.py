"""The two counting routes, distributions, and the congruence counts."""

import math
import random

import numpy as np
import pytest

from ratiocount.fpcore import DomainError, PrimeContext, SizeError
from ratiocount.geometry import (BoxRegion, DiskRegion, Interval,
                                 ProductRegion, lattice_count)
from ratiocount.counting import (CoefficientVector, build_factor_tables,
                                 coprime_count, count_bruteforce, count_fast,
                                 cross_ratio_count,
                                 inverse_concentration_count,
                                 ratio_distribution)

RNG_SEED = 20260809


def boxes(*quads):
    return ProductRegion(tuple(
        BoxRegion(Interval.from_endpoints(a, b), Interval.from_endpoints(c, d))
        for a, b, c, d in quads))


def test_count_examples():
    # x must be 0: six solutions (0, y)
    ctx = PrimeContext(7)
    cv = CoefficientVector(0, (1,))
    regs = boxes((0, 6, 1, 6))
    assert count_bruteforce(cv, regs, ctx) == 6
    assert count_fast(cv, regs, ctx).count == 6

    # each y forces a unique x
    ctx11 = PrimeContext(11)
    cv = CoefficientVector(3, (1,))
    regs = boxes((0, 10, 1, 10))
    assert count_bruteforce(cv, regs, ctx11) == 10
    assert count_fast(cv, regs, ctx11).count == 10

    # n = 3 against full enumeration
    ctx13 = PrimeContext(13)
    cv = CoefficientVector(1, (1, 1, 1))
    regs = boxes(*[(1, 5, 1, 5)] * 3)
    full = count_bruteforce(cv, regs, ctx13, full_enumeration=True)
    assert count_bruteforce(cv, regs, ctx13) == full
    res = count_fast(cv, regs, ctx13)
    assert res.count == full
    assert res.residual < 0.4

    # an empty factor kills the count
    regs = ProductRegion((BoxRegion(Interval(0, 0), Interval(0, 5)),
                          BoxRegion(Interval(0, 5), Interval(0, 5)),
                          BoxRegion(Interval(0, 5), Interval(0, 5))))
    cv = CoefficientVector(0, (1, 1, 1))
    assert count_fast(cv, regs, ctx13).count == 0
    assert count_bruteforce(cv, regs, ctx13) == 0


def test_count_fast_region_factors():
    # mixed factor kinds go through the same assembly
    ctx = PrimeContext(31)
    regs = ProductRegion((DiskRegion(10, 10, 4),
                          BoxRegion(Interval(0, 6), Interval(2, 7))))
    cv = CoefficientVector(5, (2, 3))
    assert count_fast(cv, regs, ctx).count == count_bruteforce(cv, regs, ctx)


def test_count_fast_main_term_and_skips():
    ctx = PrimeContext(11)
    regs = boxes((0, 10, 0, 10))  # y-interval includes 0
    cv = CoefficientVector(3, (1,))
    res = count_fast(cv, regs, ctx)
    assert res.skipped_rows == 1
    assert res.main_term == pytest.approx(11 * 10 / 11)
    assert res.count == count_bruteforce(cv, regs, ctx)


def test_count_guards():
    ctx = PrimeContext(97)
    cv = CoefficientVector(0, (1, 1, 1))
    big = boxes(*[(0, 96, 1, 96)] * 3)
    with pytest.raises(SizeError):
        count_bruteforce(cv, big, ctx)
    with pytest.raises(DomainError):
        count_fast(CoefficientVector(0, (97,)), boxes((0, 5, 1, 5)), ctx)
    with pytest.raises(DomainError):
        count_fast(cv, boxes((0, 5, 1, 5)), ctx)  # n mismatch


def test_table_reuse_matches():
    ctx = PrimeContext(101)
    regs = boxes((1, 20, 1, 25), (0, 9, 3, 17))
    tables = build_factor_tables(regs, ctx)
    rng = random.Random(RNG_SEED)
    for _ in range(5):
        cv = CoefficientVector(rng.randrange(0, 101),
                               (rng.randrange(1, 101), rng.randrange(1, 101)))
        with_tables = count_fast(cv, regs, ctx, tables=tables)
        fresh = count_fast(cv, regs, ctx)
        assert with_tables == fresh


def test_ratio_distribution():
    ctx = PrimeContext(7)
    rd = ratio_distribution(Interval(0, 3), Interval(0, 2), ctx)
    assert rd.d.tolist() == [0, 2, 1, 1, 1, 1, 0]
    # full ranges: every class hit p - 1 times
    rd = ratio_distribution(Interval(-1, 7), Interval(0, 6), ctx)
    assert (rd.d == 6).all()
    # empty x-interval
    rd = ratio_distribution(Interval(0, 0), Interval(0, 6), ctx)
    assert (rd.d == 0).all()


def test_ratio_distribution_mass():
    rng = random.Random(RNG_SEED)
    for _ in range(30):
        p = rng.choice((11, 13, 17, 19))
        ctx = PrimeContext(p)
        K, L = rng.randrange(0, p), rng.randrange(0, p)
        A = rng.randrange(-1, p - 1 - K) if K else 0
        B = rng.randrange(-1, p - 1 - L) if L else 0
        rd = ratio_distribution(Interval(A, K), Interval(B, L), ctx)
        nonzero = sum(1 for y in range(B + 1, B + L + 1) if y % p != 0)
        assert int(rd.d.sum()) == K * nonzero


def test_cross_ratio_count():
    ctx = PrimeContext(7)
    I, J = Interval(-1, 7), Interval(0, 6)
    assert cross_ratio_count(I, J, I, J, ctx) == 7 * 36  # p(p-1)^2

    # singleton second pair reduces to one class of the first distribution
    ctx23 = PrimeContext(23)
    I1, J1 = Interval(0, 8), Interval(0, 9)
    x2, y2 = 7, 5
    single = cross_ratio_count(I1, J1, Interval.from_endpoints(x2, x2),
                               Interval.from_endpoints(y2, y2), ctx23)
    d1 = ratio_distribution(I1, J1, ctx23)
    assert single == int(d1.d[x2 * pow(y2, -1, 23) % 23])

    # quadruple-loop oracle
    brute = 0
    for x1 in range(1, 9):
        for y1 in range(1, 10):
            for x2_ in range(1, 9):
                for y2_ in range(1, 10):
                    brute += (x1 * y2_ - x2_ * y1) % 23 == 0
    assert cross_ratio_count(I1, J1, I1, J1, ctx23) == brute


def test_inverse_concentration():
    ctx = PrimeContext(1009)
    assert inverse_concentration_count(0, 1008, 1008, ctx) == 1008
    assert inverse_concentration_count(0, 1008, 1, ctx) == 1
    assert inverse_concentration_count(0, 1008, 0, ctx) == 0
    # direct loop oracle for the shifted instance
    direct = 0
    for y in range(51, 151):
        val = (50 + y) % 1009
        if val and 1 <= pow(val, -1, 1009) <= 30:
            direct += 1
    assert inverse_concentration_count(50, 100, 30, ctx) == direct
    with pytest.raises(DomainError):
        inverse_concentration_count(500, 509, 5, ctx)
    with pytest.raises(DomainError):
        inverse_concentration_count(0, 10, 1009, ctx)


def gcd_filtered_bruteforce(cv, regions, ctx):
    p = ctx.p
    total = np.zeros(1, dtype=np.int64)
    for f, aj in zip(regions.factors, cv.a):
        vals = []
        ext = f.y_extent
        for y in range(ext.lo, ext.hi + 1):
            if y % p == 0:
                continue
            row = f.row_at(y)
            iy = pow(y % p, -1, p)
            for x in range(row.lo, row.hi + 1):
                if math.gcd(x, y) == 1:
                    vals.append(aj % p * (x % p) % p * iy % p)
        arr = np.array(vals, dtype=np.int64)
        total = (total[:, None] + arr[None, :]).ravel() % p
    return int((total == cv.a0 % p).sum())


def test_coprime_examples():
    # only (0, 1) survives the gcd filter among x = 0 solutions
    ctx = PrimeContext(7)
    cv = CoefficientVector(0, (1,))
    regs = boxes((0, 6, 1, 6))
    assert coprime_count(cv, regs, ctx) == 1

    # full ranges with a shift: count y with gcd(3y mod 11, y) = 1
    ctx11 = PrimeContext(11)
    cv = CoefficientVector(3, (1,))
    regs = boxes((0, 10, 1, 10))
    direct = sum(1 for y in range(1, 11) if math.gcd(3 * y % 11, y) == 1)
    assert coprime_count(cv, regs, ctx11) == direct

    ctx13 = PrimeContext(13)
    cv = CoefficientVector(1, (1, 1, 1))
    regs = boxes(*[(1, 5, 1, 5)] * 3)
    assert coprime_count(cv, regs, ctx13) == gcd_filtered_bruteforce(cv, regs, ctx13)

    with pytest.raises(DomainError):
        coprime_count(cv, ProductRegion((DiskRegion(5, 5, 2),) * 3), ctx13)


def test_coprime_x_zero_column_beyond_interval_length():
    # the (0, y) pairs force divisors d up to hi(J), not max(K, L)
    ctx = PrimeContext(31)
    cv = CoefficientVector(0, (1,))
    regs = boxes((0, 0, 10, 20))  # x = 0 only, y in [10, 20]
    assert coprime_count(cv, regs, ctx) == 0  # gcd(0, y) = y > 1 always
    regs = boxes((0, 0, 1, 20))
    assert coprime_count(cv, regs, ctx) == 1  # only y = 1


def test_monotonicity_of_domain():
    base = boxes((1, 5, 1, 5), (2, 6, 1, 4))
    bigger = boxes((1, 7, 1, 5), (2, 6, 1, 4))
    assert lattice_count(bigger) >= lattice_count(base)


def test_orthogonality_residual_small():
    rng = random.Random(RNG_SEED)
    for _ in range(40):
        p = rng.choice((11, 31, 61, 101))
        ctx = PrimeContext(p)
        n = rng.choice((1, 2))
        regs = ProductRegion(tuple(
            BoxRegion(Interval(rng.randrange(-1, 5), rng.randrange(0, p // 2)),
                      Interval(rng.randrange(-1, 5), rng.randrange(0, p // 2)))
            for _ in range(n)))
        cv = CoefficientVector(rng.randrange(0, p),
                               tuple(rng.randrange(1, p) for _ in range(n)))
        assert count_fast(cv, regs, ctx).residual < 1e-6
