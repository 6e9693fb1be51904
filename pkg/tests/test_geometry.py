"""Regions, row oracles, and lattice counting."""

import random
from fractions import Fraction

import pytest

from ratiocount.fpcore import DomainError
from ratiocount.geometry import (BoxRegion, ConvexRegion, DiskRegion,
                                 Interval, ProductRegion, check_bounds,
                                 lattice_count, nonzero_row_count, row_slice)

RNG_SEED = 20260809


def test_interval_conventions():
    iv = Interval(3, 4)  # [4, 7]
    assert (iv.lo, iv.hi, iv.length) == (4, 7, 4)
    assert 4 in iv and 7 in iv and 3 not in iv
    assert Interval(5, 0).is_empty
    assert Interval.from_endpoints(2, 9) == Interval(1, 8)
    assert Interval.from_endpoints(5, 4).is_empty
    with pytest.raises(DomainError):
        Interval(0, -1)


def test_interval_field_bounds():
    Interval(-1, 7).check_in_field(7)  # [0, 6] fits
    with pytest.raises(DomainError):
        Interval(0, 7).check_in_field(7)  # [1, 7] does not
    Interval(0, 0).check_in_field(3)  # empty always fits


def test_box_rows():
    box = BoxRegion(Interval.from_endpoints(1, 10), Interval.from_endpoints(1, 5))
    assert row_slice(box, 3) == Interval.from_endpoints(1, 10)
    assert row_slice(box, 6).is_empty
    assert lattice_count(box) == 50


def test_disk_rows_and_counts():
    disk = DiskRegion(10, 10, 3)
    assert row_slice(disk, 10) == Interval.from_endpoints(7, 13)
    assert row_slice(disk, 14).is_empty
    assert lattice_count(DiskRegion(10, 10, Fraction(5, 2))) == 21
    # boundary exactness: row at |y - c| = r keeps the single point
    assert row_slice(disk, 13) == Interval.from_endpoints(10, 10)


def test_disk_row_monotone():
    disk = DiskRegion(20, 20, Fraction(17, 3))
    lengths = [row_slice(disk, y).length for y in range(20, 28)]
    assert all(a >= b for a, b in zip(lengths, lengths[1:]))


def test_product_region():
    box = BoxRegion(Interval(0, 10), Interval(0, 10))
    prod = ProductRegion((box,) * 3)
    assert lattice_count(prod) == 10**6
    with pytest.raises(DomainError):
        ProductRegion(())


def test_convex_region_and_column_contiguity():
    rows = {y: (10 - y, 10 + y) for y in range(0, 5)}
    tri = ConvexRegion(Interval.from_endpoints(0, 4), rows)
    assert row_slice(tri, 0) == Interval.from_endpoints(10, 10)
    assert row_slice(tri, 9).is_empty
    assert lattice_count(tri) == sum(2 * y + 1 for y in range(5))
    cols = {}
    for y in range(0, 5):
        r = row_slice(tri, y)
        for x in range(r.lo, r.hi + 1):
            cols.setdefault(x, []).append(y)
    for ys in cols.values():
        assert ys == list(range(min(ys), max(ys) + 1))


def test_lattice_count_against_membership():
    rng = random.Random(RNG_SEED)
    for _ in range(200):
        kind = rng.choice(("box", "disk", "convex"))
        if kind == "box":
            region = BoxRegion(Interval(rng.randrange(-1, 20), rng.randrange(0, 15)),
                               Interval(rng.randrange(-1, 20), rng.randrange(0, 15)))
        elif kind == "disk":
            region = DiskRegion(rng.randrange(10, 30), rng.randrange(10, 30),
                                Fraction(rng.randrange(2, 17), 2))
        else:
            y0 = rng.randrange(0, 10)
            h = rng.randrange(1, 9)
            region = ConvexRegion(
                Interval.from_endpoints(y0, y0 + h - 1),
                {y0 + t: (20 - t, 20 + rng.randrange(0, 3) + t) for t in range(h)})
        ext = region.y_extent
        brute = sum(row_slice(region, y).length
                    for y in range(ext.lo - 2, ext.hi + 3))
        assert brute == lattice_count(region)


def test_nonzero_row_count_skips_zero_rows():
    box = BoxRegion(Interval(-1, 5), Interval(-1, 5))  # x, y in [0, 4]
    assert lattice_count(box) == 25
    assert nonzero_row_count(box, 7) == 20   # the y = 0 row is dropped
    assert nonzero_row_count(box, 3) == 15   # y = 0 and y = 3 dropped


def test_check_bounds_product():
    good = ProductRegion((BoxRegion(Interval(0, 5), Interval(0, 5)),))
    check_bounds(good, 7)
    bad = ProductRegion((BoxRegion(Interval(0, 7), Interval(0, 5)),))
    with pytest.raises(DomainError):
        check_bounds(bad, 7)
    with pytest.raises(DomainError):
        check_bounds(DiskRegion(3, 3, 4), 11)  # pokes below 0
