"""Acceptance gate: one test per criterion, at full stated parameters.

Exact results (oracle equivalence, Parseval, complete sums, dyadic counts,
coprime filtering, determinism) are asserted with zero or near-machine
tolerance.  Asymptotic statements are monitored through explicit slack
exponents: p^0.15 for the interval/coincidence bounds, p^0.2 for the box
envelope, p^0.25 for the blow-up envelope, and +0.15 on fitted growth
exponents relative to the envelope's own growth on the same grid.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
PASS lines; ``ratiocount verify`` executes the same battery.
"""

from ratiocount import selfcheck


def _require(outcome):
    print(f"{'PASS' if outcome.ok else 'FAIL'}: {outcome.name} ({outcome.detail})")
    assert outcome.ok, f"{outcome.name}: {outcome.detail}"


def test_criterion_01_oracle_equivalence():
    # >= 200 seeded instances, p in {11..97}, n in {1,2,3}; zero tolerance
    _require(selfcheck.check_oracle_equivalence(instances=200))


def test_criterion_02_parseval_identity():
    # 50 random instances with p <= 499, relative 1e-8
    _require(selfcheck.check_parseval(instances=50))


def test_criterion_03_complete_sum_identities():
    # 20 primes: complete Kloosterman sums = -1; full-period ratio sums = 0
    _require(selfcheck.check_complete_sums(n_primes=20))


def test_criterion_04_coincidence_main_term():
    # p in {1009, 2003, 4001, 8009}, K = L = floor(p^0.75)
    _require(selfcheck.check_coincidence_main_term(primes=(1009, 2003, 4001, 8009)))


def test_criterion_05_inverse_concentration():
    _require(selfcheck.check_inverse_concentration())


def test_criterion_06_ratio_sum_envelope():
    # max over 200 random a, K = L = floor(p^0.6), p in {101..4999}
    _require(selfcheck.check_ratio_sum_envelope())


def test_criterion_07_cubic_box_envelope():
    # n = 3, H = floor(p^0.7), p in {101..1009}; slope threshold 2.25 + 0.15
    _require(selfcheck.check_cubic_box_envelope())


def test_criterion_08_dyadic_exactness():
    # unit-cube counts for k <= 16 at 2n = 6; the 665 layer; ball M <= 5 laws
    _require(selfcheck.check_dyadic_exactness(k_max=16, ball_M=5))


def test_criterion_09_blowup_sandwich():
    # n = 3, p in {31, 37, 41, 53, 61}, 6-ball r = 0.4, a = (0; 1, 1, 1)
    _require(selfcheck.check_blowup_sandwich(primes=(31, 37, 41, 53, 61)))


def test_criterion_10_coprime_variant():
    # 50 seeded instances against the gcd-filtered enumeration; exact
    _require(selfcheck.check_coprime(instances=50))


def test_criterion_11_sweep_determinism():
    _require(selfcheck.check_sweep_determinism())
