"""Exact arithmetic in the prime field F_p.

Everything downstream is parameterized by a :class:`PrimeContext`: an odd
prime p together with two optional O(p) lookup tables, the modular inverses
and the complex roots of unity exp(2*pi*i*w/p).  Contexts are immutable
after construction and safe to share across workers.

This module also carries the small arithmetic helpers the counting and sum
machinery leans on:

  * centered residues, i.e. the representative of u/v mod p in (-p/2, p/2);
  * geometric character sums sum_{x=lo}^{hi} e_p(c*x) in closed form
    (the O(1)-per-row primitive that makes the fast counters fast);
  * Mobius and divisor-count functions by trial factorization;
  * pigeonhole-small pairs (u, v) with u*B == v (mod p), u <= U and
    |v| <= ceil(p/U).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DomainError",
    "SizeError",
    "PrecisionError",
    "PrimeContext",
    "is_prime",
    "mod_inverse",
    "centered_residue",
    "e_p",
    "geometric_char_sum",
    "char_sum_table",
    "mobius",
    "divisor_count",
    "find_small_uv",
]


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class SizeError(RuntimeError):
    """The requested computation exceeds the configured enumeration budget."""


class PrecisionError(ArithmeticError):
    """A floating accumulation is too close to a rounding boundary to trust."""


# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Tables are length-p arrays; keep them to desk scale.
_TABLE_LIMIT = 10**7


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for n < 2**64."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeContext:
    """An odd prime modulus with precomputed inverse and root tables.

    The inverse table is built with the linear recurrence
    inv[i] = -(p // i) * inv[p % i] mod p in one O(p) pass; the root table
    holds exp(2*pi*i*w/p) for w = 0..p-1 so that character evaluations are
    table lookups and runs are bit-reproducible for a fixed p.
    """

    __slots__ = ("p", "inv_table", "root_table")

    def __init__(self, p: int, precompute_inverses: bool = True,
                 precompute_roots: bool = True):
        if not isinstance(p, int):
            raise DomainError(f"modulus must be an integer, got {type(p).__name__}")
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise DomainError(f"modulus must be an odd prime >= 3, got {p}")
        if p >= 2**63:
            raise DomainError("moduli beyond 63-bit primes are unsupported")
        self.p = p
        self.inv_table = None
        self.root_table = None
        if (precompute_inverses or precompute_roots) and p > _TABLE_LIMIT:
            raise SizeError(f"lookup tables require p <= {_TABLE_LIMIT}; "
                            "construct with precompute_*=False")
        if precompute_inverses:
            inv = [0] * p
            inv[1] = 1
            for i in range(2, p):
                inv[i] = (p - (p // i) * inv[p % i]) % p
            self.inv_table = np.array(inv, dtype=np.int64)
        if precompute_roots:
            self.root_table = np.exp(2j * np.pi * np.arange(p) / p)

    def inv(self, a: int) -> int:
        """Modular inverse of a mod p; DomainError if a == 0 (mod p)."""
        a %= self.p
        if a == 0:
            raise DomainError("zero has no inverse")
        if self.inv_table is not None:
            return int(self.inv_table[a])
        return pow(a, -1, self.p)

    def root(self, w: int) -> complex:
        """exp(2*pi*i*w/p), reduced mod p."""
        w %= self.p
        if self.root_table is not None:
            return complex(self.root_table[w])
        return complex(np.exp(2j * np.pi * w / self.p))

    def require_tables(self) -> None:
        if self.inv_table is None or self.root_table is None:
            raise SizeError("this operation needs a PrimeContext with "
                            "precomputed inverse and root tables")

    def __repr__(self) -> str:
        return f"PrimeContext(p={self.p})"


def mod_inverse(a: int, ctx: PrimeContext) -> int:
    """The b in [1, p-1] with a*b == 1 (mod p)."""
    return ctx.inv(a)


def centered_residue(u: int, v: int, ctx: PrimeContext) -> int:
    """The unique w with w == u/v (mod p) and |w| < p/2.

    The representative of the ratio u/v in (-p/2, p/2); v == 0 (mod p) is a
    DomainError.  Returned as a plain int (always satisfies
    |w| <= (p-1)/2 since p is odd).
    """
    p = ctx.p
    w = u * ctx.inv(v) % p
    if 2 * w > p:
        w -= p
    return w


def e_p(w: int, ctx: PrimeContext) -> complex:
    """Additive character exp(2*pi*i*w/p); w is reduced mod p."""
    return ctx.root(w)


def geometric_char_sum(c: int, lo: int, hi: int, ctx: PrimeContext) -> complex:
    """sum_{x=lo}^{hi} e_p(c*x), evaluated in closed form.

    For c != 0 (mod p) this is the geometric series
    (e_p(c*(hi+1)) - e_p(c*lo)) / (e_p(c) - 1); for c == 0 it is the term
    count.  An empty range (lo > hi) returns 0 rather than erroring.
    """
    if lo > hi:
        return 0j
    p = ctx.p
    c %= p
    if c == 0:
        return complex(hi - lo + 1)
    num = ctx.root(c * (hi + 1)) - ctx.root(c * lo)
    den = ctx.root(c) - 1.0
    return num / den


def char_sum_table(lo: int, hi: int, ctx: PrimeContext) -> np.ndarray:
    """Vector of geometric_char_sum(c, lo, hi) for c = 0..p-1.

    Shared kernel for the sum evaluators and the fast counter; requires the
    context root table.
    """
    ctx.require_tables()
    p = ctx.p
    out = np.empty(p, dtype=np.complex128)
    if lo > hi:
        out[:] = 0.0
        return out
    out[0] = hi - lo + 1
    c = np.arange(1, p, dtype=np.int64)
    root = ctx.root_table
    num = root[c * ((hi + 1) % p) % p] - root[c * (lo % p) % p]
    out[1:] = num / (root[c] - 1.0)
    return out


def _factorize(m: int) -> dict[int, int]:
    """Prime factorization of m >= 1 by trial division."""
    factors: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


def mobius(m: int) -> int:
    """Mobius function of m >= 1."""
    if m < 1:
        raise DomainError(f"mobius needs m >= 1, got {m}")
    if m == 1:
        return 1
    factors = _factorize(m)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def divisor_count(m: int) -> int:
    """Number of positive divisors of |m|; m == 0 is a DomainError."""
    if m == 0:
        raise DomainError("divisor_count is undefined at 0")
    m = abs(m)
    tau = 1
    for e in _factorize(m).values():
        tau *= e + 1
    return tau


def find_small_uv(B: int, U: int, ctx: PrimeContext) -> tuple[int, int]:
    """Smallest-u pair (u, v) with u*B == v (mod p), 1 <= u <= U, |v| minimal.

    Pigeonhole guarantees |v| <= ceil(p/U).  Ties in |v| are broken by the
    smallest u, so the output is deterministic.
    """
    p = ctx.p
    if not 1 <= U < p:
        raise DomainError(f"need 1 <= U < p, got U={U}, p={p}")
    B %= p
    half = p // 2
    best_u, best_v = 1, B if 2 * B <= p else B - p
    if p <= 2**31:
        vals = (B * np.arange(1, U + 1, dtype=np.int64)) % p
        cent = np.where(vals > half, vals - p, vals)
        i = int(np.argmin(np.abs(cent)))  # argmin returns the first minimum
        best_u, best_v = i + 1, int(cent[i])
    else:
        best_abs = abs(best_v)
        v = B
        for u in range(2, U + 1):
            v = (v + B) % p
            w = v - p if v > half else v
            if abs(w) < best_abs:
                best_u, best_v, best_abs = u, w, abs(w)
    return best_u, best_v
