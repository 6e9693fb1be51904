"""Sweep orchestration, CSV emission, exponent fitting, and the CLI.

A sweep runs the fast counter over a prime grid with a cubic-box template
(side H = floor(p^theta)) and records, per row, the count, the main term,
the absolute error, and the slacked error envelope.  The envelope replaces
the non-testable p^o(1) in the interval bounds by an explicit p^eps; the
empirical growth exponent of the error is then least-squares fitted so
that envelope violations and anomalous growth both surface numerically.

CSV output is byte-deterministic for a fixed config: rows appear in grid
order regardless of worker count, floats are written with 17 significant
digits (round-trip exact for doubles), and the runtime column stays at 0
unless timing capture is explicitly requested.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fpcore import (DomainError, PrecisionError, PrimeContext, SizeError,
                     is_prime)
from .geometry import (BoxRegion, ConvexRegion, DiskRegion, Interval,
                       ProductRegion)
from .counting import (CoefficientVector, count_bruteforce, count_fast,
                       coprime_count, cross_ratio_count,
                       inverse_concentration_count)
from .expsums import (kloosterman_interval, ratio_double_sum_region,
                      second_moment_over_a)
from .wellshaped import (count_in_blowup, dyadic_layers, default_shift,
                         exact_blowup_count, parse_set_spec,
                         validate_shift)

__all__ = [
    "SweepConfig",
    "SweepRow",
    "FitResult",
    "run_sweep",
    "fit_exponent",
    "box_envelope",
    "rows_to_csv_bytes",
    "write_csv",
    "read_csv",
    "parse_config",
    "parse_region",
    "cli",
    "main",
]

CSV_HEADER = ["p", "n", "region", "a0", "coeffs", "count", "main_term",
              "abs_error", "envelope", "ratio", "flags", "runtime_ms"]

_ENV_WORKERS = "RATIOCOUNT_WORKERS"


@dataclass(frozen=True)
class SweepConfig:
    """Grid definition for an envelope sweep."""

    primes: tuple
    n: int = 3
    theta: float = 0.7
    eps: float = 0.2
    coeffs: tuple | None = None      # fixed (a0, a1..an); None -> seeded random
    draws: int = 1                   # coefficient draws per prime
    seed: int = 0
    workers: int = 1
    out: str | None = None
    timings: bool = False

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        if not 0.0 < self.theta < 1.0:
            raise DomainError(f"theta must be in (0,1), got {self.theta}")
        if self.eps < 0:
            raise DomainError(f"eps must be >= 0, got {self.eps}")
        if self.draws < 1:
            raise DomainError("need at least one draw per prime")
        for p in self.primes:
            if not is_prime(p) or p < 3:
                raise DomainError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class SweepRow:
    p: int
    n: int
    region: str
    a0: int
    coeffs: str
    count: int | None
    main_term: float
    abs_error: float
    envelope: float
    ratio: float
    flags: str
    runtime_ms: float


@dataclass(frozen=True)
class FitResult:
    slope: float | None
    intercept: float | None
    max_ratio: float


def box_envelope(p: int, sizes, eps: float) -> float:
    """Slacked box envelope sqrt(K1 L1 K2 L2) * prod_{j>=3} (K_j + sqrt(p L_j)).

    For n = 2 the product is empty; for n = 1 the single-factor interval
    bound (K + sqrt(p L)) is used instead.
    """
    if len(sizes) == 1:
        K, L = sizes[0]
        return (K + math.sqrt(p * L)) * p ** eps
    (K1, L1), (K2, L2) = sizes[0], sizes[1]
    env = math.sqrt(K1 * L1 * K2 * L2)
    for K, L in sizes[2:]:
        env *= K + math.sqrt(p * L)
    return env * p ** eps


def _below_nontrivial(H: int, p: int, n: int) -> bool:
    # nontrivial-range threshold H ~ p^(n/(3n-2)), compared exactly in integers
    return H ** (3 * n - 2) < p ** n


def _sweep_point(config: SweepConfig, p: int, draw: int) -> SweepRow:
    t0 = time.perf_counter()
    ctx = PrimeContext(p)
    H = int(math.floor(p ** config.theta))
    region_desc = f"cube:H={H}"
    factor = BoxRegion(Interval(0, H), Interval(0, H))
    regions = ProductRegion((factor,) * config.n)
    if config.coeffs is not None:
        a0, a = config.coeffs[0], tuple(config.coeffs[1:])
    else:
        rng = random.Random(f"{config.seed}:{p}:{draw}")
        a0 = rng.randrange(0, p)
        a = tuple(rng.randrange(1, p) for _ in range(config.n))
    cv = CoefficientVector(a0, a)
    flags = []
    if _below_nontrivial(H, p, config.n):
        flags.append("below_nontrivial_range")
    envelope = box_envelope(p, [(H, H)] * config.n, config.eps)
    count = None
    main = H ** (2 * config.n) / p
    err = float("nan")
    ratio = float("nan")
    try:
        res = count_fast(cv, regions, ctx)
        count = res.count
        main = res.main_term
        err = abs(count - main)
        ratio = err / envelope
    except PrecisionError:
        flags.append("precision_error")
    except SizeError:
        flags.append("size_error")
    dt = (time.perf_counter() - t0) * 1000.0 if config.timings else 0.0
    return SweepRow(p=p, n=config.n, region=region_desc, a0=a0,
                    coeffs=";".join(str(x) for x in a), count=count,
                    main_term=main, abs_error=err, envelope=envelope,
                    ratio=ratio, flags=";".join(flags), runtime_ms=dt)


def run_sweep(config: SweepConfig) -> list:
    """Execute the grid; rows come back in grid order for any worker count."""
    grid = [(p, d) for p in config.primes for d in range(config.draws)]
    if config.workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda g: _sweep_point(config, *g), grid))
    else:
        rows = [_sweep_point(config, p, d) for p, d in grid]
    if config.out:
        write_csv(rows, config.out)
    return rows


def fit_exponent(rows) -> FitResult:
    """Least-squares slope of log(abs_error) against log(p).

    Rows with missing counts or zero error are excluded from the fit;
    max_ratio is taken over every row that produced a count.
    """
    pts = [(r.p, r.abs_error) for r in rows
           if r.count is not None and r.abs_error > 0]
    ratios = [r.ratio for r in rows if r.count is not None]
    max_ratio = max(ratios) if ratios else 0.0
    if len(pts) < 3:
        return FitResult(None, None, max_ratio)
    x = np.log([p for p, _ in pts])
    y = np.log([e for _, e in pts])
    slope, intercept = np.polyfit(x, y, 1)
    return FitResult(float(slope), float(intercept), float(max_ratio))


# ---------------------------------------------------------------------------
# CSV

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def rows_to_csv_bytes(rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in
                    (r.p, r.n, r.region, r.a0, r.coeffs, r.count, r.main_term,
                     r.abs_error, r.envelope, r.ratio, r.flags, r.runtime_ms)])
    return buf.getvalue().encode()


def write_csv(rows, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(rows_to_csv_bytes(rows))


def read_csv(path: str) -> list:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(SweepRow(
                p=int(rec["p"]), n=int(rec["n"]), region=rec["region"],
                a0=int(rec["a0"]), coeffs=rec["coeffs"],
                count=int(rec["count"]) if rec["count"] else None,
                main_term=float(rec["main_term"]),
                abs_error=float(rec["abs_error"]),
                envelope=float(rec["envelope"]),
                ratio=float(rec["ratio"]),
                flags=rec["flags"],
                runtime_ms=float(rec["runtime_ms"])))
    return rows


def parse_config(path: str) -> dict:
    """Line-oriented key=value config; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# region literals

def parse_region(spec: str):
    """box:A,K,B,L | disk:b,c,r | convex:FILE (lines: y x_lo x_hi)."""
    name, _, args = spec.partition(":")
    if name == "box":
        A, K, B, L = (int(t) for t in args.split(","))
        return BoxRegion(Interval(A, K), Interval(B, L))
    if name == "disk":
        b, c, r = args.split(",")
        return DiskRegion(int(b), int(c), Fraction(r))
    if name == "convex":
        rows = {}
        with open(args) as fh:
            for line in fh:
                parts = line.replace(",", " ").split()
                if not parts:
                    continue
                y, lo, hi = (int(t) for t in parts)
                rows[y] = (lo, hi)
        if not rows:
            raise DomainError(f"convex region file {args!r} is empty")
        y_lo, y_hi = min(rows), max(rows)
        return ConvexRegion(Interval.from_endpoints(y_lo, y_hi), rows)
    raise DomainError(f"unknown region literal {spec!r}")


def _parse_coeffs(text: str) -> tuple:
    return tuple(int(t) for t in text.split(","))


def _product_region(region_specs, n: int) -> ProductRegion:
    regions = [parse_region(s) for s in region_specs]
    if len(regions) == 1 and n > 1:
        regions = regions * n
    if len(regions) != n:
        raise DomainError(f"need 1 or {n} --region literals, got {len(regions)}")
    return ProductRegion(tuple(regions))


# ---------------------------------------------------------------------------
# CLI

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ratiocount",
                 description="counting and exponential-sum toolkit for "
                             "linear congruences with ratios mod p")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, required=True, help="odd prime modulus")

    sp = sub.add_parser("count", help="count solutions on one instance")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--coeffs", required=True, help="a0,a1,...,an")
    sp.add_argument("--region", action="append", required=True)
    sp.add_argument("--mode", choices=("fast", "brute", "both"), default="fast")
    sp.add_argument("--coprime", action="store_true",
                    help="restrict to gcd(x_j, y_j) = 1")
    sp.add_argument("--verbose", action="store_true")

    sp = sub.add_parser("sum", help="one ratio exponential sum")
    common(sp)
    sp.add_argument("--a", type=int, required=True, help="multiplier a != 0")
    sp.add_argument("--region", required=True)

    sp = sub.add_parser("moment", help="second moment over a of |S(a)|^2")
    common(sp)
    sp.add_argument("--region", required=True, help="box:A,K,B,L")

    sp = sub.add_parser("lemma1", help="ratio-coincidence count of four intervals")
    common(sp)
    sp.add_argument("--region", action="append", required=True,
                    help="one or two box literals")

    sp = sub.add_parser("lemma2", help="concentration count of (B+y)z == 1")
    common(sp)
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)

    sp = sub.add_parser("kloosterman", help="short Kloosterman sum over an interval")
    common(sp)
    sp.add_argument("--lam", type=int, required=True)
    sp.add_argument("--interval", required=True, help="B,L for [B+1, B+L]")

    sp = sub.add_parser("decompose", help="dump dyadic layers of a set")
    sp.add_argument("--set", required=True, dest="set_spec",
                    help="cube | ball:r | ellipsoid:r1,..| halfspace-cap:r,h")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("blowup", help="layer-sum lower bound on N(a; p*Omega)")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--set", required=True, dest="set_spec")
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--exact", action="store_true",
                    help="also run the exact O(p^(2n-1)) counter")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("sweep", help="envelope sweep over a prime grid")
    sp.add_argument("--config", help="key=value file; flags override")
    sp.add_argument("--primes", help="comma-separated odd primes")
    sp.add_argument("--n", type=int)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--coeffs", help="fixed a0,a1,...,an (omit for seeded random)")
    sp.add_argument("--draws", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--out")
    sp.add_argument("--timings", action="store_true", default=None)

    sp = sub.add_parser("verify", help="run the identity/oracle suite")
    sp.add_argument("--quick", action="store_true")
    return ap


def _cmd_count(args) -> int:
    ctx = PrimeContext(args.p)
    coeffs = _parse_coeffs(args.coeffs)
    cv = CoefficientVector(coeffs[0], coeffs[1:])
    regions = _product_region(args.region, args.n)
    if args.coprime:
        print(coprime_count(cv, regions, ctx))
        return 0
    if args.mode in ("fast", "both"):
        res = count_fast(cv, regions, ctx)
        if args.verbose:
            print(f"count={res.count} main_term={res.main_term:.17g} "
                  f"residual={res.residual:.3e} skipped_rows={res.skipped_rows}")
        else:
            print(res.count)
    if args.mode in ("brute", "both"):
        bc = count_bruteforce(cv, regions, ctx)
        if args.mode == "both":
            print(f"bruteforce={bc} agree={bc == res.count}")
        else:
            print(bc)
    return 0


def _cmd_sum(args) -> int:
    ctx = PrimeContext(args.p)
    region = parse_region(args.region)
    sv = ratio_double_sum_region(args.a, region, ctx)
    print(f"value={sv.value.real:.17g}{sv.value.imag:+.17g}j "
          f"terms={sv.terms} skipped_rows={sv.skipped_rows}")
    return 0


def _cmd_moment(args) -> int:
    ctx = PrimeContext(args.p)
    region = parse_region(args.region)
    if not isinstance(region, BoxRegion):
        raise DomainError("moment needs a box region")
    m = second_moment_over_a(region.x_interval, region.y_interval, ctx)
    print(f"{m:.17g}")
    return 0


def _cmd_lemma1(args) -> int:
    ctx = PrimeContext(args.p)
    regions = [parse_region(s) for s in args.region]
    if len(regions) == 1:
        regions = regions * 2
    if len(regions) != 2 or not all(isinstance(r, BoxRegion) for r in regions):
        raise DomainError("lemma1 needs one or two box regions")
    (r1, r2) = regions
    c = cross_ratio_count(r1.x_interval, r1.y_interval,
                          r2.x_interval, r2.y_interval, ctx)
    main = (r1.x_interval.length * r1.y_interval.length
            * r2.x_interval.length * r2.y_interval.length) / args.p
    print(f"count={c} main_term={main:.17g} deviation={c - main:.17g}")
    return 0


def _cmd_lemma2(args) -> int:
    ctx = PrimeContext(args.p)
    c = inverse_concentration_count(args.B, args.L, args.M, ctx)
    env = args.p ** -0.5 * math.sqrt(args.L) * args.M + 1
    print(f"count={c} envelope_base={env:.17g}")
    return 0


def _cmd_kloosterman(args) -> int:
    ctx = PrimeContext(args.p)
    B, L = (int(t) for t in args.interval.split(","))
    sv = kloosterman_interval(args.lam, Interval(B, L), ctx)
    print(f"value={sv.value.real:.17g}{sv.value.imag:+.17g}j "
          f"terms={sv.terms} skipped_rows={sv.skipped_rows}")
    return 0


def _cmd_decompose(args) -> int:
    omega = parse_set_spec(args.set_spec, args.dim)
    shift = validate_shift(default_shift(args.dim),
                           [2 ** i for i in range(1, args.M + 1)],
                           seed=args.seed)
    decomp = dyadic_layers(omega, args.M, shift)
    decomp.dump(sys.stdout)
    return 0


def _cmd_blowup(args) -> int:
    ctx = PrimeContext(args.p)
    coeffs = _parse_coeffs(args.coeffs)
    cv = CoefficientVector(coeffs[0], coeffs[1:])
    omega = parse_set_spec(args.set_spec, 2 * args.n)
    res = count_in_blowup(cv, omega, ctx, M=args.M, shift_seed=args.seed)
    print(f"layer_sum={res.count} main_term={res.main_term:.17g} "
          f"uncovered_bound={res.uncovered_bound:.17g} "
          f"residual={res.residual:.3e}")
    if args.exact:
        exact = exact_blowup_count(cv, omega, ctx)
        gap = exact - res.count
        print(f"exact={exact} gap={gap} "
              f"gap_bound={res.uncovered_bound * args.p ** (2 * args.n - 1):.17g}")
    return 0


_SWEEP_KEYS = {"primes": str, "n": int, "theta": float, "eps": float,
               "coeffs": str, "draws": int, "seed": int, "workers": int,
               "out": str, "timings": lambda v: v.lower() in ("1", "true", "yes")}

_SWEEP_DEFAULTS = {"n": 3, "theta": 0.7, "eps": 0.2, "coeffs": None,
                   "draws": 1, "seed": 0, "workers": None, "out": None,
                   "timings": False}


def _cmd_sweep(args) -> int:
    settings = dict(_SWEEP_DEFAULTS)
    settings["primes"] = None
    if args.config:
        conf = parse_config(args.config)
        for key, value in conf.items():
            if key not in _SWEEP_KEYS:
                raise DomainError(f"unknown config key {key!r}")
            settings[key] = _SWEEP_KEYS[key](value)
    for key in _SWEEP_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    if settings["primes"] is None:
        raise DomainError("sweep needs --primes (or primes= in the config)")
    if isinstance(settings["primes"], str):
        settings["primes"] = tuple(int(t) for t in settings["primes"].split(","))
    if isinstance(settings["coeffs"], str):
        settings["coeffs"] = _parse_coeffs(settings["coeffs"])
    if settings["workers"] is None:
        settings["workers"] = int(os.environ.get(_ENV_WORKERS, "1"))
    config = SweepConfig(**settings)
    rows = run_sweep(config)
    fit = fit_exponent(rows)
    slope = "undefined" if fit.slope is None else f"{fit.slope:.4f}"
    sys.stderr.write(f"rows={len(rows)} fitted_slope={slope} "
                     f"max_ratio={fit.max_ratio:.4f}\n")
    if not config.out:
        sys.stdout.write(rows_to_csv_bytes(rows).decode())
    return 0


def _cmd_verify(args) -> int:
    from . import selfcheck
    outcomes = selfcheck.run_all(quick=args.quick)
    failed = 0
    for oc in outcomes:
        status = "PASS" if oc.ok else "FAIL"
        print(f"{status}: {oc.name} ({oc.detail})")
        failed += not oc.ok
    print(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return 3 if failed else 0


_COMMANDS = {
    "count": _cmd_count,
    "sum": _cmd_sum,
    "moment": _cmd_moment,
    "lemma1": _cmd_lemma1,
    "lemma2": _cmd_lemma2,
    "kloosterman": _cmd_kloosterman,
    "decompose": _cmd_decompose,
    "blowup": _cmd_blowup,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (PrecisionError, SizeError) as exc:
        sys.stderr.write(f"computation error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli())
