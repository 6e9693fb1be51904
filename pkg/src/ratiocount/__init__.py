"""Counting solutions of linear congruences with ratios mod p.

Exact and character-sum counters for sum_j a_j * x_j / y_j == a_0 (mod p)
with the variable pairs (x_j, y_j) ranging over boxes, convex regions,
disks, or blow-ups of well-shaped sets, plus the exponential-sum toolkit
and the sweep harness that monitors every error envelope at desk scale.
"""

from .fpcore import (DomainError, PrecisionError, PrimeContext, SizeError,
                     centered_residue, divisor_count, e_p, find_small_uv,
                     geometric_char_sum, is_prime, mobius, mod_inverse)
from .geometry import (BoxRegion, ConvexRegion, DiskRegion, Interval,
                       ProductRegion, lattice_count, nonzero_row_count,
                       row_slice)
from .expsums import (LevelSetCounts, SumValue, kloosterman_interval,
                      level_set_counts, ratio_double_sum,
                      ratio_double_sum_region, second_moment_over_a)
from .counting import (CoefficientVector, CountResult, RatioDistribution,
                       build_factor_tables, coprime_count, count_bruteforce,
                       count_fast, cross_ratio_count,
                       inverse_concentration_count, ratio_distribution)
from .wellshaped import (BallSet, CubeFamily, DyadicDecomposition,
                         EllipsoidSet, HalfspaceCapSet, Layer, UnitCubeSet,
                         UserSet, WellShapedSet, choose_M, count_in_blowup,
                         cubes_inside, default_shift, dyadic_layers,
                         exact_blowup_count, parse_set_spec, validate_shift)
from .harness import (FitResult, SweepConfig, SweepRow, cli, fit_exponent,
                      parse_region, read_csv, run_sweep, box_envelope,
                      write_csv)

__version__ = "0.1.0"
