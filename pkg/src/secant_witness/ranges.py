"""Closed-form identifiability ranges and the tables behind the range plots.

All arithmetic is on Python integers and :class:`fractions.Fraction`; a bound
"m <= x" with non-integer ``x`` is reported as ``floor(x)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor
from typing import Iterable, Sequence

from .errors import InputError
from .polyring import dim_graded_piece

REGIME_SQUARES = "non-identifiable (square identity)"
REGIME_BINOMIAL = "binomial witness"
REGIME_NONDEFECTIVE = "non-defectivity bound"
REGIME_BOTH = "binomial witness + non-defectivity bound"
REGIME_NONE = "no certified range"

# the binomial-witness range is quoted for n <= 16 only; beyond it the other bound is larger
BINOMIAL_RANGE_MAX_N = 16

CSV_FIELDS = ("n", "k", "d", "cond1_bound", "cond2_bound", "expected_generic_rank", "regime")


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: tuple[int, ...]
    truncated_at: int | None

    def __getitem__(self, j: int) -> int:
        return self.coefficients[j]

    def __len__(self) -> int:
        return len(self.coefficients)


def froberg_series(n: int, degrees: Sequence[int], max_degree: int) -> TruncatedSeries:
    """``prod(1 - T**d_i) / (1 - T)**n`` up to ``T**max_degree``, cut at the first coefficient <= 0."""
    if n < 1 or max_degree < 0 or any(d < 1 for d in degrees):
        raise InputError("froberg_series needs n >= 1, max_degree >= 0 and positive degrees")
    numerator = [0] * (max_degree + 1)
    numerator[0] = 1
    for d in degrees:
        for j in range(max_degree, d - 1, -1):
            numerator[j] -= numerator[j - d]
    hilb = [comb(n - 1 + j, n - 1) for j in range(max_degree + 1)]
    coeffs = [sum(numerator[i] * hilb[j - i] for i in range(j + 1)) for j in range(max_degree + 1)]
    cut = next((j for j, c in enumerate(coeffs) if c <= 0), None)
    if cut is not None:
        coeffs[cut:] = [0] * (len(coeffs) - cut)
    return TruncatedSeries(tuple(coeffs), cut)


def _dims(n: int, k: int, d: int) -> tuple[int, int]:
    if n < 1 or k < 1 or d < 2:
        raise InputError(f"need n >= 1, k >= 1, d >= 2; got n={n}, k={k}, d={d}")
    return dim_graded_piece(n, k), dim_graded_piece(n, k * d)


def nenashev_bound(n: int, k: int, d: int) -> Fraction:
    """``dim S^{kd} / dim S^k - dim S^k``; the secant of order ``m`` is non-defective for ``m <= floor`` of it."""
    a, b = _dims(n, k, d)
    return Fraction(b, a) - a


def side_condition(n: int, k: int, d: int) -> tuple[Fraction, Fraction]:
    """Both sides of ``2 (dim S^k - 1) < dim S^{kd} / dim S^k - dim S^k``."""
    a, _ = _dims(n, k, d)
    return Fraction(2 * (a - 1)), nenashev_bound(n, k, d)


def identifiability_bound_general(n: int, k: int, d: int) -> int | None:
    """Largest generically identifiable rank from the non-defectivity route, or None."""
    lhs, rhs = side_condition(n, k, d)
    if not lhs < rhs:
        return None
    return floor(rhs - 1)


def general_d_inequality(n: int, d: int) -> bool:
    """``3 a**2 - 2 a < C(n - 1 + 2d, 2d)`` with ``a = C(n + 1, 2)``."""
    a = comb(n + 1, 2)
    return 3 * a * a - 2 * a < comb(n - 1 + 2 * d, 2 * d)


@dataclass(frozen=True)
class GeneralDRegion:
    d: int
    min_n: int | None
    bounds: tuple[tuple[int, int], ...]  # (n, largest identifiable m)


def general_d_region(d: int, k: int = 2, n_max: int | None = None, scan_limit: int = 10_000) -> GeneralDRegion:
    """Smallest ``n`` satisfying the quadratic-forms inequality for this ``d``.

    ``bounds`` lists the rank bound for ``min_n <= n <= n_max`` (``n_max``
    defaults to ``min_n``).  ``d = 2`` has no region: sums of squares are
    never identifiable.
    """
    if k != 2:
        raise InputError("the (n, d) region is defined for quadratic forms (k = 2)")
    if d < 2:
        raise InputError(f"d must be >= 2, got {d}")
    if d == 2:
        return GeneralDRegion(d, None, ())
    min_n = next((n for n in range(1, scan_limit + 1) if general_d_inequality(n, d)), None)
    if min_n is None:
        return GeneralDRegion(d, None, ())
    top = min_n if n_max is None else n_max
    bounds = tuple(
        (n, identifiability_bound_general(n, 2, d))
        for n in range(min_n, top + 1)
        if general_d_inequality(n, d)
    )
    return GeneralDRegion(d, min_n, bounds)


def min_d_for_n(n: int, d_limit: int = 10_000) -> int | None:
    """Smallest ``d >= 3`` satisfying the quadratic-forms inequality for fixed ``n``."""
    return next((d for d in range(3, d_limit + 1) if general_d_inequality(n, d)), None)


def region_grid(n_max: int, d_max: int) -> list[tuple[int, int, bool]]:
    """``(n, d, inequality holds)`` for the whole grid; the data of the region plot."""
    return [(n, d, general_d_inequality(n, d)) for d in range(2, d_max + 1) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class RangeRow:
    n: int
    k: int
    d: int
    cond1_bound: int | None
    cond2_bound: int | None
    expected_generic_rank: int
    regime: str


def range_row(n: int, k: int, d: int) -> RangeRow:
    a, b = _dims(n, k, d)
    expected = ceil(Fraction(b, a))
    if d == 2:
        return RangeRow(n, k, d, None, None, expected, REGIME_SQUARES)
    cond1 = identifiability_bound_general(n, k, d)
    cond2 = None
    if (k, d) == (2, 3) and n <= BINOMIAL_RANGE_MAX_N and n >= 2:
        cond2 = comb(n, 2) + 1
    if cond1 is not None and cond2 is not None:
        regime = REGIME_BOTH
    elif cond1 is not None:
        regime = REGIME_NONDEFECTIVE
    elif cond2 is not None:
        regime = REGIME_BINOMIAL
    else:
        regime = REGIME_NONE
    return RangeRow(n, k, d, cond1, cond2, expected, regime)


def figure_tables(k: int, d: int, n_max: int) -> list[RangeRow]:
    """One row per ``n`` in ``2..n_max``."""
    if n_max < 2:
        raise InputError(f"n_max must be >= 2, got {n_max}")
    return [range_row(n, k, d) for n in range(2, n_max + 1)]


def rows_to_csv(rows: Iterable[RangeRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(["" if getattr(r, f) is None else getattr(r, f) for f in CSV_FIELDS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[RangeRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        def opt(key):
            return int(rec[key]) if rec[key] != "" else None

        out.append(RangeRow(int(rec["n"]), int(rec["k"]), int(rec["d"]), opt("cond1_bound"),
                            opt("cond2_bound"), int(rec["expected_generic_rank"]), rec["regime"]))
    return out


def gnuplot_script(csv_path: str, k: int, d: int) -> str:
    """Plain gnuplot script drawing the three curves from a ``figure_tables`` CSV."""
    return "\n".join([
        "set datafile separator ','",
        "set key left top",
        "set xlabel 'n (variables)'",
        "set ylabel 'number of summands m'",
        f"set title 'identifiable ranges, k={k}, d={d}'",
        f"plot '{csv_path}' using 1:4 skip 1 with points title 'non-defectivity bound', \\",
        f"     '{csv_path}' using 1:5 skip 1 with lines dashtype 2 title 'binomial witness', \\",
        f"     '{csv_path}' using 1:6 skip 1 with lines dashtype 4 title 'expected generic rank'",
        "",
    ])
