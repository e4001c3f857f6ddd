"""Tangent spaces of power varieties and Terracini rank computations.

The variety of ``d``-th powers of degree-``k`` forms has tangent space
``{h * p**(d-1) : h of degree k}`` at ``p**d``.  Stacking these spaces for
``m`` points gives the Terracini matrix; its rank equals ``m * dim S^k``
exactly when the tangent spaces are skew, i.e. when the ``m``-th secant
variety has the expected dimension at that tuple.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from typing import Sequence

from . import exactla
from .errors import InputError
from .polyring import Form, densify, dim_graded_piece, monomials, power

FIELDS = ("rational", "prime")

# coefficient range for random forms in the probe
COEFF_BOUND = 50


@dataclass(frozen=True)
class ProblemParams:
    n: int
    k: int
    d: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.d < 2 or self.m < 1:
            raise InputError(f"need n>=1, k>=1, d>=2, m>=1; got {self}")

    @property
    def dim_k(self) -> int:
        return dim_graded_piece(self.n, self.k)

    @property
    def dim_kd(self) -> int:
        return dim_graded_piece(self.n, self.k * self.d)

    @property
    def expected(self) -> int:
        return self.m * self.dim_k


@dataclass(frozen=True)
class TangentReport:
    params: ProblemParams
    rank: int
    expected: int
    skew: bool
    field_used: str
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _modulus_for(field: str, prime: int | None) -> int | None:
    if field not in FIELDS:
        raise InputError(f"field must be one of {FIELDS}, got {field!r}")
    if field == "rational":
        return None
    return prime if prime is not None else exactla.witness_prime()


def tangent_generators(p: Form, d: int) -> list[Form]:
    """Spanning set ``p**(d-1) * m`` of the tangent space at ``p**d``, one per monomial ``m``."""
    if p.is_zero():
        raise InputError("tangent space at the zero form is undefined")
    if d < 1:
        raise InputError(f"power d must be positive, got {d}")
    base = power(p, d - 1)
    return [base * Form.monomial(e, modulus=p.modulus) for e in monomials(p.n, p.degree)]


def _shape(points: Sequence[Form]) -> tuple[int, int]:
    if not points:
        raise InputError("at least one point is required")
    n, k = points[0].n, points[0].degree
    for q in points:
        if q.n != n or q.degree != k:
            raise InputError(f"points mix shapes: (n={n}, k={k}) vs (n={q.n}, k={q.degree})")
    return n, k


def terracini_matrix(points: Sequence[Form], d: int) -> exactla.ExactMatrix:
    """``dim S^{kd}`` x ``m dim S^k`` matrix whose i-th column block spans the tangent space at ``q_i**d``."""
    n, k = _shape(points)
    columns = []
    for q in points:
        columns.extend(densify(g) for g in tangent_generators(q, d))
    return exactla.ExactMatrix.from_columns(columns, points[0].modulus, rows=dim_graded_piece(n, k * d))


def check_skewness(
    points: Sequence[Form], d: int, field: str = "rational", prime: int | None = None
) -> TangentReport:
    """Rank of the Terracini matrix against the expected ``m * dim S^k``."""
    n, k = _shape(points)
    params = ProblemParams(n, k, d, len(points))
    modulus = _modulus_for(field, prime)
    M = terracini_matrix(points, d)
    if modulus is not None:
        M = exactla.specialize(M, modulus)
    r = exactla.rank(M)
    return TangentReport(params, r, params.expected, r == params.expected, exactla.field_label(modulus))


def random_form(n: int, k: int, rng: random.Random, bound: int = COEFF_BOUND) -> Form:
    """Form with independent uniform integer coefficients in ``[-bound, bound]``."""
    while True:
        f = Form(n, k, {e: rng.randint(-bound, bound) for e in monomials(n, k)})
        if not f.is_zero():
            return f


def random_points(params: ProblemParams, seed: int) -> list[Form]:
    rng = random.Random(seed)
    return [random_form(params.n, params.k, rng) for _ in range(params.m)]


def random_terracini_probe(
    params: ProblemParams,
    trials: int = 3,
    seed: int = 0,
    field: str = "prime",
    confirm_rational: bool = False,
    prime: int | None = None,
) -> TangentReport:
    """Largest Terracini rank seen over ``trials`` random tuples.

    Rank is lower semicontinuous, so the maximum over trials bounds the
    generic rank from below; reaching ``expected`` certifies that the secant
    variety is not defective for these parameters.  Trial ``t`` draws its
    points from seed ``seed + t``.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    modulus = _modulus_for(field, prime)
    ceiling = min(params.expected, params.dim_kd)
    best_rank, best_points = -1, None
    for t in range(trials):
        points = random_points(params, seed + t)
        M = terracini_matrix(points, params.d)
        if modulus is not None:
            M = exactla.specialize(M, modulus)
        r = exactla.rank(M)
        if r > best_rank:
            best_rank, best_points = r, points
        if best_rank == ceiling:
            break
    used = modulus
    if confirm_rational and modulus is not None:
        best_rank = exactla.rank(terracini_matrix(best_points, params.d))
        used = None
    return TangentReport(
        params, best_rank, params.expected, best_rank == params.expected, exactla.field_label(used), seed
    )
