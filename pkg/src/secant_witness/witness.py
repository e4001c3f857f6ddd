"""Binomial witness set and the tangential contact-locus certificate.

For points ``q_1..q_m`` of degree ``k`` with skew tangent spaces, let ``W``
be the sum of the tangent spaces ``q_i**(d-1) * S^k`` inside ``S^{kd}``.  A
form ``p`` lies in the contact locus when ``p**(d-1) * S^k`` is contained in
``W``.  Linearizing at ``p = q_j + eps*v`` gives the linear map

    Phi_j(v) = ( q_j**(d-2) * v * m_t  mod W )_t        over monomials m_t of degree k,

and ``ker Phi_j`` contains the Zariski tangent space of the contact locus at
``q_j``.  It always contains ``q_j`` itself; when it is exactly the line
through ``q_j`` the contact locus is zero-dimensional there, which together
with skewness certifies generic identifiability of rank ``m``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Sequence

from . import exactla
from .errors import InputError, PreconditionError
from .polyring import Form, _index, densify, dim_graded_piece, monomials, power
from .secant import ProblemParams, _modulus_for, _shape, tangent_generators

PASS = "PASS"
FAIL = "FAIL"
PRECONDITION_FAILED = "PRECONDITION-FAILED"

DEFAULT_MAX_N = 8


@dataclass(frozen=True)
class BinomialSet:
    n: int
    forms: tuple[Form, ...]

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __getitem__(self, i: int) -> Form:
        return self.forms[i]


def binomial_set(n: int) -> BinomialSet:
    """``X1**2`` followed by ``(Xi + Xj)**2`` for ``i < j`` in lexicographic order."""
    if n < 2:
        raise InputError(f"the binomial set needs n >= 2, got {n}")
    X = [Form.variable(n, i) for i in range(n)]
    forms = [X[0] * X[0]]
    forms.extend((X[i] + X[j]) ** 2 for i, j in combinations(range(n), 2))
    return BinomialSet(n, tuple(forms))


@dataclass(frozen=True)
class ContactReport:
    base_point_index: int
    kernel_dim: int
    passes: bool
    params: ProblemParams
    field_used: str = "rational"

    def to_dict(self) -> dict:
        return asdict(self)


def _vector(f: Form, modulus: int | None) -> list:
    v = densify(f)
    return v if modulus is None else [exactla._mod(x, modulus) for x in v]


def tangent_sum(
    points: Sequence[Form], d: int, field: str = "rational", prime: int | None = None
) -> exactla.SubspaceBasis:
    """Echelon basis of ``W``, the span of all tangent spaces at ``q_i**d``."""
    n, k = _shape(points)
    modulus = _modulus_for(field, prime)
    vectors = [_vector(g, modulus) for q in points for g in tangent_generators(q, d)]
    return exactla.span(vectors, modulus, ambient_dim=dim_graded_piece(n, k * d))


def contact_map(points: Sequence[Form], j: int, d: int, W: exactla.SubspaceBasis) -> exactla.ExactMatrix:
    """Matrix of ``Phi_j``: columns indexed by monomials ``m_s`` of ``v``, row blocks by ``m_t``."""
    n, k = _shape(points)
    if not 0 <= j < len(points):
        raise InputError(f"point index {j} out of range for {len(points)} points")
    modulus = W.modulus
    zero = 0 if modulus is not None else exactla.Fraction(0)
    base = power(points[j], d - 2)
    qcols = W.quotient_columns
    width = len(W.free_columns)
    idx = _index(n, k * d)

    cache: dict[tuple[int, ...], list] = {}

    def image(mono: tuple[int, ...]) -> list:
        # quotient coordinates of base * X^mono
        if mono not in cache:
            acc = [zero] * width
            for e, c in (base * Form.monomial(mono)).terms():
                if modulus is not None:
                    c = exactla._mod(c, modulus)
                col = qcols[idx[e]]
                acc = [a + c * b for a, b in zip(acc, col)]
            if modulus is not None:
                acc = [a % modulus for a in acc]
            cache[mono] = acc
        return cache[mono]

    basis = monomials(n, k)
    rows = []
    for mt in basis:
        block = [image(tuple(a + b for a, b in zip(ms, mt))) for ms in basis]
        rows.extend(zip(*block))
    return exactla.ExactMatrix(len(rows), len(basis), tuple(tuple(r) for r in rows), modulus)


def contact_tangent_kernel(
    points: Sequence[Form],
    j: int,
    d: int = 3,
    field: str = "rational",
    prime: int | None = None,
    W: exactla.SubspaceBasis | None = None,
) -> ContactReport:
    """Dimension of ``ker Phi_j``; the check passes when it is 1.

    ``W`` may be passed in to share one tangent sum across all points.
    Over a prime field the kernel can only be larger than over ``Q`` (given
    full-rank ``W``), so a prime-field pass is still a sound certificate.
    """
    n, k = _shape(points)
    if d < 2:
        raise InputError(f"power d must be >= 2, got {d}")
    params = ProblemParams(n, k, d, len(points))
    if W is None:
        W = tangent_sum(points, d, field, prime)
    if W.dim != params.expected:
        raise PreconditionError(
            f"tangent spaces are not skew (rank {W.dim} < {params.expected}); contact locus undefined"
        )
    phi = contact_map(points, j, d, W)
    kdim = params.dim_k - exactla.rank(phi)
    return ContactReport(j, kdim, kdim == 1, params, exactla.field_label(W.modulus))


@dataclass
class Verdict:
    n: int
    m: int
    skew_rank: int
    expected: int
    contact_kernel_dims: list[int] = field(default_factory=list)
    verdict: str = FAIL
    field_used: str = "rational"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def certify_tuple(
    points: Sequence[Form], d: int = 3, field: str = "rational", prime: int | None = None
) -> Verdict:
    """Skewness plus a contact-kernel check at every point of the tuple."""
    n, k = _shape(points)
    params = ProblemParams(n, k, d, len(points))
    W = tangent_sum(points, d, field, prime)
    out = Verdict(n, params.m, W.dim, params.expected, field_used=exactla.field_label(W.modulus))
    if W.dim != params.expected:
        out.verdict = PRECONDITION_FAILED
        return out
    out.contact_kernel_dims = [
        contact_tangent_kernel(points, j, d, W=W).kernel_dim for j in range(len(points))
    ]
    out.verdict = PASS if all(x == 1 for x in out.contact_kernel_dims) else FAIL
    return out


def identifiability_certificate(
    n: int, field: str = "rational", prime: int | None = None, max_n: int = DEFAULT_MAX_N
) -> Verdict:
    """Run both certificates on the binomial set ``B_n`` with cubes (``d = 3``).

    PASS means sums of ``C(n, 2) + 1`` cubes of general quadratics in ``n``
    variables are generically identifiable.
    """
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    if n > max_n:
        raise InputError(f"n={n} exceeds the max-n guard {max_n}")
    return certify_tuple(binomial_set(n).forms, 3, field, prime)
