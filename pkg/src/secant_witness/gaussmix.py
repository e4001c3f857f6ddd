"""Moments of mixtures of centered Gaussians as sums of powers of quadratics.

A covariance matrix ``Sigma`` is attached to the quadratic form
``q(X) = 1/2 X^T Sigma X``, so that ``exp(l + q)`` is the moment generating
series of ``N(mean, Sigma)`` with ``l`` the mean's linear form.  With this
convention the coefficient of ``X^alpha`` in the degree-``|alpha|`` part of
the series is ``E[Y^alpha] / alpha!``.

Mixture moment forms are reported without the ``1/d!`` factor: the order
``2d`` form of ``sum_i w_i N(0, Sigma_i)`` is ``sum_i w_i q_i**d``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from . import exactla
from .errors import InputError, PreconditionError
from .polyring import Form, densify, power

ISSERLIS_MAX_ORDER = 10


def _symmetric(sigma: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(sigma)
    if n == 0 or any(len(r) != n for r in sigma):
        raise InputError("covariance must be a non-empty square matrix")
    S = tuple(tuple(Fraction(x) for x in r) for r in sigma)
    for i in range(n):
        for j in range(i):
            if S[i][j] != S[j][i]:
                raise InputError(f"covariance is not symmetric at ({i}, {j})")
    return S


def is_psd(sigma: Sequence[Sequence]) -> bool:
    """Exact PSD test by symmetric-pivoted LDL^T elimination."""
    A = [list(r) for r in _symmetric(sigma)]
    n = len(A)
    remaining = list(range(n))
    while remaining:
        piv = max(remaining, key=lambda i: A[i][i])
        d = A[piv][piv]
        if d < 0:
            return False
        if d == 0:
            # largest remaining diagonal is zero: PSD iff the remaining block vanishes
            return all(A[i][j] == 0 for i in remaining for j in remaining)
        remaining.remove(piv)
        for i in remaining:
            f = A[i][piv] / d
            if f:
                for j in remaining:
                    A[i][j] -= f * A[piv][j]
    return True


@dataclass(frozen=True)
class CovarianceForm:
    sigma: tuple[tuple[Fraction, ...], ...]
    q: Form

    @classmethod
    def from_sigma(cls, sigma: Sequence[Sequence], check_psd: bool = True) -> CovarianceForm:
        S = _symmetric(sigma)
        if check_psd and not is_psd(S):
            raise InputError("covariance matrix is not positive semidefinite")
        n = len(S)
        terms = {}
        for i in range(n):
            for j in range(i, n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = S[i][i] / 2 if i == j else S[i][j]
        return cls(S, Form(n, 2, terms))

    @classmethod
    def from_form(cls, q: Form, check_psd: bool = False) -> CovarianceForm:
        if q.degree != 2 or q.modulus is not None:
            raise InputError("a covariance form is a rational quadratic form")
        n = q.n
        S = [[Fraction(0)] * n for _ in range(n)]
        for exps, c in q.terms():
            idx = [i for i, e in enumerate(exps) for _ in range(e)]
            i, j = idx
            if i == j:
                S[i][i] = 2 * c
            else:
                S[i][j] = S[j][i] = c
        return cls.from_sigma(S, check_psd)

    @property
    def n(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class MixtureModel:
    components: tuple[CovarianceForm, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.components or len(self.components) != len(self.weights):
            raise InputError("a mixture needs one positive weight per component")
        if len({c.n for c in self.components}) != 1:
            raise InputError("components live in different dimensions")
        if any(w <= 0 for w in self.weights):
            raise InputError("mixing weights must be positive")
        if sum(self.weights) != 1:
            raise InputError(f"mixing weights sum to {sum(self.weights)}, not 1")

    @classmethod
    def from_sigmas(cls, sigmas: Sequence, weights: Sequence) -> MixtureModel:
        return cls(tuple(CovarianceForm.from_sigma(s) for s in sigmas), tuple(Fraction(w) for w in weights))

    @classmethod
    def single(cls, sigma: Sequence[Sequence]) -> MixtureModel:
        return cls.from_sigmas([sigma], [1])

    @property
    def n(self) -> int:
        return self.components[0].n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "components": [{"sigma": [[str(x) for x in r] for r in c.sigma]} for c in self.components],
            "weights": [str(w) for w in self.weights],
        }

    @classmethod
    def from_dict(cls, data: dict) -> MixtureModel:
        try:
            model = cls.from_sigmas(
                [[[Fraction(x) for x in r] for r in c["sigma"]] for c in data["components"]],
                [Fraction(w) for w in data["weights"]],
            )
            n = int(data["n"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed mixture JSON: {exc}") from exc
        if model.n != n:
            raise InputError(f"declared n={n} but covariances are {model.n}x{model.n}")
        return model

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> MixtureModel:
        return cls.from_dict(json.loads(text))


def mgf_homogeneous_part(l: Form, q: Form, D: int) -> Form:
    """Degree-``D`` part of ``exp(l + q)``: ``sum_b l**(D-2b) q**b / ((D-2b)! b!)``."""
    if l.degree != 1 or q.degree != 2 or l.n != q.n:
        raise InputError("expected a linear and a quadratic form in the same ring")
    if D < 0:
        raise InputError(f"degree must be non-negative, got {D}")
    total = Form.zero(l.n, D)
    for b in range(D // 2 + 1):
        a = D - 2 * b
        term = power(l, a) * power(q, b)
        total = total + term * Fraction(1, factorial(a) * factorial(b))
    return total


def mixture_moment_form(model: MixtureModel, order: int) -> Form:
    """``sum_i w_i q_i**(order/2)``; odd orders give the zero form."""
    if order < 1:
        raise InputError(f"order must be positive, got {order}")
    if order % 2:
        return Form.zero(model.n, order)
    d = order // 2
    total = Form.zero(model.n, order)
    for w, c in zip(model.weights, model.components):
        total = total + power(c.q, d) * w
    return total


def moment_of_monomial(model: MixtureModel, alpha: Sequence[int]) -> Fraction:
    """``E[Y^alpha]`` read off the moment generating series."""
    alpha = tuple(alpha)
    if len(alpha) != model.n or any(a < 0 for a in alpha):
        raise InputError(f"bad multi-index {alpha} for n={model.n}")
    D = sum(alpha)
    if D % 2:
        return Fraction(0)
    alpha_fact = prod(factorial(a) for a in alpha)
    zero_l = Form.zero(model.n, 1)
    total = Fraction(0)
    for w, c in zip(model.weights, model.components):
        total += w * mgf_homogeneous_part(zero_l, c.q, D).coeff(alpha)
    return total * alpha_fact


def _matchings_sum(idx: list[int], S) -> Fraction:
    if not idx:
        return Fraction(1)
    first, rest = idx[0], idx[1:]
    total = Fraction(0)
    for k, partner in enumerate(rest):
        s = S[first][partner]
        if s:
            total += s * _matchings_sum(rest[:k] + rest[k + 1:], S)
    return total


def isserlis_oracle(sigma: Sequence[Sequence], alpha: Sequence[int]) -> Fraction:
    """``E[Y^alpha]`` for ``Y ~ N(0, sigma)`` by summing over all perfect matchings."""
    S = _symmetric(sigma)
    if len(alpha) != len(S):
        raise InputError(f"multi-index {tuple(alpha)} does not match a {len(S)}x{len(S)} covariance")
    D = sum(alpha)
    if D > ISSERLIS_MAX_ORDER:
        raise InputError(f"order {D} exceeds the enumeration guard {ISSERLIS_MAX_ORDER}")
    if D % 2:
        return Fraction(0)
    idx = [i for i, a in enumerate(alpha) for _ in range(a)]
    return _matchings_sum(idx, S)


def random_psd(n: int, rng: random.Random, bound: int = 10) -> list[list[Fraction]]:
    """``A^T A`` for ``A`` with uniform integer entries in ``[-bound, bound]``."""
    A = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    return [[Fraction(sum(A[r][i] * A[r][j] for r in range(n))) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class WeightRecovery:
    weights: tuple[Fraction, ...]
    representatives: tuple[Form | None, ...]  # None where the recovered scale is zero
    statistical: bool  # False when some recovered scale is not positive


def recover_mixing_weights(
    scaled_components: Sequence, M_lower: Form, d: int
) -> WeightRecovery:
    """Recover mixing weights from the order ``2d - 2`` moment form.

    Each entry of ``scaled_components`` is either a form ``c_i`` or a pair
    ``(s, g)`` standing for ``c_i = s**(1/d) * g`` with rational ``s``, which
    is how the forms ``w_i**(1/d) q_i`` identified from order ``2d`` moments
    stay exact.  Solving ``sum_i t_i c_i**(d-1) = M_lower`` gives the weights
    ``t_i**d`` and the covariance forms ``c_i / t_i``.
    """
    if d < 2:
        raise InputError(f"d must be >= 2, got {d}")
    pairs = []
    for c in scaled_components:
        s, g = (Fraction(1), c) if isinstance(c, Form) else (Fraction(c[0]), c[1])
        if s <= 0:
            raise InputError("scale factors must be positive")
        pairs.append((s, g))
    if not pairs:
        raise InputError("no components given")
    gpows = [power(g, d - 1) for _, g in pairs]
    if any(p.n != M_lower.n or p.degree != M_lower.degree for p in gpows):
        raise InputError(f"M_lower must have degree {2 * (d - 1)} in the components' ring")
    cols = [densify(p) for p in gpows]
    A = exactla.ExactMatrix.from_columns(cols, rows=len(cols[0]))
    if exactla.rank(A) != len(cols):
        raise PreconditionError("the (d-1)-th powers of the components are linearly dependent")
    # with c_i = s_i**(1/d) g_i the unknowns u_i = t_i s_i**((d-1)/d) are rational
    u = exactla.solve(A, densify(M_lower))
    weights = tuple(ui ** d / s ** (d - 1) for ui, (s, _) in zip(u, pairs))
    reps = tuple(g * (s / ui) if ui else None for ui, (s, g) in zip(u, pairs))
    return WeightRecovery(weights, reps, all(ui > 0 for ui in u))

