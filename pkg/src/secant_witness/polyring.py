"""Exact homogeneous polynomials with a canonical dense layout.

A :class:`Form` is a homogeneous polynomial of fixed degree ``D`` in ``n``
variables ``X1..Xn`` (indexed ``0..n-1`` in code).  Coefficients are
:class:`fractions.Fraction` or, when ``modulus`` is set, integers reduced
modulo a prime.  Zero coefficients are never stored.

Monomials of one degree are ordered graded-lexicographically with
``X1 > X2 > ... > Xn``, so ``X1**D`` has rank 0 and ``Xn**D`` has the last
rank.  :func:`densify` lays coefficients out in this order; every matrix in
the package uses it for its rows or columns.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import InputError

Exponent = tuple[int, ...]


def dim_graded_piece(n: int, D: int) -> int:
    """Number of degree-``D`` monomials in ``n`` variables."""
    if n < 1 or D < 0:
        raise InputError(f"dim_graded_piece needs n >= 1, D >= 0 (got n={n}, D={D})")
    return comb(n - 1 + D, n - 1)


@lru_cache(maxsize=None)
def monomials(n: int, D: int) -> tuple[Exponent, ...]:
    """All exponent vectors of degree ``D`` in canonical (descending grlex) order."""
    if n == 1:
        return ((D,),)
    out = []
    for first in range(D, -1, -1):
        for rest in monomials(n - 1, D - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _index(n: int, D: int) -> dict[Exponent, int]:
    return {e: i for i, e in enumerate(monomials(n, D))}


def rank_monomial(exps: Sequence[int]) -> int:
    """Position of a monomial among those of its degree.

    Counts the monomials that precede ``exps``: at coordinate ``i`` every
    choice of a larger exponent, with the remaining degree spread over the
    later variables, comes first.  The sum of those counts collapses to one
    binomial per coordinate (hockey-stick identity).
    """
    n = len(exps)
    remaining = sum(exps)
    r = 0
    for i in range(n - 1):
        e = exps[i]
        if e < 0:
            raise InputError(f"negative exponent in {tuple(exps)}")
        tail = n - i - 1
        if remaining > e:
            r += comb(remaining - e - 1 + tail, tail)
        remaining -= e
    return r


def unrank_monomial(n: int, D: int, r: int) -> Exponent:
    """Inverse of :func:`rank_monomial` for fixed ``(n, D)``."""
    if not 0 <= r < dim_graded_piece(n, D):
        raise InputError(f"rank {r} out of range for n={n}, D={D}")
    exps = []
    remaining = D
    for i in range(n - 1):
        tail = n - i - 1
        for e in range(remaining, -1, -1):
            block = comb(remaining - e + tail - 1, tail - 1)
            if r < block:
                break
            r -= block
        exps.append(e)
        remaining -= e
    exps.append(remaining)
    return tuple(exps)


def _normalize(c, modulus: int | None):
    if modulus is None:
        if isinstance(c, float):
            raise InputError("floating-point coefficients are not allowed")
        return Fraction(c)
    if isinstance(c, Fraction):
        if c.denominator % modulus == 0:
            raise InputError(f"denominator {c.denominator} vanishes mod {modulus}")
        return c.numerator * pow(c.denominator, -1, modulus) % modulus
    return int(c) % modulus


class Form:
    """A homogeneous polynomial with exact coefficients.

    Instances are treated as immutable; arithmetic returns new forms.
    """

    __slots__ = ("n", "degree", "modulus", "_coeffs")

    def __init__(
        self,
        n: int,
        degree: int,
        coeffs: Mapping[Sequence[int], object] | None = None,
        modulus: int | None = None,
    ):
        if n < 1 or degree < 0:
            raise InputError(f"invalid form shape n={n}, degree={degree}")
        self.n = n
        self.degree = degree
        self.modulus = modulus
        terms: dict[Exponent, object] = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise InputError(f"bad exponent vector {exps} for n={n}")
            if sum(exps) != degree:
                raise InputError(f"monomial {exps} has degree {sum(exps)}, expected {degree}")
            c = _normalize(c, modulus)
            if exps in terms:
                c = _normalize(terms[exps] + c, modulus)
            if c:
                terms[exps] = c
            else:
                terms.pop(exps, None)
        self._coeffs = terms

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n: int, degree: int, modulus: int | None = None) -> Form:
        return cls(n, degree, {}, modulus)

    @classmethod
    def constant(cls, n: int, value=1, modulus: int | None = None) -> Form:
        return cls(n, 0, {(0,) * n: value}, modulus)

    @classmethod
    def variable(cls, n: int, i: int, modulus: int | None = None) -> Form:
        if not 0 <= i < n:
            raise InputError(f"variable index {i} out of range for n={n}")
        exps = [0] * n
        exps[i] = 1
        return cls(n, 1, {tuple(exps): 1}, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, modulus: int | None = None) -> Form:
        return cls(len(exps), sum(exps), {tuple(exps): coeff}, modulus)

    @classmethod
    def linear(cls, coeffs: Sequence, modulus: int | None = None) -> Form:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, 1, terms, modulus)

    @classmethod
    def from_dense(cls, vector: Sequence, n: int, degree: int, modulus: int | None = None) -> Form:
        basis = monomials(n, degree)
        if len(vector) != len(basis):
            raise InputError(f"vector of length {len(vector)} does not match dim {len(basis)}")
        return cls(n, degree, dict(zip(basis, vector)), modulus)

    # -- access ---------------------------------------------------------------

    def terms(self) -> list[tuple[Exponent, object]]:
        idx = _index(self.n, self.degree)
        return sorted(self._coeffs.items(), key=lambda t: idx[t[0]])

    def coeff(self, exps: Sequence[int]):
        c = self._coeffs.get(tuple(exps))
        if c is None:
            return Fraction(0) if self.modulus is None else 0
        return c

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    # -- arithmetic -----------------------------------------------------------

    def _check_compatible(self, other: Form) -> None:
        if self.n != other.n:
            raise InputError(f"forms live in different rings (n={self.n} vs n={other.n})")
        if self.modulus != other.modulus:
            raise InputError(f"field mismatch (modulus {self.modulus} vs {other.modulus})")

    def __add__(self, other: Form) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        self._check_compatible(other)
        if self.degree != other.degree:
            raise InputError(f"cannot add forms of degree {self.degree} and {other.degree}")
        terms = dict(self._coeffs)
        for e, c in other._coeffs.items():
            terms[e] = terms.get(e, 0) + c
        return Form(self.n, self.degree, terms, self.modulus)

    def __neg__(self) -> Form:
        return Form(self.n, self.degree, {e: -c for e, c in self._coeffs.items()}, self.modulus)

    def __sub__(self, other: Form) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> Form:
        c = _normalize(c, self.modulus)
        return Form(self.n, self.degree, {e: v * c for e, v in self._coeffs.items()}, self.modulus)

    def __mul__(self, other) -> Form:
        if isinstance(other, Form):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> Form:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> Form:
        if isinstance(other, (int, Fraction)):
            if self.modulus is None:
                return self.scale(1 / Fraction(other))
            return self.scale(pow(int(_normalize(other, self.modulus)), -1, self.modulus))
        return NotImplemented

    def __pow__(self, e: int) -> Form:
        return power(self, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree == other.degree
            and self.modulus == other.modulus
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self.n, self.degree, self.modulus, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"Form(n={self.n}, degree={self.degree}, {self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                f"X{i + 1}" if e == 1 else f"X{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif self.modulus is None and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        terms = []
        for exps, c in self.terms():
            c = Fraction(c)
            terms.append({"exponents": list(exps), "num": str(c.numerator), "den": str(c.denominator)})
        out = {"n": self.n, "degree": self.degree, "terms": terms}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> Form:
        try:
            n = int(data["n"])
            degree = int(data["degree"])
            terms = {}
            for t in data["terms"]:
                exps = tuple(int(e) for e in t["exponents"])
                if exps in terms:
                    raise InputError(f"duplicate monomial {exps}")
                terms[exps] = Fraction(int(t["num"]), int(t.get("den", "1")))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed form JSON: {exc}") from exc
        return cls(n, degree, terms, data.get("modulus"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Form:
        return cls.from_dict(json.loads(text))


def mul(a: Form, b: Form) -> Form:
    """Product of two forms; the degree is the sum of the degrees."""
    a._check_compatible(b)
    terms: dict[Exponent, object] = {}
    for ea, ca in a._coeffs.items():
        for eb, cb in b._coeffs.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            terms[e] = terms.get(e, 0) + ca * cb
    return Form(a.n, a.degree + b.degree, terms, a.modulus)


def power(a: Form, e: int) -> Form:
    if e < 0:
        raise InputError(f"negative exponent {e}")
    result = Form.constant(a.n, 1, a.modulus)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def substitute(a: Form, assignment: Mapping[int, int], n_target: int | None = None) -> Form:
    """Rename variables: ``X_i`` becomes ``X_{assignment[i]}``.

    Unmapped variables keep their index.  ``n_target`` defaults to ``a.n``;
    pass ``a.n - 1`` to land in the smaller ring after eliminating the last
    variable, e.g. ``substitute(p, {n - 1: 0}, n - 1)`` for ``Xn -> X1``.
    """
    n_target = a.n if n_target is None else n_target
    target = [assignment.get(i, i) for i in range(a.n)]
    for i, t in enumerate(target):
        if not 0 <= t < n_target:
            raise InputError(f"X{i + 1} maps to index {t}, outside a ring of {n_target} variables")
    terms: dict[Exponent, object] = {}
    for exps, c in a._coeffs.items():
        img = [0] * n_target
        for i, e in enumerate(exps):
            img[target[i]] += e
        img = tuple(img)
        terms[img] = terms.get(img, 0) + c
    return Form(n_target, a.degree, terms, a.modulus)


def densify(a: Form) -> list:
    """Coefficient vector of ``a`` in canonical monomial order."""
    zero = Fraction(0) if a.modulus is None else 0
    vec = [zero] * dim_graded_piece(a.n, a.degree)
    idx = _index(a.n, a.degree)
    for e, c in a._coeffs.items():
        vec[idx[e]] = c
    return vec


def sum_forms(forms: Iterable[Form], n: int, degree: int, modulus: int | None = None) -> Form:
    total = Form.zero(n, degree, modulus)
    for f in forms:
        total = total + f
    return total


def linear_change(a: Form, matrix: Sequence[Sequence]) -> Form:
    """Apply ``X_i -> sum_j matrix[i][j] * X_j`` to every variable of ``a``."""
    if len(matrix) != a.n or any(len(r) != a.n for r in matrix):
        raise InputError(f"expected an {a.n}x{a.n} matrix")
    images = [Form.linear(r, a.modulus) for r in matrix]
    total = Form.zero(a.n, a.degree, a.modulus)
    for exps, c in a._coeffs.items():
        term = Form.constant(a.n, c, a.modulus)
        for img, e in zip(images, exps):
            if e:
                term = mul(term, power(img, e))
        total = total + term
    return total
