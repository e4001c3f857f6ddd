"""Exact dense linear algebra over Q and over prime fields.

Rational matrices are eliminated fraction-free: each row is first scaled to
integers, then Bareiss elimination keeps every intermediate entry an
integer minor of the input.  Prime-field matrices are eliminated with numpy
``int64`` rows when ``p**2`` fits in a signed 64-bit word and with Python
integers otherwise.

Rank over ``F_p`` of an integer matrix never exceeds its rank over ``Q``, so
a full-rank result modulo ``p`` is a sound full-rank certificate over ``Q``.
Any other prime-field answer is only probabilistic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .errors import InconsistencyError, InputError

# smallest prime above 2**31; p**2 < 2**63 keeps the numpy path overflow-free
DEFAULT_PRIME = 2147483659
_INT64_SAFE = 3037000499

PRIME_ENV_VAR = "SECANT_WITNESS_PRIME"


def witness_prime() -> int:
    """The prime used for modular ranks, honouring ``SECANT_WITNESS_PRIME``."""
    raw = os.environ.get(PRIME_ENV_VAR)
    if not raw:
        return DEFAULT_PRIME
    try:
        p = int(raw)
    except ValueError as exc:
        raise InputError(f"{PRIME_ENV_VAR}={raw!r} is not an integer") from exc
    from sympy import isprime

    if p <= 2**31 or not isprime(p):
        raise InputError(f"{PRIME_ENV_VAR} must be a prime above 2**31, got {p}")
    return p


def field_label(modulus: int | None) -> str:
    return "rational" if modulus is None else "prime-field"


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple, ...]
    modulus: int | None = None

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InputError(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], modulus: int | None = None, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cannot infer the column count of an empty matrix")
            cols = len(rows[0])
        if modulus is None:
            entries = tuple(tuple(Fraction(x) for x in r) for r in rows)
        else:
            entries = tuple(tuple(_mod(x, modulus) for x in r) for r in rows)
        return cls(len(rows), cols, entries, modulus)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], modulus: int | None = None, rows: int | None = None):
        if not columns:
            if rows is None:
                raise InputError("cannot infer the row count of an empty matrix")
            return cls(rows, 0, tuple(() for _ in range(rows)), modulus)
        return cls.from_rows(list(zip(*columns)), modulus, cols=len(columns))

    @classmethod
    def identity(cls, size: int, modulus: int | None = None):
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)], modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int | None = None):
        return cls.from_rows([[0] * cols for _ in range(rows)], modulus, cols=cols)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                           tuple(() for _ in range(self.cols)), self.modulus)

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def matvec(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise InputError(f"vector length {len(v)} does not match {self.cols} columns")
        out = [sum(a * b for a, b in zip(r, v)) for r in self.entries]
        if self.modulus is not None:
            out = [x % self.modulus for x in out]
        return out

    def matmul(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows or self.modulus != other.modulus:
            raise InputError("incompatible matrices")
        cols = list(zip(*other.entries)) if other.rows else [() for _ in range(other.cols)]
        rows = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries]
        return ExactMatrix.from_rows(rows, self.modulus, cols=other.cols)


def _mod(x, p: int) -> int:
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise InputError(f"denominator {x.denominator} vanishes mod {p}")
        return x.numerator * pow(x.denominator, -1, p) % p
    return int(x) % p


def _integer_row(row: Sequence) -> list[int]:
    dens = [Fraction(x).denominator for x in row]
    scale = lcm(*dens) if dens else 1
    return [int(Fraction(x) * scale) for x in row]


def specialize(M: ExactMatrix, p: int) -> ExactMatrix:
    """Reduce a rational matrix modulo ``p`` after clearing row denominators.

    Row scaling by nonzero integers keeps the rational rank, so the result has
    ``rank <= rank(M)``.
    """
    if M.modulus is not None:
        raise InputError("matrix is already over a prime field")
    rows = [[x % p for x in _integer_row(r)] for r in M.entries]
    return ExactMatrix(M.rows, M.cols, tuple(tuple(r) for r in rows), p)


# ---------------------------------------------------------------------------
# elimination kernels


def _bareiss(A: list[list[int]], ncols: int) -> list[int]:
    """Fraction-free forward elimination in place; returns pivot columns.

    Pivot: largest absolute value in the column, lowest row index on ties.
    After the call the first ``len(pivots)`` rows are an integer echelon form.
    """
    m = len(A)
    r = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        best, best_val = -1, 0
        for i in range(r, m):
            v = abs(A[i][c])
            if v > best_val:
                best, best_val = i, v
        if best < 0:
            continue
        if best != r:
            A[r], A[best] = A[best], A[r]
        prow = A[r]
        piv = prow[c]
        ptail = prow[c + 1:]
        for i in range(r + 1, m):
            row = A[i]
            f = row[c]
            if f:
                row[c + 1:] = [(piv * x - f * y) // prev for x, y in zip(row[c + 1:], ptail)]
                row[c] = 0
            elif prev != piv:
                row[c + 1:] = [piv * x // prev for x in row[c + 1:]]
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def _content_divide(row: list[int], pivot_col: int) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g == 0:
        return row
    if row[pivot_col] < 0:
        g = -g
    return row if g == 1 else [x // g for x in row]


def _rref_rational(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    A = [_integer_row(r) for r in rows]
    pivots = _bareiss(A, ncols)
    rk = len(pivots)
    A = [_content_divide(A[i], pivots[i]) for i in range(rk)]
    # clear above each pivot, bottom-up, keeping rows primitive
    for i in range(rk - 1, -1, -1):
        c = pivots[i]
        ri = A[i]
        a = ri[c]
        for h in range(i):
            f = A[h][c]
            if f:
                A[h] = _content_divide([a * x - f * y for x, y in zip(A[h], ri)], pivots[h])
    out = []
    for i in range(rk):
        a = A[i][pivots[i]]
        out.append([Fraction(x, a) if x else Fraction(0) for x in A[i]])
    return out, pivots


def _as_array(rows: Sequence[Sequence[int]], ncols: int, p: int) -> np.ndarray:
    dtype = np.int64 if p <= _INT64_SAFE else object
    arr = np.array([[int(x) % p for x in r] for r in rows], dtype=dtype)
    return arr.reshape(len(rows), ncols)


def _eliminate_modp(A: np.ndarray, p: int, reduced: bool) -> list[int]:
    """Gauss(-Jordan) elimination mod ``p`` in place; returns pivot columns."""
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        lo = 0 if reduced else r + 1
        targets = np.nonzero(A[lo:, c])[0] + lo
        targets = targets[targets != r]
        if len(targets):
            f = A[targets, c].reshape(-1, 1)
            A[targets] = (A[targets] - f * A[r]) % p
        pivots.append(c)
        r += 1
    return pivots


# ---------------------------------------------------------------------------
# public operations


def rank(M: ExactMatrix) -> int:
    """Exact rank over the matrix's own field."""
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.modulus is None:
        A = [_integer_row(r) for r in M.entries]
        return len(_bareiss(A, M.cols))
    A = _as_array(M.entries, M.cols, M.modulus)
    return len(_eliminate_modp(A, M.modulus, reduced=False))


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Reduced row-echelon form (nonzero rows only) and pivot columns."""
    if M.rows == 0:
        return ExactMatrix(0, M.cols, (), M.modulus), []
    if M.modulus is None:
        rows, pivots = _rref_rational(M.entries, M.cols)
        return ExactMatrix(len(rows), M.cols, tuple(tuple(r) for r in rows), None), pivots
    A = _as_array(M.entries, M.cols, M.modulus)
    pivots = _eliminate_modp(A, M.modulus, reduced=True)
    rows = tuple(tuple(int(x) for x in A[i]) for i in range(len(pivots)))
    return ExactMatrix(len(pivots), M.cols, rows, M.modulus), pivots


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of ``field**ambient_dim`` held as a reduced echelon basis."""

    ambient_dim: int
    basis: ExactMatrix
    pivot_columns: tuple[int, ...]
    _free: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim or self.basis.rows != len(self.pivot_columns):
            raise InputError("basis shape does not match the pivot data")
        piv = set(self.pivot_columns)
        object.__setattr__(self, "_free", tuple(j for j in range(self.ambient_dim) if j not in piv))

    @property
    def modulus(self) -> int | None:
        return self.basis.modulus

    @property
    def dim(self) -> int:
        return len(self.pivot_columns)

    @property
    def free_columns(self) -> tuple[int, ...]:
        return self._free

    def vectors(self) -> list[list]:
        return [list(r) for r in self.basis.entries]

    def residual(self, v: Sequence) -> list:
        """``v`` minus its reduction against the basis; zero iff ``v`` lies in the span."""
        if len(v) != self.ambient_dim:
            raise InputError(f"vector of length {len(v)} in a space of dimension {self.ambient_dim}")
        p = self.modulus
        res = [Fraction(x) for x in v] if p is None else [_mod(x, p) for x in v]
        for c, row in zip(self.pivot_columns, self.basis.entries):
            f = res[c]
            if f:
                res = [x - f * y for x, y in zip(res, row)]
                if p is not None:
                    res = [x % p for x in res]
        return res

    @cached_property
    def quotient_columns(self) -> list[list]:
        """Images of the unit vectors under ``v -> residual(v)[free_columns]``.

        The residual is linear, so the quotient coordinates of a sparse vector
        are a short combination of these columns.
        """
        p = self.modulus
        one, zero = (Fraction(1), Fraction(0)) if p is None else (1, 0)
        slot = {f: k for k, f in enumerate(self._free)}
        cols: list[list] = [None] * self.ambient_dim  # type: ignore[list-item]
        for f, k in slot.items():
            col = [zero] * len(self._free)
            col[k] = one
            cols[f] = col
        for c, row in zip(self.pivot_columns, self.basis.entries):
            col = [-row[f] for f in self._free]
            cols[c] = col if p is None else [x % p for x in col]
        return cols


def span(vectors: Sequence[Sequence], modulus: int | None = None, ambient_dim: int | None = None) -> SubspaceBasis:
    """Reduced echelon basis of the span of ``vectors``."""
    if ambient_dim is None:
        if not vectors:
            raise InputError("ambient dimension needed for an empty spanning set")
        ambient_dim = len(vectors[0])
    for v in vectors:
        if len(v) != ambient_dim:
            raise InputError(f"vector of length {len(v)} in a span of dimension {ambient_dim}")
    M = ExactMatrix.from_rows(vectors, modulus, cols=ambient_dim)
    R, pivots = rref(M)
    return SubspaceBasis(ambient_dim, R, tuple(pivots))


def contains(S: SubspaceBasis, v: Sequence) -> tuple[bool, list]:
    """Membership test; returns ``(is_member, residual)``."""
    res = S.residual(v)
    return not any(res), res


def kernel(M: ExactMatrix) -> SubspaceBasis:
    """Basis of ``{v : M v = 0}``."""
    R, pivots = rref(M)
    p = M.modulus
    one, zero = (Fraction(1), Fraction(0)) if p is None else (1, 0)
    piv = set(pivots)
    vecs = []
    for f in range(M.cols):
        if f in piv:
            continue
        v = [zero] * M.cols
        v[f] = one
        for c, row in zip(pivots, R.entries):
            v[c] = -row[f] if p is None else (-row[f]) % p
        vecs.append(v)
    return span(vecs, p, ambient_dim=M.cols)


def solve(M: ExactMatrix, b: Sequence) -> list:
    """One solution of ``M x = b`` (free variables set to zero).

    Raises :class:`InconsistencyError` when ``b`` is outside the column space.
    """
    if len(b) != M.rows:
        raise InputError(f"right-hand side of length {len(b)} for {M.rows} rows")
    aug = ExactMatrix.from_rows([list(r) + [x] for r, x in zip(M.entries, b)], M.modulus, cols=M.cols + 1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == M.cols:
        raise InconsistencyError("right-hand side is not in the column space")
    zero = Fraction(0) if M.modulus is None else 0
    x = [zero] * M.cols
    for c, row in zip(pivots, R.entries):
        x[c] = row[M.cols]
    return x
