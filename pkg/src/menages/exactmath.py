"""Exact integer/rational substrate: dense integer polynomials and nullspaces.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Nothing in this package ever touches a float.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "IntPoly",
    "poly_add",
    "poly_mul",
    "poly_eval",
    "nullspace",
    "Echelon",
]


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Dense univariate polynomial with integer coefficients.

    ``coeffs[k]`` is the coefficient of ``var**k``.  The zero polynomial is the
    empty tuple and has degree ``-1`` (compares below every real degree).
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[int] = (), var: str = "t"):
        c = _trim(int(x) for x in coeffs)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def const(cls, c: int, var: str = "t") -> "IntPoly":
        return cls((c,), var)

    @classmethod
    def monomial(cls, k: int, c: int = 1, var: str = "t") -> "IntPoly":
        return cls([0] * k + [c], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            if other.var != self.var:
                raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")
            return other
        if isinstance(other, int):
            return IntPoly((other,), self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return IntPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly([-x for x in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly((), self.var)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = IntPoly((1,), self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs and (
                self.var == other.var or len(self.coeffs) <= 1
            )
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        return poly_eval(self, x)

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def exact_div(self, c: int) -> "IntPoly":
        q = []
        for x in self.coeffs:
            d, r = divmod(x, c)
            if r:
                raise ArithmeticError(f"{self} is not divisible by {c}")
            q.append(d)
        return IntPoly(q, self.var)

    def truncate(self, k: int) -> "IntPoly":
        """Drop every term of degree >= k."""
        return IntPoly(self.coeffs[:k], self.var)

    def to_list(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_list(cls, coeffs: Sequence, var: str = "t") -> "IntPoly":
        return cls((int(c) for c in coeffs), var)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)!r}, var={self.var!r})"


def format_poly(p: IntPoly) -> str:
    """Ascending powers, explicit ``*`` and ``^``: ``1 + 3*t - t^2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = p.var if k == 1 else f"{p.var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def poly_add(p: IntPoly, q: IntPoly) -> IntPoly:
    if p.var != q.var:
        raise ValueError(f"variable mismatch: {p.var!r} vs {q.var!r}")
    return p + q


def poly_mul(p: IntPoly, q: IntPoly) -> IntPoly:
    if p.var != q.var:
        raise ValueError(f"variable mismatch: {p.var!r} vs {q.var!r}")
    return p * q


def poly_eval(p: IntPoly, x) -> Fraction | int:
    """Horner evaluation; ints stay ints, anything else goes through Fraction."""
    if not isinstance(x, int):
        x = Fraction(x)
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def _bits(x: int) -> int:
    return abs(x).bit_length()


def _primitive(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    if g > 1:
        return [x // g for x in row]
    return row


class Echelon:
    """Incremental fraction-free row echelon form over the integers.

    Rows are added one at a time; each is reduced against the current pivots
    and kept primitive (content 1).  ``rank == ncols`` means the nullspace is
    already known to be trivial, so callers can stop feeding equations.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def full(self) -> bool:
        return len(self.pivots) == self.ncols

    def add(self, row: Sequence) -> bool:
        """Insert a row; return True if it raised the rank."""
        if len(row) != self.ncols:
            raise ValueError("row length mismatch")
        r = _as_int_row(row)
        for c in sorted(self.pivots):
            prow = self.pivots[c]
            a = r[c]
            if a:
                p = prow[c]
                g = gcd(a, p)
                fa, fp = p // g, a // g
                r = [fa * x - fp * y for x, y in zip(r, prow)]
        if not any(r):
            return False
        r = _primitive(r)
        lead = next(c for c, x in enumerate(r) if x)
        if r[lead] < 0:
            r = [-x for x in r]
        self.pivots[lead] = r
        return True

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of {v : Mv = 0}, one vector per free column (free entry = 1)."""
        rows = self._reduced()
        free = [c for c in range(self.ncols) if c not in rows]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for c, row in rows.items():
                if row[f]:
                    v[c] = Fraction(-row[f], row[c])
            basis.append(v)
        return basis

    def _reduced(self) -> dict[int, list[int]]:
        # back-substitution, rightmost pivot first
        rows = {c: list(r) for c, r in self.pivots.items()}
        for c in sorted(rows, reverse=True):
            prow = rows[c]
            p = prow[c]
            for c2, r in rows.items():
                if c2 >= c or not r[c]:
                    continue
                a = r[c]
                g = gcd(a, p)
                fa, fp = p // g, a // g
                new = _primitive([fa * x - fp * y for x, y in zip(r, prow)])
                if new[c2] < 0:
                    new = [-x for x in new]
                rows[c2] = new
        return rows


def _as_int_row(row: Sequence) -> list[int]:
    if all(isinstance(x, int) for x in row):
        return list(row)
    fr = [Fraction(x) for x in row]
    m = reduce(lcm, (x.denominator for x in fr), 1)
    return [int(x * m) for x in fr]


def nullspace(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Right nullspace basis of a rational matrix by exact elimination.

    The pivot for each column is the candidate row with the smallest entry
    bit-length.  Returns ``[]`` iff the matrix has full column rank.
    """
    rows = [_primitive(_as_int_row(r)) for r in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("matrix is not rectangular")
    pivots: dict[int, list[int]] = {}
    remaining = [r for r in rows if any(r)]
    for c in range(ncols):
        cands = [r for r in remaining if r[c]]
        if not cands:
            continue
        prow = min(cands, key=lambda r: (_bits(r[c]), sum(map(_bits, r))))
        remaining = [r for r in remaining if r is not prow]
        p = prow[c]
        nxt = []
        for r in remaining:
            a = r[c]
            if a:
                g = gcd(a, p)
                r = _primitive([(p // g) * x - (a // g) * y for x, y in zip(r, prow)])
            if any(r):
                nxt.append(r)
        remaining = nxt
        pivots[c] = prow if p > 0 else [-x for x in prow]
    ech = Echelon(ncols)
    ech.pivots = pivots
    return ech.nullspace()


def clear_denominators(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector."""
    m = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return _primitive([int(Fraction(x) * m) for x in v])
