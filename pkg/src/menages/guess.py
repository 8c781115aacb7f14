"""Guess-and-verify for recurrences and rational generating functions.

Every guesser fits an exact linear system on one block of indices and then
insists the answer also holds on ``held_out`` later terms that took no part in
the fit.  That makes the output empirical with high confidence, not a proof.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

from .exactmath import Echelon, IntPoly, clear_denominators

__all__ = [
    "CFiniteRec",
    "HolonomicRec",
    "RationalGF",
    "InsufficientTerms",
    "guess_cfinite_poly",
    "guess_cfinite_scalar",
    "guess_holonomic",
    "check_recurrence",
    "extend_sequence",
    "cfinite_to_gf",
    "recurrence_from_json",
]

HELD_OUT = 10
MAX_SKIP = 8

Term = Union[int, IntPoly]


class InsufficientTerms(ValueError):
    pass


class SingularRecurrence(ArithmeticError):
    """Leading coefficient vanishes, or a division leaves a remainder."""


def _is_scalar(terms: Sequence[Term]) -> bool:
    return all(isinstance(x, int) for x in terms)


def _as_poly(x: Term, var: str = "t") -> IntPoly:
    return x if isinstance(x, IntPoly) else IntPoly((x,), var)


def _bitsize(v: Sequence[int]) -> int:
    return max((abs(x).bit_length() for x in v), default=0)


@dataclass(frozen=True)
class CFiniteRec:
    """``R(n) = sum_{i=1..d} c_i * R(n-i)`` for every n >= valid_from.

    ``initial`` holds R(start), ..., R(valid_from - 1).  When all ``c_i`` are
    constants and the terms are ints the recurrence is scalar.
    """

    coeffs: tuple[IntPoly, ...]
    initial: tuple[Term, ...]
    start: int = 1
    valid_from: int | None = None

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ValueError("last recurrence coefficient must be nonzero")
        if self.valid_from is None:
            object.__setattr__(self, "valid_from", self.start + len(self.initial))
        if len(self.initial) < self.order:
            raise ValueError("need at least `order` initial terms")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def scalar(self) -> bool:
        return _is_scalar(self.initial) and all(c.degree <= 0 for c in self.coeffs)

    def nested_form(self) -> list[list[Term]]:
        """``[[initial terms], [c_1, ..., c_d]]``."""
        return [list(self.initial), list(self.coeffs)]

    def __str__(self) -> str:
        init = ", ".join(str(x) for x in self.initial)
        cs = ", ".join(str(c) for c in self.coeffs)
        return f"[[{init}], [{cs}]]"

    def to_dict(self) -> dict:
        return {
            "kind": "cfinite",
            "order": self.order,
            "degree": max(c.degree for c in self.coeffs),
            "coeffs": [c.to_list() for c in self.coeffs],
            "initial": [
                str(x) if isinstance(x, int) else x.to_list() for x in self.initial
            ],
            "start": self.start,
            "valid_from": self.valid_from,
        }


@dataclass(frozen=True)
class HolonomicRec:
    """``sum_{i=0..d} p_i(n) * a(n+i) = 0`` whenever n >= valid_from.

    ``initial`` is a(start), ..., a(valid_from + d - 1): everything the
    recurrence needs before it can take over.
    """

    coeffs: tuple[IntPoly, ...]
    initial: tuple[int, ...] = ()
    start: int = 1
    valid_from: int = 1

    def __post_init__(self):
        if len(self.coeffs) < 2 or self.coeffs[-1].is_zero():
            raise ValueError("need order >= 1 and a nonzero leading coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    @property
    def complexity(self) -> int:
        return self.order + self.degree

    def residual(self, terms: Sequence[int], n: int, start: int = 1) -> int:
        return sum(p(n) * terms[n + i - start] for i, p in enumerate(self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            shift = "a(n)" if i == 0 else f"a(n+{i})"
            parts.append(f"({p})*{shift}")
        return " + ".join(parts) + f" = 0  (n >= {self.valid_from})"

    def to_dict(self) -> dict:
        return {
            "kind": "holonomic",
            "order": self.order,
            "degree": self.degree,
            "coeffs": [p.to_list() for p in self.coeffs],
            "initial": [str(x) for x in self.initial],
            "start": self.start,
            "valid_from": self.valid_from,
        }


def recurrence_from_json(text: str | dict):
    d = json.loads(text) if isinstance(text, str) else text
    if d["kind"] == "holonomic":
        return HolonomicRec(
            tuple(IntPoly.from_list(c, "n") for c in d["coeffs"]),
            tuple(int(x) for x in d["initial"]),
            d["start"],
            d["valid_from"],
        )
    init = tuple(
        int(x) if isinstance(x, str) else IntPoly.from_list(x, "t") for x in d["initial"]
    )
    return CFiniteRec(
        tuple(IntPoly.from_list(c, "t") for c in d["coeffs"]), init, d["start"], d["valid_from"]
    )


@dataclass(frozen=True)
class RationalGF:
    numerator: IntPoly
    denominator: IntPoly

    def __post_init__(self):
        if self.denominator[0] != 1:
            raise ValueError("denominator must have constant term 1")

    def series(self, N: int) -> list[int]:
        """First N Taylor coefficients (exact, since den(0) = 1)."""
        q = self.denominator.coeffs
        out: list[int] = []
        for k in range(N):
            v = self.numerator[k] - sum(q[i] * out[k - i] for i in range(1, min(k, len(q) - 1) + 1))
            out.append(v)
        return out

    def with_var(self, var: str) -> "RationalGF":
        return RationalGF(IntPoly(self.numerator.coeffs, var), IntPoly(self.denominator.coeffs, var))

    def __str__(self) -> str:
        return f"({self.numerator})/({self.denominator})"

    def to_dict(self) -> dict:
        return {"numerator": self.numerator.to_list(), "denominator": self.denominator.to_list(),
                "var": self.numerator.var}


# -- C-finite ----------------------------------------------------------------

def _cfinite_rows(terms: list[IntPoly], k: int, d: int, tdeg: list[int]):
    """Equations at position k, one per power of t.

    Unknown layout: [lambda, c_1[0..tdeg_1], ..., c_d[0..tdeg_d]].
    """
    top = max([terms[k].degree] + [terms[k - i].degree + tdeg[i - 1] for i in range(1, d + 1)])
    for p in range(top + 1):
        row = [terms[k][p]]
        for i in range(1, d + 1):
            prev = terms[k - i]
            row.extend(-prev[p - j] if p >= j else 0 for j in range(tdeg[i - 1] + 1))
        yield row


def _unpack_cfinite(v: list[int], d: int, tdeg: list[int], var: str) -> list[IntPoly] | None:
    lam = v[0]
    out, pos = [], 1
    for i in range(d):
        cs = v[pos:pos + tdeg[i] + 1]
        pos += tdeg[i] + 1
        if any(c % lam for c in cs):
            return None
        out.append(IntPoly([c // lam for c in cs], var))
    return out


def _cfinite_holds(terms: list[IntPoly], cs: list[IntPoly], k: int) -> bool:
    acc = IntPoly((), terms[k].var)
    for i, c in enumerate(cs, 1):
        acc = acc + c * terms[k - i]
    return acc == terms[k]


def guess_cfinite_poly(terms: Sequence[Term], max_order: int, max_tdeg: int = 0,
                       held_out: int = HELD_OUT, start: int = 1,
                       max_skip: int = MAX_SKIP, graded: bool = False) -> CFiniteRec | None:
    """Smallest-order constant-coefficient recurrence for a polynomial sequence.

    Each ``c_i(t)`` has t-degree at most ``max_tdeg`` (``min(i, max_tdeg)``
    with ``graded=True``, which is always enough for a transfer matrix whose
    entries are linear in t).  If the fit fails from the first term, up to
    ``max_skip`` leading terms are ignored, since small boards can be
    degenerate.  Returns None when nothing in the budget survives the held-out
    check.
    """
    need = 2 * max_order + max_tdeg + held_out
    if len(terms) < need:
        raise InsufficientTerms(f"need at least {need} terms, got {len(terms)}")
    scalar = _is_scalar(terms)
    polys = [_as_poly(x) for x in terms]
    var = polys[0].var if polys else "t"
    m = len(polys)
    fit_end = m - held_out
    for d in range(1, max_order + 1):
        tdeg = [min(i, max_tdeg) if graded else max_tdeg for i in range(1, d + 1)]
        nunk = 1 + sum(t + 1 for t in tdeg)
        for skip in range(max_skip + 1):
            first = d + skip
            if fit_end - first < 1:
                break
            ech = Echelon(nunk)
            for k in range(first, fit_end):
                for row in _cfinite_rows(polys, k, d, tdeg):
                    ech.add(row)
                    if ech.full():
                        break
                if ech.full():
                    break
            if ech.full():
                continue
            cands = []
            for v in ech.nullspace():
                iv = clear_denominators(v)
                if iv[0] != 0:
                    cands.append(iv)
            cands.sort(key=_bitsize)
            for iv in cands:
                cs = _unpack_cfinite(iv, d, tdeg, var)
                if cs is None or cs[-1].is_zero():
                    continue
                if not all(_cfinite_holds(polys, cs, k) for k in range(first, m)):
                    continue
                v0 = first
                while v0 - 1 >= d and _cfinite_holds(polys, cs, v0 - 1):
                    v0 -= 1
                init = tuple(terms[:v0])
                if scalar:
                    init = tuple(int(x) for x in init)
                return CFiniteRec(tuple(cs), init, start, start + v0)
    return None


def guess_cfinite_scalar(terms: Sequence[int], max_order: int, held_out: int = HELD_OUT,
                         start: int = 1, max_skip: int = MAX_SKIP) -> CFiniteRec | None:
    need = 2 * max_order + held_out
    if len(terms) < need:
        raise InsufficientTerms(f"need at least {need} terms, got {len(terms)}")
    return guess_cfinite_poly([int(x) for x in terms], max_order, 0, held_out,
                              start, max_skip)


# -- holonomic ----------------------------------------------------------------

def _canonical_holonomic(v: list[int], d: int, D: int) -> list[IntPoly]:
    polys = [IntPoly(v[i * (D + 1):(i + 1) * (D + 1)], "n") for i in range(d + 1)]
    lead = polys[-1]
    if lead.coeffs and lead.coeffs[-1] < 0:
        polys = [-p for p in polys]
    return polys


def guess_holonomic(terms: Sequence[int], max_complexity: int, held_out: int = HELD_OUT,
                    start: int = 1, max_skip: int = MAX_SKIP,
                    prefer: str = "order") -> HolonomicRec | None:
    """Minimal-order P-recursive recurrence with order + degree <= max_complexity.

    Candidates are tried by increasing order, then increasing degree
    (``prefer="degree"`` swaps the two, giving the lowest-degree recurrence
    instead).  The first nullspace vector that also annihilates the held-out
    terms wins; its coefficients are made integral, content-free, and the top
    coefficient of the leading polynomial positive.
    """
    terms = [int(x) for x in terms]
    m = len(terms)
    worst = max(((d + 1) * (max_complexity - d + 1) + d for d in range(1, max_complexity + 1)),
                default=0)
    if m < worst + held_out:
        raise InsufficientTerms(f"need at least {worst + held_out} terms, got {m}")
    last = start + m - 1
    fit_last = last - held_out
    if prefer == "order":
        shapes = [(d, D) for d in range(1, max_complexity + 1) for D in range(max_complexity - d + 1)]
    elif prefer == "degree":
        shapes = [(d, D) for D in range(max_complexity) for d in range(1, max_complexity - D + 1)]
    else:
        raise ValueError(f"prefer must be 'order' or 'degree', got {prefer!r}")
    for d, D in shapes:
        nunk = (d + 1) * (D + 1)
        for skip in range(max_skip + 1):
            n0 = start + skip
            rows = range(n0, fit_last - d + 1)
            if len(rows) < nunk:
                break
            ech = Echelon(nunk)
            for n in rows:
                row = []
                for i in range(d + 1):
                    a = terms[n + i - start]
                    row.extend(a * n ** j for j in range(D + 1))
                ech.add(row)
                if ech.full():
                    break
            if ech.full():
                continue
            cands = sorted((clear_denominators(v) for v in ech.nullspace()), key=_bitsize)
            for iv in cands:
                polys = _canonical_holonomic(iv, d, D)
                if polys[-1].is_zero():
                    continue
                rec = HolonomicRec(tuple(polys), (), start, n0)
                if any(rec.residual(terms, n, start) for n in range(n0, last - d + 1)):
                    continue
                v0 = n0
                while v0 - 1 >= start and rec.residual(terms, v0 - 1, start) == 0:
                    v0 -= 1
                return HolonomicRec(tuple(polys), tuple(terms[: v0 + d - start]), start, v0)
    return None


# -- checking and extension ---------------------------------------------------

def check_recurrence(rec, terms: Sequence[Term], from_n: int, start: int | None = None) -> bool:
    """True iff every instance whose highest index is >= from_n holds exactly.

    ``terms[0]`` is the term with index ``start`` (defaults to ``rec.start``).
    No applicable instance means vacuously True.
    """
    start = rec.start if start is None else start
    last = start + len(terms) - 1
    d = rec.order
    if isinstance(rec, HolonomicRec):
        for top in range(max(from_n, start + d), last + 1):
            if rec.residual(terms, top - d, start):
                return False
        return True
    polys = [_as_poly(x) for x in terms]
    cs = list(rec.coeffs)
    for n in range(max(from_n, start + d), last + 1):
        if not _cfinite_holds(polys, cs, n - start):
            return False
    return True


def extend_sequence(rec, terms: Sequence[Term], N: int) -> list[Term]:
    """Extend ``terms`` (indexed from ``rec.start``) to N terms in O(N) steps."""
    out = list(terms[:N])
    need = len(rec.initial)
    if len(out) < min(need, N):
        raise ValueError(f"need the first {need} terms to extend")
    start = rec.start
    d = rec.order
    if isinstance(rec, HolonomicRec):
        lead = rec.coeffs[-1]
        while len(out) < N:
            top = start + len(out)
            n = top - d
            pd = lead(n)
            if pd == 0:
                raise SingularRecurrence(f"leading coefficient vanishes at n={n} (term {top})")
            s = sum(p(n) * out[n + i - start] for i, p in enumerate(rec.coeffs[:-1]))
            q, r = divmod(-s, pd)
            if r:
                raise SingularRecurrence(f"non-integral term at index {top}: recurrence is wrong")
            out.append(q)
        return out
    scalar = _is_scalar(out) and rec.scalar
    while len(out) < N:
        if scalar:
            out.append(sum(c[0] * out[-i] for i, c in enumerate(rec.coeffs, 1)))
        else:
            acc = IntPoly((), rec.coeffs[0].var)
            for i, c in enumerate(rec.coeffs, 1):
                acc = acc + c * _as_poly(out[-i])
            out.append(acc)
    return out


def cfinite_to_gf(rec: CFiniteRec, terms: Sequence[int], var: str = "x") -> RationalGF:
    """Generating function sum a(n) x^n, with ``terms[0]`` the x^0 coefficient.

    Denominator ``1 - sum c_i x^i``; the numerator is the denominator times the
    series, truncated where the recurrence takes over.
    """
    if not rec.scalar:
        raise ValueError("generating functions are built for scalar recurrences")
    d = rec.order
    q = IntPoly([1] + [-c[0] for c in rec.coeffs], var)
    cut = max(d, rec.valid_from - rec.start)
    series = extend_sequence(rec, list(terms), max(cut, len(terms)))
    a = IntPoly(series[:cut], var)
    return RationalGF((q * a).truncate(cut), q)
