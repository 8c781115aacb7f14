"""Forbidden-position boards and their rook polynomials.

A board is an n x n 0/1 pattern; the 1 cells (the X's) are where a rook, i.e.
``pi(i) = j``, is forbidden.  Internally every row is an int bitmask with bit
``j - 1`` standing for column ``j``.
"""
from __future__ import annotations

import json
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactmath import IntPoly

__all__ = [
    "Board",
    "RookCache",
    "board_from_matrix",
    "board_straight",
    "board_circular",
    "board_key",
    "rook_polynomial",
    "complement_matrix",
    "branch_step",
]


@dataclass(frozen=True)
class Board:
    n: int
    rows: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"board has {len(self.rows)} rows, expected {self.n}")
        for r in self.rows:
            for j in r:
                if not 1 <= j <= self.n:
                    raise ValueError(f"column {j} outside 1..{self.n}")

    @classmethod
    def from_rows(cls, n: int, rows: Iterable[Iterable[int]]) -> "Board":
        return cls(n, tuple(frozenset(r) for r in rows))

    @property
    def cells(self) -> int:
        return sum(len(r) for r in self.rows)

    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << (j - 1) for j in r) for r in self.rows)

    def matrix(self) -> list[list[int]]:
        return [[int(j in r) for j in range(1, self.n + 1)] for r in self.rows]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "rows": [sorted(r) for r in self.rows]})

    @classmethod
    def from_json(cls, text: str) -> "Board":
        d = json.loads(text)
        return cls.from_rows(d["n"], d["rows"])

    def __str__(self) -> str:
        return "\n".join(
            " ".join("X" if j in r else "." for j in range(1, self.n + 1))
            for r in self.rows
        )


def board_from_matrix(m: Sequence[Sequence[int]]) -> Board:
    n = len(m)
    rows = []
    for i, row in enumerate(m):
        if len(row) != n:
            raise ValueError(f"matrix is not square: row {i + 1} has {len(row)} entries, expected {n}")
        rows.append({j + 1 for j, x in enumerate(row) if int(x) not in (0,)})
        if any(int(x) not in (0, 1) for x in row):
            raise ValueError(f"row {i + 1} has entries other than 0/1")
    return Board.from_rows(n, rows)


def board_straight(S: Iterable[int], n: int) -> Board:
    """X at (i, j) iff j - i is in S."""
    if n < 1:
        raise ValueError("n must be positive")
    S = set(S)
    return Board.from_rows(
        n, ({i + s for s in S if 1 <= i + s <= n} for i in range(1, n + 1))
    )


def normalize_circular(S: Iterable[int]) -> tuple[int, ...]:
    """Shift S so its minimum is 0 (rotating the table changes nothing)."""
    S = set(S)
    if not S:
        return ()
    m = min(S)
    return tuple(sorted(s - m for s in S))


def board_circular(S: Iterable[int], n: int) -> Board:
    """X at (i, j) iff (j - i) mod n lies in S mod n, after shifting min(S) to 0."""
    if n < 1:
        raise ValueError("n must be positive")
    res = {s % n for s in normalize_circular(S)}
    return Board.from_rows(
        n, ({(i - 1 + s) % n + 1 for s in res} for i in range(1, n + 1))
    )


def complement_matrix(b: Board) -> list[list[int]]:
    """Allowed-position matrix: 1 where the board has no X."""
    return [[int(j not in r) for j in range(1, b.n + 1)] for r in b.rows]


# -- canonical keys -----------------------------------------------------------

def _relabel(rows: Sequence[int]) -> tuple[int, ...]:
    label: dict[int, int] = {}
    out = []
    for r in rows:
        m = 0
        while r:
            low = r & -r
            b = low.bit_length() - 1
            if b not in label:
                label[b] = len(label)
            m |= 1 << label[b]
            r ^= low
        out.append(m)
    return tuple(out)


def _canon(rows: Iterable[int], rounds: int = 8) -> tuple[int, ...]:
    """Sort rows, relabel columns by first use, repeat until stable.

    Every step is a row or column permutation (empty rows are dropped), so
    equal keys always mean equal rook polynomials even though this is not a
    perfect canonical form.
    """
    cur = _relabel(sorted(r for r in rows if r))
    for _ in range(rounds):
        nxt = _relabel(sorted(cur))
        if nxt == cur:
            break
        cur = nxt
    return cur


def board_key(b: Board) -> tuple[int, ...]:
    return _canon(b.masks())


# -- rook polynomials -----------------------------------------------------------

class RookCache:
    """Memo table from board keys to rook-polynomial coefficient tuples.

    Unbounded by default; with ``maxsize`` it evicts least-recently-used
    entries.  A lock makes a single instance safe to share between threads.
    """

    def __init__(self, maxsize: int | None = None):
        self.maxsize = maxsize
        self._data: OrderedDict[tuple, tuple[int, ...]] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        with self._lock:
            v = self._data.get(key)
            if v is None:
                self.misses += 1
            else:
                self.hits += 1
                if self.maxsize is not None:
                    self._data.move_to_end(key)
            return v

    def put(self, key, value) -> None:
        with self._lock:
            self._data[key] = value
            if self.maxsize is not None:
                self._data.move_to_end(key)
                while len(self._data) > self.maxsize:
                    self._data.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self.hits = self.misses = 0

    def __len__(self) -> int:
        return len(self._data)


_default_cache = RookCache()


def _padd(a: tuple[int, ...], b: tuple[int, ...], shift: int = 0) -> tuple[int, ...]:
    out = list(a) + [0] * max(0, len(b) + shift - len(a))
    for i, x in enumerate(b):
        out[i + shift] += x
    return tuple(out)


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _components(rows: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Split rows into groups that share no column."""
    left = list(rows)
    comps = []
    while left:
        cols = left.pop()
        comp = [cols]
        grew = True
        while grew:
            grew = False
            rest = []
            for r in left:
                if r & cols:
                    cols |= r
                    comp.append(r)
                    grew = True
                else:
                    rest.append(r)
            left = rest
        comps.append(tuple(comp))
    return comps


def _rook_fewest(rows: tuple[int, ...], cache: RookCache) -> tuple[int, ...]:
    if not rows:
        return (1,)
    if len(rows) == 1:
        return (1, rows[0].bit_count())
    key = _canon(rows)
    hit = cache.get(key)
    if hit is not None:
        return hit
    rows = key
    comps = _components(rows)
    if len(comps) > 1:
        res: tuple[int, ...] = (1,)
        for c in comps:
            res = _pmul(res, _rook_fewest(c, cache))
        cache.put(key, res)
        return res

    # branch cell: a 1 in the sparsest line, ties to the lowest index (rows first)
    best_i, best_cnt = 0, rows[0].bit_count()
    for i, r in enumerate(rows):
        c = r.bit_count()
        if c < best_cnt:
            best_i, best_cnt = i, c
    union = 0
    for r in rows:
        union |= r
    col_choice = None
    u = union
    while u:
        low = u & -u
        u ^= low
        c = sum(1 for r in rows if r & low)
        if c < best_cnt:
            col_choice, best_cnt = low, c
    if col_choice is None:
        i = best_i
        bit = rows[i] & -rows[i]
    else:
        bit = col_choice
        i = next(k for k, r in enumerate(rows) if r & bit)

    b1 = tuple(r if k != i else r & ~bit for k, r in enumerate(rows))
    b2 = tuple(r & ~bit for k, r in enumerate(rows) if k != i)
    res = _padd(
        _rook_fewest(tuple(r for r in b1 if r), cache),
        _rook_fewest(tuple(r for r in b2 if r), cache),
        shift=1,
    )
    cache.put(key, res)
    return res


def _delete(rows: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    """Remove row i and column j (bit j) and close the gap."""
    low = (1 << j) - 1
    return tuple(
        (r & low) | ((r >> (j + 1)) << j) for k, r in enumerate(rows) if k != i
    )


def branch_step(rows: tuple[int, ...], ncols: int):
    """One step of the textbook recursion on a full matrix.

    Returns ``("branch", B1, B2)`` with B2 one size smaller, or
    ``("drop", B')`` when the first row and first column are both empty.
    Matrices are ``(row_masks, ncols)`` pairs.
    """
    if rows[0]:
        j = (rows[0] & -rows[0]).bit_length() - 1
        b1 = (rows[0] & ~(1 << j),) + rows[1:]
        return "branch", (b1, ncols), (_delete(rows, 0, j), ncols - 1)
    for i, r in enumerate(rows):
        if r & 1:
            b1 = rows[:i] + (r & ~1,) + rows[i + 1:]
            return "branch", (b1, ncols), (_delete(rows, i, 0), ncols - 1)
    return "drop", (_delete(rows, 0, 0), ncols - 1)


def _rook_first(rows: tuple[int, ...], ncols: int, memo: dict) -> tuple[int, ...]:
    if not rows or not any(rows):
        return (1,)
    key = (rows, ncols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    step = branch_step(rows, ncols)
    if step[0] == "drop":
        res = _rook_first(*step[1], memo)
    else:
        res = _padd(_rook_first(*step[1], memo), _rook_first(*step[2], memo), shift=1)
    memo[key] = res
    return res


def rook_polynomial(
    b: Board, rule: str = "fewest", cache: RookCache | None = None
) -> IntPoly:
    """Rook polynomial of a board, in the variable t.

    ``rule="fewest"`` branches on a cell of the sparsest row or column, splits
    the board into independent components and memoizes on canonical keys.
    ``rule="first"`` follows the textbook recursion literally (first 1 of the
    top row, else of the first column, else drop both) with an exact-matrix
    memo; it exists for step-by-step comparison.
    """
    if rule == "fewest":
        coeffs = _rook_fewest(tuple(m for m in b.masks() if m), cache or _default_cache)
    elif rule == "first":
        coeffs = _rook_first(b.masks(), b.n, {})
    else:
        raise ValueError(f"unknown branching rule {rule!r}")
    return IntPoly(coeffs, "t")
