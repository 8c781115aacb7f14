"""Permutation counts: permanents, umbral inclusion-exclusion, profile DP."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .board import (
    Board,
    RookCache,
    board_circular,
    board_straight,
    complement_matrix,
    normalize_circular,
    rook_polynomial,
)
from .exactmath import IntPoly

__all__ = [
    "CountRequest",
    "permanent",
    "umbral_count",
    "count",
    "count_allowed",
    "touchard",
    "seq",
    "rook_sequence",
    "factorial",
    "PERMANENT_CAP",
    "WINDOW_CAP",
]

PERMANENT_CAP = 22
WINDOW_CAP = 24
MODES = ("straight", "circular", "allowed")


class CapExceeded(ValueError):
    """Input is past a configured size cap."""


_facts = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    """n!, grown incrementally and cached."""
    if n < 0:
        raise ValueError("negative factorial")
    if n >= len(_facts):
        with _fact_lock:
            for k in range(len(_facts), n + 1):
                _facts.append(_facts[-1] * k)
    return _facts[n]


@dataclass(frozen=True)
class CountRequest:
    S: tuple[int, ...]
    n: int
    mode: str = "straight"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        S = tuple(sorted(set(self.S)))
        if self.mode == "circular":
            S = normalize_circular(S)
        if self.mode == "allowed" and not S:
            raise ValueError("allowed mode needs a nonempty displacement set")
        object.__setattr__(self, "S", S)


def permanent(m: Sequence[Sequence[int]], cap: int = PERMANENT_CAP) -> int:
    """Ryser's formula with Gray-code subset order; O(2^n n)."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if n > cap:
        raise CapExceeded(f"permanent of a {n}x{n} matrix exceeds cap {cap}; use the umbral path")
    if n == 0:
        return 1
    cols = [[m[i][j] for i in range(n)] for j in range(n)]
    sums = [0] * n
    total = 0
    sign = -1
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        col = cols[j]
        if gray >> j & 1:
            for i in range(n):
                sums[i] += col[i]
        else:
            for i in range(n):
                sums[i] -= col[i]
        sign = -sign
        prod = 1
        for s in sums:
            if not s:
                prod = 0
                break
            prod *= s
        if prod:
            total += sign * prod
    # total carries (-1)^(|T|+1); the permanent wants (-1)^(n-|T|)
    return total if n % 2 else -total


def umbral_count(r: IntPoly, n: int) -> int:
    """Apply t^k -> (-1)^k (n-k)! to a rook polynomial."""
    if r.degree > n:
        raise ValueError(f"rook polynomial degree {r.degree} exceeds n={n}")
    return sum(c * factorial(n - k) * (-1 if k & 1 else 1) for k, c in enumerate(r.coeffs))


def _board(S: Iterable[int], n: int, mode: str) -> Board:
    if mode == "straight":
        return board_straight(S, n)
    if mode == "circular":
        return board_circular(S, n)
    raise ValueError(f"no board for mode {mode!r}")


def count(req: CountRequest, cache: RookCache | None = None) -> int:
    if req.mode == "allowed":
        return count_allowed(req.S, req.n)
    return umbral_count(rook_polynomial(_board(req.S, req.n, req.mode), cache=cache), req.n)


def count_allowed(S: Iterable[int], n: int, cap: int = WINDOW_CAP) -> int:
    """Permutations of 1..n with every displacement pi(i) - i in S.

    Profile DP over the column window [i + min S, i + max S]; a set bit marks
    a column that is already taken or does not exist.
    """
    S = sorted(set(S))
    if not S:
        raise ValueError("allowed mode needs a nonempty displacement set")
    if n < 1:
        raise ValueError("n must be positive")
    lo, hi = S[0], S[-1]
    w = hi - lo + 1
    if w > cap:
        raise CapExceeded(f"window width {w} exceeds cap {cap}")
    if lo > 0 or hi < 0:
        return 0
    full = (1 << w) - 1
    offs = [s - lo for s in S]

    def absent(c: int) -> bool:
        return c < 1 or c > n

    start = 0
    for k in range(w):
        if absent(1 + lo + k):
            start |= 1 << k
    states = {start: 1}
    for i in range(1, n + 1):
        top = 1 << (w - 1)
        enter_absent = absent(i + 1 + hi)
        nxt: dict[int, int] = {}
        for mask, ways in states.items():
            for k in offs:
                bit = 1 << k
                if mask & bit:
                    continue
                m = mask | bit
                if not m & 1:
                    # column i + lo can never be filled later
                    continue
                m >>= 1
                if enter_absent:
                    m |= top
                nxt[m] = nxt.get(m, 0) + ways
        states = nxt
        if not states:
            return 0
    return states.get(full, 0)


def touchard(n: int) -> int:
    """Touchard's closed sum for the round-table menage number."""
    if n < 3:
        raise ValueError("Touchard's formula is only used for n >= 3")
    total = 0
    for k in range(n + 1):
        num = 2 * n * comb(2 * n - k, k)
        q, r = divmod(num, 2 * n - k)
        assert r == 0
        total += (-1) ** k * q * factorial(n - k)
    return total


def rook_sequence(S: Iterable[int], N: int, mode: str = "straight",
                  cache: RookCache | None = None, start: int = 1) -> list[IntPoly]:
    """Rook polynomials of the S-boards for n = start..N."""
    S = tuple(S)
    cache = cache if cache is not None else RookCache()
    return [rook_polynomial(_board(S, n, mode), cache=cache) for n in range(start, N + 1)]


def seq(S: Iterable[int], N: int, mode: str = "straight",
        cache: RookCache | None = None) -> list[int]:
    """First N terms a(1), ..., a(N)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    S = tuple(S)
    if mode == "allowed":
        return [count_allowed(S, n) for n in range(1, N + 1)]
    if mode == "circular":
        S = normalize_circular(S)
    cache = cache if cache is not None else RookCache()
    return [umbral_count(r, n) for n, r in enumerate(rook_sequence(S, N, mode, cache), 1)]
