"""Brute-force references, deliberately independent of the package code paths."""
from __future__ import annotations

from itertools import combinations, permutations


def brute_rook_coeffs(rows: list[set[int]]) -> list[int]:
    cells = [(i, j) for i, r in enumerate(rows) for j in r]
    n = len(rows)
    out = [1]
    for k in range(1, n + 1):
        c = 0
        for pick in combinations(cells, k):
            if len({i for i, _ in pick}) == k and len({j for _, j in pick}) == k:
                c += 1
        if c == 0:
            break
        out.append(c)
    return out


def brute_avoiding(n: int, forbidden) -> int:
    """Permutations p of 1..n with forbidden(i, p(i)) False for every i."""
    return sum(
        all(not forbidden(i, p[i - 1]) for i in range(1, n + 1))
        for p in permutations(range(1, n + 1))
    )


def brute_permanent(m) -> int:
    n = len(m)
    total = 0
    for p in permutations(range(n)):
        prod = 1
        for i in range(n):
            prod *= m[i][p[i]]
            if not prod:
                break
        total += prod
    return total


def brute_allowed(S, n: int) -> int:
    S = set(S)
    return sum(
        all(p[i] - i in S for i in range(n)) for p in permutations(range(n))
    )
