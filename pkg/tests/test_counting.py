import random
from itertools import combinations

import pytest

from menages.board import RookCache, board_circular, board_from_matrix, board_straight, complement_matrix, rook_polynomial
from menages.counting import (
    CapExceeded,
    CountRequest,
    count,
    count_allowed,
    factorial,
    permanent,
    seq,
    touchard,
    umbral_count,
)
from menages.exactmath import IntPoly

from oracles import brute_allowed, brute_avoiding, brute_permanent

EXAMPLE_P = [
    [0, 1, 1, 0, 0],
    [1, 1, 0, 0, 1],
    [0, 1, 0, 0, 1],
    [1, 0, 0, 1, 0],
    [0, 1, 1, 0, 0],
]


def test_permanent_examples():
    assert permanent(EXAMPLE_P) == 2
    assert permanent([[1] * 4] * 4) == 24
    assert permanent([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert permanent([]) == 1
    assert permanent([[2, 3], [4, 5]]) == 22


def test_permanent_random_against_brute_force():
    rng = random.Random(8)
    for _ in range(80):
        n = rng.randint(1, 6)
        m = [[rng.randint(0, 3) for _ in range(n)] for _ in range(n)]
        assert permanent(m) == brute_permanent(m)


def test_permanent_caps():
    with pytest.raises(CapExceeded):
        permanent([[1] * 5] * 5, cap=4)
    with pytest.raises(ValueError):
        permanent([[1, 0]])


def test_umbral_example_board():
    assert umbral_count(IntPoly([1, 14, 63, 105, 56, 6]), 5) == 2


def test_umbral_degree_guard():
    with pytest.raises(ValueError):
        umbral_count(IntPoly([1, 1, 1]), 1)


def test_count_examples():
    assert count(CountRequest((0,), 4)) == 9
    assert count(CountRequest((0, 1), 4, "circular")) == 2
    assert count(CountRequest((-1, 0, 1), 4, "allowed")) == 5
    assert count_allowed({-2, -1, 1, 2}, 4) == 4


def test_request_validation():
    with pytest.raises(ValueError):
        CountRequest((0,), 3, "diagonal")
    with pytest.raises(ValueError):
        CountRequest((0,), 0)
    with pytest.raises(ValueError):
        CountRequest((), 3, "allowed")
    assert CountRequest((5, 6), 4, "circular").S == (0, 1)


def test_allowed_dp_against_brute_force():
    rng = random.Random(21)
    for _ in range(200):
        S = {rng.randint(-4, 4) for _ in range(rng.randint(1, 5))}
        n = rng.randint(1, 7)
        assert count_allowed(S, n) == brute_allowed(S, n), (S, n)


def test_allowed_window_cap():
    with pytest.raises(CapExceeded):
        count_allowed({-20, 20}, 5)


def subsets(universe):
    for k in range(1, len(universe) + 1):
        yield from combinations(universe, k)


@pytest.mark.parametrize("mode", ["straight", "circular"])
def test_umbral_matches_permanent_of_complement(mode):
    memo = RookCache()
    for S in subsets((-1, 0, 1, 2)):
        for n in range(1, 7):
            b = board_straight(S, n) if mode == "straight" else board_circular(S, n)
            got = umbral_count(rook_polynomial(b, cache=memo), n)
            assert got == permanent(complement_matrix(b))
            assert 0 <= got <= factorial(n)


def test_straight_and_circular_against_definition():
    for S in subsets((-1, 0, 2)):
        for n in range(1, 7):
            assert seq(S, n)[-1] == brute_avoiding(n, lambda i, j: j - i in S)
            assert seq(S, n, "circular")[-1] == brute_avoiding(n, lambda i, j: (j - i) % n in {s % n for s in S})


def test_inclusion_exclusion_partial_sums_bracket():
    # truncating the alternating sum after an even (odd) term over- (under-)estimates
    for S, n in [((0, 1), 7), ((0, 1, 2), 8), ((-1, 1), 6)]:
        r = rook_polynomial(board_circular(S, n))
        exact = umbral_count(r, n)
        partial = 0
        for k, c in enumerate(r.coeffs):
            partial += (-1) ** k * c * factorial(n - k)
            assert partial >= exact if k % 2 == 0 else partial <= exact


def test_complement_identity_random():
    rng = random.Random(4)
    from menages.board import Board
    for _ in range(60):
        n = rng.randint(1, 6)
        b = Board.from_rows(n, ({j for j in range(1, n + 1) if rng.random() < 0.5} for _ in range(n)))
        assert umbral_count(rook_polynomial(b), n) == permanent(complement_matrix(b))


def test_touchard():
    assert [touchard(n) for n in (3, 4, 5, 7)] == [1, 2, 13, 579]
    with pytest.raises(ValueError):
        touchard(2)
    assert seq((0, 1), 12, "circular")[2:] == [touchard(n) for n in range(3, 13)]


def test_seq_examples():
    assert seq((0,), 6) == [0, 1, 2, 9, 44, 265]
    assert seq((0, 1), 7, "circular") == [0, 0, 1, 2, 13, 80, 579]
    assert seq((-1, 0, 1), 5, "allowed") == [1, 2, 3, 5, 8]
    with pytest.raises(ValueError):
        seq((0,), 0)


def test_empty_set_counts_everything():
    assert seq((), 6) == [factorial(n) for n in range(1, 7)]
    assert seq((), 5, "circular") == [factorial(n) for n in range(1, 6)]
