import random

import pytest
from hypothesis import given, strategies as st

from menages.board import (
    Board,
    RookCache,
    board_circular,
    board_from_matrix,
    board_key,
    board_straight,
    complement_matrix,
    branch_step,
    rook_polynomial,
)
from menages.exactmath import IntPoly

from oracles import brute_rook_coeffs

EXAMPLE_B = [
    [1, 0, 0, 1, 1],
    [0, 0, 1, 1, 0],
    [1, 0, 1, 1, 0],
    [0, 1, 1, 0, 1],
    [1, 0, 0, 1, 1],
]
EXAMPLE_R = IntPoly([1, 14, 63, 105, 56, 6])


def rows_of(b):
    return [set(r) for r in b.rows]


def test_from_matrix():
    b = board_from_matrix(EXAMPLE_B)
    assert rows_of(b) == [{1, 4, 5}, {3, 4}, {1, 3, 4}, {2, 3, 5}, {1, 4, 5}]
    assert board_from_matrix([]).n == 0
    assert rows_of(board_from_matrix([[1, 0], [0, 1]])) == [{1}, {2}]
    with pytest.raises(ValueError):
        board_from_matrix([[1, 0, 1], [0, 1, 0]])


def test_straight():
    assert rows_of(board_straight({0}, 3)) == [{1}, {2}, {3}]
    assert rows_of(board_straight({0, 1}, 4)) == [{1, 2}, {2, 3}, {3, 4}, {4}]
    assert board_straight({5}, 3).cells == 0


def test_circular():
    assert rows_of(board_circular({0, 1}, 4)) == [{1, 2}, {2, 3}, {3, 4}, {4, 1}]
    assert rows_of(board_circular({0}, 3)) == [{1}, {2}, {3}]
    assert board_circular({0, 1, 2}, 3).cells == 9


@pytest.mark.parametrize("shift", [-7, -1, 1, 3, 10])
@pytest.mark.parametrize("S", [{0, 1}, {0, 2, 3}, {-1, 4}])
def test_circular_shift_invariance(S, shift):
    for n in range(1, 8):
        assert board_circular(S, n) == board_circular({s + shift for s in S}, n)


def test_complement():
    b = board_from_matrix(EXAMPLE_B)
    assert complement_matrix(b) == [
        [0, 1, 1, 0, 0],
        [1, 1, 0, 0, 1],
        [0, 1, 0, 0, 1],
        [1, 0, 0, 1, 0],
        [0, 1, 1, 0, 0],
    ]
    assert complement_matrix(board_from_matrix([[0, 0], [0, 0]])) == [[1, 1], [1, 1]]
    assert complement_matrix(board_from_matrix([[1, 1], [1, 1]])) == [[0, 0], [0, 0]]


def test_example_rook_polynomial():
    b = board_from_matrix(EXAMPLE_B)
    assert rook_polynomial(b) == EXAMPLE_R
    assert rook_polynomial(b, rule="first") == EXAMPLE_R


def test_example_first_step():
    # the two boards the textbook recursion produces from B
    b = board_from_matrix(EXAMPLE_B)
    kind, (b1, c1), (b2, c2) = branch_step(b.masks(), b.n)
    assert kind == "branch"
    assert board_from_matrix([[int(r >> j & 1) for j in range(c1)] for r in b1]) == board_from_matrix(
        [[0, 0, 0, 1, 1], [0, 0, 1, 1, 0], [1, 0, 1, 1, 0], [0, 1, 1, 0, 1], [1, 0, 0, 1, 1]]
    )
    assert c2 == 4
    assert [[int(r >> j & 1) for j in range(c2)] for r in b2] == [
        [0, 1, 1, 0], [0, 1, 1, 0], [1, 1, 0, 1], [0, 0, 1, 1],
    ]


def test_branch_step_drop_and_column():
    kind, (rows, nc) = branch_step((0, 0b10), 2)
    assert kind == "drop" and rows == (0b1,) and nc == 1
    kind, (b1, _), (b2, _) = branch_step((0, 0b1), 2)
    assert kind == "branch" and b1 == (0, 0) and b2 == (0,)


@pytest.mark.parametrize("n", range(0, 13))
def test_identity_board(n):
    b = board_straight({0}, n) if n else Board(0, ())
    assert rook_polynomial(b) == IntPoly([1, 1]) ** n


def test_empty_board():
    assert rook_polynomial(board_straight({9}, 5)) == IntPoly([1])


def random_board(rng, n, density=None):
    p = rng.random() if density is None else density
    return Board.from_rows(n, ({j for j in range(1, n + 1) if rng.random() < p} for _ in range(n)))


def test_brute_force_agreement_random():
    rng = random.Random(1234)
    for _ in range(200):
        b = random_board(rng, rng.randint(1, 6))
        assert list(rook_polynomial(b, cache=RookCache()).coeffs) == brute_rook_coeffs(rows_of(b))


def test_rules_agree_random():
    rng = random.Random(99)
    for _ in range(100):
        b = random_board(rng, rng.randint(1, 8))
        assert rook_polynomial(b) == rook_polynomial(b, rule="first")


def test_invariance_under_permutations():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 7)
        b = random_board(rng, n)
        rp = list(range(n))
        cp = list(range(1, n + 1))
        rng.shuffle(rp)
        rng.shuffle(cp)
        permuted = Board.from_rows(n, ({cp[j - 1] for j in b.rows[i]} for i in rp))
        assert rook_polynomial(permuted, cache=RookCache()) == rook_polynomial(b, cache=RookCache())


def test_basic_coefficient_facts():
    rng = random.Random(5)
    for _ in range(100):
        b = random_board(rng, rng.randint(1, 7))
        r = rook_polynomial(b)
        assert r[0] == 1
        assert r[1] == b.cells
        nz_rows = sum(1 for x in b.rows if x)
        nz_cols = len(set().union(*b.rows))
        assert r.degree <= min(nz_rows, nz_cols)


def test_block_diagonal_is_product():
    rng = random.Random(11)
    for _ in range(40):
        n1, n2 = rng.randint(1, 5), rng.randint(1, 5)
        b1, b2 = random_board(rng, n1), random_board(rng, n2)
        joined = Board.from_rows(
            n1 + n2, [set(r) for r in b1.rows] + [{j + n1 for j in r} for r in b2.rows]
        )
        assert rook_polynomial(joined) == rook_polynomial(b1) * rook_polynomial(b2)


def test_key_equal_means_same_polynomial():
    rng = random.Random(3)
    seen = {}
    for _ in range(300):
        b = random_board(rng, rng.randint(1, 5), density=0.4)
        k = board_key(b)
        r = rook_polynomial(b, cache=RookCache())
        assert seen.setdefault(k, r) == r


def test_lru_cache_cap():
    cache = RookCache(maxsize=5)
    for n in range(1, 15):
        assert rook_polynomial(board_circular({0, 1, 2}, n), cache=cache) == rook_polynomial(
            board_circular({0, 1, 2}, n), cache=RookCache()
        )
    assert len(cache) <= 5


@given(st.integers(1, 8), st.lists(st.integers(-3, 3), max_size=4))
def test_json_roundtrip(n, S):
    b = board_straight(set(S), n)
    assert Board.from_json(b.to_json()) == b


def test_bad_board():
    with pytest.raises(ValueError):
        Board.from_rows(2, [{3}, set()])
