import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conrank import exact as ex
from conrank.bundles import displayed_line_bundle_pencil, skew_example_pencil, westwick_pencil
from conrank.errors import FieldReductionImpossible, NotSquare, RankVerifyError
from conrank.pencil import (SPARE_PRIMES, ExhaustiveFq, LinearPencil, RandomRational,
                            assert_constant_rank, batched_rank_mod, eval_pencil,
                            find_sign_equivalence, is_skew, left_skew_symmetrize, pencil_from_rows,
                            project_pencil, projective_points, rank_profile, skew_complete)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_batched_rank_matches_flint(q, a, b, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, q, size=(6, a, b))
    M[0, :, 0] = 0  # some degenerate cases
    ranks = batched_rank_mod(M, q)
    F = ex.GF(q)
    for k in range(6):
        assert ranks[k] == ex.rank(F.matrix(a, b, [int(x) for x in M[k].ravel()]))


@pytest.mark.parametrize("n,q", [(1, 5), (2, 7), (3, 5), (3, 11)])
def test_projective_point_count(n, q):
    pts = projective_points(n, q)
    assert len(pts) == (q ** (n + 1) - 1) // (q - 1)
    assert len({tuple(p) for p in pts}) == len(pts)


def test_eval_pencil():
    A = westwick_pencil(2, 2)
    assert eval_pencil(A, (1, 0, 0)) == A.coeffs[0]
    assert ex.rank(eval_pencil(A, (3, 6, -9))) == ex.rank(eval_pencil(A, (1, 2, -3)))
    with pytest.raises(RankVerifyError):
        eval_pencil(A, (0, 0, 0))


def test_profiles_of_builtins():
    p = rank_profile(westwick_pencil(2, 2), ExhaustiveFq(7))
    assert (p.points, p.min_rank, p.max_rank) == (57, 4, 4)
    S = skew_example_pencil()
    p = rank_profile(S, ExhaustiveFq(7))
    assert (p.points, p.min_rank, p.max_rank) == (400, 8, 8)
    zero = LinearPencil((ex.QQ.zeros(2, 3),) * 3)
    p = rank_profile(zero, RandomRational(20))
    assert (p.min_rank, p.max_rank) == (0, 0)


def test_certified_and_refuted():
    A = westwick_pencil(2, 2)
    assert assert_constant_rank(A, 4).status == "Certified"
    co = [ex.QQ.matrix(5, 5, ex.entries(C)) for C in A.coeffs]
    for C in co:
        C[0, 0] = 0
    v = assert_constant_rank(LinearPencil(tuple(co)), 4)
    assert v.status == "Refuted" and v.witness_field == "QQ"
    assert ex.rank(eval_pencil(LinearPencil(tuple(co)), v.witness)) == v.witness_rank != 4


def test_inconclusive_when_denominators_block_reduction():
    A = pencil_from_rows([[[Fraction(1, 35), 0], [0, 1]]], 1)
    v = assert_constant_rank(A, 1, primes=(5, 7))
    assert v.status == "Inconclusive"
    with pytest.raises(FieldReductionImpossible):
        rank_profile(A, ExhaustiveFq(5))


def test_bad_reduction_is_not_a_refutation():
    # [x0, 5 x1] has rank 1 everywhere over QQ but vanishes at (0:1) mod 5
    A = pencil_from_rows([[[1, 0], [0, 5]]], 1)
    v = assert_constant_rank(A, 1, primes=(5, 7), spare_primes=())
    assert v.status == "Inconclusive"
    assert any("bad reduction mod 5" in x for x in v.notes)
    v = assert_constant_rank(A, 1, primes=(5, 7), spare_primes=SPARE_PRIMES)
    assert v.status == "Certified"


def test_prime_field_pencil_refuted_directly():
    A = pencil_from_rows([[[1, 0], [0, 5]]], 1).reduce_mod(5)
    assert assert_constant_rank(A, 1, primes=(5, 7)).status == "Refuted"


def test_skew_completion_and_check():
    M = skew_complete([["0", "1", "-3/2"], ["0", "2"], ["0"]])
    assert M == -ex.transpose(M)
    assert M[0, 2] == ex.QQ("-3/2") and M[2, 0] == ex.QQ("3/2")
    assert is_skew(skew_example_pencil())
    assert not is_skew(westwick_pencil(2, 2))


def test_left_skew_symmetrize_round_trip():
    S0 = skew_example_pencil()
    rng = random.Random(4)
    P = ex.QQ.matrix(10, 10, [rng.randint(-2, 2) for _ in range(100)])
    while ex.rank(P) < 10:
        P = ex.QQ.matrix(10, 10, [rng.randint(-2, 2) for _ in range(100)])
    A = S0.left_multiply(P)
    assert not is_skew(A)
    S = left_skew_symmetrize(A, seed=1)
    assert S is not None and is_skew(A.left_multiply(S))
    # same ray as P^{-1}
    R = ex.matmul(S, P)
    c = R[0, 0]
    assert c != 0 and R == ex.QQ.identity(10) * c


def test_generic_pencil_not_symmetrizable():
    rng = random.Random(0)
    co = tuple(ex.QQ.matrix(4, 4, [rng.randint(-5, 5) for _ in range(16)]) for _ in range(4))
    assert left_skew_symmetrize(LinearPencil(co)) is None
    with pytest.raises(NotSquare):
        left_skew_symmetrize(westwick_pencil(3, 2))


def test_projection_identity_and_shape():
    A = westwick_pencil(2, 2)
    assert project_pencil(A, 5, 5) == A
    B = project_pencil(A, 5, 4, seed=3)
    assert B.shape == (5, 4)
    with pytest.raises(RankVerifyError):
        project_pencil(A, 6, 5)


def test_sign_equivalence():
    A = westwick_pencil(2, 2)
    B = displayed_line_bundle_pencil()
    s, t, v = find_sign_equivalence(A, B)
    for i in range(3):
        for r in range(5):
            for c in range(5):
                assert B.coeffs[i][r, c] == s[r] * t[c] * v[i] * A.coeffs[i][r, c]
    assert find_sign_equivalence(A, westwick_pencil(2, 2).transpose()) is None
