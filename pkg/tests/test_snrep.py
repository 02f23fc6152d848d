import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symdesign import snrep
from symdesign.snrep import Partition


@st.composite
def partitions(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return draw(st.sampled_from(snrep.enumerate_partitions(n)))


def brute_partitions(n):
    out = set()
    for k in range(1, n + 1):
        for combo in itertools.combinations_with_replacement(range(1, n + 1), k):
            if sum(combo) == n:
                out.add(tuple(sorted(combo, reverse=True)))
    return out


def brute_tableaux(lam):
    """Every filling of lam with 1..n that increases along rows and columns."""
    lam = snrep.as_partition(lam)
    out = []
    for perm in itertools.permutations(range(1, lam.n + 1)):
        rows, k = [], 0
        for p in lam:
            rows.append(perm[k : k + p])
            k += p
        try:
            out.append(snrep.StandardTableau(lam, rows))
        except ValueError:
            pass
    return out


# ------------------------------------------------------------- partitions


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition((3, 1)).n == 4
    assert str(Partition((5, 1))) == "(5,1)"
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))


def test_two_row_partitions_of_six():
    parts = snrep.enumerate_partitions(6, 2)
    assert [p.parts for p in parts] == [(6,), (5, 1), (4, 2), (3, 3)]


def test_small_partition_counts():
    assert [p.parts for p in snrep.enumerate_partitions(1)] == [(1,)]
    assert len(snrep.enumerate_partitions(4)) == 5
    assert snrep.enumerate_partitions(0) == [Partition(())]


@pytest.mark.parametrize("n", range(1, 9))
def test_partitions_match_brute_force(n):
    got = [p.parts for p in snrep.enumerate_partitions(n)]
    assert len(got) == len(set(got))
    assert set(got) == brute_partitions(n)
    assert got == sorted(got, reverse=True)


@pytest.mark.parametrize("n", range(1, 11))
def test_two_row_count_is_floor_half_plus_one(n):
    assert len(snrep.enumerate_partitions(n, 2)) == n // 2 + 1


# ------------------------------------------------------------- tableaux


def test_dimensions_of_named_shapes():
    assert snrep.irrep_dimension((5, 1)) == 5
    assert snrep.irrep_dimension((7,)) == 1
    assert snrep.irrep_dimension((2, 2)) == 2


@pytest.mark.parametrize("lam", [(2, 1), (3, 2), (2, 2, 1), (3, 1, 1), (4, 2)])
def test_tableaux_match_exhaustive_fill(lam):
    got = snrep.enumerate_tableaux(lam)
    brute = brute_tableaux(lam)
    assert sorted(t.rows for t in got) == sorted(t.rows for t in brute)


@pytest.mark.parametrize("n", range(1, 11))
def test_tableau_count_equals_hook_dimension(n):
    for lam in snrep.enumerate_partitions(n):
        assert len(snrep.enumerate_tableaux(lam)) == snrep.irrep_dimension(lam)


def test_canonical_order_of_five_one():
    tabs = snrep.enumerate_tableaux((5, 1))
    assert tabs[0].rows == ((1, 2, 3, 4, 5), (6,))
    contents = [snrep.content_vector(t) for t in tabs]
    assert contents == [
        (0, 1, 2, 3, 4, -1),
        (0, 1, 2, 3, -1, 4),
        (0, 1, 2, -1, 3, 4),
        (0, 1, -1, 2, 3, 4),
        (0, -1, 1, 2, 3, 4),
    ]


def test_content_vectors_small():
    (t,) = snrep.enumerate_tableaux((3,))
    assert snrep.content_vector(t) == (0, 1, 2)
    assert snrep.content_sum((5, 1)) == 9
    assert snrep.content_sum((2, 2)) == 0
    assert snrep.tableau_index((5, 1), (0, 1, -1, 2, 3, 4)) == 3
    assert snrep.tableau_index((5, 1), (0, 1, 2, 3, 4, 5)) is None


@given(partitions(max_n=9))
def test_content_sum_is_tableau_independent(lam):
    sums = {sum(snrep.content_vector(t)) for t in snrep.enumerate_tableaux(lam)}
    assert sums == {snrep.content_sum(lam)}
    for t in snrep.enumerate_tableaux(lam):
        assert snrep.content_vector(t)[0] == 0


def test_single_row_content_sum():
    for n in range(1, 9):
        assert snrep.content_sum((n,)) == n * (n - 1) // 2


def test_tableau_validation():
    with pytest.raises(ValueError):
        snrep.StandardTableau((2, 1), ((2, 1), (3,)))
    with pytest.raises(ValueError):
        snrep.StandardTableau((2, 1), ((1, 2), (2,)))


# ---------------------------------------------------- orthogonal form and YJM


def test_swap_five_six_on_five_one():
    s = snrep.adjacent_swap_matrix((5, 1), 5)
    c = 2 * math.sqrt(6) / 5
    expect = np.eye(5)
    expect[:2, :2] = [[-1 / 5, c], [c, 1 / 5]]
    np.testing.assert_allclose(s, expect, atol=1e-12)


def test_swap_one_two_on_five_one():
    np.testing.assert_allclose(
        snrep.adjacent_swap_matrix((5, 1), 1), np.diag([1, 1, 1, 1, -1]), atol=1e-12
    )


def test_trivial_rep_swap():
    for j in range(1, 5):
        assert snrep.adjacent_swap_matrix((5,), j).tolist() == [[1.0]]


def test_yjm_on_five_one():
    np.testing.assert_array_equal(snrep.yjm_matrix((5, 1), 6), np.diag([-1, 4, 4, 4, 4]))
    np.testing.assert_array_equal(snrep.yjm_matrix((5, 1), 2), np.diag([1, 1, 1, 1, -1]))
    for lam in [(5, 1), (2, 2), (3,)]:
        assert not snrep.yjm_matrix(lam, 1).any()


@given(partitions(min_n=2))
@settings(max_examples=40, deadline=None)
def test_swaps_are_symmetric_orthogonal_involutions(lam):
    for j in range(1, lam.n):
        s = snrep.adjacent_swap_matrix(lam, j)
        np.testing.assert_allclose(s, s.T, atol=1e-12)
        np.testing.assert_allclose(s @ s, np.eye(len(s)), atol=1e-12)


@given(partitions(min_n=3))
@settings(max_examples=40, deadline=None)
def test_braid_and_far_commutation(lam):
    n = lam.n
    sw = {j: snrep.adjacent_swap_matrix(lam, j) for j in range(1, n)}
    for j in range(1, n - 1):
        a, b = sw[j], sw[j + 1]
        np.testing.assert_allclose(a @ b @ a, b @ a @ b, atol=1e-12)
    for i in range(1, n):
        for j in range(i + 2, n):
            np.testing.assert_allclose(sw[i] @ sw[j], sw[j] @ sw[i], atol=1e-12)


@given(partitions(min_n=2))
@settings(max_examples=40, deadline=None)
def test_yjm_recursion_and_central_sum(lam):
    n = lam.n
    xs = [snrep.yjm_matrix(lam, i) for i in range(1, n + 1)]
    for i in range(1, n):
        s = snrep.adjacent_swap_matrix(lam, i)
        np.testing.assert_allclose(s @ xs[i - 1] @ s + s, xs[i], atol=1e-12)
    np.testing.assert_allclose(sum(xs), snrep.content_sum(lam) * np.eye(len(xs[0])), atol=1e-12)
    for a, b in itertools.combinations(xs, 2):
        np.testing.assert_allclose(a @ b, b @ a, atol=1e-12)


def test_yjm_is_sum_of_transpositions():
    lam = (3, 2)
    for i in range(2, 6):
        direct = sum(snrep.transposition_matrix(lam, k, i) for k in range(1, i))
        np.testing.assert_allclose(direct, snrep.yjm_matrix(lam, i), atol=1e-12)


# ----------------------------------------------------------- permutations


def test_identity_permutation():
    np.testing.assert_allclose(snrep.permutation_matrix((3, 2), [1, 2, 3, 4, 5]), np.eye(5))


def test_transposition_one_three_on_two_one():
    lam = (2, 1)
    s13 = snrep.transposition_matrix(lam, 1, 3)
    word = snrep.permutation_matrix(lam, factors=[1, 2, 1])
    np.testing.assert_allclose(s13, word, atol=1e-12)
    np.testing.assert_allclose(s13, s13.T, atol=1e-12)
    np.testing.assert_allclose(s13 @ s13, np.eye(2), atol=1e-12)


def compose(p, q):
    return [p[q[x] - 1] for x in range(len(q))]


@given(st.permutations(range(1, 6)), st.permutations(range(1, 6)))
@settings(max_examples=50, deadline=None)
def test_permutation_matrix_is_a_homomorphism(p, q):
    lam = (3, 2)
    lhs = snrep.permutation_matrix(lam, compose(list(p), list(q)))
    rhs = snrep.permutation_matrix(lam, list(p)) @ snrep.permutation_matrix(lam, list(q))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@given(st.permutations(range(1, 7)))
def test_adjacent_factors_rebuild_the_permutation(p):
    word = snrep.adjacent_factors(list(p))
    w = list(range(1, 7))
    for j in reversed(word):
        # left-multiply by s_j: swap values j and j+1
        w = [j + 1 if x == j else j if x == j + 1 else x for x in w]
    assert w == list(p)


def test_malformed_permutation():
    with pytest.raises(ValueError):
        snrep.permutation_matrix((2, 1), [1, 1, 2])
    with pytest.raises(ValueError):
        snrep.permutation_matrix((2, 1))


# ------------------------------------------------------------- characters


def test_character_ratio_values():
    assert snrep.transposition_character_ratio((5, 1)) == Fraction(3, 5)
    assert snrep.transposition_character_ratio((6,)) == 1
    assert snrep.transposition_character_ratio((2, 2)) == 0
    assert snrep.transposition_character_ratio((1, 1, 1)) == -1


@given(partitions(min_n=2))
@settings(max_examples=60, deadline=None)
def test_character_ratio_equals_normalized_trace(lam):
    ratio = snrep.transposition_character_ratio(lam)
    for i, j in [(1, 2), (1, lam.n)]:
        tr = np.trace(snrep.transposition_matrix(lam, i, j))
        assert tr / snrep.irrep_dimension(lam) == pytest.approx(float(ratio), abs=1e-12)


def test_dominance_examples():
    assert snrep.dominates((6,), (5, 1)) == snrep.DOMINATES
    assert snrep.dominates((5, 1), (6,)) == snrep.DOMINATED
    assert snrep.dominates((4, 1, 1), (3, 3)) == snrep.INCOMPARABLE
    assert snrep.dominates((3, 3), (3, 3)) == snrep.EQUAL
    with pytest.raises(ValueError):
        snrep.dominates((3,), (2, 1, 1))


@pytest.mark.parametrize("n", range(2, 9))
def test_strict_dominance_raises_the_character(n):
    parts = snrep.enumerate_partitions(n)
    for lam, mu in itertools.permutations(parts, 2):
        if snrep.dominates(lam, mu) == snrep.DOMINATES:
            assert snrep.content_sum(lam) > snrep.content_sum(mu)
            assert snrep.transposition_character_ratio(lam) > snrep.transposition_character_ratio(mu)


def test_degenerate_single_box():
    (lam,) = snrep.enumerate_partitions(1)
    assert snrep.irrep_dimension(lam) == 1
    assert snrep.transposition_character_ratio(lam) == 1
    assert snrep.yjm_matrix(lam, 1).tolist() == [[0.0]]
