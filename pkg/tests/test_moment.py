from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from symdesign import cayley, hilbert, markov, moment, snrep
from symdesign.moment import filtered_basis, swap_moment_terms


@st.composite
def sectors(draw, max_n=5, min_dim=1):
    n = draw(st.integers(min_value=2, max_value=max_n))
    if draw(st.booleans()):
        r = draw(st.integers(min_value=0, max_value=n))
        s = hilbert.u1_sector(n, r)
    else:
        d = draw(st.integers(min_value=2, max_value=3))
        lam = draw(st.sampled_from(snrep.enumerate_partitions(n, d)))
        s = hilbert.sud_sector(n, d, lam)
    if s.dim < min_dim:
        s = hilbert.u1_sector(n, n // 2)
    return s


@st.composite
def gen_sets(draw, n, adjacent_only=False):
    kinds = ["chain"] if adjacent_only else ["chain", "star", "complete"]
    return cayley.generating_set(draw(st.sampled_from(kinds)), n)


@st.composite
def type3_cases(draw, min_dim=2):
    s = draw(sectors(min_dim=min_dim))
    g = draw(gen_sets(s.n, adjacent_only=s.symmetry != hilbert.U1))
    return s, g


@st.composite
def mixed_cases(draw):
    s = draw(sectors())
    if s.symmetry == hilbert.U1:
        others = [t for t in hilbert.u1_sectors(s.n) if t != s]
    else:
        others = [t for t in hilbert.schur_weyl_sectors(s.n, s.d) if t != s]
    t = draw(st.sampled_from(others))
    block_type = draw(st.sampled_from(["type1", "type2"]))
    return block_type, (s, t), draw(gen_sets(s.n))


def pair_terms(name, placements):
    return moment.combination_terms(name, (1, 1, -1, -1), placements)


# ------------------------------------------------------------ term sets


@pytest.mark.parametrize("order", ["k1", "k2", "k2_modified", "cayley_kernel"])
def test_term_sets_are_unital(order):
    assert swap_moment_terms(order).unital_sum() == 1


def test_k2_term_list():
    t = swap_moment_terms("k2")
    assert t.normalization == Fraction(1, 8)
    assert [int(c) for c, _ in t.terms] == [3, 3, 1, 1, 1, 1, -1, -1]
    assert [p for _, p in t.terms] == ["IIII", "tttt", "ItIt", "IttI", "tIIt", "tItI", "IItt", "ttII"]
    assert t.order == 4
    assert swap_moment_terms("k1").order == 2


def test_unknown_term_set():
    with pytest.raises(ValueError):
        swap_moment_terms("k3")


# --------------------------------------------------------------- bases


def test_filtered_basis_sizes():
    s2 = hilbert.sud_sector(3, 2, (2, 1))
    assert len(filtered_basis("type3", (s2,))) == 6
    a = hilbert.sud_sector(6, 2, (5, 1))
    b = hilbert.sud_sector(6, 2, (4, 2))
    assert (a.dim, b.dim) == (5, 9)
    assert len(filtered_basis("type1", (a, b))) == 45
    assert len(filtered_basis("type3", (hilbert.u1_sector(4, 0),))) == 1


@given(sectors(max_n=6))
@settings(max_examples=30, deadline=None)
def test_type3_count_and_subspace_dims(s):
    fb = filtered_basis("type3", (s,))
    d = s.dim
    assert len(fb) == 2 * d * d - d
    dims = {name: len(moment.subspace_basis(fb, name)) for name in moment.SUBSPACES}
    assert dims["A"] == dims["Sym"] == d * (d + 1) // 2
    assert dims["B"] == dims["C"] == dims["D"] == dims["Alt"] == d * (d - 1) // 2
    assert dims["W"] == d * (d - 1)
    assert dims["A"] + dims["B"] + dims["C"] + dims["D"] == len(fb)
    assert dims["Sym"] + dims["Alt"] + dims["W"] == len(fb)


def test_filtered_basis_rejects_bad_sectors():
    s = hilbert.u1_sector(3, 1)
    with pytest.raises(ValueError):
        filtered_basis("type1", (s, s))
    with pytest.raises(ValueError):
        filtered_basis("type1", (s, hilbert.sud_sector(3, 2, (2, 1))))
    with pytest.raises(ValueError):
        filtered_basis("type4", (s,))
    with pytest.raises(ValueError):
        moment.subspace_basis(filtered_basis("type1", (s, hilbert.u1_sector(3, 2))), "A")


def test_block_ids():
    a, b = hilbert.u1_sector(4, 1), hilbert.u1_sector(4, 2)
    assert filtered_basis("type2", (a, b)).block_id == "type2:r=1|r=2"
    fb = filtered_basis("type3", (b,))
    assert moment.subspace_basis(fb, "A").block_id == "type3:r=2:A"


# ------------------------------------------------------------ assembly


def test_polarized_sector_is_trivial():
    fb = filtered_basis("type3", (hilbert.u1_sector(4, 0),))
    for order in ("k2", "k2_modified", "cayley_kernel"):
        block = moment.assemble_block(swap_moment_terms(order), cayley.star(4), fb)
        np.testing.assert_allclose(block.dense(), [[1.0]], atol=1e-12)


def test_single_pair_swap_block():
    # one swap exchanging the two bitstrings of r=1, n=2
    s = hilbert.u1_sector(2, 1)
    fb = filtered_basis("type3", (s,))
    block = moment.assemble_block(swap_moment_terms("k2_modified"), cayley.chain(2), moment.subspace_basis(fb, "A"))
    expect = np.array([[4, 2, 2], [2, 6, 0], [2, 0, 6]]) / 8
    np.testing.assert_allclose(block.dense().T, expect, atol=1e-12)


def test_non_generating_set_is_rejected():
    fb = filtered_basis("type3", (hilbert.u1_sector(4, 2),))
    with pytest.raises(ValueError, match="does not generate"):
        moment.assemble_block(swap_moment_terms("k2"), [(1, 2), (3, 4)], fb)


def test_leakage_is_detected():
    fb = filtered_basis("type3", (hilbert.u1_sector(3, 1),))
    rng = np.random.default_rng(0)
    bad = sp.csr_matrix(rng.normal(size=(len(fb), len(fb))))
    with pytest.raises(AssertionError, match="not invariant"):
        moment.assemble_block(swap_moment_terms("k2"), cayley.chain(3), moment.subspace_basis(fb, "A"), operator=bad)


@given(type3_cases(min_dim=1))
@settings(max_examples=30, deadline=None)
def test_type3_commutant_vectors_are_fixed(case):
    s, g = case
    fb = filtered_basis("type3", (s,))
    vecs = moment.commutant_vectors(fb)
    for order in ("k2", "k2_modified"):
        op = moment.filtered_operator(swap_moment_terms(order), g, fb)
        np.testing.assert_allclose(op @ vecs, vecs, atol=1e-10)
    # the Cayley kernel only keeps the identity pairing
    op = moment.filtered_operator(swap_moment_terms("cayley_kernel"), g, fb)
    np.testing.assert_allclose(op @ vecs[:, 0], vecs[:, 0], atol=1e-10)


@given(mixed_cases())
@settings(max_examples=30, deadline=None)
def test_mixed_commutant_vector_is_fixed(case):
    block_type, secs, g = case
    fb = filtered_basis(block_type, secs)
    vecs = moment.commutant_vectors(fb)
    for order in ("k2", "k2_modified"):
        op = moment.filtered_operator(swap_moment_terms(order), g, fb)
        np.testing.assert_allclose(op @ vecs, vecs, atol=1e-10)


@given(type3_cases())
@settings(max_examples=25, deadline=None)
def test_ensemble_block_is_psd_contraction(case):
    s, g = case
    fb = filtered_basis("type3", (s,))
    block = moment.assemble_block(swap_moment_terms("k2"), g, fb)
    data = moment.spectral_data(block)
    assert data.eigenvalues.min() >= -1e-10
    assert data.eigenvalues.max() <= 1 + 1e-10
    assert data.unit_multiplicity == 2


@given(mixed_cases())
@settings(max_examples=25, deadline=None)
def test_mixed_block_has_one_unit_eigenvalue(case):
    block_type, secs, g = case
    block = moment.assemble_block(swap_moment_terms("k2"), g, filtered_basis(block_type, secs))
    data = moment.spectral_data(block)
    assert data.unit_multiplicity == 1
    assert data.eigenvalues.min() >= -1e-10


@given(type3_cases())
@settings(max_examples=25, deadline=None)
def test_subspace_blocks_reassemble_the_spectrum(case):
    s, g = case
    fb = filtered_basis("type3", (s,))
    block = moment.assemble_block(swap_moment_terms("k2_modified"), g, fb)
    whole = moment.spectral_data(block).eigenvalues
    parts = np.concatenate(
        [moment.spectral_data(b).eigenvalues for b in moment.subspace_split(block).values()]
    )
    np.testing.assert_allclose(np.sort(parts), np.sort(whole), atol=1e-10)


def test_cayley_kernel_splits_into_sym_alt_w():
    fb = filtered_basis("type3", (hilbert.u1_sector(4, 2),))
    block = moment.assemble_block(swap_moment_terms("cayley_kernel"), cayley.chain(4), fb)
    parts = moment.subspace_split(block)
    assert set(parts) == {"Sym", "Alt", "W"}
    assert parts["Sym"].dim == 21


def test_split_needs_type3():
    fb = filtered_basis("type1", (hilbert.u1_sector(3, 1), hilbert.u1_sector(3, 2)))
    with pytest.raises(ValueError):
        moment.subspace_split(moment.assemble_block(swap_moment_terms("k2"), cayley.chain(3), fb))


# ------------------------------------------------------- vanishing terms


@given(mixed_cases())
@settings(max_examples=30, deadline=None)
def test_cross_terms_vanish_on_mixed_blocks(case):
    block_type, secs, g = case
    fb = filtered_basis(block_type, secs)
    if block_type == "type1":
        combo = pair_terms("v1", ("IttI", "tIIt", "IItt", "ttII"))
    else:
        combo = pair_terms("v2", ("ItIt", "tItI", "IItt", "ttII"))
    op = moment.filtered_operator(combo, g, fb)
    assert abs(op).max() < 1e-10 if op.nnz else True


def test_modified_and_cayley_differ_on_b_plus_c():
    # the modified operator does not reduce to the Cayley kernel on B + C
    s = hilbert.u1_sector(4, 2)
    fb = filtered_basis("type3", (s,))
    v = sp.hstack([moment.subspace_basis(fb, "B").vectors, moment.subspace_basis(fb, "C").vectors]).toarray()
    op = moment.filtered_operator(pair_terms("x", ("IttI", "tIIt", "IItt", "ttII")), cayley.chain(4), fb)
    assert np.abs(v.T @ op.toarray() @ v).max() == pytest.approx(0.5)


# ------------------------------------------------------ modified operator


@pytest.mark.parametrize(
    "sector,tau",
    [
        (hilbert.u1_sector(4, 2), (1, 2)),
        (hilbert.u1_sector(3, 1), (1, 3)),
        (hilbert.sud_sector(3, 2, (2, 1)), (2, 3)),
    ],
)
def test_modified_square_differs_by_projector(sector, tau):
    fb = filtered_basis("full", (sector,) * 4)
    m_op = moment.tau_operator(swap_moment_terms("k2_modified"), fb, tau)
    t_op = moment.tau_operator(swap_moment_terms("k2"), fb, tau)
    rest = moment.tau_operator(moment.combination_terms("r", (1, -1), ("IIII", "tttt")), fb, tau)
    np.testing.assert_allclose((m_op @ m_op - t_op).toarray(), (9 / 32) * rest.toarray(), atol=1e-12)
    assert moment.m2_square_check((sector,) * 4, tau) == pytest.approx(9 / 32 * np.abs(rest.toarray()).max())


def test_modified_square_is_exact_when_swap_is_trivial():
    s = hilbert.u1_sector(3, 0)
    assert moment.m2_square_check((s,) * 4, (1, 2)) == 0.0


@given(type3_cases())
@settings(max_examples=20, deadline=None)
def test_modified_gap_within_factor_four(case):
    s, g = case
    out = moment.modified_gap_check(s, g, factor=4.0)
    assert out
    for name, row in out.items():
        assert row["lower"], (name, row)
        assert row["upper"], (name, row)
        assert 1 - 1e-8 <= row["ratio"] <= 4 + 1e-8


def test_modified_gap_ratio_is_four_on_chain():
    out = moment.modified_gap_check(hilbert.u1_sector(4, 2), cayley.chain(4))
    assert out["A"]["ratio"] == pytest.approx(4.0)
    assert not out["A"]["upper"]


@given(type3_cases())
@settings(max_examples=20, deadline=None)
def test_modified_blocks_match_closed_forms(case):
    s, g = case
    if s.symmetry != hilbert.U1:
        g = cayley.chain(s.n)
    fb = filtered_basis("type3", (s,))
    for tau in g:
        for terms, subs in (("k2_modified", ("A", "D")), ("cayley_kernel", ("Sym",))):
            op = moment.tau_operator(swap_moment_terms(terms), fb, tau)
            for name in subs:
                block = moment.assemble_block(
                    swap_moment_terms(terms), g, moment.subspace_basis(fb, name), operator=op
                )
                expect = markov.predicted_subspace_matrix(s, tau, name)
                np.testing.assert_allclose(block.dense().T, expect, atol=1e-10)


# ------------------------------------------------------------- spectra


def test_identity_spectrum():
    data = moment.spectral_data(np.eye(4))
    assert data.eigenvalues.tolist() == [1.0] * 4
    assert data.gap == 0.0
    assert data.unit_multiplicity == 4


def test_asymmetric_matrix_is_rejected():
    with pytest.raises(ValueError):
        moment.spectral_data(np.array([[0.5, 0.5], [0.1, 0.9]]))


def test_sparse_path_matches_dense():
    s = hilbert.u1_sector(7, 3)
    fb = filtered_basis("type3", (s,))
    block = moment.assemble_block(swap_moment_terms("k2"), cayley.chain(7), fb)
    assert len(fb) > moment.DENSE_LIMIT
    sparse = moment.spectral_data(block, k=4)
    assert not sparse.complete
    dense = np.linalg.eigvalsh(block.dense())[::-1][:4]
    np.testing.assert_allclose(sparse.eigenvalues[:4], dense, atol=1e-9)


@pytest.mark.parametrize(
    "kind,expected",
    [
        ("chain", 1 - (1 - np.cos(np.pi / 4)) / 12),
        ("star", 1 - 1 / 24),
        ("complete", 1 - 1 / 12),
    ],
)
def test_type12_bound_values(kind, expected):
    assert moment.type12_bound(cayley.generating_set(kind, 4)) == pytest.approx(expected, abs=1e-12)


def test_type12_bound_on_custom_set_uses_laplacian():
    g = cayley.custom(4, [(1, 2), (2, 3), (3, 4)])
    assert moment.type12_bound(g) == pytest.approx(moment.type12_bound(cayley.chain(4)))


@given(mixed_cases())
@settings(max_examples=25, deadline=None)
def test_type12_check_passes(case):
    block_type, (lam, mu), g = case
    out = moment.type12_gap_check(g, lam, mu, block_type)
    assert out["pass"], out
    assert out["unit_multiplicity"] == 1
