import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sc_negativity.linalg import hermitian_eig
from sc_negativity.negativity import (
    band_bound,
    band_chain,
    diagonal_projection,
    distance_to_diagonal,
    is_entangled,
    negativity_exact,
    negativity_sc_closed_form,
    negativity_trace_norm,
    partial_transpose,
    pt_eigensystem_sc,
)
from sc_negativity.states import (
    BipartiteDims,
    SchmidtCorrelatedState,
    bell_sc,
    random_banded_sc,
    random_density,
    random_sc,
    sc_embed,
    validate_density,
)


def diag_sc(p):
    return SchmidtCorrelatedState(np.diag(np.asarray(p, dtype=complex)))


def test_partial_transpose_fixes_diagonal():
    rho = validate_density(np.diag([0.1, 0.2, 0.3, 0.4]), BipartiteDims(2, 2))
    np.testing.assert_array_equal(partial_transpose(rho), rho.mat)


def test_partial_transpose_bell_spectrum(bell_density):
    w = np.linalg.eigvalsh(partial_transpose(bell_density))
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_partial_transpose_involution():
    rho = random_density(BipartiteDims(2, 3), 4, 1)
    once = partial_transpose(rho)
    twice = partial_transpose(type(rho)(rho.dims, once))
    np.testing.assert_array_equal(twice, rho.mat)


def test_partial_transpose_index_rule():
    rho = random_density(BipartiteDims(2, 3), 6, 2)
    pt = partial_transpose(rho)
    for m1 in range(2):
        for n1 in range(3):
            for m2 in range(2):
                for n2 in range(3):
                    assert pt[m1 * 3 + n1, m2 * 3 + n2] == rho.mat[m1 * 3 + n2, m2 * 3 + n1]


def test_negativity_examples(bell_density, maximally_mixed):
    assert negativity_exact(maximally_mixed).value == 0.0
    report = negativity_exact(bell_density)
    assert report.value == pytest.approx(0.5, abs=1e-14)
    assert report.negative_eigenvalues == pytest.approx((-0.5,))
    assert report.method == "exact-eigen"


def test_trace_norm_route_matches(bell_density):
    assert negativity_trace_norm(bell_density).value == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("n", range(2, 9))
def test_exact_matches_closed_form(n):
    sc = random_sc(n, 3, 100 + n)
    assert abs(negativity_exact(sc_embed(sc)).value - negativity_sc_closed_form(sc).value) <= 1e-10


def test_closed_form_examples():
    assert negativity_sc_closed_form(diag_sc([0.2, 0.3, 0.5])).value == 0.0
    report = negativity_sc_closed_form(bell_sc())
    assert report.value == 0.5
    assert report.negative_eigenvalues == (-0.5,)


def test_eigensystem_bell():
    pairs = pt_eigensystem_sc(bell_sc())
    by_label = {p.label: p.eigenvalue for p in pairs}
    assert by_label == {("diag", 0, 0): 0.5, ("diag", 1, 1): 0.5, ("plus", 0, 1): 0.5, ("minus", 0, 1): -0.5}


def test_eigensystem_diagonal():
    pairs = pt_eigensystem_sc(diag_sc([0.1, 0.2, 0.7]))
    assert sorted(p.eigenvalue for p in pairs) == [0.0] * 6 + [0.1, 0.2, 0.7]


@pytest.mark.parametrize("seed", range(5))
def test_eigensystem_against_solver(seed):
    sc = random_sc(5, 2, seed)
    pt = partial_transpose(sc_embed(sc))
    pairs = pt_eigensystem_sc(sc)
    assert len(pairs) == 25
    for p in pairs:
        assert np.linalg.norm(pt @ p.vector - p.eigenvalue * p.vector) <= 1e-12
    np.testing.assert_allclose(
        sorted(p.eigenvalue for p in pairs), hermitian_eig(pt).eigenvalues, atol=1e-10
    )
    assert sum(p.eigenvalue < 0 for p in pairs) == 10


def test_eigensystem_vectors_are_independent():
    sc = random_banded_sc(4, 1, 2, seed=3)
    basis = np.stack([p.vector for p in pt_eigensystem_sc(sc)], axis=1)
    assert np.linalg.matrix_rank(basis) == 16


def test_diagonal_projection(bell_density):
    rho = validate_density(np.diag([0.1, 0.2, 0.3, 0.4]), BipartiteDims(2, 2))
    np.testing.assert_array_equal(diagonal_projection(rho).mat, rho.mat)
    np.testing.assert_allclose(diagonal_projection(bell_density).mat, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    rand = random_density(BipartiteDims(3, 3), 5, 4)
    assert negativity_exact(diagonal_projection(rand)).value == 0.0


def test_distance_examples(bell_density):
    rho = validate_density(np.diag([0.1, 0.2, 0.3, 0.4]), BipartiteDims(2, 2))
    assert distance_to_diagonal(rho) == 0.0
    assert distance_to_diagonal(bell_density) == pytest.approx(1.0, abs=1e-15)


def test_distance_on_embedding_is_twice_upper_sum():
    sc = random_sc(4, 2, 12)
    upper = sum(abs(sc.coeff[m, n]) for m in range(4) for n in range(m + 1, 4))
    assert distance_to_diagonal(sc_embed(sc)) == pytest.approx(2 * upper, abs=1e-14)


def test_band_bound_examples():
    assert band_bound(diag_sc([0.5, 0.5])) == (0, 0.0)
    assert band_bound(bell_sc()) == (1, 1.0)
    assert negativity_sc_closed_form(bell_sc()).value < 1


@pytest.mark.parametrize("seed", range(20))
def test_tridiagonal_negativity_below_one(seed):
    sc = random_banded_sc(3 + seed % 6, 1, 1 + seed % 4, seed)
    delta, bound = band_bound(sc)
    assert delta == 1
    assert negativity_sc_closed_form(sc).value < bound


def test_band_chain_links():
    sc = random_banded_sc(8, 2, 5, seed=4)
    chain = band_chain(sc)
    assert chain.delta == 2
    assert chain.holds()
    assert chain.off_diagonal == pytest.approx(2 * negativity_sc_closed_form(sc).value)


def test_entanglement_claims(bell_density, maximally_mixed):
    assert is_entangled(bell_density)
    assert not is_entangled(maximally_mixed)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**31))
def test_sc_negativity_equals_half_distance(n, rank, seed):
    sc = random_sc(n, rank, seed)
    rho = sc_embed(sc)
    exact = negativity_exact(rho).value
    assert abs(exact - 0.5 * distance_to_diagonal(rho)) <= 1e-10
    assert abs(exact - negativity_sc_closed_form(sc).value) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31))
def test_diagonal_iff_zero_negativity(n, seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(n))
    sc = diag_sc(p)
    rho = sc_embed(sc)
    assert negativity_sc_closed_form(sc).value == 0
    assert negativity_exact(rho).value == 0
    np.testing.assert_array_equal(diagonal_projection(rho).mat, rho.mat)
    assert negativity_exact(sc_embed(random_sc(n, 2, seed))).value > 0
