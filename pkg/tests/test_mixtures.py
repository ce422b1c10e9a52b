import itertools

import numpy as np
import pytest

from sc_negativity.errors import DegenerateSpectrum, DisjointnessViolated, ValidationFailed
from sc_negativity.mixtures import (
    LambdaComponent,
    LambdaMap,
    assemble_mixture,
    component_negativity_sum,
    disjointness_conflicts,
    lambda_maps_from_spectra,
    make_mixture,
    mixture_negativity_bound,
    norm_additivity_gap,
    norm_additivity_residual,
    random_mixture,
    validate_disjointness,
)
from sc_negativity.negativity import negativity_exact
from sc_negativity.states import BipartiteDims, random_sc, sc_embed


def brute_force_groups(s1, s2):
    groups = {}
    for m, n in itertools.product(range(len(s1)), range(len(s2))):
        groups.setdefault(round(s1[m] + s2[n], 9), []).append((m, n))
    return sorted(tuple(sorted(v)) for v in groups.values())


def test_disjointness_examples():
    a = LambdaMap("a", ((0, 0), (1, 1)))
    b = LambdaMap("b", ((0, 1), (1, 0)))
    assert validate_disjointness([a])
    assert validate_disjointness([a, b])
    assert not validate_disjointness([LambdaMap(1, ((0, 0),)), LambdaMap(2, ((0, 0),))])
    assert disjointness_conflicts([LambdaMap(1, ((0, 0),)), LambdaMap(2, ((0, 0),))]) == [(0, 1, 0, 0)]


def test_map_must_be_injective():
    with pytest.raises(ValidationFailed):
        LambdaMap("x", ((0, 1), (1, 1)))


def test_maps_from_qubit_spectra():
    maps = lambda_maps_from_spectra([0, 1], [0, 1])
    assert [(m.label, m.pairs) for m in maps] == [(0, ((0, 0),)), (1, ((0, 1), (1, 0))), (2, ((1, 1),))]


def test_maps_from_qutrit_spectra():
    maps = lambda_maps_from_spectra([0, 1, 2], [0, 1, 2])
    assert [len(m) for m in maps] == [1, 2, 3, 2, 1]
    assert sorted(m.pairs for m in maps) == brute_force_groups([0, 1, 2], [0, 1, 2])


@pytest.mark.parametrize("seed", range(5))
def test_maps_partition_product_basis(seed):
    rng = np.random.default_rng(seed)
    s1, s2 = rng.uniform(0, 1, 4), rng.uniform(0, 1, 3)
    maps = lambda_maps_from_spectra(s1, s2)
    assert len(maps) == 12 and all(len(m) == 1 for m in maps)
    s1, s2 = rng.choice(6, 4, replace=False), rng.choice(6, 3, replace=False)
    maps = lambda_maps_from_spectra(s1, s2)
    assert sorted(m.pairs for m in maps) == brute_force_groups(s1, s2)
    assert sorted(p for m in maps for p in m.pairs) == list(itertools.product(range(4), range(3)))
    assert validate_disjointness(maps)


def test_degenerate_spectrum_rejected():
    with pytest.raises(DegenerateSpectrum):
        lambda_maps_from_spectra([0, 1, 1], [0, 1])


def test_single_full_map_equals_sc_embedding():
    sc = random_sc(3, 2, 7)
    mix = make_mixture(BipartiteDims(3, 3), [LambdaComponent(LambdaMap(0, ((0, 0), (1, 1), (2, 2))), 1.0, sc.coeff)])
    np.testing.assert_allclose(assemble_mixture(mix).mat, sc_embed(sc).mat, atol=1e-16)
    assert mixture_negativity_bound(mix) == pytest.approx(negativity_exact(sc_embed(sc)).value, abs=1e-10)


def test_singleton_components_are_diagonal():
    comps = [
        LambdaComponent(LambdaMap(0, ((0, 0),)), 0.3, np.eye(1)),
        LambdaComponent(LambdaMap(2, ((1, 1),)), 0.7, np.eye(1)),
    ]
    rho = assemble_mixture(make_mixture(BipartiteDims(2, 2), comps))
    np.testing.assert_array_equal(rho.mat, np.diag([0.3, 0, 0, 0.7]))
    assert mixture_negativity_bound(make_mixture(BipartiteDims(2, 2), comps)) == 0


def test_support_pattern_two_components():
    maps = lambda_maps_from_spectra([0, 1], [0, 1])
    rng = np.random.default_rng(2)
    c1 = np.array([[0.6, 0.3 + 0.2j], [0.3 - 0.2j, 0.4]])
    comps = [LambdaComponent(maps[1], 0.8, c1), LambdaComponent(maps[2], 0.2, np.eye(1))]
    rho = assemble_mixture(make_mixture(BipartiteDims(2, 2), comps)).mat
    # map 1 pairs (0,1) -> flat 1 and (1,0) -> flat 2; map 2 pair (1,1) -> flat 3
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1], expected[2, 2] = 0.8 * 0.6, 0.8 * 0.4
    expected[2, 1] = 0.8 * c1[0, 1]
    expected[1, 2] = 0.8 * c1[1, 0]
    expected[3, 3] = 0.2
    np.testing.assert_allclose(rho, expected, atol=1e-16)


def test_overlapping_components_rejected():
    comps = [
        LambdaComponent(LambdaMap("a", ((0, 0), (1, 1))), 0.5, np.eye(2) / 2),
        LambdaComponent(LambdaMap("b", ((1, 1),)), 0.5, np.eye(1)),
    ]
    with pytest.raises(DisjointnessViolated) as info:
        make_mixture(BipartiteDims(2, 2), comps)
    assert info.value.conflicts == [(0, 1, 1, 1)]


@pytest.mark.parametrize("seed", range(10))
def test_bound_chain(seed):
    mix = random_mixture(seed)
    rho = assemble_mixture(mix)
    bound = mixture_negativity_bound(mix)
    assert negativity_exact(rho).value <= bound + 1e-10
    assert bound == pytest.approx(component_negativity_sum(mix), abs=1e-12)
    assert norm_additivity_residual(mix) <= 1e-15
    assert norm_additivity_gap(mix) <= 1e-12
