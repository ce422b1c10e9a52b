import math

import numpy as np
import pytest

from sc_negativity.dynamics import (
    AdditiveObservable,
    DephasingModel,
    bell_model,
    conservation_residual,
    evolve_closed_form,
    integrate_rk4,
    liouville_rhs,
    negativity_time_series,
    random_model,
    rk4_trajectory,
)
from sc_negativity.errors import DimensionMismatch, ValidationFailed
from sc_negativity.negativity import negativity_exact
from sc_negativity.states import PureSchmidtVector, detect_sc, random_density, BipartiteDims, sc_embed, sc_from_mixture

# e^{-2} / 2: the Bell coherence decays with exponent (0-1)^2 + (0-1)^2 = 2
BELL_N_AT_1 = 0.06766764161830635


def test_closed_form_at_zero_is_initial_state():
    model = random_model(4, 3)
    sc = evolve_closed_form(model, 0.0)
    np.testing.assert_allclose(sc.coeff, sc_from_mixture([1.0], [model.initial]).coeff, atol=1e-16, rtol=0)
    psi = np.zeros(16, dtype=complex)
    psi[[0, 5, 10, 15]] = model.initial.amps
    np.testing.assert_allclose(sc_embed(sc).mat, np.outer(psi, psi.conj()), atol=1e-16)


def test_closed_form_long_time_is_diagonal():
    model = DephasingModel([0, 1, 2], [0.5, 0, 1], PureSchmidtVector(np.ones(3) / math.sqrt(3)))
    sc = evolve_closed_form(model, 200.0)
    np.testing.assert_allclose(sc.coeff, np.eye(3) / 3, atol=1e-15)


def test_bell_model_value():
    sc = evolve_closed_form(bell_model(), 1.0)
    assert sc.coeff[0, 1] == pytest.approx(BELL_N_AT_1, abs=1e-15)
    assert negativity_time_series(bell_model(), [1.0]).values[0] == pytest.approx(BELL_N_AT_1, abs=1e-15)
    model = bell_model()
    rho = integrate_rk4(sc_embed(evolve_closed_form(model, 0)), model.observable(), 1.0, 1e-3)
    assert negativity_exact(rho).value == pytest.approx(BELL_N_AT_1, abs=1e-10)


def test_time_series_initial_value():
    model = random_model(4, 5)
    c = np.abs(model.initial.amps)
    assert negativity_time_series(model, [0.0]).values[0] == pytest.approx(0.5 * (c.sum() ** 2 - 1), abs=1e-14)


def test_time_series_degenerate_spectra_constant():
    model = DephasingModel([1, 1, 1], [2, 2, 2], PureSchmidtVector(np.array([0.6, 0.0, 0.8])))
    values = negativity_time_series(model, [0, 1, 2, 5]).values
    assert len(set(values)) == 1


@pytest.mark.parametrize("seed", range(4))
def test_time_series_matches_pipeline_and_decays(seed):
    model = random_model(3 + seed % 2, seed)
    times = np.linspace(0, 3, 13)
    series = negativity_time_series(model, times)
    for t, v in zip(series.times, series.values):
        assert v == pytest.approx(negativity_exact(sc_embed(evolve_closed_form(model, t))).value, abs=1e-10)
    assert all(b < a for a, b in zip(series.values, series.values[1:]))


def test_rhs_commuting_fixed_point():
    model = random_model(3, 1)
    rho = np.diag(np.random.default_rng(0).dirichlet(np.ones(9))).astype(complex)
    np.testing.assert_array_equal(liouville_rhs(rho, model.observable()), 0)


def test_rhs_bell(bell_density):
    obs = AdditiveObservable(np.diag([0.0, 1.0]), np.diag([0.0, 1.0]))
    rhs = liouville_rhs(bell_density.mat, obs)
    expected = np.zeros((4, 4))
    expected[0, 3] = expected[3, 0] = -2 * 0.5
    np.testing.assert_allclose(rhs, expected, atol=1e-15)


def test_rhs_traceless_and_hermitian():
    rng = np.random.default_rng(4)
    rho = random_density(BipartiteDims(2, 3), 6, 2)
    x, y = (rng.standard_normal((k, k)) for k in (2, 3))
    obs = AdditiveObservable(x + x.T, y + y.T)
    rhs = liouville_rhs(rho.mat, obs)
    assert abs(np.trace(rhs)) <= 1e-12
    np.testing.assert_allclose(rhs, rhs.conj().T, atol=1e-14)
    with pytest.raises(DimensionMismatch):
        liouville_rhs(np.eye(4), obs)


def test_rk4_zero_time():
    model = random_model(3, 2)
    rho0 = sc_embed(evolve_closed_form(model, 0))
    np.testing.assert_array_equal(integrate_rk4(rho0, model.observable(), 0.0, 1e-3).mat, rho0.mat)


def test_rk4_matches_closed_form():
    model = random_model(3, 8)
    rho0 = sc_embed(evolve_closed_form(model, 0))
    rho = integrate_rk4(rho0, model.observable(), 1.0, 1e-3)
    assert np.max(np.abs(rho.mat - sc_embed(evolve_closed_form(model, 1.0)).mat)) <= 1e-6


def test_rk4_fourth_order():
    model = DephasingModel([0, 1.5, 2.0], [0.3, 0.0, 1.9], PureSchmidtVector(np.array([0.6, 0.48j, 0.64])))
    rho0 = sc_embed(evolve_closed_form(model, 0))
    exact = sc_embed(evolve_closed_form(model, 1.0)).mat
    errs = [np.max(np.abs(integrate_rk4(rho0, model.observable(), 1.0, dt).mat - exact)) for dt in (0.025, 0.0125)]
    assert 12 < errs[0] / errs[1] < 20


def test_rk4_unstable_step_fails_validation():
    model = DephasingModel([0, 3], [0, 3], PureSchmidtVector(np.ones(2) / math.sqrt(2)))
    rho0 = sc_embed(evolve_closed_form(model, 0))
    with pytest.raises(ValidationFailed):
        integrate_rk4(rho0, model.observable(), 5.0, 0.5)


def test_conservation():
    model = random_model(4, 6)
    obs = model.observable()
    closed = [sc_embed(evolve_closed_form(model, t)) for t in (0, 0.5, 1, 5)]
    assert conservation_residual(closed, obs) <= 1e-12
    traj = rk4_trajectory(closed[0], obs, [0, 0.5, 1.0], 1e-3)
    assert conservation_residual(traj, obs) <= 1e-8
    assert conservation_residual([closed[0]] * 3, obs) == 0


def test_sc_preserved_and_purity_decreases():
    model = random_model(4, 9)
    purities = []
    for t in np.linspace(0, 4, 9):
        rho = sc_embed(evolve_closed_form(model, t))
        assert detect_sc(rho, 1e-14) is not None
        purities.append(np.trace(rho.mat @ rho.mat).real)
    assert all(b <= a + 1e-15 for a, b in zip(purities, purities[1:]))
    obs = model.observable()
    for rho in rk4_trajectory(sc_embed(evolve_closed_form(model, 0)), obs, [0.5, 1.0], 1e-3):
        assert detect_sc(rho, 1e-12) is not None
