"""Tests for discretised Nahm flows."""

import math

import numpy as np
import pytest

from nahm_implosion.exceptions import (
    AsymptoticsError,
    GridError,
    IntegrationBlowUpError,
    LieAlgebraError,
    TripleError,
)
from nahm_implosion.lie_core import bracket, random_lie_element
from nahm_implosion.nahm_dynamics import (
    Grid,
    NahmPath,
    TangentAsymptotics,
    TangentVector,
    decay_diagnostics,
    extrapolated_limits,
    horizontality_residual,
    integrate_ivp,
    linearized_residual,
    model_solution,
    nahm_residual,
    rescale_path,
    rescale_tangent,
    sup_norm,
)


def _constant_path(grid, mats):
    samples = np.broadcast_to(np.stack(mats), (grid.size, 4) + mats[0].shape)
    return NahmPath(grid=grid, samples=samples)


def test_grid_validation():
    """Test grid construction errors."""
    with pytest.raises(GridError, match="at least 16"):
        Grid(nodes=np.linspace(0, 1, 8), kind="interval")
    with pytest.raises(GridError, match="start at 0"):
        Grid(nodes=np.linspace(1, 2, 32), kind="interval")
    with pytest.raises(GridError, match="strictly increasing"):
        Grid(nodes=np.r_[0.0, np.linspace(1, 0.5, 31)], kind="interval")
    with pytest.raises(GridError, match="Unknown grid kind"):
        Grid(nodes=np.linspace(0, 1, 32), kind="circle")


def test_halfline_grid_endpoints():
    """Test the geometric half-line grid."""
    grid = Grid.halfline(40.0, 2048)
    assert grid.size == 2049
    assert grid.nodes[0] == 0.0
    assert grid.t_max == 40.0
    assert np.all(np.diff(grid.nodes) > 0)


def test_grid_integrate_polynomial(interval_grid):
    """Test that Simpson quadrature integrates cubics exactly."""
    t = interval_grid.nodes
    assert interval_grid.integrate(t ** 3 - t) == pytest.approx(-0.25, abs=1e-14)


def test_model_solution_constant_path(su2_regular_stratum, halfline_grid):
    """Test that sigma = 0 and tau0 = 0 gives the constant path."""
    T = model_solution(None, su2_regular_stratum.tau, None, halfline_grid)
    np.testing.assert_allclose(T.samples[-1, 1], su2_regular_stratum.tau[0])
    assert sup_norm(nahm_residual(T)) == 0.0


def test_model_solution_su2_principal(su2_zero_stratum, principal_su2, halfline_grid):
    """Test the closed form sigma_i / (2(t+1)) and its vanishing residual."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, halfline_grid)
    t = halfline_grid.nodes
    expected = principal_su2.sigma[1][None] / (2 * (t[:, None, None] + 1))
    np.testing.assert_allclose(T.samples[:, 2], expected, atol=1e-15)
    assert sup_norm(nahm_residual(T)) < 1e-12


def test_model_solution_su3_with_tau0(su3_stratum, su3_sigma, halfline_grid, diagonal):
    """Test a model solution with a nonzero tau0 in Z(c)."""
    tau0 = diagonal(0.3, 0.3, -0.6)
    T = model_solution(tau0, su3_stratum.tau, su3_sigma, halfline_grid)
    assert sup_norm(nahm_residual(T)) < 1e-10
    np.testing.assert_allclose(T.asymptotics.tau0, tau0)


def test_model_solution_finite_difference_residual(su2_zero_stratum, principal_su2):
    """Test the three-point stencil on a fine half-line grid."""
    grid = Grid.halfline(20.0, 4096)
    exact = model_solution(None, su2_zero_stratum.tau, principal_su2, grid)
    T = NahmPath(grid=grid, samples=exact.samples, asymptotics=exact.asymptotics)
    assert sup_norm(nahm_residual(T)) < 1e-5


def test_model_solution_rejects_bad_data(su3_stratum, rng):
    """Test tau0 outside Z(c) and a non-triple sigma."""
    outside = np.zeros((3, 3), dtype=complex)
    outside[0, 2], outside[2, 0] = 1.0, -1.0
    grid = Grid.halfline(40.0, 256)
    with pytest.raises(LieAlgebraError, match="Z\\(c\\)"):
        model_solution(outside, su3_stratum.tau, None, grid)
    with pytest.raises(TripleError):
        model_solution(None, su3_stratum.tau, [random_lie_element(3, rng) for _ in range(3)], grid)


def test_residual_of_constant_non_commuting_pair(interval_grid, rng):
    """Test that T = (0, a, b, 0) has third residual -[a, b]."""
    a, b = random_lie_element(2, rng), random_lie_element(2, rng)
    zero = np.zeros((2, 2), dtype=complex)
    residual = nahm_residual(_constant_path(interval_grid, [zero, a, b, zero]))
    np.testing.assert_allclose(residual[:, 2], np.broadcast_to(-bracket(a, b), residual[:, 2].shape), atol=1e-12)
    assert np.max(np.abs(residual[:, 0])) < 1e-12


def test_path_asymptotics_contract(interval_grid, halfline_grid, su2_regular_stratum):
    """Test that only half-line paths carry asymptotic records."""
    halfline = model_solution(None, su2_regular_stratum.tau, None, halfline_grid)
    with pytest.raises(AsymptoticsError):
        NahmPath(grid=halfline_grid, samples=halfline.samples)
    with pytest.raises(AsymptoticsError):
        NahmPath(
            grid=interval_grid,
            samples=np.zeros((interval_grid.size, 4, 2, 2)),
            asymptotics=halfline.asymptotics,
        )


def test_integrate_ivp_recovers_model(principal_su2, interval_grid):
    """Test RK4 against the closed-form principal solution."""
    T = integrate_ivp([s / 2 for s in principal_su2.sigma], None, interval_grid)
    t = interval_grid.nodes[:, None, None]
    for i in range(3):
        np.testing.assert_allclose(T.samples[:, i + 1], principal_su2.sigma[i][None] / (2 * (t + 1)), atol=1e-8)


def test_integrate_ivp_commuting_constants(interval_grid, diagonal):
    """Test that commuting initial data stay constant."""
    data = [diagonal(1.0, -1.0), diagonal(0.5, -0.5), diagonal(-2.0, 2.0)]
    T = integrate_ivp(data, None, interval_grid)
    for i in range(3):
        np.testing.assert_allclose(T.samples[-1, i + 1], data[i], atol=1e-14)


def test_integrate_ivp_self_consistency(interval_grid, rng):
    """Test that the integrated path has a small residual."""
    initial = [0.2 * random_lie_element(2, rng) for _ in range(3)]
    T = integrate_ivp(initial, 0.2 * random_lie_element(2, rng), interval_grid)
    assert sup_norm(nahm_residual(T)[2:-2]) < 1e-5


def test_integrate_ivp_blow_up(principal_su2, interval_grid):
    """Test the blow-up guard at t = 1 / (2 |scale|)."""
    with pytest.raises(IntegrationBlowUpError) as exc_info:
        integrate_ivp([-s for s in principal_su2.sigma], None, interval_grid)
    assert exc_info.value.exit_code == 3
    assert 0.45 < exc_info.value.t < 0.55


def test_linearized_residual_matches_directional_derivative(su2_zero_stratum, principal_su2, interval_grid, rng):
    """Test the linearisation against a difference quotient."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    constant = np.stack([random_lie_element(2, rng) for _ in range(4)])
    samples = np.broadcast_to(constant, (interval_grid.size, 4, 2, 2))
    X = TangentVector(grid=interval_grid, samples=samples, derivatives=np.zeros_like(samples))
    theta = 1e-6
    quotient = (nahm_residual(T.perturbed(X, theta)) - nahm_residual(T)) / theta
    assert sup_norm(quotient - linearized_residual(T, X)) < 1e-4


def test_linearized_and_horizontality_of_zero(su2_zero_stratum, principal_su2, interval_grid):
    """Test that the zero tangent has zero residuals."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    X = TangentVector.zero(interval_grid, 2)
    assert sup_norm(linearized_residual(T, X)) == 0.0
    assert sup_norm(horizontality_residual(T, X)[:, None]) == 0.0


def test_horizontality_of_center_constants(su3_stratum, su3_sigma, halfline_grid, rng):
    """Test that constants in Z(c) are horizontal along the model solution."""
    T = model_solution(None, su3_stratum.tau, su3_sigma, halfline_grid)
    z = su3_stratum.center_basis[0]
    samples = np.zeros((halfline_grid.size, 4, 3, 3), dtype=complex)
    for i in range(1, 4):
        samples[:, i] = rng.normal() * z
    X = TangentVector(grid=halfline_grid, samples=samples, derivatives=np.zeros_like(samples))
    assert sup_norm(horizontality_residual(T, X)[:, None]) < 1e-12
    assert sup_norm(linearized_residual(T, X)) < 1e-12


def test_tangent_asymptotics_validation(su3_stratum, rng):
    """Test that delta outside Z(c) is rejected."""
    bad = np.stack([random_lie_element(3, rng) for _ in range(4)])
    with pytest.raises(AsymptoticsError, match="stratum relations"):
        TangentAsymptotics.build(bad, stratum=su3_stratum)


def test_grid_mismatch_is_rejected(su2_zero_stratum, interval_grid):
    """Test that residuals need a shared grid."""
    T = model_solution(None, su2_zero_stratum.tau, None, interval_grid)
    X = TangentVector.zero(Grid.interval(1.0, 513), 2)
    with pytest.raises(GridError, match="different grids"):
        linearized_residual(T, X)


def test_decay_diagnostics_recovers_exponents(su3_stratum, halfline_grid):
    """Test exponent recovery on synthetic D and H parts."""
    t = halfline_grid.nodes[:, None, None]
    zeta, eta = 0.5, 0.8
    d_part = su3_stratum.center_basis[0] / (1 + t) ** (1 + zeta)
    h_part = su3_stratum.perp_basis[0] * np.exp(-eta * t)
    report = decay_diagnostics(d_part + h_part, halfline_grid, su3_stratum)
    assert report.zeta_fit == pytest.approx(zeta, abs=0.05)
    assert report.eta_fit == pytest.approx(eta, abs=0.05)


def test_decay_diagnostics_vanishing_part(su3_stratum, halfline_grid):
    """Test that an identically zero H part reports an infinite rate."""
    t = halfline_grid.nodes[:, None, None]
    report = decay_diagnostics(su3_stratum.center_basis[0] / (1 + t) ** 2, halfline_grid, su3_stratum)
    assert math.isinf(report.eta_fit)
    assert report.zeta_fit == pytest.approx(1.0, abs=1e-6)


def test_decay_diagnostics_needs_long_halfline(su3_stratum):
    """Test the grid precondition."""
    grid = Grid.halfline(10.0, 256)
    with pytest.raises(GridError, match="T_max >= 20"):
        decay_diagnostics(np.zeros((grid.size, 3, 3)), grid, su3_stratum)


def test_extrapolated_limits_recover_tau(su3_stratum, su3_sigma, halfline_grid):
    """Test that subtracting the model tail recovers tau."""
    T = model_solution(None, su3_stratum.tau, su3_sigma, halfline_grid)
    for estimate, tau in zip(extrapolated_limits(T), su3_stratum.tau):
        np.testing.assert_allclose(estimate, tau, atol=1e-14)


def test_rescaled_model_still_solves(su2_zero_stratum, principal_su2, halfline_grid):
    """Test that the homothety maps solutions to solutions."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, halfline_grid)
    moved = rescale_path(T, 2.0)
    assert moved.grid.t_max == pytest.approx(20.0)
    assert sup_norm(nahm_residual(moved)) < 1e-12


def test_rescale_tangent_scales_limits_only(halfline_grid, rng):
    """Test that the homothety scales samples and delta but keeps eps."""
    delta = [np.zeros((2, 2), dtype=complex)] + [random_lie_element(2, rng) for _ in range(3)]
    eps = [random_lie_element(2, rng) for _ in range(3)]
    samples = np.broadcast_to(np.stack(delta), (halfline_grid.size, 4, 2, 2))
    X = TangentVector(
        grid=halfline_grid, samples=samples, asymptotics=TangentAsymptotics.build(delta, eps)
    )
    moved = rescale_tangent(X, 4.0)
    assert moved.grid.t_max == pytest.approx(10.0)
    np.testing.assert_allclose(moved.samples, 4.0 * X.samples)
    np.testing.assert_allclose(moved.asymptotics.delta, 4.0 * X.asymptotics.delta)
    np.testing.assert_allclose(moved.asymptotics.eps, X.asymptotics.eps)
