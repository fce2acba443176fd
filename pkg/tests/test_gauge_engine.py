"""Tests for gauge actions, gauge fixing and Kronheimer's map."""

import numpy as np
import pytest
from scipy import linalg

from nahm_implosion.exceptions import AsymptoticsError, GridError, LieAlgebraError, ToleranceError
from nahm_implosion.gauge_engine import (
    GaugeAlgebraPath,
    GaugePath,
    apply_gauge,
    center_tau0_gauge,
    complex_equation_residual,
    complex_gauge_apply,
    fundamental_vector_field,
    gauge_T0_to_zero,
    holomorphic_coordinates,
    kronheimer_inverse,
    kronheimer_map,
    model_complex_pair,
    polar_decompose,
    polar_reconstruct,
    tau0_centering_generator,
    unitary_interpolant,
    unitary_log,
)
from nahm_implosion.lie_core import random_block_unitary, random_lie_element, random_unitary
from nahm_implosion.nahm_dynamics import NahmPath, model_solution, nahm_residual, sup_norm
from nahm_implosion.scenarios.gauge import bump_gauge


def _constant_path(grid, mats):
    samples = np.broadcast_to(np.stack(mats), (grid.size, 4) + mats[0].shape)
    return NahmPath(grid=grid, samples=samples, derivatives=np.zeros(samples.shape, dtype=complex))


def test_identity_gauge_leaves_path_unchanged(su2_zero_stratum, principal_su2, interval_grid):
    """Test that u = 1 acts trivially."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    moved = apply_gauge(GaugePath.identity(interval_grid, 2), T)
    np.testing.assert_allclose(moved.samples, T.samples, atol=1e-15)


def test_constant_centraliser_gauge_fixes_model(su3_stratum, halfline_grid, rng):
    """Test that a constant element of [C,C] fixes the sigma = 0 model solution."""
    T = model_solution(None, su3_stratum.tau, None, halfline_grid)
    c = random_block_unitary(su3_stratum, rng, derived=True)
    moved = apply_gauge(GaugePath.constant(halfline_grid, c), T)
    np.testing.assert_allclose(moved.samples, T.samples, atol=1e-12)


def test_half_line_gauge_needs_limit_data(su3_stratum, halfline_grid, rng):
    """Test that the half-line action checks the limit of u."""
    T = model_solution(None, su3_stratum.tau, None, halfline_grid)
    u = GaugePath.constant(halfline_grid, random_unitary(3, rng))
    with pytest.raises(AsymptoticsError, match="centralise sigma"):
        apply_gauge(u, T)


def test_gauge_preserves_residual(su2_zero_stratum, principal_su2, interval_grid, rng):
    """Test that the Nahm residual of a solution stays zero under a bump gauge."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    u = bump_gauge(interval_grid, random_lie_element(2, rng))
    moved = apply_gauge(u, T)
    assert sup_norm(nahm_residual(moved)) < 1e-8
    np.testing.assert_allclose(moved.samples[0, 1:], T.samples[0, 1:], atol=1e-12)


def test_unitary_gauge_path_validation(interval_grid):
    """Test that non-unitary samples are rejected."""
    with pytest.raises(ToleranceError, match="leaves SU"):
        GaugePath.constant(interval_grid, 2.0 * np.eye(2))


def test_fundamental_vector_field_of_zero(su2_zero_stratum, principal_su2, interval_grid):
    """Test that xi = 0 generates the zero tangent."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    xi = GaugeAlgebraPath(grid=interval_grid, samples=np.zeros((interval_grid.size, 2, 2)))
    X = fundamental_vector_field(xi, T)
    assert sup_norm(X.samples) == 0.0


def test_fundamental_vector_field_flow_oracle(su2_zero_stratum, principal_su2, interval_grid, rng):
    """Test X^xi against the difference quotient of exp(theta xi)."""
    T = model_solution(None, su2_zero_stratum.tau, principal_su2, interval_grid)
    a = random_lie_element(2, rng)
    w = np.pi
    profile = (lambda t: np.sin(w * t), lambda t: w * np.cos(w * t), lambda t: -w * w * np.sin(w * t))
    xi = GaugeAlgebraPath.from_profiles(interval_grid, [(a,) + profile])
    theta = 1e-6
    u = GaugePath.one_parameter(interval_grid, theta * a, *profile)
    quotient = (apply_gauge(u, T).samples - T.samples) / theta
    assert sup_norm(quotient - fundamental_vector_field(xi, T).samples) < 1e-4


def test_gauge_algebra_path_must_vanish_at_zero(interval_grid):
    """Test the xi(0) = 0 invariant."""
    samples = np.ones((interval_grid.size, 2, 2), dtype=complex)
    with pytest.raises(LieAlgebraError, match="vanish at t = 0"):
        GaugeAlgebraPath(grid=interval_grid, samples=samples)


def test_gauge_T0_to_zero_trivial(interval_grid, rng):
    """Test that T0 = 0 gives the identity gauge."""
    zero = np.zeros((2, 2), dtype=complex)
    T = _constant_path(interval_grid, [zero] + [random_lie_element(2, rng) for _ in range(3)])
    u, moved = gauge_T0_to_zero(T)
    np.testing.assert_allclose(u.samples, np.broadcast_to(np.eye(2), u.samples.shape), atol=1e-14)
    np.testing.assert_allclose(moved.samples, T.samples, atol=1e-14)


def test_gauge_T0_to_zero_constant(interval_grid, rng):
    """Test that a constant T0 = c gives u(t) = exp(t c)."""
    c = random_lie_element(2, rng)
    T = _constant_path(interval_grid, [c] + [random_lie_element(2, rng) for _ in range(3)])
    u, moved = gauge_T0_to_zero(T)
    expected = linalg.expm(interval_grid.nodes[:, None, None] * c)
    np.testing.assert_allclose(u.samples, expected, atol=1e-9)
    assert sup_norm(moved.samples[:, 0][:, None]) < 1e-8


def test_center_tau0_gauge_closed_form(su2_regular_stratum, halfline_grid, diagonal):
    """Test the centred T0 against c b e^{-ct} tau0."""
    tau0 = diagonal(0.3, -0.3)
    T = model_solution(tau0, su2_regular_stratum.tau, None, halfline_grid)
    t = halfline_grid.nodes[:, None, None]
    for b, c in ((1.0, 1.0), (2.0, 0.5)):
        _, centred = center_tau0_gauge(T, b, c)
        np.testing.assert_allclose(centred.samples[:, 0], c * b * np.exp(-c * t) * tau0, atol=1e-9)
        assert np.max(np.abs(centred.asymptotics.tau0)) < 1e-15


def test_tau0_centering_generator(su2_regular_stratum, halfline_grid, diagonal):
    """Test xi(0) = 0, slope tau0 and limit 0."""
    tau0 = diagonal(0.3, -0.3)
    T = model_solution(tau0, su2_regular_stratum.tau, None, halfline_grid)
    xi = tau0_centering_generator(T, 1.0, 1.0)
    assert np.max(np.abs(xi.samples[0])) == 0.0
    np.testing.assert_allclose(xi.slope, tau0)
    assert np.max(np.abs(xi.limit)) == 0.0


def test_center_tau0_gauge_needs_asymptotics(interval_grid, su2_regular_stratum):
    """Test that interval paths cannot be centred."""
    T = model_solution(None, su2_regular_stratum.tau, None, interval_grid)
    with pytest.raises(AsymptoticsError):
        center_tau0_gauge(T, 1.0, 1.0)


def test_kronheimer_closed_forms(interval_grid, rng, diagonal):
    """Test Kronheimer's map on commuting constants and on T = (a, 0, 0, 0)."""
    zero = np.zeros((2, 2), dtype=complex)
    b2, b3 = diagonal(1.0, -1.0), diagonal(0.5, -0.5)
    point = kronheimer_map(_constant_path(interval_grid, [zero, zero, b2, b3]))
    np.testing.assert_allclose(point.g_end, np.eye(2), atol=1e-9)
    np.testing.assert_allclose(point.beta0, b2 + 1j * b3, atol=1e-15)

    a = random_lie_element(2, rng)
    point = kronheimer_map(_constant_path(interval_grid, [a, zero, zero, zero]))
    np.testing.assert_allclose(point.g_end, linalg.expm(a), atol=1e-9)


def test_kronheimer_invariance(interval_grid, rng):
    """Test invariance under gauges equal to 1 at both ends."""
    T = kronheimer_inverse(random_unitary(2, rng), [np.zeros((2, 2))] * 3, interval_grid)
    reference = kronheimer_map(T)
    for _ in range(3):
        moved = kronheimer_map(apply_gauge(bump_gauge(interval_grid, random_lie_element(2, rng)), T))
        np.testing.assert_allclose(moved.g_end, reference.g_end, atol=1e-8)
        np.testing.assert_allclose(moved.beta0, reference.beta0, atol=1e-8)


def test_kronheimer_inverse_recovers_k(interval_grid, rng):
    """Test that the inverse map with c1 = 0 recovers k."""
    k = random_unitary(3, rng)
    T = kronheimer_inverse(k, [np.zeros((3, 3))] * 3, interval_grid)
    np.testing.assert_allclose(kronheimer_map(T).g_end, k, atol=1e-7)


def test_kronheimer_requires_interval(su2_regular_stratum, halfline_grid):
    """Test that half-line paths are rejected."""
    T = model_solution(None, su2_regular_stratum.tau, None, halfline_grid)
    with pytest.raises(GridError, match="interval"):
        kronheimer_map(T)


def test_unitary_log_round_trip(rng):
    """Test the traceless logarithm of special unitaries."""
    k = random_unitary(4, rng)
    log = unitary_log(k)
    np.testing.assert_allclose(linalg.expm(log), k, atol=1e-10)
    assert abs(np.trace(log)) < 1e-10


def test_complex_gauge_apply_preserves_equation(su2_zero_stratum, principal_su2, interval_grid, rng):
    """Test that complex gauge transformations preserve beta' = [beta, alpha]."""
    pair = model_complex_pair(su2_zero_stratum.tau, principal_su2.sigma, interval_grid)
    assert sup_norm(complex_equation_residual(pair)[:, None]) < 1e-12
    a = random_lie_element(2, rng) + 1j * random_lie_element(2, rng)
    g = bump_gauge(interval_grid, a, flavor="complexified")
    moved = complex_gauge_apply(g, pair)
    assert sup_norm(complex_equation_residual(moved)[:, None]) < 1e-7


def test_model_complex_pair_with_sigma(su2_zero_stratum, principal_su2, interval_grid):
    """Test the complexified principal model pair and its coordinates."""
    pair = model_complex_pair(su2_zero_stratum.tau, principal_su2.sigma, interval_grid)
    assert sup_norm(complex_equation_residual(pair)[:, None]) < 1e-12
    g0, coordinate = holomorphic_coordinates(
        GaugePath.identity(interval_grid, 2), su2_zero_stratum.tau, principal_su2.sigma
    )
    np.testing.assert_allclose(g0, np.eye(2))
    np.testing.assert_allclose(coordinate, principal_su2.sigma[1] + 1j * principal_su2.sigma[2])


def test_polar_decompose_round_trip(rng):
    """Test g = k exp(i xi) with k unitary and xi skew-Hermitian."""
    g = linalg.expm(random_lie_element(3, rng) + 1j * random_lie_element(3, rng))
    k, xi = polar_decompose(g)
    np.testing.assert_allclose(k @ k.conj().T, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(xi, -xi.conj().T, atol=1e-12)
    np.testing.assert_allclose(polar_reconstruct(k, xi), g, atol=1e-10)


def test_polar_decompose_rejects_singular():
    """Test the determinant guard."""
    with pytest.raises(ToleranceError):
        polar_decompose(np.zeros((2, 2)))


def test_unitary_interpolant_endpoints(interval_grid, rng):
    """Test that the interpolant runs from the identity to k through unitaries."""
    k = random_unitary(3, rng)
    u = unitary_interpolant(k, interval_grid)
    np.testing.assert_allclose(u.samples[0], np.eye(3), atol=1e-12)
    np.testing.assert_allclose(u.samples[-1], k, atol=1e-10)
    middle = u.samples[interval_grid.size // 2]
    np.testing.assert_allclose(middle @ middle.conj().T, np.eye(3), atol=1e-10)
