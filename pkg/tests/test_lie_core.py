"""Tests for the su(n) structure layer."""

import math

import numpy as np
import pytest

from nahm_implosion.exceptions import LieAlgebraError, StratumError, TripleError
from nahm_implosion.lie_core import (
    Su2Triple,
    adjoint_matrix,
    as_lie_element,
    asymptotic_relation_residuals,
    bracket,
    centralizer_blocks,
    chern_simons,
    chern_simons_gradient,
    hessian_form,
    inner,
    integer_partitions,
    irreducible_triple,
    project_stratum,
    random_asymptotic_data,
    random_block_unitary,
    random_lie_element,
    random_unitary,
    root_spaces,
    stability_constants,
    su2_triple_from_partition,
    su_basis,
    triple_residual,
)


def test_inner_is_positive_and_ad_invariant(rng):
    """Test the invariant inner product on random elements."""
    x, y, z = (random_lie_element(3, rng) for _ in range(3))
    assert inner(x, x) > 0
    assert inner(x, bracket(y, z)) == pytest.approx(inner(bracket(x, y), z), abs=1e-12)
    assert inner(x, y) == pytest.approx(inner(y, x), abs=1e-12)


def test_bracket_dimension_mismatch():
    """Test that brackets of different sizes are rejected."""
    with pytest.raises(LieAlgebraError, match="Dimension mismatch"):
        bracket(np.zeros((2, 2)), np.zeros((3, 3)))


def test_as_lie_element_rejects_hermitian_and_trace():
    """Test validation of su(n) elements."""
    with pytest.raises(LieAlgebraError, match="skew-Hermitian"):
        as_lie_element(np.eye(2))
    with pytest.raises(LieAlgebraError, match="traceless"):
        as_lie_element(1j * np.eye(2))
    with pytest.raises(LieAlgebraError, match="square"):
        as_lie_element(np.zeros((2, 3)))


def test_su_basis_is_orthonormal():
    """Test that the su(n) basis is orthonormal for the inner product."""
    basis = su_basis(3)
    assert basis.shape == (8, 3, 3)
    gram = inner(basis[:, None], basis[None, :])
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-12)


def test_random_unitary_is_special_unitary(rng):
    """Test Haar samples lie in SU(n)."""
    u = random_unitary(4, rng)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
    assert abs(np.linalg.det(u) - 1.0) < 1e-12


def test_centralizer_blocks_su3(su3_stratum):
    """Test block structure and constants of the (2, 1) stratum."""
    assert su3_stratum.blocks == (2, 1)
    assert su3_stratum.dims() == {"center": 1, "derived": 3, "perp": 4}
    assert su3_stratum.eta == pytest.approx(9.0)
    assert 0.0 < su3_stratum.zeta <= 2.0


def test_centralizer_blocks_zero_triple(su2_zero_stratum):
    """Test that tau = 0 gives c = su(2) and an infinite eta."""
    assert su2_zero_stratum.blocks == (2,)
    assert su2_zero_stratum.dims() == {"center": 0, "derived": 3, "perp": 0}
    assert math.isinf(su2_zero_stratum.eta)


def test_centralizer_blocks_non_contiguous(diagonal):
    """Test that equal entries need not be adjacent."""
    zero = np.zeros((3, 3), dtype=complex)
    s = centralizer_blocks([diagonal(1.0, -2.0, 1.0), zero, zero])
    assert s.labels == (0, 1, 0)
    assert s.blocks == (2, 1)
    assert not s.is_contiguous


def test_centralizer_blocks_rejects_bad_triples(rng, diagonal):
    """Test errors for non-diagonal and malformed triples."""
    zero = np.zeros((2, 2), dtype=complex)
    with pytest.raises(StratumError, match="diagonal"):
        centralizer_blocks([random_lie_element(2, rng), zero, zero])
    with pytest.raises(StratumError, match="triple"):
        centralizer_blocks([diagonal(1.0, -1.0), zero])


def test_project_stratum_reassembles(su3_stratum, rng):
    """Test that the three projections sum back to the input."""
    x = random_lie_element(3, rng)
    d0, d1, h = project_stratum(x, su3_stratum)
    np.testing.assert_allclose(d0 + d1 + h, x, atol=1e-14)
    assert inner(d0, h) == pytest.approx(0.0, abs=1e-12)
    assert inner(d1, h) == pytest.approx(0.0, abs=1e-12)


def test_random_block_unitary_derived(su3_stratum, rng):
    """Test that derived block unitaries have unit determinant per block."""
    c = random_block_unitary(su3_stratum, rng, derived=True)
    for members in su3_stratum.groups:
        assert abs(np.linalg.det(c[np.ix_(members, members)]) - 1.0) < 1e-12


def test_irreducible_triple_relations():
    """Test the bracket relations of irreducible triples."""
    for d in (2, 3, 4):
        assert triple_residual(irreducible_triple(d)) < 1e-12


def test_su2_triple_from_partition(su3_stratum, su3_sigma):
    """Test the principal triple of the (2, 1) centraliser."""
    assert triple_residual(su3_sigma.sigma) < 1e-12
    for s in su3_sigma.sigma:
        d0, _, h = project_stratum(s, su3_stratum)
        assert np.max(np.abs(d0 + h)) < 1e-12


def test_su2_triple_from_partition_mismatch(su3_stratum):
    """Test that partitions must match the block sizes."""
    with pytest.raises(StratumError, match="does not sum"):
        su2_triple_from_partition(su3_stratum, [(1,), (1,)])
    with pytest.raises(StratumError, match="Expected 2 partitions"):
        su2_triple_from_partition(su3_stratum, [(2,)])


def test_triple_validation_failure(rng):
    """Test that random matrices are not an su(2)-triple."""
    with pytest.raises(TripleError) as exc_info:
        Su2Triple.validated([random_lie_element(2, rng) for _ in range(3)])
    assert exc_info.value.residual > 1e-3


def test_integer_partitions():
    """Test partition enumeration."""
    assert list(integer_partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(integer_partitions(0)) == [()]


def test_stability_spectra_zero_triple(su2_zero_stratum):
    """Test that the Hessian at zero is twice the identity on c^3."""
    spectra = stability_constants(Su2Triple.zero(2), su2_zero_stratum)
    np.testing.assert_allclose(spectra.hess_spectrum, np.full(9, 2.0), atol=1e-12)
    assert spectra.zeta_bound == pytest.approx(2.0)


def test_stability_spectra_principal_casimir(su2_zero_stratum, principal_su2, rng):
    """Test the principal su(2) Casimir spectrum and its conjugation invariance."""
    spectra = stability_constants(principal_su2, su2_zero_stratum)
    np.testing.assert_allclose(spectra.casimir_spectrum, np.full(3, 8.0), atol=1e-10)
    for _ in range(3):
        moved = stability_constants(principal_su2.conjugated(random_unitary(2, rng)), su2_zero_stratum)
        np.testing.assert_allclose(moved.hess_spectrum, spectra.hess_spectrum, atol=1e-8)
        np.testing.assert_allclose(moved.casimir_spectrum, spectra.casimir_spectrum, atol=1e-8)


def test_chern_simons_gradient_matches_finite_difference(rng):
    """Test the analytic gradient against a central difference."""
    xi = [random_lie_element(3, rng) for _ in range(3)]
    psi = [random_lie_element(3, rng) for _ in range(3)]
    h = 1e-5
    plus = chern_simons([x + h * p for x, p in zip(xi, psi)])
    minus = chern_simons([x - h * p for x, p in zip(xi, psi)])
    gradient = chern_simons_gradient(xi)
    expected = sum(inner(g, p) for g, p in zip(gradient, psi))
    assert (plus - minus) / (2 * h) == pytest.approx(expected, abs=1e-6)


def test_hessian_form_matches_mixed_difference(principal_su2, rng):
    """Test the bilinear Hessian against a mixed central difference."""
    sigma = principal_su2.sigma
    xi = [random_lie_element(2, rng) for _ in range(3)]
    psi = [random_lie_element(2, rng) for _ in range(3)]
    h = 1e-3

    def phi(a, b):
        return chern_simons([s + a * x + b * p for s, x, p in zip(sigma, xi, psi)])

    mixed = (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / (4 * h * h)
    assert mixed == pytest.approx(hessian_form(sigma, xi, psi), abs=1e-5)


def test_chern_simons_rejects_elements_outside_c(su3_stratum, rng):
    """Test the subalgebra guard of the Chern-Simons functional."""
    with pytest.raises(LieAlgebraError):
        chern_simons([random_lie_element(3, rng) for _ in range(3)], su3_stratum)


def test_root_spaces_regular_su2(su2_regular_stratum, diagonal):
    """Test the single root space of a regular su(2) element."""
    spaces = root_spaces(diagonal(0.7, -0.7), su2_regular_stratum)
    assert len(spaces) == 1
    assert spaces[0].alpha_value == pytest.approx(1.4)
    i0 = spaces[0].i0_matrix
    np.testing.assert_allclose(i0 @ i0, -np.eye(2), atol=1e-12)


def test_root_spaces_too_degenerate(su2_regular_stratum):
    """Test that tau_1 must separate the blocks of the stratum."""
    with pytest.raises(StratumError, match="more degenerate"):
        root_spaces(np.zeros((2, 2), dtype=complex), su2_regular_stratum)


def test_asymptotic_relations_hold_for_random_data(su3_stratum, rng):
    """Test the algebraic relations on random (delta, eps)."""
    delta, eps = random_asymptotic_data(su3_stratum, rng)
    residuals = asymptotic_relation_residuals(su3_stratum, delta, eps)
    assert max(residuals.values()) < 1e-10


def test_adjoint_matrix_is_skew_and_reproduces_bracket(rng):
    """Test ad(x) in an orthonormal basis against the bracket itself."""
    basis = su_basis(3)
    x = random_lie_element(3, rng)
    M = adjoint_matrix(x, basis)
    np.testing.assert_allclose(M, -M.T, atol=1e-12)
    rebuilt = np.einsum("pq,pij->qij", M, basis)
    np.testing.assert_allclose(rebuilt, bracket(x, basis), atol=1e-12)
