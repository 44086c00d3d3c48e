"""
Tests for the Dirac algebra: defining relations, phases and the Hermitian basis.
"""
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from app.dependencies import get_clifford_service
from app.services.clifford_service import HERMITIAN_LABELS

COMPONENT = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)
MOMENTUM = arrays(np.float64, (3,), elements=COMPONENT)
MATRIX_PART = arrays(np.float64, (4, 4), elements=COMPONENT)
PROPERTY = settings(
    max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)


def test_every_relation_holds_exactly(clifford):
    residuals = clifford.clifford_residuals()

    assert residuals
    assert all(value == 0.0 for value in residuals.values()), {
        name: value for name, value in residuals.items() if value
    }


def test_entries_are_gaussian_integers(clifford):
    basis = clifford.dirac_representation()
    for name, matrix in basis.named().items():
        assert np.array_equal(matrix.real, np.round(matrix.real)), name
        assert np.array_equal(matrix.imag, np.round(matrix.imag)), name


def test_gamma5_product_phase_is_minus_i(clifford):
    assert clifford.gamma5_product_phase() == pytest.approx(-1j)


def test_gamma5_is_block_antidiagonal_identity(clifford):
    gamma5 = clifford.dirac_representation().gamma5
    expected = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])

    np.testing.assert_array_equal(gamma5, expected)


def test_alpha_commutator_gives_sigma(clifford):
    alpha = clifford.dirac_representation().alpha
    sigma = clifford.spin_matrices()

    np.testing.assert_array_equal(clifford.commutator(alpha[0], alpha[1]), 2j * sigma[2])
    np.testing.assert_array_equal(clifford.commutator(alpha[1], alpha[2]), 2j * sigma[0])


def test_spin_matrices_hermitian_literal_ones_are_not(clifford):
    for s in clifford.spin_matrices():
        np.testing.assert_array_equal(s, clifford.adjoint(s))
    for s in clifford.spin_matrices(literal=True):
        np.testing.assert_array_equal(s, -clifford.adjoint(s))


def test_sigma_squares_to_identity(clifford):
    for s in clifford.spin_matrices():
        np.testing.assert_array_equal(s @ s, np.eye(4))


def test_gamma_factor_anticommutes_with_beta_and_alpha(clifford):
    basis = clifford.dirac_representation()
    gamma = clifford.gamma_factor()

    assert not np.any(clifford.anticommutator(gamma, basis.beta))
    for a in basis.alpha:
        assert not np.any(clifford.anticommutator(gamma, a))


def test_hermitian_basis_labels_and_orthogonality(clifford):
    basis = clifford.dirac_representation()
    stacked = basis.stacked_basis
    gram = np.einsum("aji,bji->ab", stacked.conj(), stacked)

    assert basis.hermitian_labels == HERMITIAN_LABELS
    assert len(set(HERMITIAN_LABELS)) == 16
    np.testing.assert_array_equal(gram, 4.0 * np.eye(16))
    for m in stacked:
        np.testing.assert_array_equal(m, clifford.adjoint(m))


def test_decompose_basis_element_gives_unit_vector(clifford):
    stacked = clifford.dirac_representation().stacked_basis

    np.testing.assert_allclose(clifford.basis_decompose(stacked), np.eye(16), atol=1e-15)


@PROPERTY
@given(MOMENTUM)
def test_alpha_dot_squares_to_p_squared(p):
    clifford = get_clifford_service()
    m = clifford.alpha_dot(p)
    scale = max(1.0, float(p @ p))

    np.testing.assert_allclose(m @ m, (p @ p) * np.eye(4), atol=1e-13 * scale)


@PROPERTY
@given(real=MATRIX_PART, imag=MATRIX_PART)
def test_decompose_then_reconstruct(real, imag):
    clifford = get_clifford_service()
    m = real + 1j * imag
    scale = max(1.0, float(np.max(np.abs(m))))

    np.testing.assert_allclose(
        clifford.reconstruct(clifford.basis_decompose(m)), m, atol=1e-13 * scale
    )


def test_decompose_accepts_stacks(clifford):
    rng = np.random.default_rng(3)
    stack = rng.normal(size=(5, 4, 4)) + 1j * rng.normal(size=(5, 4, 4))

    coefficients = clifford.basis_decompose(stack)

    assert coefficients.shape == (5, 16)
    np.testing.assert_allclose(clifford.reconstruct(coefficients), stack, atol=1e-13)


def test_representation_is_built_once(clifford):
    assert get_clifford_service() is clifford
    assert clifford.dirac_representation() is clifford.dirac_representation()


def test_alpha_product_decomposes_onto_sigma3(clifford):
    alpha = clifford.dirac_representation().alpha
    coefficients = clifford.basis_decompose(clifford.mul(alpha[0], alpha[1]))
    expected = np.zeros(16, dtype=complex)
    expected[HERMITIAN_LABELS.index("Sigma3")] = 1j

    np.testing.assert_allclose(coefficients, expected, atol=1e-15)


def test_zero_decomposes_to_zero(clifford):
    assert not np.any(clifford.basis_decompose(np.zeros((4, 4), dtype=complex)))


@PROPERTY
@given(a_re=MATRIX_PART, a_im=MATRIX_PART, b_re=MATRIX_PART, b_im=MATRIX_PART)
def test_adjoint_reverses_products(a_re, a_im, b_re, b_im):
    clifford = get_clifford_service()
    a, b = a_re + 1j * a_im, b_re + 1j * b_im

    np.testing.assert_allclose(
        clifford.adjoint(clifford.mul(a, b)),
        clifford.mul(clifford.adjoint(b), clifford.adjoint(a)),
        atol=1e-10,
    )
