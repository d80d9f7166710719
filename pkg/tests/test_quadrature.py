import math

import numpy as np
import pytest
import sympy as sp

from krein.fock import truncated_basis
from krein.operators import GuardedSubspace, ladder_ops, position_momentum
from krein.quadrature import (
    QuadratureGrid,
    RhoCutoffError,
    action_matrix,
    fock_wavefunction,
    growth_exponent,
    krein_integral_inner,
    quadrature_gram,
    rho_integral_closed_form,
    rho_integral_demo,
    unitary_integral_inner,
)
from krein.symbols import P, VARIABLES, X, Symbol, phi0
from krein.symbols.actions import eta_creation, generator_table, p_left, x_left


def test_invariant_gaussian_has_unit_norm():
    assert krein_integral_inner(phi0(), phi0()) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize(
    ("n", "norm"),
    [((1, 0, 0, 0), -1.0), ((0, 1, 0, 0), 1.0), ((2, 0, 0, 0), 1.0), ((1, 0, 1, 0), -1.0)],
)
def test_fock_wavefunction_norms(n, norm):
    phi = fock_wavefunction(n)
    assert krein_integral_inner(phi, phi) == pytest.approx(norm, abs=1e-10)


def test_fock_wavefunctions_are_orthogonal():
    a = fock_wavefunction((1, 0, 0, 0))
    b = fock_wavefunction((0, 1, 0, 0))
    c = fock_wavefunction((0, 0, 0, 0))
    assert abs(krein_integral_inner(a, b)) < 1e-10
    assert abs(krein_integral_inner(c, fock_wavefunction((2, 0, 0, 0)))) < 1e-10


def test_gram_at_level_one():
    basis = truncated_basis(1)
    gram = quadrature_gram(basis, QuadratureGrid(nodes=24))
    assert np.allclose(gram, np.diag(basis.parities), atol=1e-10)


def test_position_action_matrix_is_eta_hermitian():
    basis = truncated_basis(1)
    matrix = action_matrix(x_left(1), basis, QuadratureGrid(nodes=24))
    eta = np.diag(basis.parities)
    assert np.allclose(eta @ matrix.conj().T @ eta, matrix, atol=1e-10)
    assert np.abs(matrix).max() > 0.5


def test_central_generator_matrix_is_identity():
    basis = truncated_basis(1)
    entry = generator_table()[next(g for g in generator_table() if g.kind == "I")]
    matrix = action_matrix(entry.left, basis, QuadratureGrid(nodes=24))
    assert np.allclose(matrix, np.eye(basis.size), atol=1e-10)


def test_factorized_method_rejects_coupled_exponents():
    coupled = Symbol.gaussian(-(X[1] ** 2 + X[2] ** 2 + P[1] ** 2) / 2 + X[1] * X[2] / 4)
    with pytest.raises(ValueError):
        krein_integral_inner(coupled, phi0(), method="factorized")


@pytest.mark.slow
def test_tensor_grid_agrees():
    grid = QuadratureGrid(nodes=8, tensor_nodes=8)
    assert krein_integral_inner(phi0(), phi0(), grid, method="tensor") == pytest.approx(1.0, abs=1e-10)


def test_grid_needs_nodes():
    with pytest.raises(ValueError):
        QuadratureGrid(nodes=0)


def test_flat_measure_diverges_for_invariant_gaussian():
    series = unitary_integral_inner(phi0(), phi0(), cutoffs=(1, 2, 3), nodes=80)
    assert series.divergent
    magnitudes = np.abs(series.values)
    assert np.all(magnitudes[1:] > 10 * magnitudes[:-1])


def test_flat_measure_converges_for_euclidean_gaussian():
    psi = Symbol.gaussian(-sum(v**2 for v in VARIABLES) / 2)
    series = unitary_integral_inner(psi, psi, cutoffs=(2, 4, 6), nodes=80)
    assert not series.divergent
    assert series.values[-1] == pytest.approx(1.0, abs=1e-8)


def test_growth_exponent():
    assert growth_exponent(phi0(), np.zeros(4), (3.0, 0.0, 0.0, 0.0)) == pytest.approx(9.0)
    assert growth_exponent(phi0(), np.zeros(4), (0.0, 3.0, 0.0, 0.0)) == pytest.approx(-9.0)


def test_rho_integral():
    assert rho_integral_demo(0.9) == pytest.approx(6.2090, abs=1e-4)
    assert rho_integral_closed_form(0.9) == pytest.approx(0.9 / 0.19 + math.atanh(0.9))
    assert rho_integral_demo(0.0) == 0.0


def test_rho_integral_asymptotics():
    rho = 1 - 1e-4
    assert rho_integral_demo(rho) * (1 - rho) == pytest.approx(0.5, rel=0.01)


@pytest.mark.parametrize("rho", [1.0, -0.1, 1.5])
def test_rho_cutoff_range(rho: float):
    with pytest.raises(RhoCutoffError):
        rho_integral_demo(rho)
    with pytest.raises(ValueError):
        rho_integral_closed_form(rho)


def test_fock_wavefunction_normalization_factor():
    phi = fock_wavefunction((0, 1, 0, 0))
    assert phi == phi0() * (X[1] - sp.I * P[1])


@pytest.mark.slow
@pytest.mark.parametrize("mu", range(4))
def test_left_actions_match_fock_operators(mu: int):
    basis = truncated_basis(2)
    grid = QuadratureGrid(nodes=24)
    columns = GuardedSubspace(basis, 1).positions
    positions, momenta = position_momentum(basis)
    _, raising = ladder_ops(basis)
    for action, operator in (
        (x_left(mu), positions[mu]),
        (p_left(mu), momenta[mu]),
        (eta_creation(mu), raising[mu]),
    ):
        matrix = action_matrix(action, basis, grid)
        assert np.allclose(matrix[:, columns], operator.toarray()[:, columns], atol=1e-8)
