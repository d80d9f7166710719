import pytest
import sympy as sp

from krein.symbols import P, X, NotPolynomialError, as_symbol, p_lower, phi0, x_lower
from krein.symbols.flows import free_hamiltonian
from krein.symbols.star import (
    Side,
    moyal_bracket,
    poisson_bracket,
    star,
    star_apply,
    star_commutator,
)


@pytest.mark.parametrize("mu", range(4))
@pytest.mark.parametrize("nu", range(4))
def test_canonical_commutator(mu: int, nu: int):
    eta = {0: -1, 1: 1, 2: 1, 3: 1}[mu] if mu == nu else 0
    assert star_commutator(x_lower(mu), p_lower(nu)) == 2 * sp.I * eta


def test_first_order_product():
    assert star(X[1], P[1]) == as_symbol(X[1] * P[1] + sp.I)
    assert star(P[1], X[1]) == as_symbol(X[1] * P[1] - sp.I)


def test_associativity_on_polynomials():
    a = as_symbol(X[1] * P[2] + X[0] ** 2)
    b = as_symbol(P[1] ** 2 - X[2])
    c = as_symbol(X[1] * P[0] + P[2] ** 2)
    assert star(star(a, b), c) == star(a, star(b, c))


def test_associativity_with_gaussian():
    a = as_symbol(X[1] + P[0])
    b = as_symbol(P[1] * X[2])
    phi = phi0()
    assert star(star(a, b), phi) == star(a, star(b, phi))


def test_both_sides_gaussian_is_rejected():
    with pytest.raises(NotPolynomialError):
        star(phi0(), phi0())


def test_zero():
    assert star(0, phi0()).is_zero


def test_deformation_scales_corrections():
    lam = sp.Rational(1, 16)
    assert star_commutator(X[1], P[1], lam) == 2 * sp.I * lam
    assert moyal_bracket(X[1], P[1], lam) == 1


def test_star_apply_sides():
    g = as_symbol(X[1])
    phi = phi0()
    assert star_apply(g, phi, Side.LEFT) == star(g, phi)
    assert star_apply(g, phi, Side.RIGHT) == star(phi, g)
    with pytest.raises(NotPolynomialError):
        star_apply(phi, g)


def test_moyal_bracket_is_poisson_up_to_second_order():
    a = as_symbol(X[1] ** 2 * P[1] + X[2])
    b = as_symbol(P[1] ** 2 + X[1] * P[2])
    assert moyal_bracket(a, b) == poisson_bracket(a, b)


def test_moyal_bracket_has_third_order_correction():
    a = as_symbol(X[1] ** 3)
    b = as_symbol(P[1] ** 3)
    assert moyal_bracket(a, b) != poisson_bracket(a, b)


def test_poisson_bracket_signs():
    assert poisson_bracket(X[1], P[1]) == 1
    assert poisson_bracket(X[0], P[0]) == -1
    assert poisson_bracket(P[1], X[1]) == -1


def test_moyal_bracket_jacobi_identity():
    a = as_symbol(X[1] ** 3 + P[2])
    b = as_symbol(P[1] ** 2 * X[2] - X[0] * P[0])
    c = as_symbol(X[1] * P[1] + P[2] ** 3)
    total = (
        moyal_bracket(a, moyal_bracket(b, c))
        + moyal_bracket(b, moyal_bracket(c, a))
        + moyal_bracket(c, moyal_bracket(a, b))
    )
    assert total.is_zero


@pytest.mark.parametrize("nu", range(4))
def test_free_hamiltonian_bracket_with_position(nu: int):
    h = free_hamiltonian(2)
    assert moyal_bracket(h, x_lower(nu)) == as_symbol(-p_lower(nu) / 2)
    assert moyal_bracket(x_lower(nu), h) == as_symbol(p_lower(nu) / 2)
