import pytest
import sympy as sp

from krein.algebra import GENERATORS, Generator
from krein.minkowski import DegenerateRepresentationError
from krein.symbols import P, X, NotPolynomialError, Symbol, as_symbol, p_lower, phi0, x_lower
from krein.symbols.actions import (
    IDENTITY_ACTION,
    ZERO_ACTION,
    commutator_table,
    eta_creation,
    from_normalized,
    generator_table,
    left,
    p_left,
    p_right,
    regular_rep_action,
    tilde,
    to_normalized,
    verify_generator_table,
    x_left,
    x_right,
)
from krein.symbols.star import star


PROBES = [phi0(), as_symbol(X[1] * P[2] + P[0] ** 2), phi0() * X[3]]


@pytest.mark.parametrize("phi", PROBES)
@pytest.mark.parametrize("mu", range(4))
def test_left_actions_are_star_products(phi: Symbol, mu: int):
    assert x_left(mu)(phi) == star(x_lower(mu), phi)
    assert p_left(mu)(phi) == star(p_lower(mu), phi)
    assert x_right(mu)(phi) == star(phi, x_lower(mu))
    assert p_right(mu)(phi) == star(phi, p_lower(mu))


@pytest.mark.parametrize("mu", range(4))
def test_left_and_right_actions_commute(mu: int):
    phi = phi0() * X[1]
    for nu in range(4):
        assert x_left(mu).commutator(p_right(nu))(phi).is_zero
        assert p_left(mu).commutator(x_right(nu))(phi).is_zero


def test_tilde_of_positions_is_a_derivative():
    phi = phi0() * P[1]
    assert tilde(X[1])(phi) == 2 * sp.I * phi.diff(P[1])
    assert tilde(P[2])(phi) == -2 * sp.I * phi.diff(X[2])


def test_actions_need_polynomial_generators():
    with pytest.raises(NotPolynomialError):
        left(phi0())
    with pytest.raises(NotPolynomialError):
        tilde(phi0())


def test_action_arithmetic():
    phi = as_symbol(X[1] * P[1])
    assert (IDENTITY_ACTION + ZERO_ACTION)(phi) == phi
    assert (x_left(1) @ IDENTITY_ACTION)(phi) == x_left(1)(phi)
    assert (-x_left(1))(phi) == -x_left(1)(phi)
    assert x_left(1).scaled(3)(phi) == 3 * x_left(1)(phi)


def test_generator_table_shape():
    table = generator_table()
    assert len(table) == 15
    assert table[Generator("X", (1,))].label == "G_p1"
    assert table[Generator("P", (0,))].label == "G_-x0"
    assert table[Generator("J", (0, 2))].label == "G_w02"
    central = table[Generator("I")]
    assert central.label == "G_theta"
    assert central.tilde(phi0()).is_zero
    assert central.left(phi0()) == phi0()


@pytest.mark.parametrize("gen", [g for g in GENERATORS if g.kind == "J"])
def test_rotation_tilde_matches_star(gen: Generator):
    entry = generator_table()[gen]
    phi = phi0() * (X[1] + P[2])
    assert entry.tilde(phi) == tilde(entry.symbol)(phi)


def test_commutator_table_contains_canonical_pair():
    entries = {(e.a, e.b): e.value for e in commutator_table()}
    assert entries[Generator("X", (1,)), Generator("P", (1,))] == 2 * sp.I
    assert entries[Generator("X", (0,)), Generator("P", (0,))] == -2 * sp.I
    assert (Generator("X", (1,)), Generator("P", (2,))) not in entries
    assert all(e.b != Generator("I") for e in commutator_table())


def test_eta_creation_raises_the_invariant_gaussian():
    phi = phi0()
    created = eta_creation(1)(phi)
    assert created == 2 * (X[1] - sp.I * P[1]) * phi


@pytest.mark.slow
def test_generator_table_identities():
    residuals = verify_generator_table()
    worst = max(residuals, key=lambda r: r.residual)
    assert worst.residual < 1e-12, worst
    assert {r.tag for r in residuals} == {
        "generator-table",
        "star-algebra",
        "tilde-algebra",
        "mixed-commutators",
        "left-right-commute",
    }


@pytest.mark.parametrize(("varsigma", "scale"), [(4, 2), (sp.Rational(1, 9), sp.Rational(1, 3))])
@pytest.mark.parametrize("mu", [0, 2])
def test_positive_varsigma_component(varsigma, scale, mu: int):
    alpha = phi0() * (X[1] * P[1] + X[0])
    image = regular_rep_action(varsigma, "Y", mu)(from_normalized(alpha, varsigma))
    assert to_normalized(image, varsigma) == scale * x_left(mu)(alpha)

    image = regular_rep_action(varsigma, "E", mu)(from_normalized(alpha, varsigma))
    assert to_normalized(image, varsigma) == scale * p_left(mu)(alpha)


@pytest.mark.parametrize("mu", [0, 3])
def test_negative_varsigma_swaps_roles(mu: int):
    alpha = phi0() * (X[2] + P[0] * X[0])
    image = regular_rep_action(-9, "Y", mu)(from_normalized(alpha, -9))
    assert to_normalized(image, -9) == 3 * p_left(mu)(alpha)


def test_central_component():
    alpha = as_symbol(X[1])
    assert regular_rep_action(-2, "I")(alpha) == -2 * alpha


def test_degenerate_varsigma():
    with pytest.raises(DegenerateRepresentationError):
        regular_rep_action(0, "Y")
    with pytest.raises(DegenerateRepresentationError):
        from_normalized(phi0(), 0)
