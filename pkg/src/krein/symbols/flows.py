from __future__ import annotations

from collections.abc import Sequence
from typing import Any, NamedTuple, override

import logfire
import numpy as np
from scipy import linalg
import sympy as sp

from krein.symbols import (
    P,
    VARIABLES,
    X,
    NotPolynomialError,
    Symbol,
    as_symbol,
    eta,
    mdot,
)
from krein.symbols.star import moyal_bracket, star


class SeriesTruncationError(ArithmeticError):
    def __init__(self, norm: float, tol: float, steps: int) -> None:
        super().__init__(norm, tol, steps)
        self.norm = norm
        self.tol = tol
        self.steps = steps

    @override
    def __str__(self) -> str:
        return (
            f"Series did not terminate after {self.steps} terms: "
            f"last term norm {self.norm:.3e} exceeds {self.tol:.1e}"
        )


def _polynomial(g: Any, operation: str) -> Symbol:
    g = as_symbol(g)
    if not g.is_polynomial:
        raise NotPolynomialError(operation)
    return g


def _linear_flow(phi: Symbol, g: Symbol, scale: sp.Expr) -> Symbol:
    """exp(scale * G*) phi for G of degree <= 1.

    scale G* = M + v.grad with M = scale G constant-gradient and v constant, so
    the exponential is a shift of the arguments times exp(M + v.grad M / 2).
    """

    poly = g.polynomial
    shift: dict[sp.Symbol, sp.Expr] = {}
    for mu in range(4):
        shift[X[mu]] = scale * (-sp.I) * eta(mu) * sp.diff(poly, P[mu])
        shift[P[mu]] = scale * sp.I * eta(mu) * sp.diff(poly, X[mu])

    m = scale * poly
    correction = sum((v * sp.diff(m, z) for z, v in shift.items()), sp.Integer(0)) / 2
    moved = phi.subs({z: z + v for z, v in shift.items()})
    return moved * Symbol.gaussian(m + correction)


def translation_flow(phi: Any, p_shift: Sequence[Any], x_shift: Sequence[Any]) -> Symbol:
    """V*(p') V*(-x') phi: x -> x + x'/2 with phase e^{i x'.p/2}, p -> p + p'/2 with e^{-i p'.x/2}."""

    p_shift = [sp.nsimplify(v) for v in p_shift]
    x_shift = [sp.nsimplify(v) for v in x_shift]
    g = as_symbol(mdot(x_shift, P) - mdot(p_shift, X))
    if g.is_zero:
        return as_symbol(phi)
    return _linear_flow(as_symbol(phi), g, sp.I / 2)


def weyl_translation(phi: Any, p_a: Sequence[Any], x_a: Sequence[Any]) -> Symbol:
    """V^L(p_A, x_A) phi; maps the invariant Gaussian to the coherent wavefunction at (p_A, x_A)."""

    return translation_flow(phi, [-2 * sp.nsimplify(v) for v in p_a], [-2 * sp.nsimplify(v) for v in x_a])


def _hamiltonian_matrix(g: sp.Expr) -> sp.Matrix:
    """Augmented generator of the affine flow dz/ds = {z, G} on z = (p, x, 1)."""

    n = len(VARIABLES)
    velocity = [*(-eta(mu) * sp.diff(g, X[mu]) for mu in range(4)),
                *(eta(mu) * sp.diff(g, P[mu]) for mu in range(4))]
    matrix = sp.zeros(n + 1, n + 1)
    for row, v in enumerate(velocity):
        poly = sp.Poly(v, *VARIABLES)
        for col, z in enumerate(VARIABLES):
            matrix[row, col] = poly.coeff_monomial(z)
        matrix[row, n] = poly.coeff_monomial(1)
    return matrix


def _nilpotent_exp(matrix: sp.Matrix) -> sp.Matrix | None:
    size = matrix.shape[0]
    total = sp.eye(size)
    power = sp.eye(size)
    for k in range(1, size + 1):
        power = power * matrix / k
        if power.is_zero_matrix:
            return total
        total = total + power
    return None


def _flow_matrix(g: sp.Expr, s: Any) -> sp.Matrix:
    generator = _hamiltonian_matrix(g) * sp.sympify(s)
    exact = _nilpotent_exp(generator)
    if exact is not None:
        return exact
    if not generator.free_symbols and generator.has(sp.Float):
        values = np.array(generator.evalf(), dtype=np.complex128)
        result = linalg.expm(values)
        if np.allclose(result.imag, 0):
            result = result.real
        return sp.Matrix(result)
    return sp.simplify(generator.exp())


def heisenberg_flow(
    alpha: Any, g: Any, s: Any, steps: int = 24, tol: float = 1e-12
) -> Symbol:
    """Solve d alpha/ds = {alpha, G}_* for s.

    Quadratic G gives the exact pull-back alpha o Phi_s along the affine
    Hamiltonian flow; higher degrees use the bracket series, which must
    terminate or fall below tol within `steps` terms.
    """

    alpha = as_symbol(alpha)
    g = _polynomial(g, "heisenberg_flow")
    s = sp.nsimplify(s) if isinstance(s, (int, float)) else sp.sympify(s)
    if s == 0 or alpha.is_zero:
        return alpha

    if g.degree <= 2:
        flow = _flow_matrix(g.polynomial, s)
        coordinates = flow * sp.Matrix([*VARIABLES, 1])
        return alpha.subs({z: coordinates[i] for i, z in enumerate(VARIABLES)})

    with logfire.span("heisenberg series, degree {degree}", degree=g.degree):
        total, term = alpha, alpha
        for k in range(1, steps + 1):
            term = moyal_bracket(term, g) * s / k
            if term.is_zero:
                return total
            total = total + term
        norm = term.norm()
        if norm > tol:
            raise SeriesTruncationError(norm, tol, steps)
        return total


def liouville_flow(rho: Any, g: Any, s: Any, steps: int = 24, tol: float = 1e-12) -> Symbol:
    """d rho/ds = {G, rho}_*."""

    s = sp.nsimplify(s) if isinstance(s, (int, float)) else sp.sympify(s)
    return heisenberg_flow(rho, g, -s, steps, tol)


def schrodinger_flow(
    phi: Any, g: Any, s: Any, steps: int = 24, tol: float = 1e-12
) -> Symbol:
    """Solve d phi/ds = (1/2i) G * phi."""

    phi = as_symbol(phi)
    g = _polynomial(g, "schrodinger_flow")
    s = sp.nsimplify(s) if isinstance(s, (int, float)) else sp.sympify(s)
    if s == 0 or phi.is_zero:
        return phi

    scale = s / (2 * sp.I)
    if g.degree <= 1:
        return _linear_flow(phi, g, scale)

    image = star(g, phi)
    eigenvalue = phi.proportionality(image)
    if eigenvalue is not None:
        return phi * sp.exp(sp.expand(scale * eigenvalue))
    if image.is_zero:
        return phi

    with logfire.span("schrodinger series, degree {degree}", degree=g.degree):
        total, term = phi, phi
        for k in range(1, steps + 1):
            term = star(g, term) * scale / k
            if term.is_zero:
                return total
            total = total + term
        norm = term.norm()
        if norm > tol:
            raise SeriesTruncationError(norm, tol, steps)
        return total


def free_hamiltonian(mass: Any, spatial: bool = False) -> Symbol:
    """G_tau = p.p / 2m, or p_i p^i / 2m over the spatial components."""

    m = sp.nsimplify(mass)
    components = range(1, 4) if spatial else range(4)
    return as_symbol(sum(eta(mu) * P[mu] ** 2 for mu in components) / (2 * m))


def plane_wave(k: Sequence[Any]) -> Symbol:
    """exp(i (2 k_mu - p_mu) x^mu) for covariant components k_mu."""

    return Symbol.gaussian(
        sp.I * sum((2 * k[mu] - eta(mu) * P[mu]) * X[mu] for mu in range(4))
    )


class KleinGordon(NamedTuple):
    eigenvalue: float
    residual: float
    on_shell: bool


_K = sp.symbols("k0:4", real=True)
_M = sp.Symbol("m", positive=True)


def klein_gordon_check(k: Sequence[float], mass: float, tol: float = 1e-12) -> KleinGordon:
    """Apply G_tau * to the plane wave symbolically and compare with 2 k.k / m."""

    phi = plane_wave(_K)
    image = star(free_hamiltonian(_M), phi)
    expected = 2 * sum(eta(mu) * _K[mu] ** 2 for mu in range(4)) / _M
    remainder = image - expected * phi

    values = {**{_K[mu]: sp.nsimplify(k[mu]) for mu in range(4)}, _M: sp.nsimplify(mass)}
    residual = remainder.subs(values).norm()
    eigenvalue = float(expected.subs(values))
    shell = 4 * sum(eta(mu) * float(k[mu]) ** 2 for mu in range(4)) + float(mass) ** 2
    return KleinGordon(eigenvalue, residual, abs(shell) <= tol * max(1.0, float(mass) ** 2))


