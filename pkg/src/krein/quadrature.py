"""Wavefunctions on phase space and their indefinite integral inner product."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cache, cached_property, reduce
import itertools
import math
from typing import Any, Literal, NamedTuple, override

import logfire
import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray
from scipy import integrate
import sympy as sp

from krein.fock import FockIndex, TruncatedBasis
from krein.symbols import P, VARIABLES, X, Symbol, as_symbol, phi0
from krein.symbols.actions import GeneratorAction, eta_creation


class IntegrandOverflowError(ArithmeticError):
    def __init__(self, where: str) -> None:
        super().__init__(where)
        self.where = where

    @override
    def __str__(self) -> str:
        return f"Integrand is not finite on the quadrature grid ({self.where})"


class RhoCutoffError(ValueError):
    def __init__(self, rho_cut: float) -> None:
        super().__init__(rho_cut)
        self.rho_cut = rho_cut

    @override
    def __str__(self) -> str:
        return f"rho cutoff must lie in [0, 1), got {self.rho_cut}"


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Hermite rule for weight e^{-t^2}, shared by all eight axes.

    Factorized integrals use `nodes` points per axis; the dense 8D fallback is
    capped at `tensor_nodes` per axis.
    """

    nodes: int = 48
    tensor_nodes: int = 12

    def __post_init__(self) -> None:
        if self.nodes < 1 or self.tensor_nodes < 1:
            raise ValueError("Quadrature grids need at least one node per axis")

    @cached_property
    def rule(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return hermgauss(self.nodes)

    @cached_property
    def tensor_rule(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return hermgauss(min(self.nodes, self.tensor_nodes))


@cache
def _fock_wavefunction(n: FockIndex) -> Symbol:
    phi = phi0()
    for mu, count in enumerate(n):
        creation = eta_creation(mu)
        for _ in range(count):
            phi = creation(phi)
    norm = 2**n.total * sp.sqrt(math.prod(math.factorial(k) for k in n))
    return phi / norm


def fock_wavefunction(n: Sequence[int]) -> Symbol:
    """phi_n built from the invariant Gaussian by the left eta-creation actions."""

    return _fock_wavefunction(FockIndex(*n))


def _monomial(exponents: Sequence[int]) -> sp.Expr:
    return sp.Mul(*(v**k for v, k in zip(VARIABLES, exponents)))


def _split_pairs(exponent: sp.Expr) -> list[sp.Expr] | None:
    """Split an exponent into four parts each depending on (p^mu, x^mu) only."""

    parts: list[sp.Expr] = [sp.Integer(0)] * 4
    if exponent == 0:
        return parts
    for monom, coeff in sp.Poly(exponent, *VARIABLES).terms():
        pairs = {i % 4 for i, k in enumerate(monom) if k}
        if len(pairs) != 1:
            return None
        (mu,) = pairs
        parts[mu] += coeff * _monomial(monom)
    return parts


type Rule = tuple[NDArray[np.float64], NDArray[np.float64]]


class _Moments:
    """Per-pair moment tables M[a, b] = sum_jk w_j t_j^a exp(q(t_j, t_k)) w_k t_k^b."""

    def __init__(self, rule: Rule, compensate: bool) -> None:
        self.nodes, self.weights = rule
        self.compensate = compensate
        self._exponentials: dict[tuple[int, sp.Expr], NDArray[np.complex128]] = {}

    def _exponential(self, mu: int, part: sp.Expr) -> NDArray[np.complex128]:
        key = (mu, part)
        if key not in self._exponentials:
            t = self.nodes
            exponent = part + (P[mu] ** 2 + X[mu] ** 2 if self.compensate else 0)
            fn = sp.lambdify((P[mu], X[mu]), exponent, modules="numpy")
            q = np.broadcast_to(
                np.asarray(fn(t[:, None], t[None, :]), dtype=np.complex128),
                (t.size, t.size),
            )
            with np.errstate(over="ignore", invalid="ignore"):
                e = np.exp(q)
            if not np.all(np.isfinite(e)):
                raise IntegrandOverflowError(f"pair {mu}")
            self._exponentials[key] = e
        return self._exponentials[key]

    def table(self, mu: int, part: sp.Expr, degrees: tuple[int, int]) -> NDArray[np.complex128]:
        t, w = self.nodes, self.weights
        a = w[:, None] * t[:, None] ** np.arange(degrees[0] + 1)[None, :]
        b = w[:, None] * t[:, None] ** np.arange(degrees[1] + 1)[None, :]
        return a.T @ self._exponential(mu, part) @ b


def _factorized_term(
    prefactor: sp.Expr, parts: list[sp.Expr], moments: _Moments
) -> complex:
    poly = sp.Poly(prefactor, *VARIABLES)
    degrees = poly.degree_list()
    tables = [moments.table(mu, parts[mu], (degrees[mu], degrees[4 + mu])) for mu in range(4)]
    total = 0j
    for monom, coeff in poly.terms():
        value = complex(coeff)
        for mu in range(4):
            value *= tables[mu][monom[mu], monom[4 + mu]]
        total += value
    return total


def _tensor_term(prefactor: sp.Expr, exponent: sp.Expr, grid: QuadratureGrid) -> complex:
    t, w = grid.tensor_rule
    compensated = exponent + sum(v**2 for v in VARIABLES)
    fn = sp.lambdify(VARIABLES, prefactor * sp.exp(compensated), modules="numpy")
    logfire.warn(
        "tensor-grid quadrature over {points} points", points=t.size ** len(VARIABLES)
    )

    inner = np.meshgrid(*([t] * 6), indexing="ij", sparse=True)
    inner_weights = reduce(np.multiply.outer, [w] * 6)
    total = 0j
    for i, j in itertools.product(range(t.size), repeat=2):
        values = np.asarray(fn(t[i], t[j], *inner), dtype=np.complex128)
        if not np.all(np.isfinite(values)):
            raise IntegrandOverflowError("tensor grid")
        total += w[i] * w[j] * complex(np.sum(values * inner_weights))
    return total


type Method = Literal["auto", "factorized", "tensor"]


def _krein_integrand(psi: Any, phi: Any) -> Symbol:
    flipped = as_symbol(psi).subs({P[0]: -P[0], X[0]: -X[0]}).conjugate()
    damping = Symbol.gaussian(-2 * (X[0] ** 2 + P[0] ** 2))
    return flipped * as_symbol(phi) * damping


def krein_integral_inner(
    psi: Any,
    phi: Any,
    grid: QuadratureGrid | None = None,
    method: Method = "auto",
) -> complex:
    """(1/pi^4) int conj(psi)(p^i, x^i, -p^0, -x^0) e^{-(x0^2+p0^2)} phi e^{-(x0^2+p0^2)}."""

    grid = grid or QuadratureGrid()
    integrand = _krein_integrand(psi, phi)
    moments = _Moments(grid.rule, compensate=True)

    total = 0j
    for exponent, prefactor in integrand.terms:
        parts = _split_pairs(exponent) if method != "tensor" else None
        if parts is None:
            if method == "factorized":
                raise ValueError(f"Exponent does not factorize over pairs: {exponent}")
            total += _tensor_term(prefactor, exponent, grid)
        else:
            total += _factorized_term(prefactor, parts, moments)
    return total / np.pi**4


def quadrature_gram(basis: TruncatedBasis, grid: QuadratureGrid | None = None) -> NDArray[np.complex128]:
    grid = grid or QuadratureGrid()
    wavefunctions = [fock_wavefunction(n) for n in basis]
    gram = np.zeros((basis.size, basis.size), dtype=np.complex128)
    with logfire.span("quadrature gram at N_max={nmax}", nmax=basis.nmax):
        for i, psi in enumerate(wavefunctions):
            for j, phi in enumerate(wavefunctions):
                gram[i, j] = krein_integral_inner(psi, phi, grid)
    return gram


def action_matrix(
    action: GeneratorAction | Callable[[Symbol], Symbol],
    basis: TruncatedBasis,
    grid: QuadratureGrid | None = None,
) -> NDArray[np.complex128]:
    """Matrix of an action in the Fock-wavefunction basis, A[m, n] = (-1)^{m_0} <phi_m|A phi_n>."""

    grid = grid or QuadratureGrid()
    wavefunctions = [fock_wavefunction(n) for n in basis]
    matrix = np.zeros((basis.size, basis.size), dtype=np.complex128)
    with logfire.span("action matrix at N_max={nmax}", nmax=basis.nmax):
        for j, phi in enumerate(wavefunctions):
            image = action(phi)
            for i, psi in enumerate(wavefunctions):
                matrix[i, j] = basis.parities[i] * krein_integral_inner(psi, image, grid)
    return matrix


class CutoffSeries(NamedTuple):
    cutoffs: tuple[float, ...]
    values: tuple[complex, ...]
    divergent: bool


def unitary_integral_inner(
    psi: Any,
    phi: Any,
    cutoffs: Sequence[float] = (2, 4, 6, 8),
    nodes: int = 200,
    growth: float = 10.0,
) -> CutoffSeries:
    """Flat-measure (1/pi^4) int conj(psi) phi over nested hypercubes [-R, R]^8."""

    integrand = as_symbol(psi).conjugate() * as_symbol(phi)
    split = [(_split_pairs(q), pf) for q, pf in integrand.terms]
    if any(parts is None for parts, _ in split):
        raise ValueError("Flat-measure integrals need pairwise factorizable exponents")

    u, wu = leggauss(nodes)
    values: list[complex] = []
    with logfire.span("flat-measure cutoff series"):
        for radius in cutoffs:
            moments = _Moments((radius * u, radius * wu), compensate=False)
            total = sum(
                (_factorized_term(pf, parts, moments) for parts, pf in split),  # type: ignore[arg-type]
                0j,
            )
            values.append(total / np.pi**4)

    magnitudes = np.abs(values)
    divergent = bool(
        np.any(magnitudes[1:] > growth * np.maximum(magnitudes[:-1], np.finfo(float).tiny))
    )
    return CutoffSeries(tuple(float(r) for r in cutoffs), tuple(values), divergent)


def growth_exponent(phi: Any, p: Sequence[float], x: Sequence[float]) -> float:
    """log |phi(p, x)|^2."""

    value = as_symbol(phi)(np.asarray(p, dtype=float), np.asarray(x, dtype=float))
    return float(2 * np.log(np.abs(value)))


def rho_integral_demo(rho_cut: float) -> float:
    """int_{-rho}^{rho} d rho / (1 - rho^2)^2 by adaptive quadrature."""

    if not 0 <= rho_cut < 1:
        raise RhoCutoffError(rho_cut)
    value, _ = integrate.quad(
        lambda r: 1.0 / (1.0 - r * r) ** 2, 0.0, rho_cut, epsabs=0.0, epsrel=1e-12, limit=1000
    )
    return 2 * value


def rho_integral_closed_form(rho_cut: float) -> float:
    if not 0 <= rho_cut < 1:
        raise RhoCutoffError(rho_cut)
    return rho_cut / (1 - rho_cut**2) + math.atanh(rho_cut)
