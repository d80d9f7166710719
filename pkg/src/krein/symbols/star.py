from __future__ import annotations

from collections.abc import Iterator
from enum import StrEnum
import itertools
from math import factorial
from typing import Any

import sympy as sp

from krein.symbols import (
    P,
    VARIABLES,
    X,
    NotPolynomialError,
    Symbol,
    as_symbol,
    eta,
)


class Side(StrEnum):
    LEFT = "left"
    RIGHT = "right"


# One term of the bidifferential D = sum_mu eta^{mu mu} (dL_{p^mu} dR_{x^mu} - dL_{x^mu} dR_{p^mu}).
_PAIRS: tuple[tuple[sp.Symbol, sp.Symbol, int], ...] = (
    *((P[mu], X[mu], eta(mu)) for mu in range(4)),
    *((X[mu], P[mu], -eta(mu)) for mu in range(4)),
)
_SLOT = {v: i for i, v in enumerate(VARIABLES)}


class _Derivatives:
    """Memoized partial derivatives of one symbol keyed by per-variable order."""

    def __init__(self, symbol: Symbol) -> None:
        self._cache: dict[tuple[int, ...], Symbol] = {(0,) * len(VARIABLES): symbol}

    def __getitem__(self, orders: tuple[int, ...]) -> Symbol:
        if orders in self._cache:
            return self._cache[orders]
        slot = next(i for i, k in enumerate(orders) if k)
        lower = list(orders)
        lower[slot] -= 1
        result = self[tuple(lower)].diff(VARIABLES[slot])
        self._cache[orders] = result
        return result


def _degree_bounds(symbol: Symbol) -> tuple[int, ...]:
    poly = sp.Poly(symbol.polynomial, *VARIABLES)
    return tuple(poly.degree_list())


def _multi_indices(bounds: tuple[int, ...], limit: int) -> Iterator[tuple[int, ...]]:
    for counts in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(counts) <= limit:
            yield counts


def star(alpha: Any, beta: Any, deformation: Any = 1) -> Symbol:
    """Moyal product sum_n (-i lambda)^n / n! D^n(alpha, beta).

    The series is finite because at least one factor must be polynomial.
    """

    alpha, beta = as_symbol(alpha), as_symbol(beta)
    if alpha.is_zero or beta.is_zero:
        return Symbol()
    if not (alpha.is_polynomial or beta.is_polynomial):
        raise NotPolynomialError("star product")

    # Pair k differentiates alpha by its first variable and beta by its second.
    bounds = [len(VARIABLES)] * len(_PAIRS)
    limits = []
    if alpha.is_polynomial:
        degrees = _degree_bounds(alpha)
        bounds = [min(b, degrees[_SLOT[a]]) for b, (a, _, _) in zip(bounds, _PAIRS)]
        limits.append(alpha.degree)
    if beta.is_polynomial:
        degrees = _degree_bounds(beta)
        bounds = [min(b, degrees[_SLOT[r]]) for b, (_, r, _) in zip(bounds, _PAIRS)]
        limits.append(beta.degree)

    lam = sp.sympify(deformation)
    left, right = _Derivatives(alpha), _Derivatives(beta)
    terms: list[tuple[sp.Expr, sp.Expr]] = []

    for counts in _multi_indices(tuple(bounds), min(limits)):
        left_orders = [0] * len(VARIABLES)
        right_orders = [0] * len(VARIABLES)
        coef: sp.Expr = (-sp.I * lam) ** sum(counts)
        for m, (a, r, sign) in zip(counts, _PAIRS):
            if m:
                left_orders[_SLOT[a]] += m
                right_orders[_SLOT[r]] += m
                coef *= sp.Rational(sign**m, factorial(m))

        dl = left[tuple(left_orders)]
        if dl.is_zero:
            continue
        dr = right[tuple(right_orders)]
        if dr.is_zero:
            continue
        terms.extend(
            (qa + qb, coef * pa * pb) for qa, pa in dl.terms for qb, pb in dr.terms
        )

    return Symbol(terms)


def star_apply(g: Any, phi: Any, side: Side = Side.LEFT) -> Symbol:
    g = as_symbol(g)
    if not g.is_polynomial:
        raise NotPolynomialError("star_apply")
    match side:
        case Side.LEFT:
            return star(g, phi)
        case Side.RIGHT:
            return star(phi, g)


def star_commutator(alpha: Any, beta: Any, deformation: Any = 1) -> Symbol:
    return star(alpha, beta, deformation) - star(beta, alpha, deformation)


def moyal_bracket(alpha: Any, beta: Any, deformation: Any = 1) -> Symbol:
    """{alpha, beta}_* = (alpha * beta - beta * alpha) / (2 i lambda)."""

    lam = sp.sympify(deformation)
    return star_commutator(alpha, beta, lam) / (2 * sp.I * lam)


def poisson_bracket(alpha: Any, beta: Any) -> Symbol:
    alpha, beta = as_symbol(alpha), as_symbol(beta)
    total = Symbol()
    for mu in range(4):
        term = alpha.diff(X[mu]) * beta.diff(P[mu]) - alpha.diff(P[mu]) * beta.diff(X[mu])
        total = total + eta(mu) * term
    return total
