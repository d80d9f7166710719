"""Phase-space symbols: finite sums of polynomial x exp(quadratic) in (p^mu, x^mu)."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from functools import cached_property
import math
from typing import Any, override

import numpy as np
import sympy as sp

from krein.minkowski import ETA


P = sp.symbols("p0:4", real=True)
X = sp.symbols("x0:4", real=True)
VARIABLES: tuple[sp.Symbol, ...] = (*P, *X)

type Scalar = complex | float | int | sp.Expr


class NotPolynomialError(ValueError):
    def __init__(self, operation: str) -> None:
        super().__init__(operation)
        self.operation = operation

    @override
    def __str__(self) -> str:
        return f"{self.operation} needs a polynomial symbol on at least one side"


def eta(mu: int) -> int:
    return int(ETA[mu, mu])


def p_lower(mu: int) -> sp.Expr:
    return eta(mu) * P[mu]


def x_lower(mu: int) -> sp.Expr:
    return eta(mu) * X[mu]


def mdot(u: Iterable[Any], v: Iterable[Any]) -> sp.Expr:
    return sp.Add(*(eta(mu) * a * b for mu, (a, b) in enumerate(zip(u, v))))


def _split_exponent(exponent: sp.Expr) -> tuple[sp.Expr, sp.Expr]:
    constant, dependent = sp.expand(exponent).as_independent(*VARIABLES, as_Add=True)
    return constant, dependent


class Symbol:
    """Canonical sum of prefactor * exp(exponent) terms.

    Exponents are polynomials of degree <= 2 in the eight coordinates with the
    constant part moved into the prefactor; prefactors are expanded
    polynomials. Terms sharing an exponent are merged and zero terms dropped.
    """

    __slots__ = ("_terms", "__dict__")

    def __init__(self, terms: Mapping[Any, Any] | Iterable[tuple[Any, Any]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[sp.Expr, sp.Expr] = {}
        for exponent, prefactor in items:
            constant, dependent = _split_exponent(sp.sympify(exponent))
            prefactor = sp.sympify(prefactor)
            if constant != 0:
                prefactor = prefactor * sp.exp(constant)
            merged[dependent] = merged.get(dependent, sp.Integer(0)) + prefactor

        canonical: dict[sp.Expr, sp.Expr] = {}
        for exponent in sorted(merged, key=sp.default_sort_key):
            prefactor = sp.expand(merged[exponent])
            if prefactor == 0:
                continue
            if not prefactor.is_polynomial(*VARIABLES):
                raise ValueError(f"Prefactor is not polynomial: {prefactor}")
            if exponent != 0 and sp.Poly(exponent, *VARIABLES).total_degree() > 2:
                raise ValueError(f"Exponent is not quadratic: {exponent}")
            canonical[exponent] = prefactor
        self._terms = canonical

    @classmethod
    def from_expr(cls, expr: Any) -> Symbol:
        expr = sp.expand(sp.sympify(expr))
        terms: list[tuple[sp.Expr, sp.Expr]] = []
        for term in sp.Add.make_args(expr):
            exponent: sp.Expr = sp.Integer(0)
            prefactor: sp.Expr = sp.Integer(1)
            for factor in sp.Mul.make_args(term):
                if isinstance(factor, sp.exp):
                    exponent += factor.args[0]
                else:
                    prefactor *= factor
            terms.append((exponent, prefactor))
        return cls(terms)

    @classmethod
    def gaussian(cls, exponent: Any, prefactor: Any = 1) -> Symbol:
        return cls({exponent: prefactor})

    @property
    def terms(self) -> tuple[tuple[sp.Expr, sp.Expr], ...]:
        return tuple(self._terms.items())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_polynomial(self) -> bool:
        return all(exponent == 0 for exponent in self._terms)

    @property
    def polynomial(self) -> sp.Expr:
        if not self.is_polynomial:
            raise NotPolynomialError("polynomial")
        return self._terms.get(sp.Integer(0), sp.Integer(0))

    @property
    def degree(self) -> int:
        degrees = [
            sp.Poly(prefactor, *VARIABLES).total_degree()
            for prefactor in self._terms.values()
        ]
        return max(degrees, default=0)

    def to_expr(self) -> sp.Expr:
        return sp.Add(*(pf * sp.exp(q) for q, pf in self._terms.items()))

    def diff(self, *variables: sp.Symbol) -> Symbol:
        terms = self._terms
        for v in variables:
            terms = {
                q: sp.diff(pf, v) + pf * sp.diff(q, v) for q, pf in terms.items()
            }
        return Symbol(terms)

    def map(self, fn: Callable[[sp.Expr], sp.Expr]) -> Symbol:
        return Symbol((fn(q), fn(pf)) for q, pf in self._terms.items())

    def subs(self, mapping: Mapping[Any, Any]) -> Symbol:
        return self.map(lambda e: e.subs(mapping, simultaneous=True))

    def conjugate(self) -> Symbol:
        return self.map(sp.conjugate)

    def limit(self, parameter: sp.Symbol, value: Any) -> Symbol:
        return self.map(lambda e: sp.limit(e, parameter, value))

    def __add__(self, other: Any) -> Symbol:
        other = as_symbol(other)
        return Symbol([*self.terms, *other.terms])

    __radd__ = __add__

    def __neg__(self) -> Symbol:
        return Symbol((q, -pf) for q, pf in self._terms.items())

    def __sub__(self, other: Any) -> Symbol:
        return self + (-as_symbol(other))

    def __rsub__(self, other: Any) -> Symbol:
        return as_symbol(other) - self

    def __mul__(self, other: Any) -> Symbol:
        other = as_symbol(other)
        return Symbol(
            (qa + qb, pa * pb)
            for qa, pa in self._terms.items()
            for qb, pb in other._terms.items()
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> Symbol:
        return self * (1 / sp.sympify(scalar))

    @override
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Symbol):
            try:
                other = as_symbol(other)
            except (sp.SympifyError, ValueError, TypeError):
                return NotImplemented
        return (self - other).is_zero

    __hash__ = None  # type: ignore[assignment]

    def proportionality(self, other: Symbol) -> sp.Expr | None:
        """Return c with other == c * self, or None if they are not proportional."""

        if self.is_zero or set(self._terms) != set(other._terms):
            return None
        exponent = next(iter(self._terms))
        ratio = sp.cancel(other._terms[exponent] / self._terms[exponent])
        if ratio.free_symbols & set(VARIABLES):
            return None
        return ratio if other == ratio * self else None

    def norm(self) -> float:
        """Euclidean norm of all monomial coefficients."""

        total = 0.0
        for prefactor in self._terms.values():
            for coeff in sp.Poly(prefactor, *VARIABLES).coeffs():
                total += abs(complex(coeff)) ** 2
        return math.sqrt(total)

    def isclose(self, other: Any, tol: float = 1e-12) -> bool:
        return (self - as_symbol(other)).norm() <= tol

    @cached_property
    def _numeric(self) -> Callable[..., Any]:
        return sp.lambdify(VARIABLES, self.to_expr(), modules="numpy")

    def __call__(self, p: Any, x: Any) -> Any:
        """Evaluate at p = (p0..p3), x = (x0..x3); components may be arrays."""

        value = self._numeric(*p, *x)
        shape = np.broadcast(*p, *x).shape
        return np.broadcast_to(np.asarray(value, dtype=np.complex128), shape)

    @override
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for q, pf in self._terms.items():
            text = sp.sstr(pf, order="lex")
            parts.append(text if q == 0 else f"({text})*exp({sp.sstr(q, order='lex')})")
        return " + ".join(parts)

    @override
    def __repr__(self) -> str:
        return f"Symbol({self})"


def as_symbol(value: Any) -> Symbol:
    if isinstance(value, Symbol):
        return value
    return Symbol.from_expr(value)


ONE = Symbol({0: 1})


def phi0() -> Symbol:
    """The Lorentz invariant Gaussian exp(-(x.x + p.p)/2)."""

    return Symbol.gaussian(-(mdot(X, X) + mdot(P, P)) / 2)


def coherent_wavefunction(p_a: Iterable[Any], x_a: Iterable[Any]) -> Symbol:
    p_a, x_a = [sp.sympify(v) for v in p_a], [sp.sympify(v) for v in x_a]
    dx = [X[mu] - x_a[mu] for mu in range(4)]
    dp = [P[mu] - p_a[mu] for mu in range(4)]
    phase = sp.I * (mdot(X, p_a) - mdot(P, x_a))
    return Symbol.gaussian(phase - (mdot(dx, dx) + mdot(dp, dp)) / 2)
