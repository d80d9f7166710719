"""Differential actions of the symmetry generators on phase-space symbols."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Literal, NamedTuple

import sympy as sp

from krein.algebra import CENTRAL, GENERATORS, Generator, Residual, describe, structure
from krein.minkowski import DegenerateRepresentationError
from krein.symbols import (
    P,
    X,
    NotPolynomialError,
    Symbol,
    as_symbol,
    p_lower,
    x_lower,
)
from krein.symbols.star import star, star_commutator


@dataclass(frozen=True)
class GeneratorAction:
    name: str
    apply: Callable[[Symbol], Symbol]

    def __call__(self, phi: Any) -> Symbol:
        return self.apply(as_symbol(phi))

    def __matmul__(self, other: GeneratorAction) -> GeneratorAction:
        return GeneratorAction(f"{self.name} {other.name}", lambda phi: self(other(phi)))

    def __add__(self, other: GeneratorAction) -> GeneratorAction:
        return GeneratorAction(
            f"({self.name} + {other.name})", lambda phi: self(phi) + other(phi)
        )

    def __sub__(self, other: GeneratorAction) -> GeneratorAction:
        return GeneratorAction(
            f"({self.name} - {other.name})", lambda phi: self(phi) - other(phi)
        )

    def __neg__(self) -> GeneratorAction:
        return GeneratorAction(f"-{self.name}", lambda phi: -self(phi))

    def scaled(self, factor: Any) -> GeneratorAction:
        factor = sp.sympify(factor)
        return GeneratorAction(f"{factor}*{self.name}", lambda phi: factor * self(phi))

    def commutator(self, other: GeneratorAction) -> GeneratorAction:
        return GeneratorAction(
            f"[{self.name}, {other.name}]",
            lambda phi: self(other(phi)) - other(self(phi)),
        )


ZERO_ACTION = GeneratorAction("0", lambda phi: Symbol())
IDENTITY_ACTION = GeneratorAction("1", lambda phi: phi)


def multiplication(g: Any, name: str | None = None) -> GeneratorAction:
    g = as_symbol(g)
    return GeneratorAction(name or f"({g})", lambda phi: g * phi)


def _polynomial(g: Any, operation: str) -> Symbol:
    g = as_symbol(g)
    if not g.is_polynomial:
        raise NotPolynomialError(operation)
    return g


def left(g: Any, deformation: Any = 1) -> GeneratorAction:
    g = _polynomial(g, "left action")
    return GeneratorAction(f"({g})*", lambda phi: star(g, phi, deformation))


def right(g: Any, deformation: Any = 1) -> GeneratorAction:
    g = _polynomial(g, "right action")
    return GeneratorAction(f"*({g})", lambda phi: star(phi, g, deformation))


def tilde(g: Any, deformation: Any = 1) -> GeneratorAction:
    """G~ = G* - *G."""

    g = _polynomial(g, "tilde action")
    return GeneratorAction(
        f"~({g})",
        lambda phi: star(g, phi, deformation) - star(phi, g, deformation),
    )


def x_left(mu: int, deformation: Any = 1) -> GeneratorAction:
    lam = sp.sympify(deformation)
    return GeneratorAction(
        f"X^L_{mu}", lambda phi: x_lower(mu) * phi + sp.I * lam * phi.diff(P[mu])
    )


def p_left(mu: int, deformation: Any = 1) -> GeneratorAction:
    lam = sp.sympify(deformation)
    return GeneratorAction(
        f"P^L_{mu}", lambda phi: p_lower(mu) * phi - sp.I * lam * phi.diff(X[mu])
    )


def x_right(mu: int, deformation: Any = 1) -> GeneratorAction:
    lam = sp.sympify(deformation)
    return GeneratorAction(
        f"X^R_{mu}", lambda phi: x_lower(mu) * phi - sp.I * lam * phi.diff(P[mu])
    )


def p_right(mu: int, deformation: Any = 1) -> GeneratorAction:
    lam = sp.sympify(deformation)
    return GeneratorAction(
        f"P^R_{mu}", lambda phi: p_lower(mu) * phi + sp.I * lam * phi.diff(X[mu])
    )


def eta_creation(mu: int) -> GeneratorAction:
    """a^{dag eta, L}_mu = X^L_mu - i P^L_mu."""

    return x_left(mu) - p_left(mu).scaled(sp.I)


def derivative(variable: sp.Symbol, factor: Any = 1) -> GeneratorAction:
    factor = sp.sympify(factor)
    return GeneratorAction(
        f"{factor}*d/d{variable}", lambda phi: factor * phi.diff(variable)
    )


def _field(
    terms: Iterable[tuple[Any, sp.Symbol]], factor: Any, name: str
) -> GeneratorAction:
    terms = [(sp.sympify(coef), v) for coef, v in terms]
    factor = sp.sympify(factor)

    def apply(phi: Symbol) -> Symbol:
        total = Symbol()
        for coef, v in terms:
            total = total + coef * phi.diff(v)
        return factor * total

    return GeneratorAction(name, apply)


class TableEntry(NamedTuple):
    label: str
    symbol: Symbol
    left: GeneratorAction
    tilde: GeneratorAction


def _entry(gen: Generator) -> TableEntry:
    match gen.kind:
        case "X":
            (mu,) = gen.indices
            return TableEntry(
                f"G_p{mu}",
                as_symbol(x_lower(mu)),
                x_left(mu),
                derivative(P[mu], 2 * sp.I),
            )
        case "P":
            (mu,) = gen.indices
            return TableEntry(
                f"G_-x{mu}",
                as_symbol(p_lower(mu)),
                p_left(mu),
                derivative(X[mu], -2 * sp.I),
            )
        case "J":
            mu, nu = gen.indices
            symbol = as_symbol(x_lower(mu) * p_lower(nu) - x_lower(nu) * p_lower(mu))
            field = _field(
                [
                    (x_lower(mu), X[nu]),
                    (-p_lower(nu), P[mu]),
                    (-x_lower(nu), X[mu]),
                    (p_lower(mu), P[nu]),
                ],
                -2 * sp.I,
                f"~G_w{mu}{nu}",
            )
            return TableEntry(
                f"G_w{mu}{nu}",
                symbol,
                x_left(mu) @ p_left(nu) - x_left(nu) @ p_left(mu),
                field,
            )
        case "I":
            return TableEntry("G_theta", as_symbol(1), IDENTITY_ACTION, ZERO_ACTION)


def generator_table() -> dict[Generator, TableEntry]:
    """G_s symbols with their left star actions and tabulated G~_s actions."""

    return {gen: _entry(gen) for gen in GENERATORS}


class CommutatorEntry(NamedTuple):
    a: Generator
    b: Generator
    value: Symbol


def commutator_table() -> list[CommutatorEntry]:
    """Every nonvanishing [G_a*, G~_b], which acts as left star multiplication by [G_a, G_b]_*."""

    table = generator_table()
    entries: list[CommutatorEntry] = []
    for a in GENERATORS:
        for b in GENERATORS:
            value = star_commutator(table[a].symbol, table[b].symbol)
            if not value.is_zero:
                entries.append(CommutatorEntry(a, b, value))
    return entries


DEFAULT_PROBE = "x1*p2 + p0**2*x3 - x0*p1 + p3"


def _combination(
    terms: dict[Generator, complex],
    pick: Callable[[TableEntry], Any],
    table: dict[Generator, TableEntry],
) -> list[tuple[sp.Expr, Any]]:
    return [(sp.nsimplify(coef), pick(table[gen])) for gen, coef in terms.items()]


def verify_generator_table(probe: Any = DEFAULT_PROBE) -> list[Residual]:
    probe = as_symbol(probe)
    table = generator_table()
    residuals: list[Residual] = []

    for gen, entry in table.items():
        derived = tilde(entry.symbol)(probe)
        residuals.append(
            Residual(
                f"~{entry.label} tabulated = {entry.label}* - *{entry.label}",
                "generator-table",
                None,
                (derived - entry.tilde(probe)).norm(),
            )
        )
        residuals.append(
            Residual(
                f"{entry.label}* composed = {entry.label}*",
                "generator-table",
                None,
                (entry.left(probe) - star(entry.symbol, probe)).norm(),
            )
        )

    for a, b in combinations(GENERATORS, 2):
        terms = structure(a, b)
        ea, eb = table[a], table[b]

        expected = Symbol()
        for coef, symbol in _combination(terms, lambda e: e.symbol, table):
            expected = expected + coef * symbol
        lhs = star_commutator(ea.symbol, eb.symbol)
        residuals.append(
            Residual(describe(a, b) + " (star)", "star-algebra", None, (lhs - expected).norm())
        )

        expected_tilde = Symbol()
        for coef, action in _combination(terms, lambda e: e.tilde, table):
            expected_tilde = expected_tilde + coef * action(probe)
        lhs_tilde = ea.tilde.commutator(eb.tilde)(probe)
        residuals.append(
            Residual(
                f"[~{ea.label}, ~{eb.label}] = ~[{ea.label}, {eb.label}]_*",
                "tilde-algebra",
                None,
                (lhs_tilde - expected_tilde).norm(),
            )
        )

        for first, second in ((ea, eb), (eb, ea)):
            mixed = first.left.commutator(second.tilde)(probe)
            rhs = star(star_commutator(first.symbol, second.symbol), probe)
            residuals.append(
                Residual(
                    f"[{first.label}*, ~{second.label}] = [{first.label}, {second.label}]_* *",
                    "mixed-commutators",
                    None,
                    (mixed - rhs).norm(),
                )
            )

    for mu in range(4):
        for nu in range(4):
            for lhs, rhs in (
                (x_left(mu), x_right(nu)),
                (x_left(mu), p_right(nu)),
                (p_left(mu), x_right(nu)),
                (p_left(mu), p_right(nu)),
            ):
                residuals.append(
                    Residual(
                        f"[{lhs.name}, {rhs.name}] = 0",
                        "left-right-commute",
                        None,
                        lhs.commutator(rhs)(probe).norm(),
                    )
                )

    return residuals


type RepresentationPart = Literal["Y", "E", "I"]


def regular_rep_action(
    varsigma: float, which: RepresentationPart, mu: int = 0
) -> GeneratorAction:
    """Action on the varsigma component: Y = s x + i d_p, E = s p - i d_x, I = s."""

    if varsigma == 0:
        raise DegenerateRepresentationError()
    s = sp.nsimplify(varsigma)
    match which:
        case "Y":
            return GeneratorAction(
                f"Y_{mu}[{s}]", lambda phi: s * x_lower(mu) * phi + sp.I * phi.diff(P[mu])
            )
        case "E":
            return GeneratorAction(
                f"E_{mu}[{s}]", lambda phi: s * p_lower(mu) * phi - sp.I * phi.diff(X[mu])
            )
        case "I":
            return GeneratorAction(f"I[{s}]", lambda phi: s * phi)


def _representation_map(varsigma: float) -> tuple[dict[Any, Any], dict[Any, Any]]:
    if varsigma == 0:
        raise DegenerateRepresentationError()
    s = sp.nsimplify(varsigma)
    scale = sp.sqrt(abs(s))
    if s > 0:
        forward = {**{P[mu]: scale * P[mu] for mu in range(4)}, **{X[mu]: scale * X[mu] for mu in range(4)}}
        backward = {**{P[mu]: P[mu] / scale for mu in range(4)}, **{X[mu]: X[mu] / scale for mu in range(4)}}
    else:
        forward = {**{P[mu]: -scale * X[mu] for mu in range(4)}, **{X[mu]: -scale * P[mu] for mu in range(4)}}
        backward = {**{P[mu]: -X[mu] / scale for mu in range(4)}, **{X[mu]: -P[mu] / scale for mu in range(4)}}
    return forward, backward


def from_normalized(symbol: Any, varsigma: float) -> Symbol:
    """Rewrite a symbol of the normalized labels as a function of the varsigma labels."""

    forward, _ = _representation_map(varsigma)
    return as_symbol(symbol).subs(forward)


def to_normalized(symbol: Any, varsigma: float) -> Symbol:
    _, backward = _representation_map(varsigma)
    return as_symbol(symbol).subs(backward)
