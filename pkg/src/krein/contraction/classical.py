"""Quantum to classical contraction at finite scales k_x, k_p."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

import logfire
import sympy as sp

from krein.algebra import Residual
from krein.contraction import ContractionParams, ScanTable, fit_rate
from krein.minkowski import PhasePoint
from krein.operators import coherent_overlap_exponent
from krein.symbols import (
    P,
    X,
    NotPolynomialError,
    Symbol,
    as_symbol,
    eta,
    p_lower,
    x_lower,
)
from krein.symbols.flows import free_hamiltonian
from krein.symbols.star import moyal_bracket, poisson_bracket, star, star_commutator


def classical_star(alpha: Any, beta: Any, params: ContractionParams) -> Symbol:
    """Star product in the rescaled variables, lambda = 1/(k_x k_p)."""

    return star(alpha, beta, params.deformation)


def classical_bracket(alpha: Any, beta: Any, params: ContractionParams) -> Symbol:
    return moyal_bracket(alpha, beta, params.deformation)


def _scales(k: float | tuple[float, float]) -> ContractionParams:
    if isinstance(k, tuple):
        return ContractionParams(k_x=k[0], k_p=k[1])
    return ContractionParams(k_x=k, k_p=k)


def classical_limit_scan(
    alpha: Any, beta: Any, k_values: Sequence[float | tuple[float, float]]
) -> ScanTable:
    """Star-versus-pointwise and Moyal-versus-Poisson distances against k_x k_p."""

    alpha, beta = as_symbol(alpha), as_symbol(beta)
    if not (alpha.is_polynomial and beta.is_polynomial):
        raise NotPolynomialError("classical_limit_scan")

    product = alpha * beta
    poisson = poisson_bracket(alpha, beta)
    rows: list[tuple[float, ...]] = []
    with logfire.span("classical limit scan over {count} scales", count=len(k_values)):
        for k in k_values:
            params = _scales(k)
            rows.append(
                (
                    params.k_x,
                    params.k_p,
                    params.k_x * params.k_p,
                    (classical_star(alpha, beta, params) - product).norm(),
                    (classical_bracket(alpha, beta, params) - poisson).norm(),
                )
            )

    table = ScanTable(
        columns=("k_x", "k_p", "k_xk_p", "star_residual", "bracket_residual"), rows=rows
    )
    scale = table.column("k_xk_p")
    table.rates["star"] = fit_rate(scale, table.column("star_residual"))
    table.rates["bracket"] = fit_rate(scale, table.column("bracket_residual"))
    return table


def classical_identities(params: ContractionParams, mass: float) -> list[Residual]:
    """Exact identities of the contracted variables: the rescaled commutator and Hamilton's equations."""

    lam = params.deformation
    g = free_hamiltonian(mass)
    m = sp.nsimplify(mass)
    residuals: list[Residual] = []
    for mu in range(4):
        checks = [
            (
                f"[x^c_{mu}, p^c_{mu}]_* = 2i lambda eta^{mu}{mu}",
                "classical-algebra",
                star_commutator(X[mu], P[mu], lam) - 2 * sp.I * lam * eta(mu),
            ),
            (
                f"{{x^c_{mu}, G^c_tau}} = p^c_{mu}/m",
                "classical-hamilton",
                poisson_bracket(x_lower(mu), g) - p_lower(mu) / m,
            ),
            (
                f"{{p^c_{mu}, G^c_tau}} = 0",
                "classical-hamilton",
                poisson_bracket(p_lower(mu), g),
            ),
        ]
        for identity, tag, diff in checks:
            residuals.append(Residual(identity, tag, None, diff.norm()))
    return residuals


def coherent_separation_scan(
    a: PhasePoint, b: PhasePoint, k_values: Sequence[float | tuple[float, float]]
) -> ScanTable:
    """log|<B|A>| with labels scaled to (k_p p^c, k_x x^c)."""

    rows: list[tuple[float, ...]] = []
    flags: list[str] = []
    for k in k_values:
        params = _scales(k)
        scaled_a = PhasePoint.of(p=params.k_p * a.p, x=params.k_x * a.x)
        scaled_b = PhasePoint.of(p=params.k_p * b.p, x=params.k_x * b.x)
        log_magnitude = coherent_overlap_exponent(scaled_a, scaled_b).real
        rows.append((params.k_x, params.k_p, params.k_x * params.k_p, log_magnitude))
        if log_magnitude > 0:
            flags.append(f"overlap grows at k_x={params.k_x:g}, k_p={params.k_p:g}")

    if flags:
        logfire.warn(
            "timelike label separation: overlap magnitude grows with the contraction scale",
            flags=flags,
        )

    table = ScanTable(columns=("k_x", "k_p", "k_xk_p", "log_magnitude"), rows=rows, flags=flags)
    table.rates["exponent"] = fit_rate(table.column("k_xk_p"), table.column("log_magnitude"))
    return table
