"""Lorentz to Galilean contraction at finite speed of light c."""

from __future__ import annotations

from collections.abc import Sequence
import math
from typing import Any

import logfire
import numpy as np
from pydantic import BaseModel, ConfigDict
import sympy as sp

from krein.algebra import Residual
from krein.contraction import ScanTable, fit_rate, fit_slope
from krein.minkowski import PhasePoint
from krein.operators import coherent_overlap, coherent_overlap_exponent
from krein.symbols import P, X, Symbol, as_symbol, p_lower, x_lower
from krein.symbols.actions import DEFAULT_PROBE, GeneratorAction, left, tilde
from krein.symbols.flows import free_hamiltonian, heisenberg_flow
from krein.symbols.star import moyal_bracket, star


type Triple = tuple[float, float, float]

# The 0-slot coordinates carry the Galilean pair after rescaling: x^0 = c t, p^0 = e / c.
T = X[0]
E = P[0]


class GalileanLabels(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: Triple = (0.0, 0.0, 0.0)
    x: Triple = (0.0, 0.0, 0.0)
    t: float = 0.0
    e: float = 0.0

    @classmethod
    def from_four(cls, p: Sequence[float], x: Sequence[float], c: float) -> GalileanLabels:
        return cls(
            p=(float(p[1]), float(p[2]), float(p[3])),
            x=(float(x[1]), float(x[2]), float(x[3])),
            t=float(x[0]) / c,
            e=c * float(p[0]),
        )

    def to_four(self, c: float) -> PhasePoint:
        return PhasePoint.of(p=(self.e / c, *self.p), x=(c * self.t, *self.x))


def _log_overlap(a: GalileanLabels, b: GalileanLabels, c: float) -> float:
    return coherent_overlap_exponent(a.to_four(c), b.to_four(c)).real


def galilean_overlap_scan(
    a: GalileanLabels, b: GalileanLabels, c_values: Sequence[float]
) -> ScanTable:
    """log|<B|A>| against c, split into the e-dependent and t-dependent factors."""

    rows: list[tuple[float, ...]] = []
    with logfire.span("galilean overlap scan over {count} values of c", count=len(c_values)):
        for c in c_values:
            total = _log_overlap(a, b, c)
            e_log = total - _log_overlap(a, b.model_copy(update={"e": a.e}), c)
            t_log = total - _log_overlap(a, b.model_copy(update={"t": a.t}), c)
            rows.append((float(c), total, e_log, t_log))

    table = ScanTable(columns=("c", "log_magnitude", "e_log_factor", "t_log_factor"), rows=rows)
    c = table.column("c")
    table.rates["e_factor"] = fit_rate(c, table.column("e_log_factor"))
    table.rates["t_divergence"] = fit_slope([v**2 for v in c], table.column("log_magnitude"))
    return table


def boost_symbol(i: int, c: Any) -> Symbol:
    """G_beta^i = G_omega^{i0} / c in the (t, e) variables."""

    c = sp.nsimplify(c)
    omega = as_symbol(x_lower(i) * p_lower(0) - x_lower(0) * p_lower(i))
    return omega.subs({X[0]: c * T, P[0]: E / c}) / c


def boost_limit(i: int) -> Symbol:
    return as_symbol(T * P[i])


def boost_tilde_limit(i: int) -> GeneratorAction:
    """-2i (t d/dx^i + p_i d/de)."""

    return GeneratorAction(
        f"~G_beta{i} limit",
        lambda phi: -2 * sp.I * (T * phi.diff(X[i]) + P[i] * phi.diff(E)),
    )


class GalileanLimit(BaseModel):
    c: float
    direction: int
    star_residual: float
    star_ratio: float
    tilde_residual: float
    tilde_ratio: float


def galilean_generator_limit(c: float, direction: int = 1, probe: Any = DEFAULT_PROBE) -> GalileanLimit:
    """Distance of the boost actions from their c -> infinity limits at c and 2c."""

    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    probe = as_symbol(probe)
    limit = star(boost_limit(direction), probe)
    tilde_limit = boost_tilde_limit(direction)(probe)

    def residuals(scale: float) -> tuple[float, float]:
        boost = boost_symbol(direction, scale)
        return (
            (star(boost, probe) - limit).norm(),
            (tilde(boost)(probe) - tilde_limit).norm(),
        )

    with logfire.span("galilean boost limit at c={c}", c=c):
        star_c, tilde_c = residuals(c)
        star_2c, tilde_2c = residuals(2 * c)

    return GalileanLimit(
        c=c,
        direction=direction,
        star_residual=star_c,
        star_ratio=star_c / star_2c if star_2c else math.inf,
        tilde_residual=tilde_c,
        tilde_ratio=tilde_c / tilde_2c if tilde_2c else math.inf,
    )


def contracted_commutators(probe: Any = DEFAULT_PROBE) -> list[Residual]:
    """Commutators of the contracted generators acting on a probe symbol."""

    probe = as_symbol(probe)
    cases: list[tuple[str, Any, Any, Any]] = []
    for i in range(1, 4):
        for j in range(1, 4):
            delta = 1 if i == j else 0
            cases.append(
                (f"[G_beta{i}, ~G_p{j}] = {-2 * delta}i G_-e", T * P[i], X[j], -2 * sp.I * delta * T)
            )
            cases.append(
                (f"[G_p{i}, ~G_-x{j}] = {2 * delta}i", X[i], P[j], 2 * sp.I * delta)
            )
        cases.append((f"[G_beta{i}, ~G_t] = -2i p_{i}", T * P[i], E, -2 * sp.I * P[i]))
    cases.append(("[G_-e, ~G_t] = -2i", T, E, -2 * sp.I))

    residuals: list[Residual] = []
    for identity, a, b, expected in cases:
        lhs = left(a).commutator(tilde(b))(probe)
        rhs = star(expected, probe)
        residuals.append(Residual(identity, "galilean-algebra", None, (lhs - rhs).norm()))
    return residuals


def galilean_hamilton(mass: float, s: float = 1.0) -> list[Residual]:
    """Spatial Hamilton equations from G_t = p_i p^i / 2m."""

    g = free_hamiltonian(mass, spatial=True)
    m = sp.nsimplify(mass)
    step = sp.nsimplify(s)
    residuals: list[Residual] = []
    for i in range(1, 4):
        checks = [
            (f"{{x_{i}, G_t}}_* = p_{i}/m", moyal_bracket(X[i], g) - P[i] / m),
            (f"{{p_{i}, G_t}}_* = 0", moyal_bracket(P[i], g)),
            (
                f"x_{i}(s) = x_{i} + s p_{i}/m",
                heisenberg_flow(X[i], g, step) - (X[i] + step * P[i] / m),
            ),
        ]
        for identity, diff in checks:
            residuals.append(Residual(identity, "galilean-hamilton", None, diff.norm()))
    return residuals


class GramCheck(BaseModel):
    size: int
    min_eigenvalue: float
    positive: bool


def galilean_gram_check(
    labels: Sequence[tuple[Triple, Triple]] | None = None,
    rng: np.random.Generator | None = None,
    count: int = 6,
) -> GramCheck:
    """Gram matrix of spatial coherent overlaps, which the contraction leaves positive definite."""

    if labels is None:
        rng = rng or np.random.default_rng(0)
        draws = rng.uniform(-1.5, 1.5, size=(count, 2, 3))
        labels = [(tuple(d[0]), tuple(d[1])) for d in draws]  # type: ignore[misc]

    points = [PhasePoint.of(p=(0.0, *p), x=(0.0, *x)) for p, x in labels]
    gram = np.array([[coherent_overlap(b, a) for b in points] for a in points])
    min_eigenvalue = float(np.linalg.eigvalsh(gram).min())
    return GramCheck(size=len(points), min_eigenvalue=min_eigenvalue, positive=min_eigenvalue > 0)
