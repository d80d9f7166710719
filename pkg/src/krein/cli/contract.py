import asyncio
import math
from typing import Annotated

import logfire
import numpy as np
import typer

from krein.cli._ctx import Context, contextual
from krein.contraction import ContractionParams, ScanTable
from krein.contraction.classical import (
    classical_identities,
    classical_limit_scan,
    coherent_separation_scan,
)
from krein.contraction.galilean import (
    GalileanLabels,
    contracted_commutators,
    galilean_generator_limit,
    galilean_gram_check,
    galilean_hamilton,
    galilean_overlap_scan,
)
from krein.minkowski import PhasePoint
from krein.report import Check
from krein.symbols import P, X
from krein.util import asyncio_run, exit_codes


app = typer.Typer(name="contract", help="Galilean and classical contractions at finite scales.")

CLASSICAL_ALPHA = X[1] ** 3 + X[1] * P[1] ** 2
CLASSICAL_BETA = P[1] ** 3 + X[1] ** 2 * P[1]


def _rate_check(
    identity: str, tag: str, rate: float | None, expected: float, tolerance: float
) -> Check:
    residual = math.inf if rate is None else abs(rate - expected) / abs(expected)
    return Check(identity=identity, tag=tag, residual=residual, tolerance=tolerance)


def _rows(name: str, table: ScanTable) -> list[list[float | str]]:
    return [[name, *row] for row in table.rows]


@app.command()
@asyncio_run
@exit_codes
@contextual
async def galilean(
    ctx: Context,
    dt: Annotated[float, typer.Option(help="Time separation of the t scan.")] = 0.3,
    de: Annotated[float, typer.Option(help="Energy separation of the e scan.")] = 1.0,
    boost_c: Annotated[float, typer.Option(min=0.0, help="Speed of light for the boost limit.")] = 100.0,
    direction: Annotated[int, typer.Option(min=1, max=3, help="Boost direction.")] = 1,
) -> None:
    """Rates at which the Lorentz structures contract to Galilean ones."""

    c_values = ctx.config.c_values
    origin = GalileanLabels()

    with logfire.span("galilean contraction"):
        t_scan, e_scan, e_far, limit, commutators, hamilton = await asyncio.gather(
            asyncio.to_thread(galilean_overlap_scan, origin, GalileanLabels(t=dt), c_values),
            asyncio.to_thread(galilean_overlap_scan, origin, GalileanLabels(e=de), c_values),
            asyncio.to_thread(galilean_overlap_scan, origin, GalileanLabels(e=de), [1e3]),
            asyncio.to_thread(galilean_generator_limit, boost_c, direction),
            asyncio.to_thread(contracted_commutators),
            asyncio.to_thread(galilean_hamilton, ctx.config.mass),
        )
    gram = galilean_gram_check(rng=ctx.rng)

    tol = ctx.config.tol
    checks = [
        _rate_check(
            "log|<B|A>| against c^2 has slope dt^2/2",
            "galilean-overlap",
            t_scan.rates["t_divergence"],
            dt**2 / 2,
            0.01,
        ),
        _rate_check(
            "e-factor approaches 1 as c^-2",
            "galilean-overlap",
            e_scan.rates["e_factor"],
            -2.0,
            0.05,
        ),
        Check(
            identity="e-factor at c = 1000 is 1",
            tag="galilean-overlap",
            residual=abs(math.expm1(e_far.column("e_log_factor")[0])),
            tolerance=1e-6,
        ),
        _rate_check(
            f"G_beta{direction}* residual ratio between c and 2c",
            "galilean-boost",
            limit.star_ratio,
            4.0,
            0.05,
        ),
        _rate_check(
            f"~G_beta{direction} residual ratio between c and 2c",
            "galilean-boost",
            limit.tilde_ratio,
            4.0,
            0.05,
        ),
        *Check.all_of(commutators, tol),
        *Check.all_of(hamilton, tol),
        Check(
            identity="spatial coherent Gram matrix is positive definite",
            tag="galilean-metric",
            residual=-gram.min_eigenvalue,
            tolerance=0.0,
        ),
    ]

    await ctx.emit(
        ctx.report(
            "contract-galilean",
            checks=checks,
            columns=("scan", *t_scan.columns),
            table=_rows("t", t_scan) + _rows("e", e_scan),
            summary={
                "t_rates": t_scan.rates,
                "e_rates": e_scan.rates,
                "boost": limit.model_dump(),
                "gram": gram.model_dump(),
            },
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def classical(ctx: Context) -> None:
    """Rates at which star products and Moyal brackets become classical."""

    k_values = ctx.config.k_values
    with logfire.span("classical contraction"):
        table, identities = await asyncio.gather(
            asyncio.to_thread(classical_limit_scan, CLASSICAL_ALPHA, CLASSICAL_BETA, k_values),
            asyncio.to_thread(
                classical_identities,
                ContractionParams(k_x=k_values[0], k_p=k_values[0]),
                ctx.config.mass,
            ),
        )

    checks = [
        _rate_check(
            "|a*b - ab| against k_x k_p has slope -1", "classical-star", table.rates["star"], -1.0, 0.02
        ),
        _rate_check(
            "|{a,b}_* - {a,b}| against k_x k_p has slope -2",
            "classical-bracket",
            table.rates["bracket"],
            -2.0,
            0.02,
        ),
        *Check.all_of(identities, ctx.config.tol),
    ]
    await ctx.emit(
        ctx.report(
            "contract-classical",
            checks=checks,
            columns=table.columns,
            table=table.rows,
            summary={"rates": table.rates, "alpha": str(CLASSICAL_ALPHA), "beta": str(CLASSICAL_BETA)},
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def separation(
    ctx: Context,
    distance: Annotated[float, typer.Option(min=0.0, help="Separation of the two labels.")] = 0.5,
    timelike: Annotated[
        bool, typer.Option("--timelike/--spacelike", help="Separate the labels along x^0.")
    ] = False,
) -> None:
    """Overlap of distinct coherent states as the classical scales grow."""

    shift = np.zeros(4)
    shift[0 if timelike else 1] = distance
    a = PhasePoint.of(p=np.zeros(4), x=np.zeros(4))
    b = PhasePoint.of(p=np.zeros(4), x=shift)

    k_values = ctx.config.k_values
    table = coherent_separation_scan(a, b, k_values)
    same = coherent_separation_scan(a, a, k_values)

    checks = [
        Check(
            identity="<A|A> = 1 at every scale",
            tag="classical-overlap",
            residual=float(np.abs(same.column("log_magnitude")).max()),
            tolerance=ctx.config.tol,
        )
    ]
    if not timelike:
        checks.append(
            _rate_check(
                "log|<B|A>| is linear in k_x k_p", "classical-overlap", table.rates["exponent"], 1.0, 0.02
            )
        )

    await ctx.emit(
        ctx.report(
            "contract-separation",
            checks=checks,
            columns=table.columns,
            table=table.rows,
            summary={"rates": table.rates, "flags": table.flags, "timelike": timelike},
        )
    )
