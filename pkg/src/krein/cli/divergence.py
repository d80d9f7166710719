import asyncio
import math
from typing import Annotated

import numpy as np
import typer

from krein.cli._ctx import Context, contextual
from krein.quadrature import (
    growth_exponent,
    rho_integral_closed_form,
    rho_integral_demo,
    unitary_integral_inner,
)
from krein.report import Check
from krein.symbols import VARIABLES, Symbol, phi0
from krein.util import asyncio_run, exit_codes


app = typer.Typer(name="divergence", help="Why the unitary inner product has to go.")

ASYMPTOTIC_RHO = 1 - 1e-4
GROWTH_FACTOR = 10.0


@app.command()
@asyncio_run
@exit_codes
@contextual
async def rho(ctx: Context) -> None:
    """The boost-rapidity integral over [-rho, rho] against its closed form."""

    rows, checks = [], []
    for cut in ctx.config.rho_cuts:
        numeric = await asyncio.to_thread(rho_integral_demo, cut)
        closed = rho_integral_closed_form(cut)
        rows.append([cut, numeric, closed])
        checks.append(
            Check(
                identity=f"I({cut:g}) = rho/(1-rho^2) + atanh(rho)",
                tag="rho-integral",
                residual=abs(numeric - closed) / max(1.0, closed),
                tolerance=1e-8,
            )
        )

    tail = rho_integral_demo(ASYMPTOTIC_RHO) * (1 - ASYMPTOTIC_RHO)
    checks.append(
        Check(
            identity="I(rho)(1 - rho) -> 1/2",
            tag="rho-integral",
            residual=abs(tail - 0.5) / 0.5,
            tolerance=0.01,
        )
    )
    await ctx.emit(
        ctx.report(
            "divergence-rho",
            checks=checks,
            columns=("rho_cut", "integral", "closed_form"),
            table=rows,
            summary={"asymptotic_rho": ASYMPTOTIC_RHO, "asymptotic_product": tail},
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def unitary(
    ctx: Context,
    nodes: Annotated[int, typer.Option(min=2, help="Gauss-Legendre nodes per axis.")] = 200,
) -> None:
    """Flat-measure norms over growing boxes: the invariant Gaussian diverges."""

    cutoffs = ctx.config.cutoffs
    euclidean = Symbol.gaussian(-sum(v**2 for v in VARIABLES) / 2)
    invariant, control = await asyncio.gather(
        asyncio.to_thread(unitary_integral_inner, phi0(), phi0(), cutoffs, nodes),
        asyncio.to_thread(unitary_integral_inner, euclidean, euclidean, cutoffs, nodes),
    )

    magnitudes = np.abs(invariant.values)
    ratios = magnitudes[1:] / magnitudes[:-1]
    growth = [growth_exponent(phi0(), np.zeros(4), (t, 0.0, 0.0, 0.0)) for t in cutoffs]

    checks = [
        Check(
            identity=f"flat norm of phi_0 grows by more than {GROWTH_FACTOR:g} per cutoff",
            tag="unitary-divergence",
            residual=GROWTH_FACTOR / float(ratios.min()) if ratios.size else math.inf,
            tolerance=1.0,
        ),
        Check(
            identity="flat norm of the Euclidean Gaussian converges to 1",
            tag="unitary-control",
            residual=abs(control.values[-1] - 1),
            tolerance=1e-8,
        ),
        Check(
            identity="log|phi_0(x^0 = T)|^2 = T^2",
            tag="unitary-divergence",
            residual=max(abs(g - t**2) for g, t in zip(growth, cutoffs)),
            tolerance=ctx.config.tol * max(t**2 for t in cutoffs),
        ),
    ]
    rows = [
        [r, float(abs(v)), float(abs(w)), g]
        for r, v, w, g in zip(cutoffs, invariant.values, control.values, growth)
    ]
    await ctx.emit(
        ctx.report(
            "divergence-unitary",
            checks=checks,
            columns=("cutoff", "invariant_norm", "euclidean_norm", "growth_exponent"),
            table=rows,
            summary={"divergent": invariant.divergent, "phi0": str(phi0()), "euclidean": str(euclidean)},
        )
    )

