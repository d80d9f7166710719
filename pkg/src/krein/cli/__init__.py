import asyncio
from itertools import combinations
from math import comb
from typing import Annotated

import logfire
import numpy as np
import sympy as sp
import typer

from krein.cli import _ctx, contract, divergence
from krein.cli._ctx import Context, contextual
from krein.fock import KreinVector, krein_gram, krein_inner, truncated_basis
from krein.minkowski import PhasePoint
from krein.operators import (
    GuardedSubspace,
    coherent_overlap,
    coherent_state,
    ladder_ops,
    level_spectrum,
    oscillator,
    verify_algebra,
)
from krein.quadrature import quadrature_gram
from krein.report import Check
from krein.symbols import P, X, as_symbol
from krein.symbols.actions import DEFAULT_PROBE, verify_generator_table
from krein.symbols.flows import (
    free_hamiltonian,
    heisenberg_flow,
    klein_gordon_check,
    plane_wave,
    schrodinger_flow,
)
from krein.util import asyncio_run, exit_codes


app = typer.Typer(callback=_ctx.callback, no_args_is_help=True)
app.add_typer(contract.app)
app.add_typer(divergence.app)


@app.command("verify-algebra")
@asyncio_run
@exit_codes
@contextual
async def verify(
    ctx: Context,
    symbols: Annotated[
        bool,
        typer.Option("--symbols/--no-symbols", help="Also check the phase-space generator table."),
    ] = True,
    probe: Annotated[str, typer.Option(help="Test symbol for the generator actions.")] = DEFAULT_PROBE,
) -> None:
    """Check every commutator of the truncated operator algebra."""

    with logfire.span("verify-algebra"):
        tasks = [asyncio.to_thread(verify_algebra, ctx.basis, ctx.config.guard)]
        if symbols:
            tasks.append(asyncio.to_thread(verify_generator_table, probe))
        results = await asyncio.gather(*tasks)

    checks = [Check.of(r, ctx.config.tol) for residuals in results for r in residuals]
    await ctx.emit(
        ctx.report(
            "verify-algebra",
            checks=checks,
            summary={"nmax": ctx.config.nmax, "guarded": ctx.config.guard, "identities": len(checks)},
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def spectrum(ctx: Context) -> None:
    """Eigenvalues of X.X + P.P on the levels the truncation leaves intact."""

    basis = ctx.basis
    eigenvalues = await asyncio.to_thread(level_spectrum, oscillator(basis), 2, ctx.config.tol)

    rows, checks, start = [], [], 0
    for level in range(basis.nmax - 1):
        multiplicity = comb(level + 3, 3)
        block = eigenvalues[start : start + multiplicity]
        start += multiplicity
        expected = 4 * (level + 2)
        deviation = float(np.abs(block - expected).max())
        rows.append([level, expected, multiplicity, deviation, float(np.abs(block.imag).max())])
        checks.append(
            Check(
                identity=f"level {level}: eigenvalue 4(n+2) = {expected} x {multiplicity}",
                tag="oscillator-spectrum",
                guard=2,
                residual=deviation,
                tolerance=ctx.config.tol * max(1, expected),
            )
        )

    await ctx.emit(
        ctx.report(
            "spectrum",
            checks=checks,
            columns=("level", "expected", "multiplicity", "max_deviation", "max_imag"),
            table=rows,
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def inner_table(
    ctx: Context,
    levels: Annotated[int, typer.Option(min=0, help="Highest Fock level in the table.")] = 3,
    quadrature: Annotated[
        bool,
        typer.Option("--quadrature/--no-quadrature", help="Also integrate the phase-space wavefunctions."),
    ] = True,
    quadrature_tol: Annotated[float, typer.Option(help="Tolerance of the quadrature path.")] = 1e-8,
) -> None:
    """Krein inner products of the Fock basis, algebraically and by quadrature."""

    basis = truncated_basis(levels)
    vectors = [KreinVector.basis_vector(basis, n) for n in basis]
    algebraic = np.asarray(krein_gram(vectors), dtype=np.complex128)
    expected = np.diag(basis.parities).astype(np.complex128)

    checks = [
        Check(
            identity="<n|m>_eta = (-1)^{n_0} delta_nm",
            tag="fock-norms",
            residual=float(np.abs(algebraic - expected).max()),
            tolerance=ctx.config.tol,
        )
    ]
    numeric = None
    if quadrature:
        with logfire.span("inner-table quadrature path"):
            numeric = await asyncio.to_thread(quadrature_gram, basis, ctx.grid)
        checks.append(
            Check(
                identity="(phi_n, phi_m) = (-1)^{n_0} delta_nm",
                tag="fock-wavefunction-norms",
                residual=float(np.abs(numeric - expected).max()),
                tolerance=quadrature_tol,
            )
        )

    rows = []
    for i, m in enumerate(basis):
        for j, n in enumerate(basis):
            row = ["".join(map(str, m)), "".join(map(str, n)), float(algebraic[i, j].real)]
            if numeric is not None:
                row += [float(numeric[i, j].real), float(numeric[i, j].imag)]
            rows.append(row)
    columns = ["m", "n", "algebraic"] + (["quadrature_re", "quadrature_im"] if quadrature else [])

    await ctx.emit(
        ctx.report(
            "inner-table",
            checks=checks,
            columns=columns,
            table=rows,
            summary={"levels": levels, "size": basis.size},
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def overlap(
    ctx: Context,
    fock_nmax: Annotated[int | None, typer.Option(help="Truncation used to expand coherent states.")] = None,
    count: Annotated[int, typer.Option(min=1, help="Number of random labels.")] = 4,
    spread: Annotated[float, typer.Option(min=0.0, help="Labels are drawn from [-spread, spread].")] = 0.5,
    overlap_tol: Annotated[float, typer.Option(help="Tolerance against the closed form.")] = 1e-8,
) -> None:
    """Coherent-state overlaps from the Fock expansion against the closed form."""

    basis = truncated_basis(fock_nmax or ctx.config.fock_nmax)
    draws = ctx.rng.uniform(-spread, spread, size=(count, 2, 4))
    labels = [PhasePoint.of(p=d[0], x=d[1]) for d in draws]
    states = [coherent_state(basis, label.p, label.x) for label in labels]

    lowering, _ = ladder_ops(basis)
    subspace = GuardedSubspace(basis, 1)
    checks = []
    for k, (label, state) in enumerate(zip(labels, states)):
        z = label.x + 1j * label.p
        residual = max(
            float(np.abs(subspace.restrict(lowering[mu] @ state) - 2 * z[mu] * subspace.restrict(state)).max())
            for mu in range(4)
        )
        checks.append(
            Check(
                identity=f"a^mu |A{k}> = 2(x^mu + i p^mu) |A{k}>",
                tag="coherent-eigenvector",
                guard=1,
                residual=residual,
                tolerance=ctx.config.tol,
            )
        )

    rows = []
    for i, j in [(i, i) for i in range(count)] + list(combinations(range(count), 2)):
        closed = coherent_overlap(labels[i], labels[j])
        fock = complex(krein_inner(states[j], states[i]))
        difference = abs(closed - fock)
        rows.append([i, j, closed.real, closed.imag, fock.real, fock.imag, difference])
        checks.append(
            Check(
                identity=f"<A{j}|A{i}>_eta closed form",
                tag="coherent-overlap",
                residual=difference,
                tolerance=overlap_tol,
            )
        )

    await ctx.emit(
        ctx.report(
            "overlap",
            checks=checks,
            columns=("a", "b", "closed_re", "closed_im", "fock_re", "fock_im", "difference"),
            table=rows,
            summary={
                "fock_nmax": basis.nmax,
                "seed": ctx.config.seed,
                "labels": [{"p": label.p.tolist(), "x": label.x.tolist()} for label in labels],
            },
        )
    )


@app.command()
@asyncio_run
@exit_codes
@contextual
async def evolve(
    ctx: Context,
    tau: Annotated[float | None, typer.Option(help="Evolution parameter.")] = None,
    mass: Annotated[float | None, typer.Option(help="Particle mass.")] = None,
) -> None:
    """Free-particle Heisenberg and Schrodinger flows in phase space."""

    config = ctx.config.updated(tau=tau, mass=mass)
    tau, mass = config.tau, config.mass
    g = free_hamiltonian(mass)
    s, m = sp.nsimplify(tau), sp.nsimplify(mass)

    def heisenberg() -> tuple[list[Check], dict[str, str]]:
        checks, flowed = [], {}
        for mu in range(4):
            x_tau = heisenberg_flow(X[mu], g, s)
            p_tau = heisenberg_flow(P[mu], g, s)
            flowed[f"x{mu}(tau)"] = str(sp.N(x_tau.to_expr()))
            flowed[f"p{mu}(tau)"] = str(sp.N(p_tau.to_expr()))
            for identity, diff in (
                (f"x^{mu}(tau) = x^{mu} + tau p^{mu}/m", x_tau - as_symbol(X[mu] + s * P[mu] / m)),
                (f"p^{mu}(tau) = p^{mu}", p_tau - as_symbol(P[mu])),
            ):
                checks.append(
                    Check(identity=identity, tag="heisenberg-flow", residual=diff.norm(), tolerance=ctx.config.tol)
                )
        return checks, flowed

    def schrodinger() -> tuple[list[Check], dict[str, float]]:
        k = (mass / 2, 0.0, 0.0, 0.0)
        kg = klein_gordon_check(k, mass)
        wave = plane_wave([sp.nsimplify(v) for v in k])
        evolved = schrodinger_flow(wave, g, s)
        expected = wave * sp.exp(s * sp.nsimplify(kg.eigenvalue) / (2 * sp.I))
        checks = [
            Check(
                identity="G_tau * phi_k = (2 k.k / m) phi_k",
                tag="klein-gordon",
                residual=kg.residual,
                tolerance=ctx.config.tol,
            ),
            Check(
                identity="4 k.k + m^2 = 0",
                tag="mass-shell",
                residual=0.0 if kg.on_shell else 1.0,
                tolerance=0.0,
            ),
            Check(
                identity="phi_k(tau) = exp(tau (k.k/m) / i) phi_k",
                tag="schrodinger-flow",
                residual=(evolved - expected).norm(),
                tolerance=ctx.config.tol,
            ),
        ]
        return checks, {"klein_gordon_eigenvalue": kg.eigenvalue}

    with logfire.span("evolve tau={tau} m={mass}", tau=tau, mass=mass):
        (heisenberg_checks, flowed), (wave_checks, wave_summary) = await asyncio.gather(
            asyncio.to_thread(heisenberg), asyncio.to_thread(schrodinger)
        )

    await ctx.emit(
        ctx.report(
            "evolve",
            checks=heisenberg_checks + wave_checks,
            summary={"tau": tau, "mass": mass, **flowed, **wave_summary},
        )
    )


def main() -> None:
    app()
