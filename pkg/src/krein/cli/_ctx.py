from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
import inspect
from pathlib import Path
from typing import Annotated, Any, Callable, Concatenate, ParamSpec, TypeVar

from makefun import wraps
import logfire
import numpy as np
from pydantic import ValidationError
import typer

from krein.config import RunConfig
from krein.fock import TruncatedBasis, truncated_basis
from krein.quadrature import QuadratureGrid
from krein.report import Cell, Check, OutputFormat, Report, ReportWriter
from krein.util import USAGE_ERROR


@dataclass
class Context:
    config: RunConfig = field(default_factory=RunConfig)

    @cached_property
    def basis(self) -> TruncatedBasis:
        return truncated_basis(self.config.nmax)

    @cached_property
    def grid(self) -> QuadratureGrid:
        return QuadratureGrid(self.config.nodes, self.config.tensor_nodes)

    @cached_property
    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.config.seed)

    @cached_property
    def writer(self) -> ReportWriter:
        return ReportWriter(self.config.out, self.config.format.format)

    def report(
        self,
        command: str,
        checks: Iterable[Check] = (),
        columns: Iterable[str] = (),
        table: Iterable[Iterable[Cell]] = (),
        summary: dict[str, Any] | None = None,
    ) -> Report:
        return Report(
            command=command,
            config=self.config.echo(),
            checks=list(checks),
            columns=list(columns),
            table=[list(row) for row in table],
            summary=summary or {},
        )

    async def emit(self, report: Report) -> None:
        """Write the report and exit 1 if any of its checks failed."""

        path = await self.writer.write(report)
        if path is not None:
            logfire.info("wrote {command} report to {path}", command=report.command, path=str(path))
        if not report.passed:
            for check in report.failures:
                typer.echo(
                    f"FAIL [{check.tag}] {check.identity}: {check.residual:.3e} > {check.tolerance:.1e}",
                    err=True,
                )
            raise typer.Exit(1)


_context = Context()


def callback(
    nmax: Annotated[int | None, typer.Option(help="Highest total Fock level kept.")] = None,
    nodes: Annotated[int | None, typer.Option(help="Gauss-Hermite nodes per axis.")] = None,
    tol: Annotated[float | None, typer.Option(help="Residual tolerance of exact identities.")] = None,
    seed: Annotated[int | None, typer.Option(help="Seed for randomly drawn labels.")] = None,
    format: Annotated[OutputFormat | None, typer.Option(help="Report format.")] = None,
    out: Annotated[
        Path | None,
        typer.Option(help="Report file, or a directory receiving one file per command."),
    ] = None,
    guard: Annotated[
        bool | None,
        typer.Option(
            "--guard/--no-guard",
            help="Check identities only where the truncation cannot reach.",
        ),
    ] = None,
    config: Annotated[
        Path | None,
        typer.Option("--config", dir_okay=False, help="TOML file with run settings."),
    ] = None,
    enable_logfire: Annotated[
        bool | None, typer.Option("--logfire/--no-logfire", help="Send spans to logfire.")
    ] = None,
) -> None:
    global _context

    try:
        run_config = RunConfig.load(
            config,
            nmax=nmax,
            nodes=nodes,
            tol=tol,
            seed=seed,
            format=format,
            out=out,
            guard=guard,
            logfire=enable_logfire,
        )
    except (ValidationError, OSError, ValueError) as e:
        typer.echo(f"invalid configuration: {e}", err=True)
        raise typer.Exit(USAGE_ERROR) from e

    _context = Context(run_config)

    # reports may go to stdout, so spans never do
    logfire.configure(service_name="krein", send_to_logfire=run_config.logfire, console=False)


P = ParamSpec("P")
T = TypeVar("T")


def contextual(fn: Callable[Concatenate[Context, P], T]) -> Callable[P, T]:
    sig = inspect.signature(fn)

    ctx_param_item = next(iter(sig.parameters.items()), None)
    if ctx_param_item is None:
        raise TypeError("First parameter of a contextual function must be Context")

    ctx_key, ctx_param = ctx_param_item
    if ctx_key is None or ctx_param.annotation is not Context:
        raise TypeError("First parameter of a contextual function must be Context")

    @wraps(fn, remove_args=ctx_key)  # type: ignore
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
        return fn(_context, *args, **kwargs)

    return wrapper
