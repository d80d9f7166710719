"""Machine-readable results of a command run."""

from __future__ import annotations

from collections.abc import Iterable
import math
from pathlib import Path
from typing import Any

import aiofiles
from aiofiles import os
from pydantic import BaseModel, computed_field
import typer

from krein import __version__
from krein.algebra import Residual
from krein.report.format import CsvReportFormat as CsvReportFormat
from krein.report.format import JsonReportFormat as JsonReportFormat
from krein.report.format import OutputFormat as OutputFormat
from krein.report.format import ReportFormat


SCHEMA_VERSION = 1

type Cell = float | int | str | bool | None


class Check(BaseModel):
    identity: str
    tag: str
    guard: int | None = None
    residual: float
    tolerance: float

    @computed_field
    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    @classmethod
    def of(cls, residual: Residual, tolerance: float) -> Check:
        return cls(
            identity=residual.identity,
            tag=residual.tag,
            guard=residual.guard,
            residual=residual.residual,
            tolerance=tolerance,
        )

    @classmethod
    def all_of(cls, residuals: Iterable[Residual], tolerance: float) -> list[Check]:
        return [cls.of(r, tolerance) for r in residuals]


class Report(BaseModel):
    schema_version: int = SCHEMA_VERSION
    version: str = __version__
    command: str
    config: dict[str, Any] = {}
    checks: list[Check] = []
    columns: list[str] = []
    table: list[list[Cell]] = []
    summary: dict[str, Any] = {}

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]


class ReportWriter:
    """Writes reports to `out`, or to stdout when no path is given.

    A path without a suffix, or an existing directory, receives one file per
    command named after it.
    """

    def __init__(self, out: Path | None, format: ReportFormat) -> None:
        self.out = out
        self.format = format

    def path_for(self, command: str) -> Path | None:
        if self.out is None:
            return None
        if self.out.is_dir() or not self.out.suffix:
            return self.out / f"{command}{self.format.ext}"
        return self.out

    async def write(self, report: Report) -> Path | None:
        data = self.format.dump(report)
        path = self.path_for(report.command)
        if path is None:
            typer.echo(data.decode(), nl=False)
            return None

        await os.makedirs(path.parent, exist_ok=True)
        async with aiofiles.open(path, "wb") as f:
            await f.write(data)
        return path
