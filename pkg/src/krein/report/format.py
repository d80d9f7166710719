from __future__ import annotations

import csv
from enum import StrEnum
import io
from typing import TYPE_CHECKING, Protocol, override


if TYPE_CHECKING:
    from krein.report import Report


CHECK_COLUMNS = ("identity", "tag", "guard", "residual", "tolerance", "passed")


class ReportFormat(Protocol):
    @property
    def ext(self) -> str: ...

    def dump(self, report: Report) -> bytes: ...


class JsonReportFormat(ReportFormat):
    @property
    @override
    def ext(self) -> str:
        return ".json"

    @override
    def dump(self, report: Report) -> bytes:
        return report.model_dump_json(indent=2).encode() + b"\n"


class CsvReportFormat(ReportFormat):
    """The report's table, or its checks when the command produced no table."""

    @property
    @override
    def ext(self) -> str:
        return ".csv"

    @override
    def dump(self, report: Report) -> bytes:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if report.columns:
            writer.writerow(report.columns)
            writer.writerows(report.table)
        else:
            writer.writerow(CHECK_COLUMNS)
            for check in report.checks:
                writer.writerow(
                    [
                        check.identity,
                        check.tag,
                        "" if check.guard is None else check.guard,
                        repr(check.residual),
                        repr(check.tolerance),
                        check.passed,
                    ]
                )
        return buffer.getvalue().encode()


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"

    @property
    def format(self) -> ReportFormat:
        match self:
            case OutputFormat.JSON:
                return JsonReportFormat()
            case OutputFormat.CSV:
                return CsvReportFormat()
