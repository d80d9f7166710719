from collections.abc import Sequence
from math import isfinite

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveFloat
import sympy as sp


class ContractionParams(BaseModel):
    """Scales of the two contractions: varsigma = c^2 chi and lambda = 1/(k_x k_p)."""

    model_config = ConfigDict(frozen=True)

    c: PositiveFloat = 1.0
    chi: PositiveFloat = 1.0
    k_x: PositiveFloat = 1.0
    k_p: PositiveFloat = 1.0

    @property
    def varsigma(self) -> float:
        return self.c**2 * self.chi

    @property
    def deformation(self) -> sp.Expr:
        return sp.nsimplify(1 / (self.k_x * self.k_p), rational=True)


class ScanTable(BaseModel):
    columns: tuple[str, ...]
    rows: list[tuple[float, ...]]
    rates: dict[str, float | None] = {}
    flags: list[str] = []

    def column(self, name: str) -> list[float]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def fit_rate(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Slope of log|y| against log x; None when any y vanishes."""

    y = np.abs(np.asarray(ys, dtype=float))
    if len(y) < 2 or np.any(y == 0) or not np.all(np.isfinite(y)):
        return None
    slope, _ = np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(y), 1)
    return float(slope)


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Slope of y against x."""

    if len(xs) < 2 or not all(isfinite(v) for v in ys):
        return None
    slope, _ = np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)
    return float(slope)
