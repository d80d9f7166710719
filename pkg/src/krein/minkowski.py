from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import NamedTuple, override

import numpy as np
from numpy.typing import ArrayLike, NDArray


ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA.flags.writeable = False

LORENTZ_TOL = 1e-12

type FourVector = NDArray[np.float64] | NDArray[np.complex128]
type LorentzMatrix = NDArray[np.float64]


class NotLorentzError(ValueError):
    def __init__(self, deviation: float) -> None:
        super().__init__(deviation)
        self.deviation = deviation

    @override
    def __str__(self) -> str:
        return f"Matrix is not in O(1,3): |L^T eta L - eta| = {self.deviation:.3e}"


class DegenerateRepresentationError(ValueError):
    @override
    def __str__(self) -> str:
        return "varsigma = 0 labels the one-dimensional representations"


def four_vector(components: ArrayLike) -> FourVector:
    vector = np.array(components)
    if vector.shape != (4,):
        raise ValueError(f"Expected four components, got shape {vector.shape}")
    if not np.iscomplexobj(vector):
        vector = vector.astype(np.float64)
    vector.flags.writeable = False
    return vector


def lower(v: ArrayLike) -> FourVector:
    return ETA @ np.asarray(v)


def raise_index(v: ArrayLike) -> FourVector:
    return ETA @ np.asarray(v)


def minkowski_dot(u: ArrayLike, v: ArrayLike):
    return np.asarray(u) @ ETA @ np.asarray(v)


def minkowski_square(v: ArrayLike):
    return minkowski_dot(v, v)


def lorentz_deviation(matrix: ArrayLike) -> float:
    m = np.asarray(matrix, dtype=np.float64)
    return float(np.abs(m.T @ ETA @ m - ETA).max())


def is_lorentz(matrix: ArrayLike, tol: float = LORENTZ_TOL) -> bool:
    return np.shape(matrix) == (4, 4) and lorentz_deviation(matrix) <= tol


def boost(direction: int, rapidity: float) -> LorentzMatrix:
    if direction not in (1, 2, 3):
        raise ValueError(f"Boost direction must be a spatial axis, got {direction}")
    if not math.isfinite(rapidity):
        raise ValueError("Rapidity must be finite")

    matrix = np.eye(4)
    matrix[0, 0] = matrix[direction, direction] = math.cosh(rapidity)
    matrix[0, direction] = matrix[direction, 0] = math.sinh(rapidity)
    return matrix


def rotation(axis: int, angle: float) -> LorentzMatrix:
    """Rotation about a spatial axis, right-handed."""

    if axis not in (1, 2, 3):
        raise ValueError(f"Rotation axis must be spatial, got {axis}")

    i, j = {1: (2, 3), 2: (3, 1), 3: (1, 2)}[axis]
    matrix = np.eye(4)
    matrix[i, i] = matrix[j, j] = math.cos(angle)
    matrix[i, j] = -math.sin(angle)
    matrix[j, i] = math.sin(angle)
    return matrix


def lorentz_inverse(matrix: LorentzMatrix) -> LorentzMatrix:
    return ETA @ matrix.T @ ETA


def _zero() -> FourVector:
    return four_vector(np.zeros(4))


def _identity() -> LorentzMatrix:
    return np.eye(4)


@dataclass(frozen=True, eq=False)
class GroupElement:
    p: FourVector = field(default_factory=_zero)
    x: FourVector = field(default_factory=_zero)
    theta: float = 0.0
    lorentz: LorentzMatrix = field(default_factory=_identity)

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", four_vector(self.p))
        object.__setattr__(self, "x", four_vector(self.x))
        matrix = np.array(self.lorentz, dtype=np.float64)
        deviation = lorentz_deviation(matrix)
        if deviation > LORENTZ_TOL:
            raise NotLorentzError(deviation)
        matrix.flags.writeable = False
        object.__setattr__(self, "lorentz", matrix)

    @classmethod
    def identity(cls) -> GroupElement:
        return cls()

    @classmethod
    def translation(
        cls,
        p: ArrayLike = (0, 0, 0, 0),
        x: ArrayLike = (0, 0, 0, 0),
        theta: float = 0.0,
    ) -> GroupElement:
        return cls(p=four_vector(p), x=four_vector(x), theta=theta)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return compose(self, other)

    def isclose(self, other: GroupElement, tol: float = 1e-12) -> bool:
        return bool(
            np.allclose(self.p, other.p, atol=tol, rtol=0)
            and np.allclose(self.x, other.x, atol=tol, rtol=0)
            and abs(self.theta - other.theta) <= tol
            and np.allclose(self.lorentz, other.lorentz, atol=tol, rtol=0)
        )


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Group product g1 g2 of the centrally extended Poincare-Heisenberg group."""

    lp = g1.lorentz @ g2.p
    lx = g1.lorentz @ g2.x
    return GroupElement(
        p=g1.p + lp,
        x=g1.x + lx,
        theta=float(g1.theta + g2.theta - minkowski_dot(g1.x, lp) + minkowski_dot(g1.p, lx)),
        lorentz=g1.lorentz @ g2.lorentz,
    )


def inverse(g: GroupElement) -> GroupElement:
    inv = lorentz_inverse(g.lorentz)
    return GroupElement(p=-(inv @ g.p), x=-(inv @ g.x), theta=-g.theta, lorentz=inv)


class PhasePoint(NamedTuple):
    """Coherent-state label (p^mu, x^mu) in normalized coordinates."""

    p: FourVector
    x: FourVector

    @classmethod
    def of(cls, p: ArrayLike = (0, 0, 0, 0), x: ArrayLike = (0, 0, 0, 0)) -> PhasePoint:
        return cls(four_vector(p), four_vector(x))


def normalize_representation(
    p: ArrayLike, x: ArrayLike, varsigma: float
) -> tuple[FourVector, FourVector]:
    if varsigma == 0:
        raise DegenerateRepresentationError()

    scale = math.sqrt(abs(varsigma))
    p, x = four_vector(p), four_vector(x)
    if varsigma > 0:
        return four_vector(scale * p), four_vector(scale * x)
    return four_vector(-scale * x), four_vector(-scale * p)
