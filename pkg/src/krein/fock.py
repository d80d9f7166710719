from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cache, cached_property
import itertools
from math import comb
from numbers import Number
from typing import Any, NamedTuple, override

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import sparse


class FockIndex(NamedTuple):
    n0: int
    n1: int
    n2: int
    n3: int

    @property
    def total(self) -> int:
        return self.n0 + self.n1 + self.n2 + self.n3

    @property
    def parity(self) -> int:
        return -1 if self.n0 % 2 else 1

    def shifted(self, mu: int, step: int) -> FockIndex | None:
        values = list(self)
        values[mu] += step
        if values[mu] < 0:
            return None
        return FockIndex(*values)


class KreinSignature(NamedTuple):
    negative: int
    positive: int


class BasisMismatchError(ValueError):
    def __init__(self, left: TruncatedBasis, right: TruncatedBasis) -> None:
        super().__init__(left, right)
        self.left = left
        self.right = right

    @override
    def __str__(self) -> str:
        return f"Truncations differ: N_max={self.left.nmax} vs N_max={self.right.nmax}"


@dataclass(frozen=True)
class TruncatedBasis:
    nmax: int

    def __post_init__(self) -> None:
        if self.nmax < 0:
            raise ValueError(f"N_max must be nonnegative, got {self.nmax}")

    @cached_property
    def indices(self) -> tuple[FockIndex, ...]:
        return tuple(
            FockIndex(*n)
            for level in range(self.nmax + 1)
            for n in itertools.product(range(level + 1), repeat=4)
            if sum(n) == level
        )

    @cached_property
    def positions(self) -> dict[FockIndex, int]:
        return {n: i for i, n in enumerate(self.indices)}

    @cached_property
    def table(self) -> NDArray[np.int64]:
        return np.array(self.indices, dtype=np.int64).reshape(-1, 4)

    @cached_property
    def levels(self) -> NDArray[np.int64]:
        return self.table.sum(axis=1)

    @cached_property
    def parities(self) -> NDArray[np.int64]:
        return 1 - 2 * (self.table[:, 0] % 2)

    @property
    def size(self) -> int:
        return comb(self.nmax + 4, 4)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[FockIndex]:
        return iter(self.indices)

    def index(self, n: Sequence[int]) -> int:
        return self.positions[FockIndex(*n)]

    def upto(self, level: int) -> NDArray[np.intp]:
        return np.flatnonzero(self.levels <= level)


@cache
def truncated_basis(nmax: int) -> TruncatedBasis:
    return TruncatedBasis(nmax)


@dataclass(frozen=True, eq=False)
class KreinVector:
    basis: TruncatedBasis
    coefficients: NDArray[Any]

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients)
        if coefficients.shape != (self.basis.size,):
            raise ValueError(
                f"Expected {self.basis.size} coefficients, got shape {coefficients.shape}"
            )
        if np.issubdtype(coefficients.dtype, np.inexact) and not np.all(
            np.isfinite(coefficients)
        ):
            raise ValueError("Coefficients must be finite")
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def basis_vector(cls, basis: TruncatedBasis, n: Sequence[int]) -> KreinVector:
        coefficients = np.zeros(basis.size, dtype=np.int64)
        coefficients[basis.index(n)] = 1
        return cls(basis, coefficients)

    @classmethod
    def zeros(cls, basis: TruncatedBasis) -> KreinVector:
        return cls(basis, np.zeros(basis.size, dtype=np.complex128))

    def __getitem__(self, n: Sequence[int]) -> Any:
        return self.coefficients[self.basis.index(n)]

    def _check(self, other: KreinVector) -> None:
        if self.basis != other.basis:
            raise BasisMismatchError(self.basis, other.basis)

    def __add__(self, other: KreinVector) -> KreinVector:
        self._check(other)
        return KreinVector(self.basis, self.coefficients + other.coefficients)

    def __sub__(self, other: KreinVector) -> KreinVector:
        self._check(other)
        return KreinVector(self.basis, self.coefficients - other.coefficients)

    def __neg__(self) -> KreinVector:
        return KreinVector(self.basis, -self.coefficients)

    def __mul__(self, scalar: Number) -> KreinVector:
        return KreinVector(self.basis, self.coefficients * scalar)

    __rmul__ = __mul__

    def to_json(self) -> dict[str, Any]:
        rows = [
            [*n, float(np.real(c)), float(np.imag(c))]
            for n, c in zip(self.basis.indices, self.coefficients)
            if c != 0
        ]
        return {"basis": self.basis.nmax, "coefficients": rows}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> KreinVector:
        basis = truncated_basis(int(data["basis"]))
        coefficients = np.zeros(basis.size, dtype=np.complex128)
        for *n, re, im in data["coefficients"]:
            coefficients[basis.index([int(k) for k in n])] = complex(re, im)
        return cls(basis, coefficients)


def euclidean_inner(psi: KreinVector, phi: KreinVector) -> Any:
    psi._check(phi)
    return np.sum(np.conj(psi.coefficients) * phi.coefficients).item()


def krein_inner(psi: KreinVector, phi: KreinVector) -> Any:
    psi._check(phi)
    return np.sum(
        psi.basis.parities * np.conj(psi.coefficients) * phi.coefficients
    ).item()


def krein_gram(vectors: Sequence[KreinVector]) -> NDArray[Any]:
    """Gram matrix G[i, j] = <v_i|v_j>_eta; exact for integer coefficients."""

    if not vectors:
        return np.zeros((0, 0), dtype=np.int64)
    basis = vectors[0].basis
    for v in vectors:
        vectors[0]._check(v)
    stacked = np.stack([v.coefficients for v in vectors])
    return np.conj(stacked) @ (basis.parities[:, None] * stacked.T)


def signature(basis: TruncatedBasis) -> KreinSignature:
    negative = int(np.count_nonzero(basis.parities < 0))
    return KreinSignature(negative=negative, positive=basis.size - negative)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Sparse operator on a truncated basis.

    `level_degree` bounds how far one application moves the total level; it
    adds under products and takes the max under sums.
    """

    basis: TruncatedBasis
    matrix: sparse.csr_matrix
    level_degree: int

    def __post_init__(self) -> None:
        matrix = sparse.csr_matrix(self.matrix, dtype=np.complex128)
        if matrix.shape != (self.basis.size, self.basis.size):
            raise ValueError(f"Operator shape {matrix.shape} does not fit the basis")
        matrix.eliminate_zeros()
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, basis: TruncatedBasis) -> OperatorMatrix:
        return cls(basis, sparse.identity(basis.size, format="csr"), 0)

    @classmethod
    def diagonal(cls, basis: TruncatedBasis, values: ArrayLike) -> OperatorMatrix:
        return cls(basis, sparse.diags(np.asarray(values), format="csr"), 0)

    def _check(self, other: OperatorMatrix | KreinVector) -> None:
        if self.basis != other.basis:
            raise BasisMismatchError(self.basis, other.basis)

    def __matmul__(self, other: OperatorMatrix | KreinVector) -> Any:
        self._check(other)
        if isinstance(other, KreinVector):
            return KreinVector(self.basis, self.matrix @ other.coefficients)
        return OperatorMatrix(
            self.basis,
            self.matrix @ other.matrix,
            self.level_degree + other.level_degree,
        )

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(
            self.basis,
            self.matrix + other.matrix,
            max(self.level_degree, other.level_degree),
        )

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        return self + (-other)

    def __neg__(self) -> OperatorMatrix:
        return OperatorMatrix(self.basis, -self.matrix, self.level_degree)

    def __mul__(self, scalar: Number) -> OperatorMatrix:
        return OperatorMatrix(self.basis, self.matrix * scalar, self.level_degree)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> OperatorMatrix:
        return OperatorMatrix(self.basis, self.matrix / scalar, self.level_degree)

    def commutator(self, other: OperatorMatrix) -> OperatorMatrix:
        return self @ other - other @ self

    @property
    def H(self) -> OperatorMatrix:
        return OperatorMatrix(self.basis, self.matrix.conj().T, self.level_degree)

    def with_level_degree(self, level_degree: int) -> OperatorMatrix:
        return OperatorMatrix(self.basis, self.matrix, level_degree)

    def toarray(self) -> NDArray[np.complex128]:
        return self.matrix.toarray()


def metric_operator(basis: TruncatedBasis) -> OperatorMatrix:
    return OperatorMatrix.diagonal(basis, basis.parities)


def positive_norm_projector(basis: TruncatedBasis) -> OperatorMatrix:
    return OperatorMatrix.diagonal(basis, (basis.parities > 0).astype(np.int64))
