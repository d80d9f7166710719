from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from itertools import combinations
from typing import override

import logfire
import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, sparse, stats
from scipy.special import factorial

from krein.algebra import (
    CENTRAL,
    GENERATORS,
    Generator,
    Residual,
    describe,
    structure,
)
from krein.fock import (
    KreinVector,
    OperatorMatrix as OperatorMatrix,
    TruncatedBasis,
    krein_inner,
    metric_operator,
    truncated_basis,
)
from krein.minkowski import ETA, PhasePoint, four_vector, minkowski_dot


class ConvergenceError(ArithmeticError):
    def __init__(self, residual: float, tol: float) -> None:
        super().__init__(residual, tol)
        self.residual = residual
        self.tol = tol

    @override
    def __str__(self) -> str:
        return (
            f"Truncation drops weight {self.residual:.3e} of the displaced vacuum, "
            f"above {self.tol:.1e}"
        )


@dataclass(frozen=True)
class GuardedSubspace:
    """Indices with total level <= N_max - guard, where truncation cannot reach."""

    basis: TruncatedBasis
    guard: int

    @cached_property
    def positions(self) -> NDArray[np.intp]:
        return self.basis.upto(self.basis.nmax - self.guard)

    def columns(self, op: OperatorMatrix) -> sparse.csr_matrix:
        return op.matrix[:, self.positions]

    def block(self, op: OperatorMatrix) -> NDArray[np.complex128]:
        return op.matrix[self.positions][:, self.positions].toarray()

    def residual(self, op: OperatorMatrix) -> float:
        if self.positions.size == 0:
            return 0.0
        cols = self.columns(op)
        return float(abs(cols).max()) if cols.nnz else 0.0

    def restrict(self, v: KreinVector) -> NDArray[np.complex128]:
        return np.asarray(v.coefficients)[self.positions]


@cache
def ladder_ops(
    basis: TruncatedBasis,
) -> tuple[tuple[OperatorMatrix, ...], tuple[OperatorMatrix, ...]]:
    """Annihilators a^mu and eta-creators a^{dag eta}_mu, both with matrix elements 2 sqrt(n)."""

    lowering: list[OperatorMatrix] = []
    for mu in range(4):
        rows, cols, values = [], [], []
        for col, n in enumerate(basis.indices):
            target = n.shifted(mu, -1)
            if target is None:
                continue
            rows.append(basis.positions[target])
            cols.append(col)
            values.append(2.0 * np.sqrt(n[mu]))
        matrix = sparse.coo_matrix(
            (values, (rows, cols)), shape=(basis.size, basis.size)
        ).tocsr()
        lowering.append(OperatorMatrix(basis, matrix, 1))

    raising = tuple(
        OperatorMatrix(basis, a.matrix.T.tocsr(), 1) for a in lowering
    )
    return tuple(lowering), raising


@cache
def position_momentum(
    basis: TruncatedBasis,
) -> tuple[tuple[OperatorMatrix, ...], tuple[OperatorMatrix, ...]]:
    lowering, raising = ladder_ops(basis)
    positions = tuple(
        (float(ETA[mu, mu]) * lowering[mu] + raising[mu]) / 2 for mu in range(4)
    )
    momenta = tuple(
        (float(ETA[mu, mu]) * lowering[mu] - raising[mu]) / 2j for mu in range(4)
    )
    return positions, momenta


@cache
def number_ops(
    basis: TruncatedBasis,
) -> tuple[tuple[OperatorMatrix, ...], OperatorMatrix]:
    lowering, raising = ladder_ops(basis)
    partial = tuple(
        ((raising[mu] @ lowering[mu]) / 4).with_level_degree(0) for mu in range(4)
    )
    total = partial[0] + partial[1] + partial[2] + partial[3]
    return partial, total


@cache
def lorentz_generators(basis: TruncatedBasis) -> dict[tuple[int, int], OperatorMatrix]:
    """J_{mu nu} = X_mu P_nu - X_nu P_mu for every ordered pair mu != nu.

    The products are formed two levels above N_max and cut back, so each J is
    the exact (level preserving) compression of the untruncated generator.
    """

    padded = truncated_basis(basis.nmax + 2)
    positions, momenta = position_momentum(padded)
    keep = slice(0, basis.size)

    generators: dict[tuple[int, int], OperatorMatrix] = {}
    for mu, nu in combinations(range(4), 2):
        j = positions[mu] @ momenta[nu] - positions[nu] @ momenta[mu]
        op = OperatorMatrix(basis, j.matrix[keep, keep], 2)
        generators[mu, nu] = op
        generators[nu, mu] = -op
    return generators


def eta_adjoint(a: OperatorMatrix) -> OperatorMatrix:
    eta = metric_operator(a.basis)
    return OperatorMatrix(
        a.basis, eta.matrix @ a.matrix.conj().T @ eta.matrix, a.level_degree
    )


def generator_operator(basis: TruncatedBasis, gen: Generator) -> OperatorMatrix:
    match gen.kind:
        case "X":
            return position_momentum(basis)[0][gen.indices[0]]
        case "P":
            return position_momentum(basis)[1][gen.indices[0]]
        case "J":
            return lorentz_generators(basis)[gen.indices]  # type: ignore[index]
        case "I":
            return OperatorMatrix.identity(basis)


def _combination(
    basis: TruncatedBasis, terms: dict[Generator, complex]
) -> OperatorMatrix:
    result = OperatorMatrix(basis, sparse.csr_matrix((basis.size, basis.size)), 0)
    for gen, coef in terms.items():
        result = result + coef * generator_operator(basis, gen)
    return result


def truncation_weight(basis: TruncatedBasis, p: ArrayLike, x: ArrayLike) -> float:
    """Share of the Euclidean weight of |p, x> on levels above N_max.

    The level of the exact coherent state is Poisson distributed with mean
    sum_mu (x^mu^2 + p^mu^2).
    """

    p, x = four_vector(p), four_vector(x)
    return float(stats.poisson.sf(basis.nmax, float(np.sum(x**2 + p**2))))


def weyl_displacement(
    basis: TruncatedBasis,
    p: ArrayLike,
    x: ArrayLike,
    tol: float = 1e-6,
) -> OperatorMatrix:
    """V(p, x) = exp(i (p^mu X_mu - x^mu P_mu)) on the truncated space.

    Raises ConvergenceError when the displaced vacuum leaves more than `tol`
    of its weight above N_max.
    """

    p, x = four_vector(p), four_vector(x)
    residual = truncation_weight(basis, p, x)
    if residual > tol:
        raise ConvergenceError(residual, tol)

    positions, momenta = position_momentum(basis)
    generator = np.zeros((basis.size, basis.size), dtype=np.complex128)
    for mu in range(4):
        generator += p[mu] * positions[mu].toarray() - x[mu] * momenta[mu].toarray()

    with logfire.span("weyl displacement at N_max={nmax}", nmax=basis.nmax):
        matrix = linalg.expm(1j * generator)
    return OperatorMatrix(basis, matrix, basis.nmax)


def lorentz_transformation(basis: TruncatedBasis, mu: int, nu: int, omega: float) -> OperatorMatrix:
    """U = exp(-(i omega / 2) J_{mu nu}), exponentiated level by level."""

    j = lorentz_generators(basis)[mu, nu]
    blocks = []
    for level in range(basis.nmax + 1):
        idx = np.flatnonzero(basis.levels == level)
        block = j.matrix[idx][:, idx].toarray()
        blocks.append(linalg.expm(-0.5j * omega * block))
    return OperatorMatrix(basis, sparse.block_diag(blocks, format="csr"), 0)


def coherent_state(basis: TruncatedBasis, p: ArrayLike, x: ArrayLike) -> KreinVector:
    p, x = four_vector(p), four_vector(x)
    z = x + 1j * p
    n = basis.table
    terms = z[None, :] ** n / np.sqrt(factorial(n))
    prefactor = np.exp(-(minkowski_dot(x, x) + minkowski_dot(p, p)) / 2)
    return KreinVector(basis, prefactor * np.prod(terms, axis=1))


def coherent_overlap_exponent(a: PhasePoint, b: PhasePoint) -> complex:
    """Exponent of <b|a>_eta; its real part is log|<b|a>_eta|."""

    dp, dx = b.p - a.p, b.x - a.x
    phase = minkowski_dot(b.x, a.p) - minkowski_dot(b.p, a.x)
    gauss = -(minkowski_dot(dx, dx) + minkowski_dot(dp, dp)) / 2
    return complex(1j * phase + gauss)


def coherent_overlap(a: PhasePoint, b: PhasePoint) -> complex:
    """<b|a>_eta in closed form."""

    return complex(np.exp(coherent_overlap_exponent(a, b)))


def expectation(a: OperatorMatrix, psi: KreinVector) -> complex:
    return complex(krein_inner(psi, a @ psi) / krein_inner(psi, psi))


def oscillator(basis: TruncatedBasis) -> OperatorMatrix:
    """X_mu X^mu + P_mu P^mu."""

    positions, momenta = position_momentum(basis)
    total = OperatorMatrix(basis, sparse.csr_matrix((basis.size, basis.size)), 0)
    for mu in range(4):
        x, p = positions[mu], momenta[mu]
        total = total + float(ETA[mu, mu]) * (x @ x + p @ p)
    return total


def level_spectrum(
    a: OperatorMatrix, guard: int | None = None, tol: float = 1e-10
) -> NDArray[np.complex128]:
    """Eigenvalues on the guarded block, sorted; complex pairs are reported, not dropped."""

    subspace = GuardedSubspace(a.basis, a.level_degree if guard is None else guard)
    block = subspace.block(a)
    if block.size == 0:
        return np.zeros(0, dtype=np.complex128)

    eigenvalues = linalg.eigvals(block)
    eigenvalues = eigenvalues[np.lexsort((eigenvalues.imag, eigenvalues.real))]
    worst = float(np.abs(eigenvalues.imag).max())
    if worst > tol:
        logfire.warn(
            "complex eigenvalues on guarded block, max |Im| = {worst}", worst=worst
        )
    return eigenvalues


def weyl_composition_residual(
    basis: TruncatedBasis, first: PhasePoint, second: PhasePoint, guard: int = 2
) -> Residual:
    """V(p1, x1) V(p2, x2) against e^{-i(x1.p2 - p1.x2)} V(p1 + p2, x1 + x2) on the guarded block."""

    product = weyl_displacement(basis, first.p, first.x) @ weyl_displacement(basis, second.p, second.x)
    phase = np.exp(-1j * (minkowski_dot(first.x, second.p) - minkowski_dot(first.p, second.x)))
    combined = weyl_displacement(basis, first.p + second.p, first.x + second.x)
    subspace = GuardedSubspace(basis, guard)
    block = subspace.block(product - complex(phase) * combined)
    return Residual(
        "V(p1,x1) V(p2,x2) = e^{-i(x1.p2 - p1.x2)} V(p1+p2, x1+x2)",
        "weyl-composition",
        guard,
        float(np.abs(block).max()) if block.size else 0.0,
    )


def verify_algebra(basis: TruncatedBasis, guarded: bool = True) -> list[Residual]:
    """Residuals of every generator commutator and the ladder relations."""

    def guard_for(degree: int) -> int:
        return degree if guarded else 0

    residuals: list[Residual] = []

    with logfire.span("verify algebra at N_max={nmax}", nmax=basis.nmax):
        noncentral = [g for g in GENERATORS if g != CENTRAL]
        for a, b in combinations(noncentral, 2):
            guard = guard_for(a.level_degree + b.level_degree)
            lhs = generator_operator(basis, a).commutator(generator_operator(basis, b))
            diff = lhs - _combination(basis, structure(a, b))
            tag = "lorentz-algebra" if "J" in (a.kind, b.kind) else "heisenberg-algebra"
            residuals.append(
                Residual(describe(a, b), tag, guard, GuardedSubspace(basis, guard).residual(diff))
            )

        lowering, raising = ladder_ops(basis)
        partial, _ = number_ops(basis)
        identity = OperatorMatrix.identity(basis)
        for mu in range(4):
            for nu in range(4):
                delta = 1.0 if mu == nu else 0.0
                checks = [
                    (
                        f"[a^{mu}, a+_{nu}] = {4 * delta:g}*I",
                        lowering[mu].commutator(raising[nu]) - 4 * delta * identity,
                        2,
                    ),
                    (
                        f"[a^{mu}, a^{nu}] = 0",
                        lowering[mu].commutator(lowering[nu]),
                        2,
                    ),
                    (
                        f"[N_{mu}, a^{nu}] = {-delta:g}*a^{mu}",
                        partial[mu].commutator(lowering[nu]) + delta * lowering[mu],
                        1,
                    ),
                    (
                        f"[N_{mu}, a+_{nu}] = {delta:g}*a+_{mu}",
                        partial[mu].commutator(raising[nu]) - delta * raising[mu],
                        1,
                    ),
                ]
                for identity_text, diff, degree in checks:
                    guard = guard_for(degree)
                    residuals.append(
                        Residual(
                            identity_text,
                            "ladder-algebra",
                            guard,
                            GuardedSubspace(basis, guard).residual(diff),
                        )
                    )

        first = PhasePoint.of(p=(1e-3, 2e-3, 0.0, 0.0), x=(0.0, 1e-3, -1e-3, 0.0))
        second = PhasePoint.of(p=(0.0, -1e-3, 2e-3, 0.0), x=(2e-3, 0.0, 1e-3, 0.0))
        residuals.append(weyl_composition_residual(basis, first, second, guard_for(2)))

        _, total = number_ops(basis)
        hermitian = [
            *((str(g), generator_operator(basis, g)) for g in noncentral),
            *((f"N_{mu}", partial[mu]) for mu in range(4)),
            ("N", total),
        ]
        for name, op in hermitian:
            diff = eta_adjoint(op) - op
            residuals.append(
                Residual(
                    f"eta_adjoint({name}) = {name}",
                    "eta-hermiticity",
                    0,
                    GuardedSubspace(basis, 0).residual(diff),
                )
            )

    return residuals
