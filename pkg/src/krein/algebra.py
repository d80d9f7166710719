"""Structure constants of the quantum relativity algebra in units with hbar = 2."""

from __future__ import annotations

from itertools import combinations
from typing import Literal, NamedTuple, override

from krein.minkowski import ETA


class Generator(NamedTuple):
    kind: Literal["X", "P", "J", "I"]
    indices: tuple[int, ...] = ()

    @override
    def __str__(self) -> str:
        return self.kind + "".join(map(str, self.indices))

    @property
    def level_degree(self) -> int:
        return {"X": 1, "P": 1, "J": 2, "I": 0}[self.kind]


CENTRAL = Generator("I")
POSITIONS = tuple(Generator("X", (mu,)) for mu in range(4))
MOMENTA = tuple(Generator("P", (mu,)) for mu in range(4))
ROTATIONS = tuple(Generator("J", pair) for pair in combinations(range(4), 2))
GENERATORS = (*POSITIONS, *MOMENTA, *ROTATIONS, CENTRAL)


class Residual(NamedTuple):
    identity: str
    tag: str
    guard: int | None
    residual: float


def _eta(mu: int, nu: int) -> float:
    return float(ETA[mu, nu])


def _add(out: dict[Generator, complex], gen: Generator, coef: complex) -> None:
    if coef == 0:
        return
    if gen.kind == "J":
        mu, nu = gen.indices
        if mu == nu:
            return
        if mu > nu:
            gen, coef = Generator("J", (nu, mu)), -coef
    out[gen] = out.get(gen, 0) + coef
    if out[gen] == 0:
        del out[gen]


def _rotation_on_vector(
    rot: Generator, vec: Generator, out: dict[Generator, complex]
) -> None:
    mu, nu = rot.indices
    (rho,) = vec.indices
    _add(out, Generator(vec.kind, (nu,)), 2j * _eta(mu, rho))
    _add(out, Generator(vec.kind, (mu,)), -2j * _eta(nu, rho))


def structure(a: Generator, b: Generator) -> dict[Generator, complex]:
    """Coefficients c_k with [a, b] = sum_k c_k k."""

    out: dict[Generator, complex] = {}
    kinds = (a.kind, b.kind)

    if "I" in kinds or a == b:
        return out

    if kinds == ("X", "P"):
        _add(out, CENTRAL, 2j * _eta(a.indices[0], b.indices[0]))
    elif kinds == ("J", "X") or kinds == ("J", "P"):
        _rotation_on_vector(a, b, out)
    elif kinds == ("J", "J"):
        mu, nu = a.indices
        rho, sigma = b.indices
        _add(out, Generator("J", (nu, sigma)), 2j * _eta(mu, rho))
        _add(out, Generator("J", (mu, rho)), 2j * _eta(nu, sigma))
        _add(out, Generator("J", (mu, sigma)), -2j * _eta(nu, rho))
        _add(out, Generator("J", (nu, rho)), -2j * _eta(mu, sigma))
    elif kinds in (("P", "X"), ("X", "J"), ("P", "J")):
        return {gen: -coef for gen, coef in structure(b, a).items()}

    return out


def describe(a: Generator, b: Generator) -> str:
    terms = structure(a, b)
    rhs = " + ".join(f"({coef:g})*{gen}" for gen, coef in terms.items()) or "0"
    return f"[{a}, {b}] = {rhs}"
