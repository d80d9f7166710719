import numpy as np
import pytest

from krein.fock import (
    BasisMismatchError,
    FockIndex,
    KreinVector,
    OperatorMatrix,
    TruncatedBasis,
    euclidean_inner,
    krein_gram,
    krein_inner,
    metric_operator,
    signature,
    truncated_basis,
)


def test_basis_size(small_basis: TruncatedBasis):
    assert small_basis.size == 35
    assert len(list(small_basis)) == 35
    assert small_basis.indices[0] == FockIndex(0, 0, 0, 0)


def test_basis_is_ordered_by_level(small_basis: TruncatedBasis):
    assert list(small_basis.levels) == sorted(small_basis.levels)


def test_negative_nmax():
    with pytest.raises(ValueError):
        TruncatedBasis(-1)


def test_signature(small_basis: TruncatedBasis):
    assert signature(small_basis) == (11, 24)


@pytest.mark.parametrize(
    ("n", "norm"),
    [((0, 0, 0, 0), 1), ((1, 0, 0, 0), -1), ((2, 0, 0, 0), 1), ((1, 2, 0, 0), -1), ((0, 1, 1, 1), 1)],
)
def test_basis_vector_norms_are_exact(small_basis: TruncatedBasis, n, norm):
    v = KreinVector.basis_vector(small_basis, n)
    value = krein_inner(v, v)
    assert value == norm
    assert isinstance(value, int)


def test_gram_of_basis_is_diagonal(small_basis: TruncatedBasis):
    vectors = [KreinVector.basis_vector(small_basis, n) for n in small_basis]
    gram = krein_gram(vectors)
    assert np.array_equal(gram, np.diag(small_basis.parities))


def test_metric_operator(small_basis: TruncatedBasis):
    eta = metric_operator(small_basis)
    assert np.array_equal((eta @ eta).toarray(), np.eye(small_basis.size))

    rng = np.random.default_rng(1)
    psi = KreinVector(small_basis, rng.normal(size=35) + 1j * rng.normal(size=35))
    phi = KreinVector(small_basis, rng.normal(size=35) + 1j * rng.normal(size=35))
    assert krein_inner(psi, phi) == pytest.approx(euclidean_inner(psi, eta @ phi))


def test_vector_arithmetic(small_basis: TruncatedBasis):
    a = KreinVector.basis_vector(small_basis, (1, 0, 0, 0))
    b = KreinVector.basis_vector(small_basis, (0, 1, 0, 0))
    combo = 2 * a - b
    assert combo[(1, 0, 0, 0)] == 2
    assert combo[(0, 1, 0, 0)] == -1
    assert krein_inner(combo, combo) == -4 + 1


def test_mismatched_bases():
    a = KreinVector.zeros(truncated_basis(1))
    b = KreinVector.zeros(truncated_basis(2))
    with pytest.raises(BasisMismatchError):
        krein_inner(a, b)
    with pytest.raises(BasisMismatchError):
        OperatorMatrix.identity(truncated_basis(2)) @ a


def test_non_finite_coefficients():
    basis = truncated_basis(1)
    with pytest.raises(ValueError):
        KreinVector(basis, np.array([np.nan, 0, 0, 0, 0]))


def test_json_form(small_basis: TruncatedBasis):
    v = KreinVector.basis_vector(small_basis, (0, 0, 2, 1)) * (1 - 2j)
    data = v.to_json()
    assert data == {"basis": 3, "coefficients": [[0, 0, 2, 1, 1.0, -2.0]]}
    assert np.array_equal(KreinVector.from_json(data).coefficients, v.coefficients)


def test_level_degree_bookkeeping(small_basis: TruncatedBasis):
    identity = OperatorMatrix.identity(small_basis)
    raised = identity.with_level_degree(1)
    assert (raised @ raised).level_degree == 2
    assert (raised + identity).level_degree == 1
