import numpy as np
import pytest

from krein.minkowski import (
    ETA,
    DegenerateRepresentationError,
    GroupElement,
    NotLorentzError,
    boost,
    compose,
    four_vector,
    inverse,
    is_lorentz,
    minkowski_dot,
    normalize_representation,
    rotation,
)


def _element() -> GroupElement:
    return GroupElement(
        p=(0.1, -0.2, 0.3, 0.05),
        x=(0.4, 0.0, -0.1, 0.2),
        theta=0.7,
        lorentz=boost(2, 0.3) @ rotation(3, 0.5),
    )


def test_metric_is_mostly_plus():
    assert minkowski_dot((1, 0, 0, 0), (1, 0, 0, 0)) == -1
    assert minkowski_dot((0, 1, 1, 0), (0, 1, 1, 0)) == 2


def test_boosts_and_rotations_are_lorentz():
    assert is_lorentz(boost(1, 0.8))
    assert is_lorentz(rotation(2, 1.1) @ boost(3, -0.4))
    assert not is_lorentz(np.diag([2.0, 1.0, 1.0, 1.0]))


@pytest.mark.parametrize("direction", [0, 4])
def test_boost_needs_spatial_direction(direction: int):
    with pytest.raises(ValueError):
        boost(direction, 0.1)


def test_four_vector_shape():
    with pytest.raises(ValueError):
        four_vector((1, 2, 3))


def test_group_element_rejects_non_lorentz():
    with pytest.raises(NotLorentzError):
        GroupElement(lorentz=np.diag([2.0, 1.0, 1.0, 1.0]))


def test_inverse():
    g = _element()
    assert (g @ inverse(g)).isclose(GroupElement.identity(), 1e-10)
    assert (inverse(g) @ g).isclose(GroupElement.identity(), 1e-10)


def test_associativity():
    g1 = _element()
    g2 = GroupElement.translation(p=(0.0, 1.0, 0.0, -0.5), x=(0.2, 0.2, 0.0, 0.0), theta=0.1)
    g3 = GroupElement(x=(1.0, 0.0, 0.0, 0.3), lorentz=boost(1, -0.6))
    assert compose(compose(g1, g2), g3).isclose(compose(g1, compose(g2, g3)), 1e-10)


def test_translation_phase():
    a = GroupElement.translation(p=(0, 1, 0, 0), x=(0, 0, 2, 0))
    b = GroupElement.translation(p=(0, 0, 3, 0), x=(0, 5, 0, 0))
    product = a @ b
    expected = -minkowski_dot(a.x, b.p) + minkowski_dot(a.p, b.x)
    assert product.theta == pytest.approx(expected)
    assert np.allclose(product.p, a.p + b.p)
    assert np.allclose(product.x, a.x + b.x)


def test_lorentz_preserves_metric():
    lam = _element().lorentz
    assert np.allclose(lam.T @ ETA @ lam, ETA)


def test_normalize_representation():
    p, x = (1.0, 0.0, 2.0, 0.0), (0.0, 3.0, 0.0, 1.0)
    scaled_p, scaled_x = normalize_representation(p, x, 4.0)
    assert np.allclose(scaled_p, 2 * np.array(p))
    assert np.allclose(scaled_x, 2 * np.array(x))

    swapped_p, swapped_x = normalize_representation(p, x, -4.0)
    assert np.allclose(swapped_p, -2 * np.array(x))
    assert np.allclose(swapped_x, -2 * np.array(p))

    with pytest.raises(DegenerateRepresentationError):
        normalize_representation(p, x, 0.0)
