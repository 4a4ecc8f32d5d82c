import numpy as np
import pytest

from schmidtsep import states
from schmidtsep.errors import OutOfRange
from schmidtsep.linalg import Dims, partial_trace, purity
from schmidtsep.states import SeparableRecipe


def test_max_entangled():
    rho = states.max_entangled(3)
    assert purity(rho) == pytest.approx(1.0)
    np.testing.assert_allclose(partial_trace(rho, "A"), np.eye(3) / 3, atol=1e-15)
    with pytest.raises(OutOfRange):
        states.max_entangled(1)


def test_werner_grid_and_range():
    for p in np.linspace(0, 1, 101):
        np.testing.assert_allclose(
            np.linalg.eigvalsh(states.werner(p).mat),
            sorted([(1 - p) / 4] * 3 + [(1 + 3 * p) / 4]),
            atol=1e-14,
        )
    for p in (-0.1, 1.1):
        with pytest.raises(OutOfRange):
            states.werner(p)
        with pytest.raises(OutOfRange):
            states.werner_polys(p)


@pytest.mark.parametrize(
    "fn",
    [
        lambda s: states.random_density((2, 3), s).mat,
        lambda s: states.random_pure((3, 3), s).mat,
        lambda s: states.random_unitary(4, s),
        lambda s: states.random_unit_vector(5, s),
        lambda s: states.random_separable((2, 2), seed=s)[0].mat,
    ],
)
def test_seeded_generators_are_deterministic(fn):
    assert np.array_equal(fn(11), fn(11))
    assert not np.allclose(fn(11), fn(12))


def test_random_states_are_valid(dims):
    rng = np.random.default_rng(0)
    for _ in range(10):
        rho = states.random_density(dims, rng)
        assert np.linalg.eigvalsh(rho.mat).min() > -1e-12
        assert purity(states.random_pure(dims, rng)) == pytest.approx(1.0)


def test_random_unitary_is_unitary():
    u = states.random_unitary(5, 3)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_separable_recipe_reassembles():
    rho, recipe = states.random_separable((2, 3), K=5, seed=4)
    assert recipe.K == 5
    np.testing.assert_allclose(recipe.matrix(), rho.mat, atol=1e-15)
    manual = sum(
        w * np.kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
        for w, a, b in zip(recipe.weights, recipe.factors_a, recipe.factors_b)
    )
    np.testing.assert_allclose(manual, rho.mat, atol=1e-14)


def test_separable_recipe_validation():
    a = np.array([[1, 0]], dtype=complex)
    with pytest.raises(OutOfRange):
        SeparableRecipe(Dims(2, 2), np.array([0.5]), a, a)
    with pytest.raises(OutOfRange):
        states.random_separable((2, 2), K=0, seed=0)


def test_product_state_from_vectors():
    rho = states.product_state([1, 0], [0, 0, 2])
    assert rho.dims == Dims(2, 3)
    assert rho.mat[2, 2] == pytest.approx(1.0)
