import numpy as np
import pytest
from scipy.optimize import brentq

from schmidtsep import states
from schmidtsep.errors import UnsupportedDims
from schmidtsep.linalg import validate_density
from schmidtsep.ppt import is_separable_2xN, partial_transpose, ppt_report


def test_partial_transpose_loop_reference(dims):
    rho = states.random_density(dims, 1)
    nA, nB = dims
    t = rho.tensor()
    ref = np.zeros_like(t)
    for i in range(nA):
        for a in range(nB):
            for j in range(nA):
                for b in range(nB):
                    ref[i, a, j, b] = t[j, a, i, b]
    np.testing.assert_array_equal(partial_transpose(rho, "A"), ref.reshape(nA * nB, -1))


def test_partial_transposes_share_spectrum(dims):
    rho = states.random_density(dims, 2)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(partial_transpose(rho, "A")),
        np.linalg.eigvalsh(partial_transpose(rho, "B")),
        atol=1e-12,
    )


def test_bell_state_is_npt(bell):
    rep = ppt_report(bell)
    assert rep.min_eigenvalue == pytest.approx(-0.5)
    assert not rep.is_ppt
    assert not is_separable_2xN(bell)


def test_product_and_mixed_states_are_ppt():
    assert is_separable_2xN(states.maximally_mixed((2, 3)))
    assert is_separable_2xN(states.product_state([1, 1j], [1, 0, 2]))


def test_werner_min_eigenvalue():
    for p in np.linspace(0, 1, 21):
        assert ppt_report(states.werner(p)).min_eigenvalue == pytest.approx((1 - 3 * p) / 4, abs=1e-12)


def test_ppt_threshold_bisection():
    p = brentq(lambda p: ppt_report(states.werner(p)).min_eigenvalue, 0, 1, xtol=1e-12)
    assert p == pytest.approx(1 / 3, abs=1e-9)


def test_random_separable_states_are_ppt():
    for dims in ((2, 2), (2, 3), (3, 2)):
        for seed in range(20):
            rho, _ = states.random_separable(dims, seed=seed)
            assert is_separable_2xN(rho)


def test_unsupported_dims():
    with pytest.raises(UnsupportedDims):
        is_separable_2xN(states.maximally_mixed((3, 3)))
    # the report itself is available in any dimension
    assert ppt_report(validate_density(np.eye(9) / 9, (3, 3))).is_ppt
