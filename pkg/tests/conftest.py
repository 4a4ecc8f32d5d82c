import itertools

import numpy as np
import pytest

from schmidtsep import states


def brute_realign(mat, nA, nB):
    """Loop-based reference for the reshuffle R[(m n), (mu nu)] = rho[(m mu), (n nu)]."""
    out = np.zeros((nA * nA, nB * nB), dtype=complex)
    for m, n, mu, nu in itertools.product(range(nA), range(nA), range(nB), range(nB)):
        out[m * nA + n, mu * nB + nu] = mat[m * nB + mu, n * nB + nu]
    return out


def subset_polys(values):
    """e_l by explicit enumeration of l-subsets."""
    values = list(values)
    return np.array(
        [
            sum(np.prod(c) for c in itertools.combinations(values, l))
            for l in range(1, len(values) + 1)
        ]
    )


@pytest.fixture(params=[(2, 2), (2, 3), (3, 2), (3, 3)], ids=lambda d: f"{d[0]}x{d[1]}")
def dims(request):
    return request.param


@pytest.fixture
def bell():
    return states.max_entangled(2)
