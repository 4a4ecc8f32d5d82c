"""Named and random bipartite states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .linalg import BipartiteState, Dims, as_dims, validate_density


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")


def max_entangled_vector(n: int) -> np.ndarray:
    psi = np.zeros(n * n, dtype=complex)
    psi[:: n + 1] = 1.0 / np.sqrt(n)
    return psi


def max_entangled(n: int) -> BipartiteState:
    """Projector onto ``sum_a |a a> / sqrt(n)`` in ``C^n (x) C^n``."""
    if n < 2:
        raise OutOfRange(f"n must be >= 2, got {n}")
    psi = max_entangled_vector(n)
    return validate_density(np.outer(psi, psi.conj()), Dims(n, n))


def werner(p: float) -> BipartiteState:
    """Two-qubit Werner state ``p |phi><phi| + (1 - p) I/4``."""
    _check_p(p)
    psi = max_entangled_vector(2)
    mat = p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(4) / 4
    return validate_density(mat, Dims(2, 2))


def werner_polys(p: float) -> np.ndarray:
    """Closed-form ``M[1..4]`` of :func:`werner`, whose Schmidt coefficients are
    ``{1/2, p/2, p/2, p/2}``."""
    _check_p(p)
    return np.array(
        [
            (1 + 3 * p) / 2,
            3 * (p + p * p) / 4,
            (3 * p * p + p**3) / 8,
            p**3 / 16,
        ]
    )


def maximally_mixed(dims) -> BipartiteState:
    dims = as_dims(dims)
    return validate_density(np.eye(dims.n) / dims.n, dims)


def product_state(a, b) -> BipartiteState:
    """``a (x) b`` for two local density matrices (or pure state vectors)."""
    a, b = (_as_density(x) for x in (a, b))
    return validate_density(np.kron(a, b), Dims(a.shape[0], b.shape[0]))


def _as_density(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x / np.linalg.norm(x)
        return np.outer(x, x.conj())
    return x


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _ginibre(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unit_vector(n: int, seed=None) -> np.ndarray:
    v = _ginibre(_rng(seed), n)
    return v / np.linalg.norm(v)


def random_pure(dims, seed=None) -> BipartiteState:
    dims = as_dims(dims)
    psi = random_unit_vector(dims.n, seed)
    return validate_density(np.outer(psi, psi.conj()), dims)


def random_density(dims, seed=None) -> BipartiteState:
    """Hilbert-Schmidt ensemble: ``G G^H / tr(G G^H)`` with Ginibre ``G``."""
    dims = as_dims(dims)
    g = _ginibre(_rng(seed), (dims.n, dims.n))
    rho = g @ g.conj().T
    return validate_density(rho / np.trace(rho).real, dims)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase-fixed R)."""
    q, r = np.linalg.qr(_ginibre(_rng(seed), (n, n)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


@dataclass(frozen=True, eq=False)
class SeparableRecipe:
    """Convex mixture ``sum_k w_k |a_k><a_k| (x) |b_k><b_k|`` of pure products."""

    dims: Dims
    weights: np.ndarray
    factors_a: np.ndarray  # (K, nA) unit vectors
    factors_b: np.ndarray  # (K, nB) unit vectors

    def __post_init__(self):
        K = len(self.weights)
        if K < 1 or K > self.dims.n**2:
            raise OutOfRange(f"cardinality {K} outside [1, {self.dims.n ** 2}]")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1) > 1e-12:
            raise OutOfRange("weights must be non-negative and sum to 1")

    @property
    def K(self) -> int:
        return len(self.weights)

    def matrix(self) -> np.ndarray:
        psi = np.einsum("ka,kb->kab", self.factors_a, self.factors_b).reshape(self.K, -1)
        return np.einsum("k,ki,kj->ij", self.weights, psi, psi.conj())

    def assemble(self) -> BipartiteState:
        return validate_density(self.matrix(), self.dims)


def random_separable(dims, K: int | None = None, seed=None):
    """Draw ``K`` Haar-random pure product pairs with flat-Dirichlet weights.

    ``K`` defaults to ``(nA nB)^2``. Returns ``(state, recipe)``.
    """
    dims = as_dims(dims)
    K = dims.n**2 if K is None else K
    if K < 1:
        raise OutOfRange(f"K must be >= 1, got {K}")
    rng = _rng(seed)
    a = _ginibre(rng, (K, dims.nA))
    b = _ginibre(rng, (K, dims.nB))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    w = rng.dirichlet(np.ones(K))
    recipe = SeparableRecipe(dims, w, a, b)
    return recipe.assemble(), recipe
