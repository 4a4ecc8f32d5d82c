"""Operator-space coordinates and local orthogonal actions.

A bipartite Hermitian operator is expanded in the product basis
``{F_h (x) G_k}`` built from two orthonormal Hermitian bases whose first
element is the normalized identity. The real coefficient matrix
``C[h, k] = tr(rho F_h (x) G_k)`` is the realigned matrix written in a real
basis, so its singular values are the Schmidt coefficients; any
``C -> OA C OB^T`` with orthogonal ``OA``, ``OB`` keeps them fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DimsMismatch, NotOrthogonal, OutOfRange
from .linalg import BipartiteState, Dims, as_dims

TAU_ORTH = 1e-10


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> np.ndarray:
    elements = [np.eye(n, dtype=complex) / np.sqrt(n)]
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        elements.append(m)
    for j, k in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[j, k] = -1j / np.sqrt(2)
        m[k, j] = 1j / np.sqrt(2)
        elements.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        elements.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    out = np.array(elements)
    out.setflags(write=False)
    return out


def hermitian_basis(n: int) -> np.ndarray:
    """Generalized Gell-Mann basis as an ``(n^2, n, n)`` array.

    Element 0 is ``I/sqrt(n)``; then the symmetric off-diagonal elements,
    the antisymmetric ones and the traceless diagonal ones. All elements
    are Hermitian with ``tr(F_h F_k) = delta_hk``. For ``n = 2`` this is
    ``{I, sx, sy, sz} / sqrt(2)``.
    """
    if n < 2:
        raise OutOfRange(f"n must be >= 2, got {n}")
    return _gell_mann(int(n))


@dataclass(frozen=True, eq=False)
class BlochCoords:
    """Coefficients of an operator in the product Gell-Mann basis.

    ``scalar`` multiplies ``I/sqrt(nA) (x) I/sqrt(nB)``, so a unit-trace
    operator has ``scalar = 1/sqrt(nA nB)``.
    """

    dims: Dims
    scalar: float
    alphaA: np.ndarray
    alphaB: np.ndarray
    beta: np.ndarray

    @classmethod
    def from_matrix(cls, dims, c: np.ndarray) -> BlochCoords:
        return cls(as_dims(dims), float(c[0, 0]), c[1:, 0].copy(), c[0, 1:].copy(), c[1:, 1:].copy())

    def matrix(self) -> np.ndarray:
        """The full ``nA^2 x nB^2`` coefficient matrix."""
        c = np.empty((self.dims.nA**2, self.dims.nB**2))
        c[0, 0] = self.scalar
        c[1:, 0] = self.alphaA
        c[0, 1:] = self.alphaB
        c[1:, 1:] = self.beta
        return c


def coefficient_matrix(mat: np.ndarray, dims) -> np.ndarray:
    dims = as_dims(dims)
    fa, fb = hermitian_basis(dims.nA), hermitian_basis(dims.nB)
    t = np.asarray(mat).reshape(dims.nA, dims.nB, dims.nA, dims.nB)
    # tr(rho (F_h x G_k)) = sum rho[i a, j b] F_h[j, i] G_k[b, a]
    c = np.einsum("iajb,hji,kba->hk", t, fa, fb)
    return c.real


def operator_from_coefficients(c: np.ndarray, dims) -> np.ndarray:
    dims = as_dims(dims)
    fa, fb = hermitian_basis(dims.nA), hermitian_basis(dims.nB)
    t = np.einsum("hk,hij,kab->iajb", c, fa, fb)
    return t.reshape(dims.n, dims.n)


def to_coords(rho) -> BlochCoords:
    """Coordinates of a state (or of a ``(matrix, dims)`` pair)."""
    if isinstance(rho, BipartiteState):
        mat, dims = rho.mat, rho.dims
    else:
        mat, dims = rho
        dims = as_dims(dims)
    return BlochCoords.from_matrix(dims, coefficient_matrix(mat, dims))


def from_coords(c: BlochCoords, dims=None) -> np.ndarray:
    """Hermitian matrix with coordinates ``c``. Positivity is not checked."""
    dims = c.dims if dims is None else as_dims(dims)
    if dims != c.dims:
        raise DimsMismatch(f"coords for {c.dims}, requested {dims}")
    cm = c.matrix()
    if cm.shape != (dims.nA**2, dims.nB**2):
        raise DimsMismatch(f"coefficient shape {cm.shape} does not match {dims}")
    return operator_from_coefficients(cm, dims)


def _check_orthogonal(o: np.ndarray, n: int, name: str) -> np.ndarray:
    o = np.asarray(o, dtype=float)
    if o.shape != (n, n):
        raise DimsMismatch(f"{name} has shape {o.shape}, expected {(n, n)}")
    dev = float(np.max(np.abs(o.T @ o - np.eye(n))))
    if dev > TAU_ORTH:
        raise NotOrthogonal(f"{name}: max |O^T O - I| = {dev:.3e}")
    return o


def apply_local_orthogonal(rho, OA, OB) -> np.ndarray:
    """Rotate the coefficient matrix ``C -> OA C OB^T`` and rebuild the operator.

    The result shares the Schmidt coefficients of ``rho`` but is in general
    neither positive nor of unit trace, so a raw Hermitian matrix is returned.
    """
    c = to_coords(rho)
    dims = c.dims
    OA = _check_orthogonal(OA, dims.nA**2, "OA")
    OB = _check_orthogonal(OB, dims.nB**2, "OB")
    return operator_from_coefficients(OA @ c.matrix() @ OB.T, dims)


def random_orthogonal(n: int, seed=None) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR with sign-fixed diagonal)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def class_dimension(d: int, multiplicities) -> int:
    """Local dimension of a Schmidt equivalence class whose ``d`` coefficients
    fall into clusters of equal values with the given sizes.

    ``d(d-1) - 1 - sum_k m_k (m_k - 1) / 2``; singleton clusters may be
    omitted.
    """
    mults = [int(m) for m in multiplicities]
    if d < 1 or any(m < 1 for m in mults) or sum(mults) > d:
        raise OutOfRange(f"invalid multiplicities {mults} for d={d}")
    return d * (d - 1) - 1 - sum(comb(m, 2) for m in mults)


def trace_variation(c: BlochCoords, epsA, epsB) -> float:
    """First-order change of the identity coordinate under the generators
    mixing the identity with the traceless elements (``epsA`` on side A,
    ``epsB`` on side B). The trace itself changes by ``sqrt(nA nB)`` times
    this amount.
    """
    epsA = np.asarray(epsA, dtype=float)
    epsB = np.asarray(epsB, dtype=float)
    if epsA.shape != c.alphaA.shape or epsB.shape != c.alphaB.shape:
        raise DimsMismatch(
            f"eps shapes {epsA.shape}, {epsB.shape} vs {c.alphaA.shape}, {c.alphaB.shape}"
        )
    return float(c.alphaA @ epsA + c.alphaB @ epsB + epsA @ c.beta @ epsB)


def identity_mixing_generator(eps) -> np.ndarray:
    """Antisymmetric generator ``K`` with ``K[0, i] = eps_i = -K[i, 0]``."""
    eps = np.asarray(eps, dtype=float)
    k = np.zeros((eps.size + 1, eps.size + 1))
    k[0, 1:] = eps
    k[1:, 0] = -eps
    return k
