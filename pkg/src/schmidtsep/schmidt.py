"""Realignment and the operator-Schmidt spectrum of a bipartite operator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SvdFailure
from .linalg import BipartiteState, Dims

TAU_RANK = 1e-9
ZERO_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class RealignedMatrix:
    dims: Dims
    mat: np.ndarray  # shape (nA^2, nB^2)


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Schmidt coefficients in descending order, zero-padded to length ``d``."""

    values: np.ndarray
    rank: int

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_values(cls, values) -> SchmidtSpectrum:
        """Sort, clamp and rank an arbitrary list of non-negative reals."""
        v = np.sort(np.asarray(values, dtype=float))[::-1].copy()
        v[v < ZERO_FLOOR] = 0.0
        v.setflags(write=False)
        return cls(v, spectral_rank(v))


def spectral_rank(values) -> int:
    values = np.asarray(values, dtype=float)
    if values.size == 0 or values.max() <= 0.0:
        return 0
    return int(np.count_nonzero(values > TAU_RANK * values.max()))


def realign_matrix(mat: np.ndarray, nA: int, nB: int) -> np.ndarray:
    """Reshuffle ``rho[(m mu), (n nu)]`` into ``R[(m n), (mu nu)]``.

    Pure index permutation; works on any ``(nA*nB) x (nA*nB)`` array.
    """
    return (
        np.asarray(mat)
        .reshape(nA, nB, nA, nB)
        .transpose(0, 2, 1, 3)
        .reshape(nA * nA, nB * nB)
    )


def unrealign_matrix(r: np.ndarray, nA: int, nB: int) -> np.ndarray:
    """Inverse of :func:`realign_matrix`."""
    return (
        np.asarray(r)
        .reshape(nA, nA, nB, nB)
        .transpose(0, 2, 1, 3)
        .reshape(nA * nB, nA * nB)
    )


def realign(rho: BipartiteState) -> RealignedMatrix:
    return RealignedMatrix(rho.dims, realign_matrix(rho.mat, rho.nA, rho.nB))


def singular_values(mat: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(str(exc)) from exc


def schmidt_spectrum(rho: BipartiteState) -> SchmidtSpectrum:
    """Singular values of the realigned matrix (length ``min(nA^2, nB^2)``)."""
    return SchmidtSpectrum.from_values(singular_values(realign(rho).mat))


def trace_norm_realigned(rho: BipartiteState) -> float:
    """``||rho^R||_tr``; the realignment criterion asks for this to be <= 1."""
    return float(np.sum(schmidt_spectrum(rho).values))
