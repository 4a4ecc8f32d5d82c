"""Validated complex-matrix primitives for bipartite systems.

Composite indices follow the row-major convention ``(i, alpha) -> i * nB + alpha``
everywhere in the package, so a density matrix of shape ``(nA*nB, nA*nB)``
reshapes to ``rho[i, alpha, j, beta]`` with ``reshape(nA, nB, nA, nB)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenFailure,
    NotHermitian,
    NotPositive,
    NotUnitTrace,
    OutOfRange,
    ParseError,
)

TAU_HERM = 1e-10
TAU_TRACE = 1e-10
TAU_PSD = 1e-9


@dataclass(frozen=True)
class Dims:
    """Local dimensions of a bipartite system ``C^nA (x) C^nB``."""

    nA: int
    nB: int

    def __post_init__(self):
        for name in ("nA", "nB"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise OutOfRange(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise OutOfRange(f"{name} must be >= 2, got {value}")
        object.__setattr__(self, "nA", int(self.nA))
        object.__setattr__(self, "nB", int(self.nB))

    @property
    def n(self) -> int:
        """Total Hilbert space dimension."""
        return self.nA * self.nB

    @property
    def d(self) -> int:
        """Number of Schmidt coefficients, ``min(nA^2, nB^2)``."""
        return min(self.nA**2, self.nB**2)

    @property
    def D(self) -> int:
        return max(self.nA**2, self.nB**2)

    def swapped(self) -> Dims:
        return Dims(self.nB, self.nA)

    @classmethod
    def parse(cls, text: str) -> Dims:
        """Parse ``"2x3"`` (also accepts ``"2,3"``)."""
        m = re.fullmatch(r"\s*(\d+)\s*[xX,]\s*(\d+)\s*", text)
        if not m:
            raise ParseError(f"cannot parse dims {text!r}; expected e.g. 2x3")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"{self.nA}x{self.nB}"


def as_dims(dims) -> Dims:
    if isinstance(dims, Dims):
        return dims
    if isinstance(dims, str):
        return Dims.parse(dims)
    nA, nB = dims
    return Dims(nA, nB)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A validated density matrix together with its local dimensions.

    Build instances with :func:`validate_density`; the stored matrix is
    read-only.
    """

    dims: Dims
    mat: np.ndarray

    @property
    def nA(self):
        return self.dims.nA

    @property
    def nB(self):
        return self.dims.nB

    def tensor(self) -> np.ndarray:
        """View as a rank-4 array ``rho[i, alpha, j, beta]``."""
        return self.mat.reshape(self.nA, self.nB, self.nA, self.nB)


def _square_check(mat: np.ndarray, dims: Dims) -> None:
    n = dims.n
    if mat.ndim != 2 or mat.shape != (n, n):
        raise DimensionMismatch(
            f"matrix shape {mat.shape} does not match dims {dims} (expected {(n, n)})"
        )


def min_eigenvalue(herm: np.ndarray) -> float:
    try:
        return float(np.linalg.eigvalsh(herm)[0])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenFailure(str(exc)) from exc


def validate_density(mat, dims) -> BipartiteState:
    """Check that ``mat`` is a density matrix on ``dims`` and wrap it.

    The Hermitian part ``(rho + rho^H) / 2`` is what gets stored; the input
    must already be Hermitian to within ``TAU_HERM`` entrywise.

    Raises
    ------
    DimensionMismatch, NotHermitian, NotUnitTrace, NotPositive
    """
    dims = as_dims(dims)
    mat = np.asarray(mat, dtype=complex)
    _square_check(mat, dims)
    if not np.all(np.isfinite(mat)):
        raise DimensionMismatch("matrix has non-finite entries")

    asym = float(np.max(np.abs(mat - mat.conj().T)))
    if asym > TAU_HERM:
        raise NotHermitian(f"max |rho - rho^H| = {asym:.3e} exceeds {TAU_HERM:g}")
    herm = (mat + mat.conj().T) / 2

    tr = float(np.trace(herm).real)
    if abs(tr - 1.0) > TAU_TRACE:
        raise NotUnitTrace(f"trace = {tr!r}, expected 1 within {TAU_TRACE:g}")

    lam_min = min_eigenvalue(herm)
    if lam_min < -TAU_PSD:
        raise NotPositive(
            f"minimum eigenvalue {lam_min:.6g} below -{TAU_PSD:g}", lam_min
        )

    herm.setflags(write=False)
    return BipartiteState(dims, herm)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, ``out[i*nb + alpha, j*nb + beta] = a[i, j] * b[alpha, beta]``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: BipartiteState, subsystem: str) -> np.ndarray:
    """Trace out ``subsystem`` (``"A"`` or ``"B"``) and return the reduced matrix
    on the other one."""
    t = rho.tensor()
    if subsystem == "A":
        return np.einsum("iaib->ab", t)
    if subsystem == "B":
        return np.einsum("iaja->ij", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def purity(rho: BipartiteState) -> float:
    """``tr(rho^2)``, computed as the squared Frobenius norm of a Hermitian matrix."""
    return float(np.sum(np.abs(rho.mat) ** 2))
