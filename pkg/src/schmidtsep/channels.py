"""Channel-state duality and entanglement-breaking tests.

A linear map ``E`` from operators on ``C^nIn`` to operators on ``C^nOut`` is
stored as the ``nOut^2 x nIn^2`` matrix

    E[(i, j), (a, b)] = <i| E(|a><b|) |j>,

with composite indices ``i*nOut + j`` and ``a*nIn + b``. Its Choi state
``(E (x) id)(|phi><phi|)`` lives on ``C^nOut (x) C^nIn`` and equals
``E / nIn`` after undoing the realignment, so ``E = nIn * realign(choi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .criteria import Outcome, Verdict, Witness, rank_bound, symmetric_polys
from .errors import InvalidState, NotCpt
from .linalg import BipartiteState, Dims, partial_trace, validate_density
from .ppt import is_separable_2xN
from .schmidt import SchmidtSpectrum, realign_matrix, singular_values, unrealign_matrix

TAU_TP = 1e-9


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    nIn: int
    nOut: int
    mat: np.ndarray

    def __post_init__(self):
        shape = (self.nOut**2, self.nIn**2)
        if np.shape(self.mat) != shape:
            raise InvalidState(f"channel matrix shape {np.shape(self.mat)} != {shape}")

    @property
    def choi_dims(self) -> Dims:
        return Dims(self.nOut, self.nIn)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate ``E(x)`` for an ``nIn x nIn`` matrix."""
        out = self.mat @ np.asarray(x, dtype=complex).reshape(-1)
        return out.reshape(self.nOut, self.nOut)


def channel_from_map(fn: Callable[[np.ndarray], np.ndarray], nIn: int, nOut: int) -> ChannelMatrix:
    """Tabulate a Python callable acting on ``nIn x nIn`` matrices."""
    mat = np.zeros((nOut**2, nIn**2), dtype=complex)
    for a in range(nIn):
        for b in range(nIn):
            unit = np.zeros((nIn, nIn), dtype=complex)
            unit[a, b] = 1.0
            mat[:, a * nIn + b] = np.asarray(fn(unit), dtype=complex).reshape(-1)
    return ChannelMatrix(nIn, nOut, mat)


def identity_channel(n: int) -> ChannelMatrix:
    return ChannelMatrix(n, n, np.eye(n * n, dtype=complex))


def depolarizing_channel(nIn: int, nOut: int | None = None) -> ChannelMatrix:
    """Completely depolarizing map ``X -> tr(X) I / nOut``."""
    nOut = nIn if nOut is None else nOut
    return channel_from_map(lambda x: np.trace(x) * np.eye(nOut) / nOut, nIn, nOut)


def transpose_map(n: int) -> ChannelMatrix:
    return channel_from_map(lambda x: x.T, n, n)


def choi_matrix(ch: ChannelMatrix) -> np.ndarray:
    """Unvalidated Choi matrix ``rho[(i a), (j b)] = E[(i j), (a b)] / nIn``."""
    return unrealign_matrix(ch.mat, ch.nOut, ch.nIn) / ch.nIn


def choi_state(ch: ChannelMatrix, check_tp: bool = True) -> BipartiteState:
    """Choi state of a CPT map.

    Raises :class:`NotCpt` when the Choi matrix is not a density matrix
    (not completely positive, or not Hermiticity preserving) or, with
    ``check_tp``, when the input marginal differs from ``I / nIn``.
    """
    try:
        rho = validate_density(choi_matrix(ch), ch.choi_dims)
    except InvalidState as exc:
        raise NotCpt(f"Choi matrix invalid: {type(exc).__name__}: {exc}") from exc
    if check_tp:
        dev = float(np.max(np.abs(partial_trace(rho, "A") - np.eye(ch.nIn) / ch.nIn)))
        if dev > TAU_TP:
            raise NotCpt(f"not trace preserving: max |tr_A(choi) - I/nIn| = {dev:.3e}")
    return rho


def channel_of_state(rho: BipartiteState) -> ChannelMatrix:
    """Map whose Choi state is ``rho`` (``nOut = nA``, ``nIn = nB``)."""
    return ChannelMatrix(rho.nB, rho.nA, rho.nB * realign_matrix(rho.mat, rho.nA, rho.nB))


def channel_spectrum(ch: ChannelMatrix) -> SchmidtSpectrum:
    """Singular values of ``E``, i.e. eigenvalues of ``|E|``."""
    return SchmidtSpectrum.from_values(singular_values(ch.mat))


def abs_determinant(ch: ChannelMatrix) -> float:
    """``det|E|``: product of the ``min(nIn^2, nOut^2)`` singular values."""
    return float(np.prod(channel_spectrum(ch).values))


def eb_necessary_check(ch: ChannelMatrix) -> Verdict:
    """Test ``M[l](|E|) <= C(R, l) (nIn / R)^l`` for ``l = 1..R``.

    A violation proves the channel is not entanglement breaking. The
    full-rank determinant condition is the ``l = R = d`` case; when it is
    violated it is reported as the witness, otherwise the smallest
    violating ``l`` is. All violations are listed.
    """
    choi_state(ch)  # raises NotCpt
    spec = channel_spectrum(ch)
    R = spec.rank
    polys = symmetric_polys(spec)
    violations = []
    for l in range(1, R + 1):
        bound = rank_bound(R, l) * ch.nIn**l
        value = float(polys[l - 1])
        if value > bound * (1 + 1e-12) + 1e-12:
            violations.append(Witness("det|E|" if l == len(spec) else f"M{l}(|E|)", l, value, bound))
    if violations:
        det = [w for w in violations if w.criterion == "det|E|"]
        return Verdict(Outcome.NOT_EB, (det or violations)[0], tuple(violations))
    return Verdict(Outcome.INCONCLUSIVE)


def is_eb_2xN(ch: ChannelMatrix) -> bool:
    """Exact EB decision via separability of the Choi state (2x2, 2x3, 3x2)."""
    return is_separable_2xN(choi_state(ch))


def random_cpt_channel(nIn: int, nOut: int, seed=None) -> ChannelMatrix:
    """Channel of a random Hilbert-Schmidt state whose input marginal has been
    twirled to ``I / nIn``: ``rho -> (I (x) s^-1/2) rho (I (x) s^-1/2) / nIn``
    with ``s = tr_A(rho)``."""
    from .states import random_density

    rho = random_density(Dims(nOut, nIn), seed)
    sigma = partial_trace(rho, "A")
    w, v = np.linalg.eigh(sigma)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    k = np.kron(np.eye(nOut), inv_sqrt)
    twirled = k @ rho.mat @ k.conj().T
    twirled = (twirled + twirled.conj().T) / (2 * np.trace(twirled).real)
    return channel_of_state(validate_density(twirled, rho.dims))
