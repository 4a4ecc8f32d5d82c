"""Symmetric polynomials of Schmidt coefficients and the separability tests
built on them.

``M[l]`` denotes the elementary symmetric polynomial of degree ``l`` in the
Schmidt coefficients. ``M[1]`` is the trace norm of the realigned matrix,
so ``M[1] <= 1`` is the realignment criterion; higher ``l`` give the
bound families checked by :func:`rcl_check`.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import DimsMismatch, NotSquareRealignment, OutOfRange, ParseError
from .linalg import BipartiteState, Dims, as_dims
from .schmidt import SchmidtSpectrum, realign, schmidt_spectrum

VERDICT_MARGIN = 1e-12


def elementary_symmetric(values) -> np.ndarray:
    """Return ``[e_1, ..., e_n]`` of ``values`` by expanding ``prod_k (1 + v_k t)``."""
    values = np.asarray(values, dtype=float)
    coeffs = np.zeros(values.size + 1)
    coeffs[0] = 1.0
    for k, v in enumerate(values, start=1):
        # update high degrees first so each factor is used once
        coeffs[1 : k + 1] = coeffs[1 : k + 1] + v * coeffs[:k]
    return coeffs[1:]


def symmetric_polys(spectrum) -> np.ndarray:
    """``M[1..d]`` of a :class:`SchmidtSpectrum` (or a plain sequence of
    coefficients); entry ``l - 1`` holds ``M[l]``."""
    values = spectrum.values if isinstance(spectrum, SchmidtSpectrum) else spectrum
    polys = elementary_symmetric(values)
    # all inputs are non-negative; clip roundoff below zero
    return np.maximum(polys, 0.0)


def state_polys(rho: BipartiteState) -> np.ndarray:
    return symmetric_polys(schmidt_spectrum(rho))


def naive_bound(d: int, l: int) -> float:
    """Largest ``M[l]`` compatible with ``M[1] <= 1`` for ``d`` coefficients:
    ``C(d, l) / d**l``, attained when all coefficients equal ``1/d``."""
    if d < 1 or not 1 <= l <= d:
        raise OutOfRange(f"need 1 <= l <= d, got d={d}, l={l}")
    return comb(d, l) / d**l


def rank_bound(R: int, l: int) -> float:
    """Bound on ``M[l]`` for separable states of Schmidt rank ``R``; zero
    when ``l > R``."""
    if R < 1 or l < 1:
        raise OutOfRange(f"need R >= 1 and l >= 1, got R={R}, l={l}")
    if l > R:
        return 0.0
    return comb(R, l) / R**l


class Outcome(str, enum.Enum):
    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"
    NOT_EB = "NotEB"


@dataclass(frozen=True)
class Witness:
    criterion: str
    l: int
    value: float
    bound: float


@dataclass(frozen=True)
class Verdict:
    """Outcome of a necessary-condition test.

    There is deliberately no "separable" outcome: passing any of these
    tests proves nothing.
    """

    outcome: Outcome
    witness: Witness | None = None
    violations: tuple[Witness, ...] = ()

    @property
    def entangled(self) -> bool:
        return self.outcome is not Outcome.INCONCLUSIVE


def rc_check(rho: BipartiteState) -> Verdict:
    m1 = float(np.sum(schmidt_spectrum(rho).values))
    if m1 > 1.0 + VERDICT_MARGIN:
        w = Witness("RC", 1, m1, 1.0)
        return Verdict(Outcome.ENTANGLED, w, (w,))
    return Verdict(Outcome.INCONCLUSIVE)


KINDS = ("naive", "rank-restricted", "strict-separable", "strict-rc-ball")


@dataclass(frozen=True)
class BoundTable:
    """Upper bounds ``bounds[l-1]`` on ``M[l]`` for separable states of ``dims``.

    ``provenance`` is ``{"source": "analytic"}`` or, for tables produced by a
    search, ``{"source": "numerically-estimated", "config_hash": ..., ...}``.
    """

    dims: Dims
    kind: str
    bounds: tuple[float, ...]
    provenance: dict = field(default_factory=lambda: {"source": "analytic"})

    def __post_init__(self):
        object.__setattr__(self, "dims", as_dims(self.dims))
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        if self.kind not in KINDS:
            raise ParseError(f"unknown bound table kind {self.kind!r}")
        if len(self.bounds) != self.dims.d:
            raise DimsMismatch(
                f"{len(self.bounds)} bounds for dims {self.dims} (need {self.dims.d})"
            )
        if self.bounds[0] != 1.0:
            raise ParseError(f"bounds[0] must be exactly 1, got {self.bounds[0]}")
        if self.kind.startswith("strict"):
            for l, b in enumerate(self.bounds, start=1):
                if b > naive_bound(self.dims.d, l) + 1e-12:
                    raise ParseError(f"strict bound for l={l} exceeds the naive bound")

    def to_dict(self) -> dict:
        return {
            "dims": [self.dims.nA, self.dims.nB],
            "kind": self.kind,
            "bounds": list(self.bounds),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> BoundTable:
        try:
            return cls(
                Dims(*data["dims"]), data["kind"], data["bounds"], data["provenance"]
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed bound table: {exc}") from exc

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> BoundTable:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        return cls.from_dict(data)


def naive_table(dims) -> BoundTable:
    dims = as_dims(dims)
    return BoundTable(dims, "naive", [naive_bound(dims.d, l) for l in range(1, dims.d + 1)])


def rank_table(dims, R: int) -> BoundTable:
    dims = as_dims(dims)
    return BoundTable(dims, "rank-restricted", [rank_bound(R, l) for l in range(1, dims.d + 1)])


# Two-qubit strict bounds, saturated by the Werner state at p = 1/3.
WERNER_2X2_BOUNDS = (1.0, 1 / 3, 5 / 108, 1 / 432)


def werner_2x2_table() -> BoundTable:
    return BoundTable(
        Dims(2, 2),
        "strict-separable",
        WERNER_2X2_BOUNDS,
        {"source": "analytic", "note": "Werner p=1/3 saturation"},
    )


def rcl_check(rho: BipartiteState, table: BoundTable) -> Verdict:
    """Compare every ``M[l]`` with ``table``; the witness is the smallest
    violating ``l``."""
    if table.dims != rho.dims:
        raise DimsMismatch(f"table dims {table.dims} != state dims {rho.dims}")
    polys = state_polys(rho)
    violations = tuple(
        Witness(f"RC{l}", l, float(m), b)
        for l, (m, b) in enumerate(zip(polys, table.bounds), start=1)
        if m > b + VERDICT_MARGIN
    )
    if violations:
        return Verdict(Outcome.ENTANGLED, violations[0], violations)
    return Verdict(Outcome.INCONCLUSIVE)


def charpoly(a: np.ndarray) -> np.ndarray:
    """Coefficients ``[c_n, ..., c_0]`` of ``det(x I - a)`` (``c_n = 1``) by the
    Faddeev-LeVerrier recursion. No eigendecomposition is involved."""
    a = np.asarray(a)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=a.dtype if np.iscomplexobj(a) else float)
    coeffs[0] = 1.0
    m = np.zeros_like(a, dtype=coeffs.dtype)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def abs_matrix(r: np.ndarray) -> np.ndarray:
    """``|r| = sqrt(r^H r)`` from the polar decomposition."""
    _, p = scipy.linalg.polar(r)
    return p


def charpoly_coeffs(rho: BipartiteState) -> np.ndarray:
    """Coefficients of ``det(|rho^R| - x I)`` in powers ``x^d, ..., x^0``.

    Only defined for ``nA == nB``, where ``|rho^R|`` is square in the
    realignment index space. Use :func:`polys_from_charpoly` to read off
    ``M[l]``.
    """
    if rho.nA != rho.nB:
        raise NotSquareRealignment(f"realigned matrix of {rho.dims} state is not square")
    a = abs_matrix(realign(rho).mat)
    d = a.shape[0]
    # det(a - x I) = (-1)^d det(x I - a)
    return ((-1) ** d) * np.real_if_close(charpoly(a), tol=1e6).real


def polys_from_charpoly(coeffs) -> np.ndarray:
    """Invert ``det(A - x I) = sum_l M[l] (-x)^(d-l)`` (with ``M[0] = 1``)."""
    coeffs = np.asarray(coeffs, dtype=float)
    d = coeffs.size - 1
    # coefficient of x^(d-l) sits at index l
    return np.array([coeffs[l] * (-1) ** (d - l) for l in range(1, d + 1)])


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
