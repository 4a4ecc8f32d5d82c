"""Partial transposition and the PPT test.

In 2x2 and 2x3 (or 3x2) systems a positive partial transpose is necessary
and sufficient for separability, which makes :func:`is_separable_2xN` an
exact oracle there. Everywhere else PPT is only necessary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDims
from .linalg import TAU_PSD, BipartiteState, min_eigenvalue

EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


@dataclass(frozen=True)
class PptReport:
    min_eigenvalue: float
    is_ppt: bool


def partial_transpose(rho: BipartiteState, subsystem: str = "A") -> np.ndarray:
    n = rho.dims.n
    pt_a = rho.tensor().transpose(2, 1, 0, 3).reshape(n, n)
    if subsystem == "A":
        return pt_a
    if subsystem == "B":
        return pt_a.T
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def ppt_report(rho: BipartiteState) -> PptReport:
    lam = min_eigenvalue(partial_transpose(rho, "A"))
    return PptReport(lam, lam >= -TAU_PSD)


def is_separable_2xN(rho: BipartiteState) -> bool:
    """Exact separability decision for 2x2, 2x3 and 3x2 states."""
    if (rho.nA, rho.nB) not in EXACT_DIMS:
        raise UnsupportedDims(
            f"PPT is only sufficient for separability in 2x2/2x3, got {rho.dims}"
        )
    return ppt_report(rho).is_ppt
