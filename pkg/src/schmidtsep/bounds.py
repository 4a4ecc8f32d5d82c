"""Numerical lower estimates of the largest ``M[l]`` over a set of states.

Three feasible sets are supported:

``separable``
    Convex mixtures of ``terms`` pure product states. Each local pure state
    is parameterized by hyperspherical angles and relative phases, the
    weights by squared-then-normalized reals. Every iterate is separable by
    construction, so each reported value is attained by a separable state.
``rc-ball``
    States with ``M[1] <= 1``, parameterized as ``G G^H / tr(G G^H)``. The
    constraint enters as a penalty ``w * max(0, M[1] - 1)^2`` whose weight
    doubles each round; the final iterate is mixed with the maximally mixed
    state until it is feasible.
``all``
    The same parameterization without a constraint.

Each restart runs rounds of Nelder-Mead from an independently seeded start.
Optima are local, so the numbers are lower bounds on the true maxima.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .criteria import (
    BoundTable,
    config_hash,
    elementary_symmetric,
    naive_bound,
    state_polys,
)
from .errors import OutOfRange, UnsupportedDims
from .linalg import BipartiteState, Dims, as_dims, validate_density
from .ppt import EXACT_DIMS
from .schmidt import realign_matrix
from .states import SeparableRecipe

log = logging.getLogger(__name__)

SETS = ("separable", "rc-ball", "all")
PROFILE_TOL = 1e-4


@dataclass(frozen=True)
class SearchConfig:
    """Settings of a stochastic search.

    A restart is a sequence of Nelder-Mead rounds, each capped at
    ``iters_per_restart`` iterations and started from a fresh simplex around
    the previous round's point. Constrained searches use ``penalty_rounds``
    rounds with weights ``penalty_start * 2**k``; unconstrained ones use
    ``plain_rounds`` rounds.
    """

    restarts: int = 64
    iters_per_restart: int = 5000
    seed: int = 0
    set: str = "separable"
    penalty_start: float = 1e3
    penalty_rounds: int = 8
    plain_rounds: int = 2
    tol: float = 1e-8
    terms: int = 4

    def __post_init__(self):
        if self.restarts < 1 or self.iters_per_restart < 1:
            raise OutOfRange("restarts and iters_per_restart must be >= 1")
        if self.set not in SETS:
            raise OutOfRange(f"set must be one of {SETS}, got {self.set!r}")
        if self.terms < 1 or self.penalty_rounds < 1 or self.plain_rounds < 1:
            raise OutOfRange("terms and round counts must be >= 1")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        return config_hash(self.to_dict())

    def replace(self, **changes) -> SearchConfig:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class BoundEstimate:
    dims: Dims
    l: int
    value: float
    argmax_state: BipartiteState
    config: SearchConfig
    best_restart_index: int
    restart_values: tuple[float, ...] = ()
    recipe: SeparableRecipe | None = field(default=None, repr=False)


# -- parameterizations -------------------------------------------------------


def _unit_vectors(angles: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Rows ``(cos t0, sin t0 cos t1 e^{i f0}, ..., sin t0 ... sin t_{n-2} e^{i f_{n-2}})``."""
    K = angles.shape[0]
    sines = np.concatenate([np.ones((K, 1)), np.sin(angles)], axis=1)
    amp = np.cumprod(sines, axis=1)
    amp[:, :-1] *= np.cos(angles)
    vec = amp.astype(complex)
    vec[:, 1:] *= np.exp(1j * phases)
    return vec


class _SeparableModel:
    def __init__(self, dims: Dims, terms: int):
        self.dims = dims
        self.K = terms
        self.widths = [dims.nA - 1, dims.nA - 1, dims.nB - 1, dims.nB - 1, 1]
        self.size = terms * sum(self.widths)
        edges = np.concatenate([[0], np.cumsum(self.widths)])
        self._slices = [slice(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]

    def initial(self, rng) -> np.ndarray:
        x = rng.uniform(0.0, 2 * np.pi, size=(self.K, sum(self.widths)))
        x[:, -1] = rng.uniform(0.5, 1.5, size=self.K)
        return x.ravel()

    def decode(self, x):
        X = x.reshape(self.K, -1)
        ta, fa, tb, fb, s = (X[:, sl] for sl in self._slices)
        w = s[:, 0] ** 2
        total = w.sum()
        w = w / total if total > 0 else np.full(self.K, 1.0 / self.K)
        return w, _unit_vectors(ta, fa), _unit_vectors(tb, fb)

    def realigned(self, x) -> np.ndarray:
        w, a, b = self.decode(x)
        pa = (a[:, :, None] * a.conj()[:, None, :]).reshape(self.K, -1)
        pb = (b[:, :, None] * b.conj()[:, None, :]).reshape(self.K, -1)
        return (pa.T * w) @ pb

    def recipe(self, x) -> SeparableRecipe:
        w, a, b = self.decode(x)
        return SeparableRecipe(self.dims, w, a, b)

    def state_matrix(self, x) -> np.ndarray:
        return self.recipe(x).matrix()


class _GeneralModel:
    def __init__(self, dims: Dims):
        self.dims = dims
        self.n = dims.n
        self.size = 2 * self.n * self.n

    def initial(self, rng) -> np.ndarray:
        return rng.standard_normal(self.size)

    def state_matrix(self, x) -> np.ndarray:
        g = (x[: self.n**2] + 1j * x[self.n**2 :]).reshape(self.n, self.n)
        rho = g @ g.conj().T
        return rho / np.trace(rho).real

    def realigned(self, x) -> np.ndarray:
        return realign_matrix(self.state_matrix(x), self.dims.nA, self.dims.nB)


def _polys_of(model, x) -> np.ndarray:
    return elementary_symmetric(np.linalg.svd(model.realigned(x), compute_uv=False))


def _m1_of_matrix(mat: np.ndarray, dims: Dims) -> float:
    return float(np.sum(np.linalg.svd(realign_matrix(mat, dims.nA, dims.nB), compute_uv=False)))


def _mix_to_m1(mat: np.ndarray, dims: Dims, target: float) -> np.ndarray:
    """Move ``mat`` toward ``I/n`` until ``M[1]`` equals ``target``.

    ``M[1]`` is convex along the segment and equals ``1/sqrt(n) < target``
    at the maximally mixed end, so the crossing is unique.
    """
    if _m1_of_matrix(mat, dims) <= target:
        return mat
    mixed = np.eye(dims.n) / dims.n

    def excess(t):
        return _m1_of_matrix(t * mat + (1 - t) * mixed, dims) - target

    if excess(0.0) >= 0:
        return mixed
    t = brentq(excess, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    while excess(t) > 0 and t > 0:
        t = max(t - 1e-15, 0.0)
    return t * mat + (1 - t) * mixed


# -- one restart -------------------------------------------------------------


def _nelder_mead(f, x0, maxiter, tol):
    return minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": maxiter,
            "maxfev": 2 * maxiter,
            "adaptive": True,
            "fatol": tol,
            "xatol": np.sqrt(tol),
        },
    )


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _run_restart(dims, l, config, index, m1_target=None, x0=None):
    """Return ``(value, state matrix, params, feasible)`` for one restart.

    ``x0`` overrides the seeded random start (used for continuation along a
    profile grid).
    """
    sep = config.set == "separable"
    model = _SeparableModel(dims, config.terms) if sep else _GeneralModel(dims)
    x = model.initial(_restart_rng(config.seed, index)) if x0 is None else np.array(x0)

    if m1_target is not None:
        weights = [config.penalty_start * 2**k for k in range(config.penalty_rounds)]

        def make_objective(w):
            def f(x):
                m = _polys_of(model, x)
                return -m[l - 1] + w * (m[0] - m1_target) ** 2

            return f

    elif config.set == "rc-ball":
        weights = [config.penalty_start * 2**k for k in range(config.penalty_rounds)]

        def make_objective(w):
            def f(x):
                m = _polys_of(model, x)
                return -m[l - 1] + w * max(0.0, m[0] - 1.0) ** 2

            return f

    else:
        weights = [None] * config.plain_rounds

        def make_objective(w):
            return lambda x: -_polys_of(model, x)[l - 1]

    nfev = 0
    for w in weights:
        res = _nelder_mead(make_objective(w), x, config.iters_per_restart, config.tol)
        x, nfev = res.x, nfev + res.nfev

    mat = model.state_matrix(x)
    feasible = True
    if m1_target is not None:
        mat = _mix_to_m1(mat, dims, m1_target)
        feasible = abs(_m1_of_matrix(mat, dims) - m1_target) <= PROFILE_TOL
    elif config.set == "rc-ball":
        mat = _mix_to_m1(mat, dims, 1.0)
    value = float(elementary_symmetric(
        np.linalg.svd(realign_matrix(mat, dims.nA, dims.nB), compute_uv=False)
    )[l - 1])
    log.debug("restart %d: value=%.8g nfev=%d feasible=%s", index, value, nfev, feasible)
    return value, mat, x, feasible


def _run_restart_star(args):
    return _run_restart(*args)


def _map_restarts(jobs, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_restart_star, jobs))
    return [_run_restart_star(job) for job in jobs]


def _check_request(dims: Dims, l: int, set_: str):
    if not 1 <= l <= dims.d:
        raise OutOfRange(f"l must be in [1, {dims.d}], got {l}")
    if set_ == "separable" and (dims.nA, dims.nB) not in EXACT_DIMS:
        raise UnsupportedDims(f"separable search is only supported for 2x2/2x3, got {dims}")


def maximize(dims, l: int, config: SearchConfig | None = None, workers: int = 1) -> BoundEstimate:
    """Best-of-restarts estimate of ``max M[l]`` over ``config.set``.

    Restarts are independent and deterministic given ``(config.seed, index)``,
    so serial and parallel runs return the same estimate.
    """
    dims = as_dims(dims)
    config = config or SearchConfig()
    _check_request(dims, l, config.set)
    jobs = [(dims, l, config, i) for i in range(config.restarts)]
    results = _map_restarts(jobs, workers)
    values = tuple(r[0] for r in results)
    best = int(np.argmax(values))
    value, mat, x, _ = results[best]
    recipe = None
    if config.set == "separable":
        recipe = _SeparableModel(dims, config.terms).recipe(x)
        state = recipe.assemble()
    else:
        state = validate_density(mat, dims)
    value = float(state_polys(state)[l - 1])
    return BoundEstimate(dims, l, value, state, config, best, values, recipe)


def _general_params(mat: np.ndarray) -> np.ndarray:
    """Parameters of :class:`_GeneralModel` that reproduce the state ``mat``."""
    w, v = np.linalg.eigh(mat)
    g = (v * np.sqrt(np.clip(w, 0.0, None))).ravel()
    return np.concatenate([g.real, g.imag])


def _profile_column(dims, l, grid, cfg, workers, seeds=None):
    """Best feasible ``M[l]`` per grid point for one set.

    A descending sweep runs the seeded random starts plus a warm start from
    the previous point's optimum (and ``seeds[k]`` when given); an ascending
    sweep then retries each point from its lower neighbour's optimum.
    """
    col = [float("nan")] * len(grid)
    params = [None] * len(grid)

    def run(k, jobs):
        results = [r for r in _map_restarts(jobs, workers) if r[3]]
        for value, _, x, _ in results:
            if not value <= col[k]:
                col[k], params[k] = value, x

    order = sorted(range(len(grid)), key=lambda k: -grid[k])
    extra = cfg.restarts
    for prev, k in zip([None] + order[:-1], order):
        jobs = [(dims, l, cfg, i, grid[k]) for i in range(cfg.restarts)]
        if prev is not None and params[prev] is not None:
            jobs.append((dims, l, cfg, extra, grid[k], params[prev]))
        if seeds is not None and seeds[k] is not None:
            jobs.append((dims, l, cfg, extra, grid[k], seeds[k]))
        run(k, jobs)
    for prev, k in zip(order[::-1][:-1], order[::-1][1:]):
        if params[prev] is not None:
            run(k, [(dims, l, cfg, extra, grid[k], params[prev])])
    return col, params


def profile_curve(dims, l: int, m1_grid, config: SearchConfig | None = None, workers: int = 1):
    """Rows ``(m1, max M[l] over separable states, max M[l] over all states)``
    with ``M[1]`` pinned to each grid value.

    The separable column is ``None`` outside 2x2/2x3. Each column is filled
    by a descending and an ascending continuation sweep over the grid. The
    all-states search at a point is additionally started from the separable
    optimum found there. Raw optima are reported; no envelope smoothing is
    applied.
    """
    dims = as_dims(dims)
    config = config or SearchConfig()
    _check_request(dims, l, "all")
    grid = [float(m) for m in m1_grid]
    sep_col = [None] * len(grid)
    seeds = None
    if (dims.nA, dims.nB) in EXACT_DIMS:
        cfg = config.replace(set="separable")
        sep_col, sep_params = _profile_column(dims, l, grid, cfg, workers)
        model = _SeparableModel(dims, cfg.terms)
        seeds = [None if x is None else _general_params(model.state_matrix(x)) for x in sep_params]
    all_col, _ = _profile_column(dims, l, grid, config.replace(set="all"), workers, seeds)
    return list(zip(grid, sep_col, all_col))


def write_curve_csv(rows, path) -> None:
    def fmt(v):
        return "" if v is None else repr(float(v))

    lines = ["m1,max_separable,max_all"]
    lines += [f"{fmt(m1)},{fmt(s)},{fmt(a)}" for m1, s, a in rows]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def table_estimates(dims, config: SearchConfig | None = None, workers: int = 1):
    """Run :func:`maximize` for ``l = 2..d`` on both sets.

    Returns ``{"separable": [...], "rc-ball": [...]}`` lists of estimates.
    """
    dims = as_dims(dims)
    if (dims.nA, dims.nB) not in EXACT_DIMS:
        raise UnsupportedDims(f"tables are only defined for 2x2/2x3, got {dims}")
    config = config or SearchConfig()
    out = {}
    for set_ in ("separable", "rc-ball"):
        cfg = config.replace(set=set_)
        out[set_] = [maximize(dims, l, cfg, workers) for l in range(2, dims.d + 1)]
    return out


def reproduce_tables(dims, config: SearchConfig | None = None, workers: int = 1, return_estimates=False):
    """Estimate the strict bound tables over separable states and over the
    ``M[1] <= 1`` ball.

    The ``l = 1`` entries are exactly 1. Since every separable state lies in
    the ball, each ball entry is the larger of the two searches.
    """
    dims = as_dims(dims)
    config = config or SearchConfig()
    est = table_estimates(dims, config, workers)
    sep = [1.0] + [e.value for e in est["separable"]]
    ball = [1.0] + [max(b.value, s.value) for b, s in zip(est["rc-ball"], est["separable"])]
    # never exceed the analytic naive bound because of roundoff
    sep = [min(v, naive_bound(dims.d, l)) for l, v in enumerate(sep, start=1)]
    ball = [min(v, naive_bound(dims.d, l)) for l, v in enumerate(ball, start=1)]
    prov = {
        "source": "numerically-estimated",
        "config_hash": config.digest(),
        "config": config.to_dict(),
    }
    tables = (
        BoundTable(dims, "strict-separable", sep, dict(prov)),
        BoundTable(dims, "strict-rc-ball", ball, dict(prov)),
    )
    return (tables, est) if return_estimates else tables
