"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible without ``-s``)
before asserting. The bound searches use reduced restart counts so the
suite fits in a CI budget; tolerances are unchanged.
"""

import numpy as np
import pytest
from conftest import subset_polys
from scipy.linalg import expm
from scipy.optimize import brentq

from schmidtsep import states
from schmidtsep.bounds import SearchConfig, profile_curve, reproduce_tables
from schmidtsep.channels import (
    channel_of_state,
    choi_state,
    depolarizing_channel,
    eb_necessary_check,
    identity_channel,
    is_eb_2xN,
    random_cpt_channel,
)
from schmidtsep.criteria import (
    Outcome,
    charpoly,
    naive_table,
    polys_from_charpoly,
    rc_check,
    rcl_check,
    state_polys,
    symmetric_polys,
)
from schmidtsep.geometry import (
    apply_local_orthogonal,
    class_dimension,
    hermitian_basis,
    identity_mixing_generator,
    random_orthogonal,
    to_coords,
    trace_variation,
)
from schmidtsep.linalg import validate_density
from schmidtsep.ppt import is_separable_2xN, ppt_report
from schmidtsep.schmidt import realign_matrix, schmidt_spectrum

pytestmark = pytest.mark.acceptance

TABLE_CONFIG = SearchConfig(restarts=4, seed=7)
CURVE_CONFIG = SearchConfig(restarts=1, iters_per_restart=2000, seed=1)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def test_two_qubit_tables(report):
    sep, ball = reproduce_tables((2, 2), TABLE_CONFIG)
    target = np.array([1, 0.3333, 0.04630, 0.00231])
    x, xt = np.array(sep.bounds), np.array(ball.bounds)
    ok = (
        x[0] == 1
        and xt[0] == 1
        and np.all(np.abs(x[1:] - target[1:]) <= 0.002)
        and np.all(np.abs(xt[1:] - target[1:]) <= 0.002)
        and np.all(xt - x <= 0.002)
    )
    report(1, ok, f"2x2 separable={np.round(x, 6).tolist()} rc-ball={np.round(xt, 6).tolist()}")


def test_qubit_qutrit_tables(report):
    sep, ball = reproduce_tables((2, 3), TABLE_CONFIG)
    x, xt = np.array(sep.bounds), np.array(ball.bounds)
    ok = (
        np.all(np.abs(xt[1:] - [0.3583, 0.05533, 0.003133]) <= 0.005)
        and np.all(np.abs(x[1:] - [0.3469, 0.05249, 0.00291]) <= 0.005)
        and np.all(xt[1:3] - x[1:3] >= 0.005)
    )
    report(2, ok, f"2x3 separable={np.round(x, 6).tolist()} rc-ball={np.round(xt, 6).tolist()} "
           f"gaps={np.round(xt[1:3] - x[1:3], 6).tolist()}")


def test_werner_closed_forms(report):
    grid = np.linspace(0, 1, 101)
    dev = max(np.max(np.abs(state_polys(states.werner(p)) - states.werner_polys(p))) for p in grid)

    def rc_excess(p):
        return float(np.sum(schmidt_spectrum(states.werner(p)).values)) - 1.0

    p_rc = brentq(rc_excess, 0, 1, xtol=1e-12)
    p_ppt = brentq(lambda p: ppt_report(states.werner(p)).min_eigenvalue, 0, 1, xtol=1e-12)
    ok = dev <= 1e-10 and abs(p_rc - 1 / 3) <= 1e-6 and abs(p_ppt - 1 / 3) <= 1e-6
    report(3, ok, f"max dev={dev:.2e} RC threshold={p_rc:.9f} PPT threshold={p_ppt:.9f}")


def test_separable_soundness_sweep(report):
    counts = {}
    for dims in ((2, 2), (2, 3)):
        rng = np.random.default_rng(20)
        table = naive_table(dims)
        bad = [0, 0, 0]
        for _ in range(10_000):
            rho, _ = states.random_separable(dims, seed=rng)
            bad[0] += rc_check(rho).entangled
            bad[1] += rcl_check(rho, table).entangled
            bad[2] += not is_separable_2xN(rho)
        counts[dims] = bad
    ok = all(sum(b) == 0 for b in counts.values())
    report(4, ok, "violations (RC, naive, PPT): " + ", ".join(f"{d}: {b}" for d, b in counts.items()))


def _realigned_sv(mat, dims):
    return np.linalg.svd(realign_matrix(mat, *dims), compute_uv=False)


def test_spectrum_invariance(report):
    worst_u = worst_o = 0.0
    for dims in ((2, 2), (2, 3), (3, 2), (3, 3)):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            rho = states.random_density(dims, rng)
            ref = _realigned_sv(rho.mat, dims)
            u = np.kron(states.random_unitary(dims[0], rng), states.random_unitary(dims[1], rng))
            worst_u = max(worst_u, np.max(np.abs(_realigned_sv(u @ rho.mat @ u.conj().T, dims) - ref)))
            OA = random_orthogonal(dims[0] ** 2, rng)
            OB = random_orthogonal(dims[1] ** 2, rng)
            moved = apply_local_orthogonal(rho, OA, OB)
            worst_o = max(worst_o, np.max(np.abs(_realigned_sv(moved, dims) - ref)))
    ok = worst_u <= 1e-9 and worst_o <= 1e-9
    report(5, ok, f"max deviation unitary={worst_u:.2e} orthogonal={worst_o:.2e}")


def test_channel_state_duality(report):
    worst = 0.0
    rng = np.random.default_rng(6)
    shapes = [(2, 2), (2, 3), (3, 2), (3, 3)]
    for k in range(1000):
        nIn, nOut = shapes[k % 4]
        ch = random_cpt_channel(nIn, nOut, rng)
        rho = choi_state(ch)
        worst = max(worst, np.max(np.abs(channel_of_state(rho).mat - ch.mat)))
        worst = max(worst, np.max(np.abs(choi_state(channel_of_state(rho)).mat - rho.mat)))
    v = eb_necessary_check(identity_channel(2))
    w = v.witness
    ident_ok = (
        v.outcome is Outcome.NOT_EB
        and w.criterion == "det|E|"
        and abs(w.value - 1) < 1e-12
        and abs(w.bound - 0.0625) < 1e-12
    )
    depol_ok = is_eb_2xN(depolarizing_channel(2))
    ok = worst <= 1e-12 and ident_ok and depol_ok
    report(6, ok, f"round trip max dev={worst:.2e}; identity {w.criterion}={w.value:.4g} > {w.bound:.4g}; "
           f"depolarizing EB={depol_ok}")


@pytest.mark.slow
def test_profile_curves(report):
    grid = np.linspace(0.6, 1.0, 20)
    rows = profile_curve((2, 3), 2, grid, CURVE_CONFIG)
    sep = np.array([r[1] for r in rows])
    full = np.array([r[2] for r in rows])
    below = bool(np.all(sep <= full))
    gap = full[-1] - sep[-1]
    rows2 = profile_curve((2, 2), 2, grid, CURVE_CONFIG)
    diff2 = max(abs(r[1] - r[2]) for r in rows2)
    ok = below and gap >= 0.004 and diff2 <= 0.002
    report(7, ok, f"2x3 separable<=all: {below}, min margin={np.min(full - sep):.2e}, "
           f"gap at m1=1: {gap:.4f}; 2x2 max |diff|={diff2:.2e}")


def test_polynomial_cross_oracles(report):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 10))
        s = rng.uniform(0, 1, d)
        q = states.random_unitary(d, rng) if d > 1 else np.ones((1, 1))
        a = q @ np.diag(s) @ q.conj().T
        # det(a - x I) = (-1)^d det(x I - a)
        from_charpoly = polys_from_charpoly(((-1) ** d) * charpoly(a).real)
        rec = symmetric_polys(s)
        brute = subset_polys(s)
        worst = max(worst, np.max(np.abs(rec - brute)), np.max(np.abs(rec - from_charpoly)))
    report(8, worst <= 1e-9, f"max disagreement over 1000 spectra: {worst:.2e}")


def test_geometry(report):
    dim_ok = class_dimension(4, [1, 1, 1, 1]) == 11
    gram_dev = max(
        np.max(np.abs(np.einsum("hij,kji->hk", hermitian_basis(n), hermitian_basis(n)) - np.eye(n * n)))
        for n in (2, 3)
    )
    rng = np.random.default_rng(9)
    rho = states.random_density((2, 3), rng)
    c = to_coords(rho)
    dA, dB = rng.standard_normal(3), rng.standard_normal(8)
    hs = [0.1 / 2**k for k in range(6)]
    errs = []
    for h in hs:
        OA = expm(identity_mixing_generator(h * dA))
        OB = expm(identity_mixing_generator(h * dB))
        exact = (OA @ c.matrix() @ OB.T)[0, 0] - c.scalar
        errs.append(abs(exact - trace_variation(c, h * dA, h * dB)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    order = float(np.median(orders))
    ok = dim_ok and gram_dev <= 1e-12 and abs(order - 2.0) <= 0.2
    report(9, ok, f"class dimension 11: {dim_ok}; Gram dev={gram_dev:.1e}; ladder order={order:.3f}")
