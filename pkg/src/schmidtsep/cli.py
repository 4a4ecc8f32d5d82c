"""Command-line front end.

Exit codes: 0 on success, 1 when ``--fail-on-entangled`` is given and a
test fires, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import channels, criteria, geometry, ppt, states
from .bounds import SearchConfig, maximize, profile_curve, reproduce_tables, write_curve_csv
from .criteria import BoundTable, naive_table, rc_check, rcl_check, state_polys
from .errors import NotCpt, SchmidtSepError
from .fileio import dump_state, load_channel, load_state, state_to_dict
from .linalg import Dims, purity
from .schmidt import schmidt_spectrum

log = logging.getLogger("schmidtsep")


class CliError(Exception):
    pass


def _dims(text):
    try:
        return Dims.parse(text)
    except SchmidtSepError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_scan(text: str) -> list[float]:
    """``start:stop:step`` (stop included) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [start + k * step for k in range(count)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))
    if getattr(args, "out", None) and args.command in ("analyze", "werner", "channel", "dim"):
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")


def _verdict_dict(v: criteria.Verdict) -> dict:
    return {
        "outcome": v.outcome.value,
        "violations": [
            {"criterion": w.criterion, "l": w.l, "value": w.value, "bound": w.bound}
            for w in v.violations
        ],
    }


def _search_config(args, set_=None) -> SearchConfig:
    kw = {"seed": args.seed}
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    if args.iters is not None:
        kw["iters_per_restart"] = args.iters
    if getattr(args, "terms", None) is not None:
        kw["terms"] = args.terms
    if set_ is not None:
        kw["set"] = set_
    return SearchConfig(**kw)


# -- analyze -----------------------------------------------------------------


def analyze_state(rho, table: BoundTable | None = None) -> tuple[dict, list[str]]:
    spec = schmidt_spectrum(rho)
    polys = state_polys(rho)
    rc = rc_check(rho)
    naive = rcl_check(rho, naive_table(rho.dims))
    rep = ppt.ppt_report(rho)
    report = {
        "dims": [rho.nA, rho.nB],
        "purity": purity(rho),
        "schmidt": spec.values.tolist(),
        "rank": spec.rank,
        "M": polys.tolist(),
        "rc": _verdict_dict(rc),
        "naive": _verdict_dict(naive),
        "ppt": {"min_eigenvalue": rep.min_eigenvalue, "is_ppt": rep.is_ppt},
        "state": state_to_dict(rho),
    }
    m1 = polys[0]
    lines = [
        f"dims: {rho.dims}",
        f"purity: {report['purity']:.6f}",
        "schmidt: " + ", ".join(f"{v:.6g}" for v in spec.values),
        f"rank: {spec.rank}",
        "M: " + "  ".join(f"M{l}={m:.6g}" for l, m in enumerate(polys, start=1)),
    ]
    if rc.entangled:
        lines.append(f"RC: ENTANGLED (M1={m1:.4f} > 1)")
    else:
        lines.append(f"RC: inconclusive (M1={m1:.4f} <= 1)")
    for l, (m, y) in enumerate(zip(polys, naive_table(rho.dims).bounds), start=1):
        flag = "VIOLATED" if m > y + criteria.VERDICT_MARGIN else "ok"
        lines.append(f"naive l={l}: M{l}={m:.6g} bound={y:.6g} {flag}")
    if table is not None:
        strict = rcl_check(rho, table)
        report["strict"] = _verdict_dict(strict) | {"kind": table.kind}
        if strict.entangled:
            w = strict.witness
            lines.append(f"{table.kind}: ENTANGLED (l={w.l}, M{w.l}={w.value:.6g} > {w.bound:.6g})")
        else:
            lines.append(f"{table.kind}: inconclusive")
    lines.append(f"PPT min eigenvalue: {rep.min_eigenvalue:.6g}")
    if (rho.nA, rho.nB) in ppt.EXACT_DIMS:
        sep = ppt.is_separable_2xN(rho)
        report["separable"] = sep
        if sep and (rc.entangled or naive.entangled):
            # cannot happen for a sound criterion; kept as a consistency probe
            log.warning("realignment test fired on a PPT state in %s", rho.dims)
        lines.append("PPT: separable" if sep else "PPT: entangled")
    else:
        lines.append("PPT: positive (inconclusive)" if rep.is_ppt else "PPT: entangled (NPT)")
    entangled = rc.entangled or naive.entangled or not rep.is_ppt
    if table is not None:
        entangled = entangled or report["strict"]["outcome"] != "Inconclusive"
    report["entangled"] = entangled
    return report, lines


def cmd_analyze(args) -> int:
    rho = load_state(args.path)
    table = BoundTable.load(args.bounds) if args.bounds else None
    report, lines = analyze_state(rho, table)
    _emit(args, report, lines)
    return 1 if args.fail_on_entangled and report["entangled"] else 0


# -- searches ----------------------------------------------------------------


def cmd_bounds(args) -> int:
    cfg = _search_config(args, args.set)
    t0 = time.perf_counter()
    est = maximize(args.dims, args.l, cfg)
    elapsed = time.perf_counter() - t0
    report = {
        "dims": [est.dims.nA, est.dims.nB],
        "l": est.l,
        "set": cfg.set,
        "value": est.value,
        "best_restart_index": est.best_restart_index,
        "restart_values": list(est.restart_values),
        "config": cfg.to_dict(),
        "config_hash": cfg.digest(),
        "seconds": elapsed,
        "argmax_state": state_to_dict(est.argmax_state),
    }
    lines = [
        f"max M{est.l} over {cfg.set} states of {est.dims}: {est.value:.6g}",
        f"best restart: {est.best_restart_index} of {cfg.restarts}  ({elapsed:.1f}s)",
    ]
    if args.out:
        dump_state(est.argmax_state, args.out)
        lines.append(f"argmax state written to {args.out}")
    _emit(args, {k: v for k, v in report.items() if not (args.json is False and k == "argmax_state")}, lines)
    return 0


def format_table_comparison(dims: Dims, sep: BoundTable, ball: BoundTable) -> list[str]:
    naive = naive_table(dims)
    header = "           " + "".join(f"{'l=' + str(l):>12}" for l in range(1, dims.d + 1))
    rows = [header]
    for name, tab in ((f"y_l({dims.d})", naive), ("rc-ball", ball), ("separable", sep)):
        rows.append(f"{name:<11}" + "".join(f"{b:>12.6g}" for b in tab.bounds))
    return rows


def cmd_tables(args) -> int:
    cfg = _search_config(args)
    t0 = time.perf_counter()
    sep, ball = reproduce_tables(args.dims, cfg)
    elapsed = time.perf_counter() - t0
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    tag = f"{args.dims.nA}x{args.dims.nB}"
    sep_path, ball_path = out / f"bounds_separable_{tag}.json", out / f"bounds_rcball_{tag}.json"
    sep.dump(sep_path)
    ball.dump(ball_path)
    lines = format_table_comparison(args.dims, sep, ball)
    lines += [f"wrote {sep_path} and {ball_path} ({elapsed:.1f}s)"]
    report = {"separable": sep.to_dict(), "rc-ball": ball.to_dict(), "seconds": elapsed}
    _emit(args, report, lines)
    return 0


def cmd_curve(args) -> int:
    if args.grid is not None:
        grid = args.grid
    elif args.range is not None:
        grid = np.linspace(args.range[0], args.range[1], args.points).tolist()
    else:
        raise CliError("curve needs --grid or --range")
    cfg = _search_config(args)
    rows = profile_curve(args.dims, args.l, grid, cfg)
    path = Path(args.out or f"curve_{args.dims.nA}x{args.dims.nB}_l{args.l}.csv")
    write_curve_csv(rows, path)
    report = {"csv": str(path), "rows": [list(r) for r in rows]}
    lines = ["m1,max_separable,max_all"]
    lines += [",".join("" if v is None else f"{v:.6g}" for v in r) for r in rows]
    lines.append(f"wrote {path}")
    _emit(args, report, lines)
    return 0


# -- deterministic reports ---------------------------------------------------


def cmd_werner(args) -> int:
    rows = []
    lines = [f"{'p':>8} {'M1':>10} {'M2':>10} {'M3':>10} {'M4':>10}  RC            PPT"]
    for p in args.scan:
        p = min(max(p, 0.0), 1.0)
        rho = states.werner(p)
        m = state_polys(rho)
        rc = rc_check(rho).entangled
        sep = ppt.is_separable_2xN(rho)
        rows.append({"p": p, "M": m.tolist(), "rc_entangled": rc, "ppt_separable": sep})
        lines.append(
            f"{p:8.4f} " + " ".join(f"{v:10.6f}" for v in m)
            + f"  {'ENTANGLED' if rc else 'inconclusive':<13} {'separable' if sep else 'entangled'}"
        )
    _emit(args, {"rows": rows}, lines)
    return 0


def cmd_channel(args) -> int:
    ch = load_channel(args.path)
    report = {"nIn": ch.nIn, "nOut": ch.nOut}
    lines = [f"channel C^{ch.nIn} -> C^{ch.nOut}"]
    try:
        channels.choi_state(ch)
    except NotCpt as exc:
        report["cpt"] = False
        report["error"] = str(exc)
        lines.append(f"CPT: no ({exc})")
        _emit(args, report, lines)
        return 2
    report["cpt"] = True
    lines.append("CPT: yes")
    spec = channels.channel_spectrum(ch)
    report["singular_values"] = spec.values.tolist()
    report["rank"] = spec.rank
    report["det_abs"] = float(np.prod(spec.values))
    lines.append("singular values: " + ", ".join(f"{v:.6g}" for v in spec.values))
    lines.append(f"det|E| = {report['det_abs']:.6g}")
    eb = channels.eb_necessary_check(ch)
    report["eb_necessary"] = _verdict_dict(eb)
    if eb.entangled:
        w = eb.witness
        lines.append(f"EB test: NOT EB (l={w.l}: {w.value:.6g} > {w.bound:.6g})")
    else:
        lines.append("EB test: inconclusive")
    if (ch.nOut, ch.nIn) in ppt.EXACT_DIMS:
        is_eb = channels.is_eb_2xN(ch)
        report["is_eb"] = is_eb
        lines.append("entanglement breaking: " + ("yes" if is_eb else "no"))
    _emit(args, report, lines)
    return 1 if args.fail_on_entangled and eb.entangled else 0


def cmd_dim(args) -> int:
    mults = [int(v) for v in args.multiplicities.split(",") if v.strip()]
    value = geometry.class_dimension(args.d, mults)
    _emit(args, {"d": args.d, "multiplicities": mults, "dimension": value}, [str(value)])
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="output path (file or directory, per command)")
    common.add_argument("-v", "--verbose", action="store_true")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--seed", type=int, required=True)
    search.add_argument("--dims", type=_dims, required=True, help="e.g. 2x3")
    search.add_argument("--restarts", type=int)
    search.add_argument("--iters", type=int, help="Nelder-Mead iterations per round")
    search.add_argument("--terms", type=int, help="product terms in separable searches")

    parser = argparse.ArgumentParser(prog="schmidtsep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="run every test on a state file")
    p.add_argument("path")
    p.add_argument("--bounds", help="bound table JSON to test against")
    p.add_argument("--fail-on-entangled", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", parents=[common, search], help="maximize one M[l]")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--set", choices=["separable", "rc-ball", "all"], default="separable")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("tables", parents=[common, search], help="estimate strict bound tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("curve", parents=[common, search], help="max M[l] at fixed M[1]")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--grid", type=_parse_scan, help="start:stop:step or comma list of M1 values")
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--points", type=int, default=20)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("werner", parents=[common], help="scan the two-qubit Werner family")
    p.add_argument("scan", type=_parse_scan, help="start:stop:step or comma list of p values")
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("channel", parents=[common], help="audit a channel file")
    p.add_argument("path")
    p.add_argument("--fail-on-entangled", action="store_true", help="exit 1 when provably not EB")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("dim", parents=[common], help="dimension of a Schmidt equivalence class")
    p.add_argument("d", type=int)
    p.add_argument("multiplicities", help="comma-separated cluster sizes, e.g. 1,1,1,1")
    p.set_defaults(func=cmd_dim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (SchmidtSepError, CliError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
