"""Command line entry point: one subcommand per check, JSON report on stdout."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import acceptance
from .errors import ChargedBoseError

SCHEMA = 1


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _report(task, params, results, tolerances, ok, seed, wall):
    return {
        "schema": SCHEMA,
        "task": task,
        "params": params,
        "results": results,
        "tolerances": tolerances,
        "pass": bool(ok),
        "seed": seed,
        "wall_time": wall,
    }


# ---------------------------------------------------------------------------
# tasks: each returns (params, results, tolerances, pass)


def task_i0(args, rng):
    from . import scalars as sc

    r = sc.i0_all(args.tol)
    res = {
        "closed_form": r.closed_form,
        "quad_1d": r.quad_1d,
        "quad_radial": r.quad_radial,
        "max_pairwise_diff": r.max_pairwise_diff,
    }
    return {"tol": args.tol}, res, {"max_pairwise_diff": 1e-8}, r.max_pairwise_diff < 1e-8


def task_minimize(args, rng):
    from . import meanfield as mf

    res, ok = {}, True
    if args.method in ("shooting", "both"):
        p = mf.minimizer(args.n)
        res["shooting"] = {
            "A": -p.energy,
            "mu": p.mu,
            "T": p.kinetic,
            "P": p.potential,
            "mass": p.mass,
            "virial_residual": mf.virial_residual(p),
            "el_residual_rel": mf.el_residual(p) / float(np.max(p.values)),
        }
        ok &= abs(res["shooting"]["virial_residual"]) <= 1e-4 and res["shooting"]["el_residual_rel"] <= 1e-6
        if args.dump_profile:
            np.savetxt(args.dump_profile, np.column_stack([p.r_grid, p.values]), delimiter=",", header="r,phi", comments="")
    if args.method in ("flow", "both"):
        A, raw = mf.flow_dyson_constant(tuple(args.grids))
        res["flow"] = {"A": A, "A_per_grid": raw, "grids": args.grids}
    if args.method == "both":
        rel = abs(res["flow"]["A"] - res["shooting"]["A"]) / res["shooting"]["A"]
        res["relative_difference"] = rel
        ok &= rel <= 1e-3
    params = {"method": args.method, "n": args.n, "grids": args.grids}
    return params, res, {"virial": 1e-4, "el_residual_rel": 1e-6, "two_method_rel": 1e-3}, ok


def task_bogolubov(args, rng):
    from . import bogolubov as bg

    draws = bg.random_check(args.check_random, rng, max_cutoff=args.cutoff) if args.check_random else []
    per = [{"bound": d.bound, "exact": d.exact, "gap": d.gap, "converged": d.converged} for d in draws]
    ok = all(d.gap >= -1e-8 for d in draws)
    res = {"draws": per, "min_gap": min((d.gap for d in draws), default=None)}
    return {"check_random": args.check_random, "cutoff": args.cutoff}, res, {"gap": -1e-8}, ok


def task_lattice(args, rng):
    from . import lattice as lt

    worst_id, worst_sl, sob = 0.0, np.inf, 0.0
    for _ in range(args.ensemble):
        S = lt.random_field(rng)
        T = lt.lattice_energy(S)
        worst_id = max(worst_id, abs(lt.dirichlet_energy(lt.interpolate(S)) - T) / max(1.0, T))
        for beta, delta in ((6.0, 0.5), (2.5, 0.1), (2.5, 0.5)):
            r = lt.lattice_lp_bounds(S, beta, delta)
            worst_sl = min(worst_sl, min(v / max(1.0, r.upper) for v in r.slacks.values()))
        sob = max(sob, lt.sobolev_ratio(S))
    if args.dump and args.ensemble:
        S.to_csv(args.dump)
    res = {
        "identity_max_rel_diff": worst_id,
        "min_rel_slack": worst_sl,
        "sobolev_max": sob,
        "sobolev_constant": lt.SOBOLEV_CONSTANT,
        "pair_convention": lt.PAIR_CONVENTION,
    }
    ok = worst_id <= 1e-10 and worst_sl >= -1e-9
    return {"ensemble": args.ensemble}, res, {"identity": 1e-10, "slack": -1e-9}, ok


def task_matloc(args, rng):
    from . import matloc as ml

    reps = ml.ensemble(rng, args.trials, args.n, args.band, args.window)
    res = {"held": sum(r.holds for r in reps), "min_slack": min(r.slack for r in reps), "C_work": ml.C_WORK}
    params = {"n": args.n, "band": args.band, "window": args.window, "trials": args.trials}
    return params, res, {"C_work": ml.C_WORK}, res["held"] == args.trials


def task_sliding(args, rng):
    from . import potentials as pt

    fam = pt.build_bumps(args.t)
    r = pt.omega_search(args.t, m=args.m, lam=args.lam, fam=fam, omega0=0.5)
    res = {
        "omega": r.omega,
        "min_transform": r.min_transform,
        "k_at_min": r.k_at_min,
        "F_near_zero": r.f_at_zero,
        "asymptotic_coefficient": r.asymptotic_coefficient,
    }
    return {"t": args.t, "m": args.m, "lam": args.lam}, res, {"positivity": -1e-6}, r.min_transform >= -1e-6


def task_bumps(args, rng):
    from . import potentials as pt

    fam = pt.build_bumps(args.t)
    x = rng.uniform(-3, 3, size=(1000, 3))
    part = float(np.max(pt.partition_residual(fam, x)))
    t = args.t
    g_ok = 1.0 <= fam.gamma <= (1 - 2 * t) ** -3
    gt_ok = (1 + t) ** -3 <= fam.gamma_tilde <= (1 - t) ** -3
    if args.dump:
        xs = np.linspace(-0.5 - t, 0.5 + t, 401)
        np.savetxt(
            args.dump,
            np.column_stack([xs, fam.theta_1d(xs), fam.Theta_1d(xs), fam.h_1d(xs) * fam.gamma ** (1 / 3)]),
            delimiter=",",
            header="x,theta,Theta,h",
            comments="",
        )
    res = {
        "gamma": fam.gamma,
        "gamma_tilde": fam.gamma_tilde,
        "partition_residual": part,
        "derivative_constant": fam.deriv_constant,
    }
    return {"t": t}, res, {"partition": 1e-12}, part <= 1e-12 and g_ok and gt_ok


def task_fock(args, rng):
    from . import fockcheck as fc

    g = fc.creation_difference_gap(args.cutoff)
    return {"cutoff": args.cutoff}, {"min_eigenvalue": g}, {"min_eigenvalue": -1e-8}, g >= -1e-8


def task_fs(args, rng):
    from . import fockcheck as fc

    C, r = fc.fs_scaling_fit(tuple(args.s))
    worst = float(max(np.max(r) / C, C / np.min(r)))
    res = {"s": args.s, "sup_over_sqrt_s": r.tolist(), "fitted_C": C, "worst_factor": worst}
    return {"s": args.s}, res, {"factor": 2.0}, worst <= 2.0


def task_accept_all(args, rng):
    out = []
    for c in acceptance.run_all(args.seed):
        print(c.line(), file=sys.stderr)
        out.append({"number": c.number, "title": c.title, "pass": c.passed, "results": c.results, "tolerances": c.tolerances})
    return {}, {"criteria": out}, {}, all(c["pass"] for c in out)


TASKS = {
    "i0": task_i0,
    "minimize": task_minimize,
    "bogolubov": task_bogolubov,
    "lattice-check": task_lattice,
    "matloc": task_matloc,
    "sliding-check": task_sliding,
    "bumps": task_bumps,
    "fock-check": task_fock,
    "fs-check": task_fs,
    "accept-all": task_accept_all,
}


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON (the default and only format)")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--no-timing", action="store_true", help="report wall_time as 0 for byte-identical output")

    ap = argparse.ArgumentParser(prog="chargedbose", description=__doc__)
    sub = ap.add_subparsers(dest="task", required=True)

    p = sub.add_parser("i0", parents=[common])
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("minimize", parents=[common])
    p.add_argument("--method", choices=["shooting", "flow", "both"], default="shooting")
    p.add_argument("--n", type=int, default=16001, help="radial grid nodes")
    p.add_argument("--grids", type=int, nargs=2, default=[63, 95], help="flow grid sizes for extrapolation")
    p.add_argument("--dump-profile", help="CSV file for r, phi")

    p = sub.add_parser("bogolubov", parents=[common])
    p.add_argument("--check-random", type=int, default=20)
    p.add_argument("--cutoff", type=int, default=96, help="largest Fock cutoff per mode")

    p = sub.add_parser("lattice-check", parents=[common])
    p.add_argument("--ensemble", type=int, default=100)
    p.add_argument("--dump", help="CSV dump of the last field")

    p = sub.add_parser("matloc", parents=[common])
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--band", type=int, default=5)
    p.add_argument("--window", type=int, default=20)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("sliding-check", parents=[common])
    p.add_argument("--t", type=float, default=0.2)
    p.add_argument("--m", type=float, default=0.0)
    p.add_argument("--lam", type=float, default=1.0)

    p = sub.add_parser("bumps", parents=[common])
    p.add_argument("--t", type=float, default=0.2)
    p.add_argument("--dump", help="CSV of the one-dimensional profiles")

    p = sub.add_parser("fock-check", parents=[common])
    p.add_argument("--cutoff", type=int, default=40)

    p = sub.add_parser("fs-check", parents=[common])
    p.add_argument("--s", type=_float_list, default=[0.1, 0.04, 0.01])

    sub.add_parser("accept-all", parents=[common])
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rng = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    try:
        params, res, tol, ok = TASKS[args.task](args, rng)
    except (ChargedBoseError, ValueError) as exc:
        params, res, tol, ok = {}, {"error": f"{type(exc).__name__}: {exc}"}, {}, False
    wall = 0.0 if args.no_timing else time.perf_counter() - t0
    report = _clean(_report(args.task, params, res, tol, ok, args.seed, wall))
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
