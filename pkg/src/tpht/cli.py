"""Command-line entry point: ``tpht <command> [options]``.

Data goes to stdout (JSON by default, CSV with ``--format csv``), diagnostics
to stderr.  Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import errors
from .ensemble import DEFAULT_SEED, DistSpec, EnsembleRun, bernoulli_moment_law, run_ensemble
from .factorization import lu_closed_form, lu_dynamics_iterate
from .gs_asymptotics import (
    exp_average_ones,
    finite_moment_table,
    gs_average_quadrature,
    gs_moment_exact,
)
from .matrices import EXHAUSTIVE_MAX_N, is_totally_positive, one_norm_bound, tpht_band, tpht_truncation
from .spectra import check_oscillation, eigen_hessenberg, esd_histogram, exp_taylor_coefficients, trace_series_average
from .symbols import Symbol, symbol_eval
from . import svg

FLOAT_FMT = "%.17g"
TABLE_NS = (100, 1000, 10000)


def parse_roots(text):
    """``"1,2.5,3"``, ``""`` (no roots) or ``"ones:M"``."""
    text = text.strip()
    if not text:
        return []
    if text.startswith("ones:"):
        try:
            m = int(text[5:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad root count in {text!r}")
        if m < 0:
            raise argparse.ArgumentTypeError("root count must be non-negative")
        return [1.0] * m
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"roots must be comma-separated numbers, got {text!r}")
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("roots must be finite")
    return vals


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _emit_json(obj, out):
    out.write(json.dumps(obj, default=_jsonable))
    out.write("\n")


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _emit_csv_rows(rows, out):
    for row in rows:
        out.write(",".join(FLOAT_FMT % float(v) for v in np.atleast_1d(row)))
        out.write("\n")


def _tp_status(A):
    mode = "exhaustive" if A.shape[0] <= EXHAUSTIVE_MAX_N else "neville"
    return is_totally_positive(A, mode).is_tp


def cmd_matrix(args, out):
    T = tpht_truncation(args.roots, args.n)
    if args.format == "csv":
        _emit_csv_rows(T, out)
    else:
        _emit_json({"roots": args.roots, "n": args.n, "matrix": T}, out)


def cmd_lu(args, out):
    T = tpht_truncation(args.roots, args.n)
    f = lu_closed_form(T)
    res = {"roots": args.roots, "n": args.n, "method": f.method, "L": f.L, "U": f.U}
    if args.dynamics:
        traj = lu_dynamics_iterate(T, args.dynamics)
        ev0 = eigen_hessenberg(T).values_complex
        steps = []
        for k, A in enumerate(traj):
            ev = eigen_hessenberg(A).values_complex
            steps.append({"step": k, "tp": bool(_tp_status(A)), "eig_drift": float(np.max(np.abs(ev - ev0)))})
        res["trajectory"] = steps
        res["final"] = traj[-1]
    if args.format == "csv":
        out.write("# L\n")
        _emit_csv_rows(f.L, out)
        out.write("# U\n")
        _emit_csv_rows(f.U, out)
    else:
        _emit_json(res, out)


def cmd_spectrum(args, out):
    T = tpht_truncation(args.roots, args.n)
    S = eigen_hessenberg(T, want_vectors=args.oscillation, path=args.path)
    res = {"roots": args.roots, "n": args.n, "path": S.path, "eigenvalues": S.eigenvalues, "max_imag": S.max_imag}
    if args.oscillation:
        rep = check_oscillation(S)
        res["residual"] = S.residual
        res["oscillation"] = {
            "sign_variations": rep.sign_variations,
            "nodes": rep.nodes,
            "interlacing_ok": rep.interlacing_ok,
            "ok": rep.ok,
        }
        if args.svg:
            svg.nodes_chart(args.svg, rep.nodes, args.n, title="eigenvector nodes")
    if args.hist:
        edges, counts = esd_histogram(T, args.hist, spectrum=S)
        res["histogram"] = {"edges": edges, "counts": counts}
        if args.svg and not args.oscillation:
            svg.histogram(args.svg, edges, counts, title="eigenvalue histogram", xlabel="eigenvalue")
    if args.format == "csv":
        _emit_csv_rows(S.eigenvalues[:, None], out)
    else:
        _emit_json(res, out)


def cmd_gs(args, out):
    s = Symbol.from_roots(args.roots)
    res = {"roots": args.roots}
    if args.function == "exp":
        q = gs_average_quadrature(s, np.exp, args.nodes)
        res.update({"function": "exp", "quadrature": q.value, "nodes": q.nodes_used, "imag_residue": q.imag_residue})
        if s.m and np.all(s.roots == 1.0):
            res["closed_form"] = exp_average_ones(s.m).value
        if args.table:
            coeffs = exp_taylor_coefficients(one_norm_bound(s, max(TABLE_NS)))
            res["table"] = [{"n": n, "value": trace_series_average(tpht_band(s, n), coeffs)} for n in TABLE_NS]
    else:
        res.update({"p": args.p, "exact": gs_moment_exact(s, args.p).value})
        if args.table:
            vals = finite_moment_table(s, args.p, TABLE_NS)
            res["table"] = [{"n": n, "value": v} for n, v in zip(TABLE_NS, vals)]
    if args.format == "csv":
        if "table" in res:
            _emit_csv_rows([[r["n"], r["value"]] for r in res["table"]], out)
        else:
            _emit_csv_rows([[res.get("exact", res.get("quadrature"))]], out)
    else:
        _emit_json(res, out)


def _resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get("TPHT_SEED", "").strip()
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise argparse.ArgumentTypeError(f"TPHT_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def cmd_mc(args, out):
    kind = {"exp": "exponential"}.get(args.dist, args.dist)
    sigma = args.sigma if len(args.sigma) != 1 else args.sigma[0]
    dist = DistSpec(kind, args.m, sigma=sigma, mean=args.mean, q=args.q)
    mode = {"sim": "simultaneous", "indep": "independent"}.get(args.mode, args.mode)
    seed = _resolve_seed(args.seed)
    run = run_ensemble(EnsembleRun(dist, args.n, args.p, args.samples, seed, mode, args.threads))
    res = {
        "dist": {"kind": kind, "m": args.m, "sigma": args.sigma, "mean": args.mean, "q": args.q},
        "n": args.n,
        "p": args.p,
        "samples": args.samples,
        "seed": seed,
        "mode": mode,
        "summary": run.summary,
    }
    if kind == "bernoulli":
        k, values, probs = bernoulli_moment_law(args.m, args.q, args.p)
        res["law"] = [{"k": int(a), "value": v, "probability": float(pr)} for a, v, pr in zip(k, values, probs)]
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("lhs,rhs\n")
            _emit_csv_rows(np.column_stack([run.lhs_samples, run.rhs_samples]), fh)
    if args.svg and run.summary and "log10_hist" in run.summary["rhs"]:
        h = run.summary["rhs"]["log10_hist"]
        svg.histogram(args.svg, h["edges"], h["counts"], title="limit moment samples", xlabel="log10 value")
    if args.format == "csv":
        _emit_csv_rows(np.column_stack([run.lhs_samples, run.rhs_samples]), out)
    else:
        _emit_json(res, out)


def cmd_fp_demo(args, out):
    s = Symbol.from_roots(args.roots)
    T = tpht_truncation(s, args.n)
    S = eigen_hessenberg(T, path=args.solver)
    ev = S.values_complex
    theta = 2 * np.pi * np.arange(args.curve_points + 1) / args.curve_points
    curve = symbol_eval(s, theta)
    res = {
        "roots": args.roots,
        "n": args.n,
        "solver": S.path,
        "interval": [0.0, float(one_norm_bound(s, args.n))],
        "eigenvalues": {"re": ev.real, "im": ev.imag},
        "symbol_curve": {"re": curve.real, "im": curve.imag},
    }
    if args.svg:
        svg.scatter(args.svg, ev.real, ev.imag, title="computed eigenvalues", xlabel="Re", ylabel="Im",
                    curve=(curve.real, curve.imag))
    if args.format == "csv":
        _emit_csv_rows(np.column_stack([ev.real, ev.imag]), out)
    else:
        _emit_json(res, out)


def build_parser():
    p = argparse.ArgumentParser(prog="tpht", description="Totally positive Hessenberg-Toeplitz toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, roots=True, n=True):
        if roots:
            sp.add_argument("--roots", type=parse_roots, required=True, help='e.g. "1,1,1", "" or "ones:5"')
        if n:
            sp.add_argument("--n", type=_positive_int, required=True)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("matrix", help="print the n x n truncation")
    common(sp)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("lu", help="closed-form LU, optionally iterate the LU map")
    common(sp)
    sp.add_argument("--dynamics", type=_nonneg_int, default=0, metavar="STEPS")
    sp.set_defaults(func=cmd_lu)

    sp = sub.add_parser("spectrum", help="eigenvalues, oscillation report, histogram")
    common(sp)
    sp.add_argument("--oscillation", action="store_true")
    sp.add_argument("--hist", type=_positive_int, metavar="BINS")
    sp.add_argument("--svg")
    sp.add_argument("--path", choices=("auto", "hqr", "symmetric", "lapack"), default="auto")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("gs", help="large-n limits of eigenvalue averages")
    common(sp, n=False)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=_positive_int)
    grp.add_argument("--function", choices=("exp",))
    sp.add_argument("--nodes", type=_positive_int, default=4096)
    sp.add_argument("--table", action="store_true", help="finite-n values for n = 100, 1000, 10000")
    sp.set_defaults(func=cmd_gs)

    sp = sub.add_parser("mc", help="random-symbol Monte-Carlo run")
    sp.add_argument("--dist", choices=("lognormal", "exp", "exponential", "bernoulli"), required=True)
    sp.add_argument("--sigma", type=lambda t: [float(v) for v in t.split(",")], default=[1.0])
    sp.add_argument("--mean", type=float, default=1.0)
    sp.add_argument("--q", type=float, default=0.5)
    sp.add_argument("--m", type=_nonneg_int, required=True)
    sp.add_argument("--n", type=_positive_int, default=100)
    sp.add_argument("--p", type=_positive_int, required=True)
    sp.add_argument("--samples", type=_nonneg_int, default=10_000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--mode", choices=("sim", "indep", "simultaneous", "independent"), default="indep")
    sp.add_argument("--threads", type=_positive_int)
    sp.add_argument("--svg")
    sp.add_argument("--csv", help="write all lhs/rhs samples to this file")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("fp-demo", help="computed eigenvalues against the symbol curve")
    common(sp)
    sp.add_argument("--solver", choices=("auto", "hqr", "symmetric", "lapack"), default="lapack")
    sp.add_argument("--curve-points", type=_positive_int, default=512)
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_fp_demo)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except errors.NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
