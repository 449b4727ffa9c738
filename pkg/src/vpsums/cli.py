"""Command line interface.

Subcommands:
  verify identities                     run the deterministic identity suite
  verify theorem --id N --sweep FILE    ratio-trend sweeps against a theorem
  deviation                             one witness pipeline run
  predict                               prediction formulas only (no pipeline)
  constants kpq|elliptic|en             individual constants
  extremal                              build the witness, optionally dump samples

All outputs are deterministic: fixed quadrature schedules and no randomized
search, so identical invocations produce byte-identical CSV/JSON.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .constants import (
    e_n,
    elliptic_k,
    k_pq_closed,
    k_pq_quadrature,
    theorem1_prediction,
    theorem2_prediction,
    theorem3_bracket,
)
from .extremal import check_h_omega, make_change_of_variable, make_grid, make_phi_star
from .kernels import PoissonParams, VPParams
from .moduli import parse_modulus
from .sums import SampledPeriodicFunction, next_pow2

# Remainder scales blow up like (1-q)**-3; sweeps degenerate numerically
# beyond this, so the CLI refuses them (the library itself does not).
CLI_Q_CAP = 0.99


def _json_print(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _modulus(args: argparse.Namespace):
    try:
        return parse_modulus(args.modulus)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")


def _poisson(args: argparse.Namespace) -> PoissonParams:
    if args.q > CLI_Q_CAP:
        raise SystemExit(f"error: q is capped at {CLI_Q_CAP} on the command line")
    try:
        return PoissonParams(args.q, args.beta)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")


def _vp(args: argparse.Namespace) -> VPParams:
    try:
        return VPParams(args.n, args.p)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")


def _add_modulus_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--modulus",
        required=True,
        help="holder:A, logpow:A, powlog:A, invlog:A, or linear (control)",
    )


def _add_config_args(p: argparse.ArgumentParser) -> None:
    _add_modulus_arg(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)


def cmd_verify_identities(args: argparse.Namespace) -> int:
    checks = harness.verify_identities()
    if args.json:
        _json_print(
            {
                name: {"max_error": c.max_error, "tolerance": c.tolerance, "passed": c.passed}
                for name, c in checks.items()
            }
        )
    else:
        width = max(len(name) for name in checks)
        for name in sorted(checks):
            c = checks[name]
            status = "ok" if c.passed else "FAIL"
            print(f"{name:<{width}}  max_error={c.max_error:.3e}  tol={c.tolerance:.0e}  {status}")
    return 0 if all(c.passed for c in checks.values()) else 1


def cmd_verify_theorem(args: argparse.Namespace) -> int:
    try:
        sweep = harness.load_sweep(args.sweep)
    except (OSError, ValueError) as exc:
        raise SystemExit(f"error: {exc}")
    reports, summary = harness.verify_theorem(args.id, sweep, perturb_passes=args.perturb)
    for msg in summary["skipped"]:
        print(f"warning: skipped {msg}", file=sys.stderr)

    rows = [harness.CSV_HEADER] + [r.to_csv_row() for r in reports]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    else:
        for row in rows:
            print(row)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(
                {"reports": [r.to_dict() for r in reports], "summary": summary},
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
    if args.plot:
        for idx, line in enumerate(summary["lines"]):
            path = f"{args.plot}_line{idx}.dat"
            with open(path, "w") as fh:
                fh.write(f"# {line['modulus']} q={line['q']} beta={line['beta']} p={line['p']}\n")
                for m_val, ratio in zip(line["m_values"], line["ratios"]):
                    fh.write(f"{m_val} {ratio:.17g}\n")

    ok = summary["trend_ok"] and summary.get("bracket_ok", True)
    flagged = [r for r in reports if r.principal_not_dominant]
    for r in flagged:
        print(
            f"note: principal not dominant for {r.omega} q={r.q} p={r.p} n={r.n} "
            f"(remainder_scale/principal = {r.remainder_scale / r.principal:.3g})",
            file=sys.stderr,
        )
    print(f"trend_ok={str(summary['trend_ok']).lower()}", file=sys.stderr)
    if args.id == 3:
        print(f"bracket_ok={str(summary['bracket_ok']).lower()}", file=sys.stderr)
    return 0 if ok else 1


def cmd_deviation(args: argparse.Namespace) -> int:
    mod = _modulus(args)
    report = harness.estimate_sup_deviation(
        mod,
        _poisson(args),
        _vp(args),
        theorem=args.theorem,
        base_grid=args.grid,
        perturb_passes=args.perturb,
    )
    if args.json:
        _json_print(report.to_dict())
    else:
        print(harness.CSV_HEADER)
        print(report.to_csv_row())
        if report.principal_not_dominant:
            print("note: principal not dominant", file=sys.stderr)
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    mod = _modulus(args)
    params = _poisson(args)
    vp = _vp(args)
    if args.theorem == 1:
        pred = theorem1_prediction(mod, params, vp)
    elif args.theorem == 2:
        if mod.name != "holder":
            raise SystemExit("error: theorem 2 applies to the holder family only")
        pred = theorem2_prediction(mod.params["alpha"], params, vp)
    else:
        pred = theorem3_bracket(mod, params, vp)
    payload = {
        "theorem": args.theorem,
        "omega": mod.label,
        "q": params.q,
        "beta": params.beta,
        "n": vp.n,
        "p": vp.p,
        "principal": pred.principal,
        "remainder_scale": pred.remainder_scale,
    }
    if pred.bracket_low is not None:
        payload["bracket_low"] = pred.bracket_low
        payload["bracket_high"] = pred.bracket_high
    if args.format == "json":
        _json_print(payload)
    else:
        keys = list(payload)
        print(",".join(keys))
        print(",".join(_csv_cell(payload[k]) for k in keys))
    return 0


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def cmd_constants(args: argparse.Namespace) -> int:
    if args.what == "kpq":
        if not 0.0 < args.q <= CLI_Q_CAP:
            raise SystemExit(f"error: q must lie in (0, {CLI_Q_CAP}]")
        if args.method == "closed":
            val = k_pq_closed(args.p, args.q)
        else:
            val = k_pq_quadrature(args.p, args.q)
        _json_print({"p": args.p, "q": args.q, "method": args.method, "k_pq": val})
    elif args.what == "elliptic":
        _json_print({"q": args.q, "elliptic_k": elliptic_k(args.q)})
    else:
        mod = _modulus(args)
        _json_print({"omega": mod.label, "n": args.n, "e_n": e_n(mod, args.n)})
    return 0


def cmd_extremal(args: argparse.Namespace) -> int:
    mod = _modulus(args)
    params = _poisson(args)
    vp = _vp(args)
    try:
        cov = make_change_of_variable(params, vp)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")
    grid = make_grid(cov)
    phi = make_phi_star(mod, cov, grid)
    n = args.grid or next_pow2(max(4096, 32 * (vp.n - vp.p + 1)))
    samples = SampledPeriodicFunction.from_function(phi, n)
    lo, hi = phi.support()
    payload = {
        "omega": mod.label,
        "q": params.q,
        "beta": params.beta,
        "n": vp.n,
        "p": vp.p,
        "alpha_q": cov.alpha_q,
        "k0": grid.k0,
        "s": grid.s,
        "grid": n,
        "support": [lo, hi],
        "peak": phi.peak,
        "sampled_sup": float(np.max(np.abs(samples.samples))),
        "h_omega_max_excess": check_h_omega(samples, mod).max_excess,
    }
    _json_print(payload)
    if args.emit_samples:
        t = samples.grid
        with open(args.emit_samples, "w") as fh:
            fh.write("t,phi_star\n")
            for ti, vi in zip(t, samples.samples):
                fh.write(f"{ti:.17g},{vi:.17g}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vpsums",
        description="Deviation asymptotics of averaged Fourier partial sums on kernel-smoothed classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="identity suite or theorem sweeps")
    vsub = verify.add_subparsers(dest="what", required=True)
    vid = vsub.add_parser("identities", help="run the deterministic identity suite")
    vid.add_argument("--json", action="store_true")
    vid.set_defaults(func=cmd_verify_identities)
    vth = vsub.add_parser("theorem", help="ratio-trend sweep against a theorem prediction")
    vth.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    vth.add_argument("--sweep", required=True, help="TOML file of [[sweep]] tables")
    vth.add_argument("--csv", help="write the report table to this file")
    vth.add_argument("--json", help="write reports and summary to this file")
    vth.add_argument("--plot", help="prefix for gnuplot-ready (m, ratio) files")
    vth.add_argument("--perturb", type=int, default=0, metavar="PASSES",
                     help="coordinate-ascent passes to tighten the witness (default off)")
    vth.set_defaults(func=cmd_verify_theorem)

    dev = sub.add_parser("deviation", help="run the witness pipeline once")
    _add_config_args(dev)
    dev.add_argument("--json", action="store_true")
    dev.add_argument("--grid", type=int, help="override the sampling grid size")
    dev.add_argument("--theorem", type=int, choices=(1, 2, 3), default=1)
    dev.add_argument("--perturb", type=int, default=0, metavar="PASSES")
    dev.set_defaults(func=cmd_deviation)

    pred = sub.add_parser("predict", help="evaluate prediction formulas")
    pred.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    _add_config_args(pred)
    pred.add_argument("--format", choices=("json", "csv"), default="json")
    pred.set_defaults(func=cmd_predict)

    cons = sub.add_parser("constants", help="individual constants")
    csub = cons.add_subparsers(dest="what", required=True)
    kpq = csub.add_parser("kpq")
    kpq.add_argument("--p", type=int, required=True)
    kpq.add_argument("--q", type=float, required=True)
    kpq.add_argument("--method", choices=("closed", "quadrature"), default="closed")
    kpq.set_defaults(func=cmd_constants)
    ell = csub.add_parser("elliptic")
    ell.add_argument("--q", type=float, required=True)
    ell.set_defaults(func=cmd_constants)
    en = csub.add_parser("en")
    _add_modulus_arg(en)
    en.add_argument("--n", type=int, required=True)
    en.set_defaults(func=cmd_constants)

    ext = sub.add_parser("extremal", help="build the witness function")
    _add_config_args(ext)
    ext.add_argument("--grid", type=int, help="override the sampling grid size")
    ext.add_argument("--emit-samples", metavar="FILE", help="write (t, value) CSV")
    ext.set_defaults(func=cmd_extremal)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
