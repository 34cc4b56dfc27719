"""Command-line entry point: ``qfsieve <subcommand> [options]``.

Exit status is 0 on success, 1 when a computation fails (bad forms, caps
exceeded, invariant failure) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .errors import SieveError
from .forms import WORKED_FORMS, build_system


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def _system(args, cfg):
    forms = args.form or cfg.get("forms") or WORKED_FORMS
    strict = cfg.get("strict_mode", True) and not args.lenient
    return build_system(forms, strict, cfg.get("z"))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_rho(args, cfg):
    from .localdensity import density

    system = _system(args, cfg)
    d = args.d if len(args.d) == system.g else args.d * system.g if len(args.d) == 1 else args.d
    v = density(system, d)
    if args.format == "json":
        return json.dumps({"d": list(d), "rho": v.rho, "rho_star": v.rho_star, "a": v.modulus})
    if args.format == "csv":
        return _csv(["d", "a", "rho", "rho_star"], [[" ".join(map(str, d)), v.modulus, v.rho, v.rho_star]])
    return str(v.rho)


def cmd_omega(args, cfg):
    from .localdensity import omega_closed, omega_from_definition
    from .numutil import primes_below

    system = _system(args, cfg)
    primes = list(args.p) if args.p else primes_below(args.p_max)
    rows = []
    for p in primes:
        pair = omega_from_definition(system, p)
        rows.append((p, omega_closed(system, p), pair.definition, pair.lemma))
    if args.format == "json":
        return json.dumps([{"p": p, "omega": str(w), "definition": str(a), "lemma": str(b)}
                           for p, w, a, b in rows], indent=2)
    if args.format == "csv":
        return _csv(["p", "omega", "definition", "lemma"], [[p, w, a, b] for p, w, a, b in rows])
    return "\n".join(f"{p} {w}" for p, w, _, _ in rows)


def cmd_classes(args, cfg):
    from .lattice import classes, classes_in_lambda_star, reduced_lattice

    if args.d:
        system = _system(args, cfg)
        cls = classes_in_lambda_star(system, args.d)
    elif args.a:
        cls = classes(args.a)
    else:
        raise UsageError("classes needs --a or --d")
    rows = []
    for c in cls:
        lat = reduced_lattice(c)
        rows.append((c.modulus, c.representative, lat.minimal_vector, lat.min_length))
    if args.format == "json":
        return json.dumps([{"a": a, "representative": list(y), "minimal_vector": list(v),
                            "min_length": n} for a, y, v, n in rows], indent=2)
    if args.format == "csv":
        return _csv(["a", "y1", "y2", "v1", "v2", "min_length"],
                    [[a, *y, *v, f"{n:.6f}"] for a, y, v, n in rows])
    return "\n".join(f"{y} -> {v}" for _, y, v, _ in rows) + f"\n{len(rows)} classes"


def cmd_lod(args, cfg):
    from .lattice import lod_csv, lod_diagnostic, lod_growth, lod_total

    system = _system(args, cfg)
    if args.growth:
        slope, pts = lod_growth(system, args.growth, M=args.M)
        if args.format == "json":
            return json.dumps({"slope": slope, "points": [{"Q": q, "T": t} for q, t in pts]}, indent=2)
        return _csv(["Q", "T_hat"], [[q, f"{t:.6f}"] for q, t in pts]) + f"# slope {slope:.4f}\n"
    Q = args.Q if len(args.Q) == system.g else args.Q * system.g
    rows = lod_diagnostic(system, Q, M=args.M)
    if args.format == "json":
        return json.dumps({"Q": list(Q), "T_hat": lod_total(rows, Q),
                           "rows": [{"d": list(r.d), "a": r.a, "max_error": r.max_error,
                                     "main_term": r.main_term,
                                     "min_vec_len": None if math.isnan(r.min_vec_len) else r.min_vec_len}
                                    for r in rows]}, indent=2)
    return lod_csv(rows, system.g)


def cmd_sieve_table(args, cfg):
    from .sievebound import sieve_table

    rows = sieve_table(args.kappa or range(2, 11))
    if args.format == "json":
        return json.dumps([{"kappa": p.kappa, "alpha_kappa": p.alpha_kappa,
                            "beta_kappa": p.beta_kappa, "u_star": r.u_star, "v_star": r.v_star,
                            "bound": r.bound, "r_M": r.r_M} for p, r in rows], indent=2)
    return _csv(["kappa", "alpha_kappa", "beta_kappa", "u_star", "v_star", "bound", "r_M"],
                [[p.kappa, p.alpha_kappa, p.beta_kappa, f"{r.u_star:.6f}", f"{r.v_star:.6f}",
                  f"{r.bound:.6f}", r.r_M] for p, r in rows])


def cmd_search(args, cfg):
    from .experiment import ExperimentConfig, run_experiment

    data = dict(cfg)
    if args.form:
        data["forms"] = [list(f) for f in args.form]
    data.setdefault("forms", [list(f) for f in WORKED_FORMS])
    if args.lenient:
        data["strict_mode"] = False
    for key in ("X", "gamma", "r"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.all:
        data["r"] = math.inf
    report = run_experiment(ExperimentConfig.from_dict(data))
    if args.format == "json":
        return report.to_json()
    summary = json.dumps(report.summary(), sort_keys=True)
    if args.out:
        Path(args.out).with_suffix(".summary.json").write_text(summary + "\n")
    else:
        sys.stderr.write(summary + "\n")
    return report.to_csv()


def cmd_verify(args, cfg):
    from .invariants import run_suite

    system = _system(args, cfg)
    results = run_suite(system, quick=args.quick)
    text = "\n".join(r.line() for r in results)
    return text, 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (forms, region, X, gamma, r, strict_mode, z)")
    common.add_argument("--format", choices=["text", "csv", "json"], default=None)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--form", type=_ints, action="append",
                        help="form a,b,c meaning a x^2 + 2b xy + c y^2; repeat per form")
    common.add_argument("--lenient", action="store_true",
                        help="allow leading coefficients other than 1 mod 4")

    parser = argparse.ArgumentParser(prog="qfsieve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rho", parents=[common], help="local densities rho and rho*")
    p.add_argument("--d", type=_ints, required=True, help="modulus vector d1,...,dg")
    p.set_defaults(func=cmd_rho, default_format="text")

    p = sub.add_parser("omega", parents=[common], help="sieve density omega(p)")
    p.add_argument("--p", type=_ints, help="primes")
    p.add_argument("--p-max", type=int, default=100, help="all primes below this")
    p.set_defaults(func=cmd_omega, default_format="text")

    p = sub.add_parser("classes", parents=[common], help="unit-scaling classes and minimal vectors")
    p.add_argument("--a", type=int, help="all primitive classes mod a")
    p.add_argument("--d", type=_ints, help="classes inside Lambda*_d")
    p.set_defaults(func=cmd_classes, default_format="text")

    p = sub.add_parser("lod-diag", parents=[common], help="level-of-distribution diagnostic")
    p.add_argument("--Q", type=_ints, default=(10,), help="bounds Q1,...,Qg")
    p.add_argument("--M", type=float, default=None, help="boundary length of the region family")
    p.add_argument("--growth", type=_ints, help="fit the growth exponent over these q values")
    p.set_defaults(func=cmd_lod, default_format="csv")

    p = sub.add_parser("sieve-table", parents=[common], help="r_M for kappa = 2..10")
    p.add_argument("--kappa", type=_ints)
    p.set_defaults(func=cmd_sieve_table, default_format="csv")

    p = sub.add_parser("search", parents=[common], help="count almost-prime values empirically")
    p.add_argument("--X", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--r", type=int)
    p.add_argument("--all", action="store_true", help="r = infinity")
    p.set_defaults(func=cmd_search, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="smaller ranges")
    p.set_defaults(func=cmd_verify, default_format="text")
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = args.default_format
    try:
        cfg = _load_config(args.config)
        out = args.func(args, cfg)
    except UsageError as exc:
        print(f"qfsieve: {exc}", file=sys.stderr)
        return 2
    except (SieveError, ValueError, ArithmeticError, KeyError, TypeError) as exc:
        print(f"qfsieve: error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    _emit(args, out)
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
