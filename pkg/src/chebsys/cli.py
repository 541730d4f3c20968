"""Command-line interface.

    chebsys <gen|verify|branches|asymptote|roots>
        --m INT --c P/Q [--R INT] [--n-max INT] [--r-max INT]
        [--z RE,IM | --grid re0:re1:n,im0:im1:n]
        [--precision BITS] [--seed INT] [--format json|csv] --out PATH

Every output embeds the full run configuration and a schema version, exact
rationals are serialized losslessly as "p/q" strings, floats are written with
17 significant digits, and no timestamps or environment details leak into
the files, so identical configurations (seed included) produce byte-identical
output.  Exit codes: 0 success, 1 verification failure, 2 invalid input.

The environment variable CHEBSYS_PRECISION overrides the default working
precision (53 bits) when --precision is not given.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys

from . import algebraic, operators, roots
from .algebraic import OnStarSet, SolverDivergence
from .exactpoly import Poly, compose_star
from .rationals import as_rational, rat_str
from .recurrence import (
    FactorizationViolation,
    Params,
    decompose_index,
    gen_type1_records,
    gen_type1_vectors,
    gen_type2,
    verify_h_recurrence,
    verify_shift,
)
from .roots import ConvergenceFailure

SCHEMA = "chebsys/1"
REGION_TOL = 1e-9
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def fmt_float(x) -> str:
    return f"{float(x):.17g}"


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def parse_point(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected RE,IM for --z, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise UsageError(f"bad --z value {text!r}") from exc


def _parse_axis(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid axis {text!r}") from exc
    if count < 1:
        raise UsageError("grid axis count must be >= 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def parse_grid(text: str) -> list:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected re0:re1:n,im0:im1:n for --grid, got {text!r}")
    res = _parse_axis(parts[0])
    ims = _parse_axis(parts[1])
    return [complex(re, im) for im in ims for re in res]


def _params(args) -> Params:
    try:
        c = as_rational(args.c)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad --c value {args.c!r}: {exc}") from exc
    try:
        return Params(args.m, c)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _precision(args) -> int:
    if args.precision is not None:
        precision = args.precision
    else:
        env = os.environ.get("CHEBSYS_PRECISION")
        if env is not None:
            try:
                precision = int(env)
            except ValueError as exc:
                raise UsageError(f"bad CHEBSYS_PRECISION value {env!r}") from exc
        else:
            precision = 53
    if precision < 53:
        raise UsageError("precision must be at least 53 bits")
    return precision


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open_csv(path: str, config: dict):
    fh = open(path, "w", encoding="utf-8", newline="")
    fh.write(f"# schema={SCHEMA} config={json.dumps(config, sort_keys=True)}\n")
    return fh


def _base_config(args, command: str, precision: int, **extra) -> dict:
    config = {
        "command": command,
        "m": args.m,
        "c": rat_str(as_rational(args.c)),
        "precision": precision,
        "seed": args.seed,
        "format": args.format,
        "out": args.out,
    }
    config.update(extra)
    return config


def _coeff_strings(poly: Poly) -> list:
    return [rat_str(c) for c in poly.coeffs]


# ---------------------------------------------------------------- gen


def cmd_gen(args) -> int:
    p = _params(args)
    precision = _precision(args)
    if args.R < 0:
        raise UsageError("--R must be >= 0")
    config = _base_config(args, "gen", precision, R=args.R)
    records = gen_type1_records(p, args.R)
    vectors = gen_type1_vectors(p, args.R)
    type2 = gen_type2(p, args.R)
    scalar_rows = [
        {
            "r": rec.r,
            "d": rec.d,
            "k": rec.k,
            "tau": rec.tau,
            "ell": rec.ell,
            "t_degree": rec.t.degree,
            "h_degree": rec.h.degree,
            "t": _coeff_strings(rec.t),
            "h": _coeff_strings(rec.h),
        }
        for rec in records
    ]
    if args.format == "json":
        write_json(
            args.out,
            {
                "schema": SCHEMA,
                "config": config,
                "scalar": scalar_rows,
                "type2": [
                    {"n": n, "degree": poly.degree, "coeffs": _coeff_strings(poly)}
                    for n, poly in enumerate(type2)
                ],
                "vectors": [
                    {
                        "r": rec.r,
                        "components": [_coeff_strings(c) for c in rec.components],
                    }
                    for rec in vectors
                ],
            },
        )
        return EXIT_OK
    with _open_csv(args.out, config) as fh:
        writer = _csv_writer(fh)
        writer.writerow(["r", "d", "k", "tau", "ell", "t_degree", "h_degree", "t", "h"])
        for row in scalar_rows:
            writer.writerow(
                [
                    row["r"], row["d"], row["k"], row["tau"], row["ell"],
                    row["t_degree"], row["h_degree"],
                    ";".join(row["t"]), ";".join(row["h"]),
                ]
            )
    with _open_csv(args.out + ".type2.csv", config) as fh:
        writer = _csv_writer(fh)
        writer.writerow(["n", "degree", "coeffs"])
        for n, poly in enumerate(type2):
            writer.writerow([n, poly.degree, ";".join(_coeff_strings(poly))])
    with _open_csv(args.out + ".vectors.csv", config) as fh:
        writer = _csv_writer(fh)
        writer.writerow(["r", "j", "degree", "coeffs"])
        for rec in vectors:
            for j, comp in enumerate(rec.components):
                writer.writerow([rec.r, j, comp.degree, ";".join(_coeff_strings(comp))])
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _check_factorization(p: Params, R: int):
    try:
        records = gen_type1_records(p, R)
    except FactorizationViolation as exc:
        return "FAIL", {"witness": str(exc)}
    for rec in records:
        if compose_star(rec.h, p.m, rec.k, rec.ell) != rec.t:
            return "FAIL", {"witness": f"round trip mismatch at r={rec.r}"}
        if rec.tau >= 0:
            if rec.h.degree != rec.tau or rec.t.degree != rec.d - rec.k:
                return "FAIL", {"witness": f"degree mismatch at r={rec.r}"}
        elif not (rec.t.is_zero and rec.h.is_zero):
            return "FAIL", {"witness": f"tau=-1 but t_{rec.r} is nonzero"}
    return "PASS", {"checked": len(records)}


def _check_leading_structure(p: Params, R: int):
    for rec in gen_type1_records(p, R):
        if rec.tau < 0:
            continue
        scaled = abs(rec.t.leading) * p.c**rec.d
        if scaled.denominator != 1 or scaled <= 0:
            return "FAIL", {"witness": f"|lead(t_{rec.r})| * c^{rec.d} = {rat_str(scaled)}"}
    return "PASS", {"checked": R + 1}


def _check_adjointness(p: Params, seed: int, trials: int = 20):
    size = 12 + p.m
    op = operators.BandedOperator.for_params(p, size)
    rng = random.Random(seed)

    def random_vector():
        return tuple(
            as_rational(rng.randint(-9, 9)) / as_rational(rng.randint(1, 3))
            for _ in range(size)
        )

    for _ in range(trials):
        v, w = random_vector(), random_vector()
        tv, _ = operators.apply_T(op, v)
        tw, _ = operators.apply_T_transpose(op, w)
        if operators.dot(tv, w) != operators.dot(v, tw):
            return "FAIL", {"witness": "adjoint identity broke on a random vector"}
    return "PASS", {"trials": trials, "size": size}


def cmd_verify(args) -> int:
    p = _params(args)
    precision = _precision(args)
    if args.R < 0:
        raise UsageError("--R must be >= 0")
    n_max = args.n_max if args.n_max is not None else args.R
    if n_max < 0:
        raise UsageError("--n-max must be >= 0")
    config = _base_config(args, "verify", precision, R=args.R, n_max=n_max)
    checks = []

    def add(name, kind, status, details):
        checks.append({"name": name, "kind": kind, "status": status, "details": details})

    status, details = _check_factorization(p, args.R)
    add("factorization", "hard", status, details)

    shift = verify_shift(gen_type1_vectors(p, args.R))
    add(
        "shift_identity",
        "hard",
        "PASS" if shift.all_pass else "FAIL",
        {"checked": shift.checked, "mismatches": list(shift.mismatches)},
    )

    scalars = [rec.t for rec in gen_type1_records(p, args.R)]
    firsts = [rec.components[0] for rec in gen_type1_vectors(p, args.R)]
    add(
        "vector_scalar_agreement",
        "hard",
        "PASS" if scalars == firsts else "FAIL",
        {"checked": args.R + 1},
    )

    status, details = _check_leading_structure(p, args.R)
    add("leading_coefficient_structure", "hard", status, details)

    bad_n = [n for n in range(n_max + 1) if not operators.jump_check_typeII(p, n)]
    add(
        "jump_type2",
        "hard",
        "PASS" if not bad_n else "FAIL",
        {"checked": n_max + 1, "failures": bad_n},
    )
    bad_r = [r for r in range(args.R + 1) if not operators.jump_check_typeI(p, r)]
    add(
        "jump_type1",
        "hard",
        "PASS" if not bad_r else "FAIL",
        {"checked": args.R + 1, "failures": bad_r},
    )

    gram = operators.gram_matrix(p, args.R, n_max)
    off = [
        (r, n)
        for r, row in enumerate(gram)
        for n, value in enumerate(row)
        if value != (1 if n == r else 0)
    ]
    add(
        "biorthogonality_gram",
        "hard",
        "PASS" if not off else "FAIL",
        {"shape": [args.R + 1, n_max + 1], "offenders": off[:10]},
    )

    status, details = _check_adjointness(p, args.seed)
    add("transpose_adjointness", "hard", status, details)

    hs = [rec.h for rec in gen_type1_records(p, args.R)]
    sign_report = verify_h_recurrence(hs, p)
    add(
        "h_recurrence_signs",
        "informational",
        "INFO",
        {
            "empirical_table": {
                label: list(signs)
                for label, signs in sign_report.empirical_table.items()
            },
            "ell_parity_rule_holds": sign_report.ell_parity_rule_holds,
            "k_parity_rule_holds": sign_report.k_parity_rule_holds,
        },
    )

    probe = roots.conjecture_probe(p, max(args.R, p.m), precision)
    add(
        "conjecture_probe",
        "informational",
        "INFO",
        {
            "classification": probe.classification,
            "max_imag_normalized": _json_safe(probe.max_imag_normalized),
            "min_separation_normalized": _json_safe(probe.min_separation_normalized),
            "offending_r": probe.offending_r,
            "reason": probe.reason,
        },
    )

    passed = all(c["status"] == "PASS" for c in checks if c["kind"] == "hard")
    write_json(
        args.out,
        {"schema": SCHEMA, "config": config, "passed": passed, "checks": checks},
    )
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------- branches


def _geometry_payload(p: Params) -> dict:
    geom = algebraic.star_geometry(p)
    points = algebraic.branch_points(p)
    return {
        "a": geom.a,
        "s0_angles": list(geom.s0_angles),
        "even_star_angles": list(geom.even_angles),
        "odd_star_angles": list(geom.odd_angles),
        "attractor": geom.attractor,
        "branch_points": [[pt.real, pt.imag] for pt in points],
    }


def cmd_branches(args) -> int:
    p = _params(args)
    precision = _precision(args)
    if args.z is not None:
        points = [parse_point(args.z)]
    elif args.grid is not None:
        points = parse_grid(args.grid)
    else:
        raise UsageError("branches requires --z or --grid")
    config = _base_config(
        args, "branches", precision, z=args.z, grid=args.grid
    )
    geometry = _geometry_payload(p)
    rows = []
    for z in points:
        row: dict = {"z_re": z.real, "z_im": z.imag, "error": ""}
        try:
            bs = algebraic.solve_branches(p, z, precision)
        except SolverDivergence:
            row["error"] = "solver-divergence"
            rows.append(row)
            continue
        region = algebraic.region_classify(p, z, REGION_TOL)
        row["lambdas"] = [[complex(l).real, complex(l).imag] for l in bs.lambdas]
        row["moduli"] = [float(mod) for mod in bs.moduli]
        row["tie_flag"] = bs.tie_flag
        row["max_residual"] = max(bs.residuals)
        row["dist_s0"] = region.dist_s0
        row["dist_even_star"] = region.dist_even_star
        row["dist_odd_star"] = region.dist_odd_star
        row["omega"] = list(region.omega)
        rows.append(row)
    if args.format == "json":
        write_json(
            args.out,
            {"schema": SCHEMA, "config": config, "geometry": geometry, "rows": rows},
        )
        return EXIT_OK
    header = ["z_re", "z_im"]
    for j in range(p.m + 1):
        header += [f"lambda{j}_re", f"lambda{j}_im"]
    header += [f"modulus{j}" for j in range(p.m + 1)]
    header += ["tie_flag", "max_residual", "dist_s0", "dist_even_star", "dist_odd_star"]
    header += [f"omega_{j}" for j in range(p.m + 1)]
    header += ["error"]
    with _open_csv(args.out, config) as fh:
        writer = _csv_writer(fh)
        writer.writerow(header)
        for row in rows:
            if row["error"]:
                writer.writerow(
                    [fmt_float(row["z_re"]), fmt_float(row["z_im"])]
                    + [""] * (len(header) - 3)
                    + [row["error"]]
                )
                continue
            out = [fmt_float(row["z_re"]), fmt_float(row["z_im"])]
            for re, im in row["lambdas"]:
                out += [fmt_float(re), fmt_float(im)]
            out += [fmt_float(mod) for mod in row["moduli"]]
            out += [
                str(row["tie_flag"]).lower(),
                fmt_float(row["max_residual"]),
                fmt_float(row["dist_s0"]),
                fmt_float(row["dist_even_star"]),
                fmt_float(row["dist_odd_star"]),
            ]
            out += [str(flag).lower() for flag in row["omega"]]
            out += [""]
            writer.writerow(out)
    write_json(
        args.out + ".geometry.json",
        {"schema": SCHEMA, "config": config, "geometry": geometry},
    )
    return EXIT_OK


# ---------------------------------------------------------------- asymptote


def cmd_asymptote(args) -> int:
    p = _params(args)
    precision = _precision(args)
    if args.r_max < 0:
        raise UsageError("--r-max must be >= 0")
    z = parse_point(args.z)
    config = _base_config(args, "asymptote", precision, z=args.z, r_max=args.r_max)
    scan = algebraic.asymptotic_scan(p, z, args.r_max, precision)
    summary = {
        "L": [scan.limit_value.real, scan.limit_value.imag],
        "ratio": scan.ratio,
        "window": scan.window,
        "decay_estimate": _json_safe(scan.decay_estimate),
    }
    if args.format == "json":
        write_json(
            args.out,
            {
                "schema": SCHEMA,
                "config": config,
                "summary": summary,
                "rows": [
                    {"r": r, "error": scan.errors[r], "rate": scan.rates[r]}
                    for r in range(len(scan.errors))
                ],
            },
        )
        return EXIT_OK
    with _open_csv(args.out, config) as fh:
        fh.write(f"# summary={json.dumps(summary, sort_keys=True)}\n")
        writer = _csv_writer(fh)
        writer.writerow(["r", "e_r", "rate", "ratio"])
        for r in range(len(scan.errors)):
            rate = scan.rates[r]
            writer.writerow(
                [
                    r,
                    fmt_float(scan.errors[r]),
                    "" if rate is None else fmt_float(rate),
                    fmt_float(scan.ratio),
                ]
            )
    return EXIT_OK


# ---------------------------------------------------------------- roots


def _resolve_r_list(args) -> list:
    if args.r_list:
        try:
            values = sorted({int(part) for part in args.r_list.split(",")})
        except ValueError as exc:
            raise UsageError(f"bad --r-list value {args.r_list!r}") from exc
    else:
        r_max = args.r_max
        values = sorted({max(1, math.ceil(r_max / 3)), max(1, math.ceil(2 * r_max / 3)), r_max})
    if any(v < 0 for v in values):
        raise UsageError("--r-list entries must be >= 0")
    return values


def cmd_roots(args) -> int:
    p = _params(args)
    precision = _precision(args)
    if args.r_max < 0:
        raise UsageError("--r-max must be >= 0")
    r_list = _resolve_r_list(args)
    config = _base_config(
        args, "roots", precision, r_max=args.r_max, r_list=r_list
    )
    records = gen_type1_records(p, max(r_list))
    geom = algebraic.star_geometry(p)
    rows = []
    for r in r_list:
        rec = records[r]
        if rec.t.is_zero or rec.t.degree == 0:
            continue
        try:
            report = roots.roots_of_t(rec, p, precision)
        except ConvergenceFailure:
            rows.append({"r": r, "error": "convergence-failure"})
            continue
        for root, mult in report.t_roots:
            rows.append(
                {
                    "r": r,
                    "root_re": root.real,
                    "root_im": root.imag,
                    "multiplicity": mult,
                    "star_distance": roots.distance_to_star(root, geom),
                    "is_origin": root == 0,
                    "error": "",
                }
            )
    summary: dict = {}
    try:
        study = roots.attraction_study(p, r_list, precision)
        summary["attraction"] = {
            "rows": [
                {
                    "r": row.r,
                    "root_count": row.root_count,
                    "max_distance": _json_safe(row.max_distance),
                    "mean_distance": _json_safe(row.mean_distance),
                }
                for row in study.rows
            ],
            "verdict_max": study.verdict_max,
            "verdict_mean": study.verdict_mean,
        }
    except ConvergenceFailure as exc:
        summary["attraction"] = {"error": str(exc)}
    try:
        probe = roots.conjecture_probe(p, max(max(r_list), p.m), precision)
        summary["conjecture"] = {
            "classification": probe.classification,
            "max_imag_normalized": _json_safe(probe.max_imag_normalized),
            "min_separation_normalized": _json_safe(probe.min_separation_normalized),
            "offending_r": probe.offending_r,
            "reason": probe.reason,
            "checked": probe.checked,
        }
    except ConvergenceFailure as exc:
        summary["conjecture"] = {"error": str(exc)}
    if args.format == "json":
        write_json(
            args.out,
            {"schema": SCHEMA, "config": config, "summary": summary, "roots": rows},
        )
        return EXIT_OK
    with _open_csv(args.out, config) as fh:
        writer = _csv_writer(fh)
        writer.writerow(
            ["r", "root_re", "root_im", "multiplicity", "star_distance", "is_origin", "error"]
        )
        for row in rows:
            if row.get("error"):
                writer.writerow([row["r"], "", "", "", "", "", row["error"]])
                continue
            writer.writerow(
                [
                    row["r"],
                    fmt_float(row["root_re"]),
                    fmt_float(row["root_im"]),
                    row["multiplicity"],
                    fmt_float(row["star_distance"]),
                    str(row["is_origin"]).lower(),
                    "",
                ]
            )
    write_json(
        args.out + ".summary.json",
        {"schema": SCHEMA, "config": config, "summary": summary},
    )
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebsys",
        description="exact recurrence generators, structural verifiers, and "
        "branch asymptotics for the star recurrence family",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--m", type=int, required=True, help="band offset, >= 1")
        sp.add_argument("--c", type=str, required=True, help="exact rational P/Q, > 0")
        sp.add_argument("--precision", type=int, default=None, help="working precision in bits (>= 53)")
        sp.add_argument("--seed", type=int, default=0, help="seed for any sampled data")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", type=str, required=True, help="output path")

    sp = sub.add_parser("gen", help="emit coefficient tables for all three families")
    common(sp)
    sp.add_argument("--R", type=int, default=20, help="largest index to generate")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", help="run the structural check battery")
    common(sp)
    sp.add_argument("--R", type=int, default=40)
    sp.add_argument("--n-max", dest="n_max", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("branches", help="solve the branch equation on a point or grid")
    common(sp)
    sp.add_argument("--z", type=str, default=None, help="single point RE,IM")
    sp.add_argument("--grid", type=str, default=None, help="grid re0:re1:n,im0:im1:n")
    sp.set_defaults(func=cmd_branches)

    sp = sub.add_parser("asymptote", help="scan the scaled-term error decay at a point")
    common(sp)
    sp.add_argument("--z", type=str, required=True, help="scan point RE,IM")
    sp.add_argument("--r-max", dest="r_max", type=int, default=60)
    sp.set_defaults(func=cmd_asymptote)

    sp = sub.add_parser("roots", help="root tables, attraction study, and probe")
    common(sp)
    sp.add_argument("--r-max", dest="r_max", type=int, default=60)
    sp.add_argument("--r-list", dest="r_list", type=str, default=None, help="comma list of indices")
    sp.set_defaults(func=cmd_roots)
    return parser


def _absorb_negative_values(argv: list) -> list:
    # argparse mistakes "-2:2:5,-2:2:5" for an option; fold such values into
    # the "--opt=value" form so negative coordinates parse naturally
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--z", "--grid") and i + 1 < len(argv):
            nxt = argv[i + 1]
            if nxt.startswith("-") and ("," in nxt or ":" in nxt):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    argv = _absorb_negative_values(argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 0 if code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chebsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OnStarSet as exc:
        print(f"chebsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"chebsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chebsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
