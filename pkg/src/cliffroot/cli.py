"""Command-line front end.

Subcommands: derive, verify, sample, classify, solve, scan, table.
Exit codes: 0 success, 1 domain-level negative result (not a root, no
convergence, empty sampling region), 2 usage or input errors.  Output is
byte-identical for identical arguments (seeds included); the CLIFFROOT_FORMAT
environment variable sets the default --format.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .algebra import Multivector, Signature, blade_label, signatures_with_dimension
from .constraints import (
    constraints_to_text,
    derive_constraints,
    root_equation_text,
    system_to_json_dict,
    variable_map,
)
from .mvio import MVParseError, format_mv, parse_mv
from .numeric import (
    LM_DAMPING,
    LM_MAX_ITER,
    LM_TOL,
    InfeasibleGridError,
    nonexistence_scan,
    solve_numeric,
)
from .roots import (
    CASES,
    CaseSignatureError,
    NotARootError,
    RejectionCapError,
    RootCase,
    root_record,
    sample,
    verify,
)

FORMATS = ("text", "json", "csv")
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    """Input problems that map to exit code 2."""


def _fail(message: str) -> None:
    raise UsageError(message)


def _parse_sig(text: str) -> Signature:
    parts = text.split(",")
    if len(parts) != 2:
        _fail(f"--sig expects 'p,q', got {text!r}")
    try:
        p, q = int(parts[0]), int(parts[1])
        return Signature(p, q)
    except (ValueError, TypeError) as exc:
        _fail(f"bad signature {text!r}: {exc}")


def _pick_format(args) -> str:
    if args.format:
        return args.format
    env = os.environ.get("CLIFFROOT_FORMAT", "")
    if env:
        if env in FORMATS:
            return env
        print(f"warning: ignoring invalid CLIFFROOT_FORMAT={env!r}", file=sys.stderr)
    return "text"


def _print_json(obj) -> None:
    print(json.dumps(obj))


def _csv_writer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\n")


def _emit_csv(buf: io.StringIO) -> None:
    sys.stdout.write(buf.getvalue())


# record output ---------------------------------------------------------------


def _display_mv(mv: Multivector) -> str:
    """Compact display form for scan/solve argmins (not meant to be re-parsed)."""
    parts = []
    for mask, coeff in enumerate(mv.coeffs):
        if coeff != 0.0:
            label = "" if mask == 0 else f"*{blade_label(mask)}"
            parts.append(f"{coeff:+.6g}{label}")
    return " ".join(parts) if parts else "0"


def _record_text(record: dict) -> str:
    p, q = record["signature"]
    sig = Signature(p, q)
    mv = Multivector(sig, record["coeffs"])
    case = record["case"] or "-"
    return f"{sig} case={case} residual={record['residual']!r} : {format_mv(mv)}"


def _emit_records(records: list[dict], fmt: str, sig: Signature) -> None:
    if fmt == "json":
        for record in records:
            _print_json(record)
    elif fmt == "csv":
        buf, writer = _csv_writer()
        labels = [blade_label(m) for m in range(sig.dim)]
        writer.writerow(["signature", "case", *labels, "residual"])
        for record in records:
            writer.writerow([
                str(sig),
                record["case"] or "",
                *[repr(c) for c in record["coeffs"]],
                repr(record["residual"]),
            ])
        _emit_csv(buf)
    else:
        for record in records:
            print(_record_text(record))


# subcommands -------------------------------------------------------------------


def _cmd_derive(args) -> int:
    sig = _parse_sig(args.sig)
    fmt = _pick_format(args)
    system = derive_constraints(sig)
    if fmt == "json":
        print(json.dumps(system_to_json_dict(system), indent=2))
    elif fmt == "csv":
        buf, writer = _csv_writer()
        writer.writerow(["mask", "blade", "i", "j", "coef"])
        for form in system_to_json_dict(system)["forms"]:
            for term in form["terms"]:
                writer.writerow([form["mask"], blade_label(form["mask"]),
                                 term["i"], term["j"], term["coef"]])
        _emit_csv(buf)
    else:
        print(f"# grade-wise constraints of A*A = -1 over {sig}")
        print(constraints_to_text(system))
    return 0


def _cmd_verify(args) -> int:
    sig = _parse_sig(args.sig)
    fmt = _pick_format(args)
    mv = _parse_mv_arg(args.mv, sig)
    report = verify(mv, args.tol)
    if fmt == "json":
        _print_json({
            "signature": [sig.p, sig.q],
            "is_root": report.is_root,
            "residual_norm": report.residual_norm,
            "per_grade": list(report.per_grade),
            "tol": report.tol,
        })
    elif fmt == "csv":
        buf, writer = _csv_writer()
        writer.writerow(["signature", "is_root", "residual_norm",
                         *[f"grade{k}" for k in range(sig.n + 1)]])
        writer.writerow([str(sig), report.is_root, repr(report.residual_norm),
                         *[repr(g) for g in report.per_grade]])
        _emit_csv(buf)
    else:
        print(f"is_root: {'true' if report.is_root else 'false'}")
        print(f"residual_norm: {report.residual_norm!r}")
        for k, g in enumerate(report.per_grade):
            print(f"grade {k}: {g!r}")
    return 0 if report.is_root else 1


def _parse_mv_arg(text: str, sig: Signature) -> Multivector:
    try:
        return parse_mv(text, sig)
    except MVParseError as exc:
        _fail(f"cannot parse multivector: {exc}")


def _cmd_sample(args) -> int:
    sig = _parse_sig(args.sig)
    fmt = _pick_format(args)
    try:
        case = RootCase(args.case)
    except ValueError:
        _fail(f"unknown case {args.case!r}; known: {', '.join(c.value for c in RootCase)}")
    if args.count < 1:
        _fail("--count must be at least 1")
    rng = np.random.default_rng(args.seed)
    records = []
    try:
        for _ in range(args.count):
            mv = sample(case, sig, rng_seed=rng, scale=args.scale)
            records.append(root_record(mv, args.tol))
    except RejectionCapError as exc:
        print(f"sampling failed: {exc}", file=sys.stderr)
        return 1
    _emit_records(records, fmt, sig)
    return 0


def _cmd_classify(args) -> int:
    fmt = _pick_format(args)
    records_in: list[tuple[Signature, Multivector]] = []
    if args.mv is not None:
        if not args.sig:
            _fail("--mv requires --sig")
        sig = _parse_sig(args.sig)
        records_in.append((sig, _parse_mv_arg(args.mv, sig)))
    else:
        # pipe mode: one root JSON record per line on stdin
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                p, q = data["signature"]
                sig = Signature(int(p), int(q))
                mv = Multivector(sig, data["coeffs"])
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                _fail(f"bad root record on stdin: {exc}")
            if args.sig and sig != _parse_sig(args.sig):
                _fail(f"record signature {sig} does not match --sig")
            records_in.append((sig, mv))
        if not records_in:
            _fail("no --mv given and no records on stdin")
    all_classified = True
    out_records = []
    for sig, mv in records_in:
        record = root_record(mv, args.tol)
        out_records.append((sig, record))
        if record["case"] is None:
            all_classified = False
    if fmt == "json":
        for _, record in out_records:
            _print_json(record)
    elif fmt == "csv":
        buf, writer = _csv_writer()
        writer.writerow(["signature", "case", "residual", "params"])
        for sig, record in out_records:
            writer.writerow([str(sig), record["case"] or "",
                             repr(record["residual"]),
                             json.dumps(record["params"])])
        _emit_csv(buf)
    else:
        for sig, record in out_records:
            if record["case"] is not None:
                print(f"{record['case']} params={json.dumps(record['params'])}")
            elif record["residual"] > args.tol:
                print(f"{sig} not a root of -1 (residual {record['residual']!r})")
            else:
                print(f"{sig} unclassified root (residual {record['residual']!r})")
    return 0 if all_classified else 1


def _cmd_solve(args) -> int:
    sig = _parse_sig(args.sig)
    fmt = _pick_format(args)
    if (args.init is None) == (args.random is None):
        _fail("give exactly one of --init or --random")
    system = derive_constraints(sig)
    starts: list[np.ndarray] = []
    if args.init is not None:
        starts.append(_parse_mv_arg(args.init, sig).coeffs.copy())
    else:
        if args.random < 1:
            _fail("--random must be at least 1")
        rng = np.random.default_rng(args.seed)
        lo, hi = _parse_box(args.box)
        starts.extend(rng.uniform(lo, hi, sig.dim) for _ in range(args.random))
    best = None
    for x0 in starts:
        result = solve_numeric(system, x0, tol=args.tol,
                               max_iter=args.max_iter, damping=args.damping)
        if best is None or result.residual_norm < best.residual_norm:
            best = result
        if result.success:
            best = result
            break
    if best.success:
        record = root_record(best.multivector, max(args.tol, DEFAULT_TOL))
        _emit_records([record], fmt, sig)
        return 0
    if fmt == "json":
        _print_json({
            "signature": [sig.p, sig.q],
            "converged": False,
            "min_residual": best.residual_norm,
            "argmin": [float(x) for x in best.x],
        })
    else:
        print(f"no convergence: min residual {best.residual_norm!r} at "
              f"{_display_mv(Multivector(sig, best.x))}")
    return 1


def _parse_box(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        _fail(f"--box expects 'lo,hi', got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        _fail(f"bad box {text!r}")
    if not lo < hi:
        _fail("--box must be an increasing pair")
    return lo, hi


def _cmd_scan(args) -> int:
    sig = _parse_sig(args.sig)
    fmt = _pick_format(args)
    if (args.res is None) == (args.slice is None):
        _fail("give exactly one of --res (grid) or --slice (pinned coordinate)")
    box = _parse_box(args.box)
    fixed = None
    if args.slice is not None:
        name, _, value = args.slice.partition("=")
        names = variable_map(sig)
        if name not in names:
            _fail(f"unknown coordinate {name!r}; known: {', '.join(names)}")
        try:
            val = float(value)
        except ValueError:
            _fail(f"bad --slice value {value!r}")
        mask, orient = names[name]
        fixed = {mask: orient * val}
    try:
        result = nonexistence_scan(
            sig, box=box, resolution=args.res, fixed=fixed,
            starts=args.starts, seed=args.seed,
        )
    except (InfeasibleGridError, ValueError) as exc:
        _fail(str(exc))
    if fmt == "json":
        _print_json({
            "signature": [sig.p, sig.q],
            "mode": result.mode,
            "min_residual": result.min_residual,
            "argmin": [float(x) for x in result.argmin],
            "evaluations": result.evaluations,
            "analytic_bound": result.analytic_bound,
        })
    elif fmt == "csv":
        buf, writer = _csv_writer()
        writer.writerow(["signature", "mode", "min_residual", "evaluations",
                         "analytic_bound", "argmin"])
        writer.writerow([str(sig), result.mode, repr(result.min_residual),
                         result.evaluations,
                         "" if result.analytic_bound is None else repr(result.analytic_bound),
                         _display_mv(Multivector(sig, result.argmin))])
        _emit_csv(buf)
    else:
        print(f"mode: {result.mode}")
        print(f"min_residual: {result.min_residual!r}")
        print(f"argmin: {_display_mv(Multivector(sig, result.argmin))}")
        print(f"evaluations: {result.evaluations}")
        if result.analytic_bound is not None:
            print(f"analytic_bound: residual >= {result.analytic_bound!r} "
                  "(the scalar equation alone)")
    return 0


def _table_rows(n: int) -> list[dict]:
    rows = []
    for sig in signatures_with_dimension(n):
        system = derive_constraints(sig)
        for info in CASES.values():
            if info.n != n:
                continue
            row = {
                "signature": str(sig),
                "case": info.case.value,
                "conditions": info.conditions,
                "constraints": info.constraints,
            }
            if not info.applies(sig):
                row["root_equation"] = "no solution"
            elif info.solutions is not None:
                row["root_equation"] = info.solutions
            elif n <= 2:
                row["root_equation"] = root_equation_text(
                    system, info.zero_masks, solve_pseudoscalar=True)
            else:
                row["root_equation"] = root_equation_text(system, info.zero_masks)
            rows.append(row)
        rows.append({
            "signature": str(sig),
            "case": "",
            "conditions": "alpha != 0",
            "constraints": "",
            "root_equation": "no solution",
        })
    return rows


def _cmd_table(args) -> int:
    if not 1 <= args.n <= 4:
        _fail(f"--n must be 1..4, got {args.n}")
    fmt = _pick_format(args)
    rows = _table_rows(args.n)
    if fmt == "json":
        print(json.dumps({"n": args.n, "rows": rows}, indent=2))
    elif fmt == "csv":
        buf, writer = _csv_writer()
        writer.writerow(["signature", "case", "conditions", "constraints",
                         "root_equation"])
        for row in rows:
            writer.writerow([row["signature"], row["case"], row["conditions"],
                             row["constraints"], row["root_equation"]])
        _emit_csv(buf)
    else:
        for row in rows:
            case = row["case"] or "-"
            constraints = f" | {row['constraints']}" if row["constraints"] else ""
            print(f"{row['signature']} {case} | {row['conditions']}"
                  f"{constraints} | {row['root_equation']}")
    return 0


# parser ------------------------------------------------------------------------


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default=None,
                   help="output format (default: $CLIFFROOT_FORMAT or text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliffroot",
        description="Clifford algebras Cl(p,q) and the square roots of -1 "
                    "for p+q <= 4.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="print the grade-wise constraint system")
    p.add_argument("--sig", required=True, help="signature as 'p,q'")
    _add_format(p)
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("verify", help="check whether a multivector squares to -1 "
                                      "(exit 0 root, 1 not)")
    p.add_argument("--sig", required=True)
    p.add_argument("--mv", required=True, help="multivector text, e.g. 'e123'")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="residual tolerance (default 1e-09)")
    _add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sample", help="draw members of a root family")
    p.add_argument("--sig", required=True)
    p.add_argument("--case", required=True,
                   help="family name, e.g. N3_A0B0 (see `table`)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="free-parameter magnitude bound (default 1.0)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_format(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("classify", help="match a root against the catalog; "
                                        "reads root JSON records from stdin "
                                        "when --mv is absent")
    p.add_argument("--sig", default=None)
    p.add_argument("--mv", default=None)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_format(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("solve", help="damped Gauss-Newton search for a root")
    p.add_argument("--sig", required=True)
    p.add_argument("--init", default=None, help="starting multivector text")
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help="N random starts instead of --init")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box", default="-2,2", help="start box 'lo,hi' (default -2,2)")
    p.add_argument("--tol", type=float, default=LM_TOL,
                   help="convergence tolerance (default 1e-10)")
    p.add_argument("--max-iter", type=int, default=LM_MAX_ITER)
    p.add_argument("--damping", type=float, default=LM_DAMPING)
    _add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("scan", help="grid or pinned-slice scan of the residual "
                                    "(a nonexistence probe; exits 0 when done)")
    p.add_argument("--sig", required=True)
    p.add_argument("--box", default="-2,2")
    p.add_argument("--res", type=int, default=None,
                   help="full grid with this resolution per axis")
    p.add_argument("--slice", default=None, metavar="NAME=VALUE",
                   help="pin one coordinate, e.g. alpha=0.5")
    p.add_argument("--starts", type=int, default=200,
                   help="multi-start count for slice mode (default 200)")
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("table", help="the machine-generated root catalog for one n")
    p.add_argument("--n", type=int, required=True, help="dimension 1..4")
    _add_format(p)
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotARootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CaseSignatureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
