"""Command-line entry point `e6`.

Exit codes: 0 when every requested check passes, 1 on a verification failure,
2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction as Q
from pathlib import Path

from . import fixtures as fx
from .norms import enumerate_usmall, is_usmall, lambda_stats, spin_norm
from .omega import omega_partition
from .root_datum import (
    build_e6_datum,
    format_rational,
    format_vector,
    format_weight,
    norm_sq,
    parse_vector,
    zeta_coords,
)
from .spin_dirac import dirac_cohomology
from .weyl import compact_group, full_group, minimal_coset_reps

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Q):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def _emit(args, record: dict, rows: list[dict] | None = None) -> None:
    """Print a flat record (and optional table rows) in the selected output mode."""
    out = sys.stdout
    if args.json:
        payload = dict(record)
        if rows is not None:
            payload["rows"] = rows
        json.dump(_jsonable(payload), out, indent=1)
        out.write("\n")
    elif args.tsv:
        if rows is None:
            for k, v in record.items():
                out.write(f"{k}\t{_cell(v)}\n")
        else:
            cols = list(rows[0]) if rows else []
            out.write("\t".join(cols) + "\n")
            for r in rows:
                out.write("\t".join(_cell(r[c]) for c in cols) + "\n")
    else:
        for k, v in record.items():
            out.write(f"{k}: {_text(v)}\n")
        for r in rows or []:
            out.write("  " + "  ".join(_text(v) for v in r.values()) + "\n")


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return format_vector(v) if all(not isinstance(x, (list, tuple)) for x in v) else ";".join(_cell(x) for x in v)
    if isinstance(v, (set, frozenset)):
        return _cell(sorted(v))
    if isinstance(v, Q):
        return format_rational(v)
    return str(v)


def _text(v) -> str:
    if isinstance(v, (list, tuple)) and all(not isinstance(x, (list, tuple)) for x in v):
        return format_weight(v)
    if isinstance(v, (list, tuple, set, frozenset)):
        return " ".join(_text(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v))
    if isinstance(v, Q):
        return format_rational(v)
    return str(v)


def _weight_arg(text: str, integral: bool = True) -> tuple:
    try:
        v = parse_vector(text, 6)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if integral:
        if any(x.denominator != 1 for x in v):
            raise UsageError(f"{text!r}: expected integer entries")
        return tuple(int(x) for x in v)
    return v


# ---------------------------------------------------------------- subcommands

def cmd_datum(args) -> int:
    d = build_e6_datum()
    reps = minimal_coset_reps()
    _emit(args, {
        "roots": len(d.all_roots),
        "positive_roots": len(d.positive_roots),
        "compact_positive": len(d.compact_positive),
        "noncompact_positive": len(d.noncompact_positive),
        "compact_simple": [i + 1 for i in d.compact_indices],
        "rho": list(d.rho),
        "rho_c": list(d.rho_c),
        "rho_n": list(d.rho_n),
        "zeta": list(d.zeta),
        "rho_norm_sq": norm_sq(d.rho),
        "rho_c_norm_sq": norm_sq(d.rho_c),
        "weyl_order": len(full_group()),
        "compact_weyl_order": len(compact_group()),
        "coset_reps": len(reps),
        "coset_rep_0_is_identity": reps[0].element.is_identity(),
    })
    return EXIT_OK


def cmd_spin_norm(args) -> int:
    mu = _weight_arg(args.weight)
    try:
        res = spin_norm(mu)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = [
        {"j": j, "shift_zeta": list(zeta_coords(v)), "norm_sq": res.all_norms_sq[j]}
        for j, v in sorted(res.dominant_shifts.items())
    ]
    _emit(args, {"mu": list(mu), "norm_sq": res.norm_sq, "argmin_js": sorted(res.argmin_js)}, rows)
    return EXIT_OK


def cmd_lambda(args) -> int:
    mu = _weight_arg(args.weight)
    try:
        res = lambda_stats(mu)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(args, {
        "mu": list(mu),
        "lambda_a": list(res.lambda_a),
        "norm_sq": res.norm_sq,
        "height": res.height,
    })
    return EXIT_OK


def cmd_usmall(args) -> int:
    if args.check is not None:
        mu = _weight_arg(args.check)
        try:
            small = is_usmall(mu)
        except ValueError as e:
            raise UsageError(str(e)) from None
        _emit(args, {"mu": list(mu), "usmall": small})
        return EXIT_OK
    weights = sorted(enumerate_usmall())
    if args.enumerate:
        lines = ["a\tb\tc\td\te\tf\tspin_sq\tlambda_sq\theight"]
        for mu in weights:
            lam = lambda_stats(mu)
            cells = [str(x) for x in mu] + [
                format_rational(spin_norm(mu).norm_sq), format_rational(lam.norm_sq), str(lam.height)
            ]
            lines.append("\t".join(cells))
        text = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
            return EXIT_OK
    _emit(args, {"usmall_count": len(weights)})
    return EXIT_OK


def cmd_omega(args) -> int:
    path = Path(args.involutions) if args.involutions else fx.fixture_dir(args.fixtures) / "kgb_involutions.json"
    records = fx.load_involutions(path)
    p = omega_partition(records)
    disjoint = not (p.omega1 & p.omega2 or p.omega1 & p.omega3 or p.omega2 & p.omega3)
    covers = (p.omega1 | p.omega2 | p.omega3) == p.omega
    record = {
        "involutions": len(records),
        "omega": len(p.omega),
        "omega1": len(p.omega1),
        "omega2": len(p.omega2),
        "omega3": len(p.omega3),
        "V": len(p.V),
        "omega2_subset": p.omega2 <= p.omega,
        "partition_disjoint": disjoint and covers,
    }
    rows = None
    if args.report:
        if args.tsv or args.json:
            part = {**{v: "omega1" for v in p.omega1}, **{v: "omega2" for v in p.omega2},
                    **{v: "omega3" for v in p.omega3}}
            rows = [{"infchar": list(v), "part": part[v], "minimal": v in p.V} for v in sorted(part)]
        else:
            record["V_elements"] = [list(v) for v in sorted(p.V)]
    _emit(args, record, rows)
    return EXIT_OK if record["omega2_subset"] and record["partition_disjoint"] else EXIT_FAIL


def cmd_dirac(args) -> int:
    branch = fx.load_branch(args.branch)
    lam = _weight_arg(args.infchar)
    if any(x < 0 for x in lam):
        raise UsageError("infinitesimal character must be dominant")
    res = dirac_cohomology(branch, lam)
    rows = [{"gamma": list(g), "multiplicity": m} for g, m in sorted(res.with_multiplicity.items())]
    _emit(args, {
        "infchar": list(lam),
        "infchar_norm_sq": res.infchar_norm_sq,
        "module_spin_sq": res.module_spin_sq,
        "nonzero": bool(res.weights),
    }, rows)
    return EXIT_OK


def _verify_branches(d: Path) -> fx.Report:
    """H_D support and spin norms of the shipped branch files against their printed values."""
    report = fx.Report("branch")
    for path in sorted(d.glob("branch_*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        branch = fx.load_branch(path)
        lam = _weight_arg(data["infchar"])
        spins = [spin_norm(mu).norm_sq for mu in branch.weights()]
        want = [Q(x) for x in data.get("spin_norm_sq", [])]
        report.add(path.name, "spin_norm_sq", spins == want, ",".join(map(format_rational, spins)))
        hd = dirac_cohomology(branch, lam)
        printed = {tuple(g) for g in data.get("hd_support", [])}
        report.add(path.name, "hd_support", set(hd.weights) == printed, f"{len(hd.weights)} weights")
    return report


def cmd_verify(args) -> int:
    d = fx.fixture_dir(args.fixtures)
    target = args.target
    reports: list[fx.Report] = []
    if target in ("scattered", "integral", "all"):
        thetas = fx.involutions_by_index(fx.load_involutions(d / "kgb_involutions.json"))
        if target in ("scattered", "all"):
            reports.append(fx.verify_scattered_table(fx.load_scattered(d / "scattered.tsv"), thetas))
        if target in ("integral", "all"):
            reports.append(fx.verify_integral_table(fx.load_integral(d / "fs_integral.tsv"), thetas))
    if target in ("tempered", "all"):
        reports.append(fx.verify_tempered_rows(fx.load_tempered(d / "tempered.rows"), args.samples, args.seed))
    if target in ("failure", "all"):
        reports.append(fx.verify_failure_case(fx.load_failure(d / "failure_0011117.json")))
    if target in ("branch", "all"):
        reports.append(_verify_branches(d))
    ok = all(r.ok for r in reports)
    if args.json:
        json.dump({"ok": ok, "reports": [r.to_json() for r in reports]}, sys.stdout, indent=1)
        sys.stdout.write("\n")
    elif args.tsv:
        sys.stdout.write("report\tsubject\tcheck\tstatus\tdetail\n")
        for r in reports:
            for c in r.results:
                sys.stdout.write(f"{r.name}\t{c.subject}\t{c.check}\t{c.status}\t{c.detail}\n")
    else:
        for r in reports:
            counts = " ".join(f"{k}={v}" for k, v in sorted(r.counts().items()))
            print(f"{r.name}: {'PASS' if r.ok else 'FAIL'} ({counts})")
            for c in r.failures():
                print(f"  {c.subject} {c.check} {c.status}: {c.detail}")
            for w in r.warnings:
                print(f"  warning: {w}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true", help="JSON output")
    mode.add_argument("--tsv", action="store_true", help="tab-separated output")

    ap = argparse.ArgumentParser(prog="e6", description="E6(-14) Dirac-series toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("datum", parents=[common], help="root datum summary")
    p.set_defaults(func=cmd_datum)

    p = sub.add_parser("spin-norm", parents=[common], help="spin norm of a K-type")
    p.add_argument("weight", help='K-type highest weight, e.g. "[0,0,0,0,0,0]"')
    p.set_defaults(func=cmd_spin_norm)

    p = sub.add_parser("lambda", parents=[common], help="lambda norm and atlas height of a K-type")
    p.add_argument("weight")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("usmall", parents=[common], help="u-small K-types")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--count", action="store_true")
    g.add_argument("--enumerate", action="store_true")
    g.add_argument("--check", metavar="WEIGHT")
    p.add_argument("--out", help="TSV destination for --enumerate")
    p.set_defaults(func=cmd_usmall)

    p = sub.add_parser("omega", parents=[common], help="Omega and its partition")
    p.add_argument("--involutions", help="KGB involution file (default: fixture dir)")
    p.add_argument("--fixtures")
    p.add_argument("--report", action="store_true", help="include V, or every element with --tsv/--json")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("dirac", parents=[common], help="Dirac cohomology from a branch file")
    p.add_argument("--branch", required=True)
    p.add_argument("--infchar", required=True)
    p.set_defaults(func=cmd_dirac)

    p = sub.add_parser("verify", parents=[common], help="verify the shipped tables")
    p.add_argument("target", choices=["scattered", "integral", "tempered", "failure", "branch", "all"])
    p.add_argument("--fixtures", help="fixture directory (default: $E6_FIXTURE_DIR, else the fixtures/ directory next to src/)")
    p.add_argument("--samples", type=int, default=200, help="tempered samples per row")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "out", None) and not getattr(args, "enumerate", False):
        print("e6: --out requires --enumerate", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"e6: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (fx.FixtureError, FileNotFoundError, ValueError) as e:
        print(f"e6: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
