"""Command line front end.

Subcommands::

    weyl-equidist datum    --type A2 [--lattice weight]
    weyl-equidist action   --scenario builtin:a2_root_z3
    weyl-equidist char     --type A1 --m 2 [--out char.json]
    weyl-equidist equidist --scenario s.json --format csv --out s.csv
    weyl-equidist verify   [--scenario s.json] [--format json]

Exit codes: 0 success, 1 failed invariant, 2 parse error, 3 validation
error, 4 action not elliptic, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .charring import char_mu_m
from .equidist import run_equidist, workers_from_env
from .errors import GroupTooLarge, NotElliptic, ValidationError
from .galois import coinvariants, compute_H, is_elliptic, pi1
from .rootdatum import positive_roots, two_rho, weyl_group_elements
from .scenario import Scenario, ScenarioParseError, builtin_scenarios, load_scenario, parse_galois

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NOT_ELLIPTIC = 4
EXIT_IO = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# output


def write_atomic(files: dict[Path, str]) -> None:
    """Write every file or none: stage to temporaries, then rename."""
    staged = []
    try:
        for path, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def summary_path(out: Path) -> Path:
    """``results.csv`` -> ``results.summary.csv``."""
    return out.with_name(f"{out.stem}.summary{out.suffix}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic({Path(out): text})


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=1) + "\n"
    return "".join(f"{k}: {v}\n" for k, v in report.items())


# ---------------------------------------------------------------------------
# scenario assembly


def _scenario(args: argparse.Namespace) -> Scenario:
    if args.scenario:
        s = load_scenario(args.scenario)
    elif args.type:
        s = Scenario(args.type, args.type)
    else:
        raise ScenarioParseError("give --scenario or --type")
    changes = {}
    if args.scenario and args.type:
        changes["cartan_type"] = args.type
    if args.lattice:
        changes["lattice"] = args.lattice
    if args.galois is not None:
        raw = args.galois
        if raw.startswith("@"):
            raw = Path(raw[1:]).read_text()
        try:
            changes["galois_generators"] = parse_galois(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"--galois is not valid JSON: {exc}") from None
    if getattr(args, "m_min", None) is not None:
        changes["m_min"] = args.m_min
        if args.m_max is None and changes["m_min"] > s.m_max:
            changes["m_max"] = args.m_min
    if getattr(args, "m_max", None) is not None:
        changes["m_max"] = args.m_max
    return replace(s, **changes) if changes else s


# ---------------------------------------------------------------------------
# commands


def cmd_datum(args: argparse.Namespace) -> int:
    s = _scenario(args)
    rd = s.datum()
    try:
        wo = len(weyl_group_elements(rd))
    except GroupTooLarge:
        wo = rd.cartan_type.weyl_order() if rd.cartan_type else None
    p1 = pi1(rd)
    report = {
        "name": s.name,
        "cartan_type": str(rd.cartan_type) if rd.cartan_type else s.cartan_type,
        "lattice_rank": rd.lattice_rank,
        "semisimple_rank": rd.rank,
        "positive_roots": [list(a) for a in positive_roots(rd)],
        "two_rho": list(two_rho(rd)),
        "weyl_order": wo,
        "pi1_invariant_factors": list(p1.torsion),
        "pi1_free_rank": p1.free_rank,
    }
    _emit(_render(report, args.format), args.out)
    return EXIT_OK


def cmd_action(args: argparse.Namespace) -> int:
    s = _scenario(args)
    act = s.action()
    xg = coinvariants(act)
    elliptic = is_elliptic(act)
    report = {
        "name": s.name,
        "gamma_order": act.order(),
        "x_gamma_invariant_factors": list(xg.torsion),
        "x_gamma_free_rank": xg.free_rank,
        "elliptic": elliptic,
    }
    if not args.no_h:
        if not elliptic:
            raise NotElliptic(f"scenario {s.name}: H is only defined for elliptic actions")
        H = compute_H(act).H
        report["H_invariant_factors"] = list(H.torsion)
        report["H_order"] = H.order()
    _emit(_render(report, args.format), args.out)
    return EXIT_OK


def cmd_char(args: argparse.Namespace) -> int:
    s = _scenario(args)
    if args.m < 0:
        raise ValidationError("--m must be nonnegative")
    _emit(char_mu_m(s.datum(), args.m).to_json(), args.out)
    return EXIT_OK


def cmd_equidist(args: argparse.Namespace) -> int:
    s = _scenario(args)
    rd, act = s.datum(), s.action()
    report = run_equidist(rd, act, s.m_range, workers=workers_from_env())
    main, summary = report.to_json() if args.format == "json" else report.to_csv()
    if args.out is None:
        sys.stdout.write(main)
        sys.stdout.write("\n")
        sys.stdout.write(summary)
    else:
        out = Path(args.out)
        write_atomic({out: main, summary_path(out): summary})
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import verify_scenario

    if args.scenario or args.type:
        scenarios = [_scenario(args)]
    else:
        scenarios = builtin_scenarios()
    workers = workers_from_env()
    checks = []
    for s in scenarios:
        checks += verify_scenario(s, workers=workers)
    failures = [c for c in checks if not c.ok]
    if args.format == "json":
        text = json.dumps(
            {
                "passed": not failures,
                "failures": [c.to_dict() for c in failures],
                "checks": [c.to_dict() for c in checks],
            },
            indent=1,
        ) + "\n"
    else:
        text = "".join(c.line() + "\n" for c in checks)
        text += f"{len(checks) - len(failures)}/{len(checks)} checks passed\n"
    _emit(text, args.out)
    return EXIT_INVARIANT if failures else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_scenario_flags(p: argparse.ArgumentParser, with_m: bool = False) -> None:
    p.add_argument("--scenario", help="scenario JSON path, or builtin:<name>")
    p.add_argument("--type", help="Cartan type, e.g. A2 or A1xA1 (overrides the scenario)")
    p.add_argument("--lattice", choices=["root", "weight"], help="lattice (overrides the scenario)")
    p.add_argument("--galois", help="generator matrices as inline JSON or @file")
    p.add_argument("--out", help="output path (stdout if omitted)")
    if with_m:
        p.add_argument("--m-min", type=int, dest="m_min")
        p.add_argument("--m-max", type=int, dest="m_max")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weyl-equidist", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("datum", help="positive roots, 2rho, Weyl order, pi_1")
    _add_scenario_flags(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_datum)

    p = sub.add_parser("action", help="|Gamma|, coinvariants, ellipticity, H")
    _add_scenario_flags(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--no-h", action="store_true", help="skip H (allowed for non-elliptic actions)")
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("char", help="dump the character of V_{4 m rho} as JSON")
    _add_scenario_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("equidist", help="coset fractions S_{h,m} and summary")
    _add_scenario_flags(p, with_m=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_equidist)

    p = sub.add_parser("verify", help="run the invariant suites (all builtin scenarios by default)")
    _add_scenario_flags(p, with_m=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
    except (ValidationError, GroupTooLarge) as exc:
        code, msg = EXIT_VALIDATION, f"validation error: {type(exc).__name__}: {exc}"
    except NotElliptic as exc:
        code, msg = EXIT_NOT_ELLIPTIC, f"not elliptic: {exc}"
    except OSError as exc:
        code, msg = EXIT_IO, f"I/O error: {exc}"
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
