"""Command-line front end: list, verify, expand, bench.

Exit codes: 0 all pass, 1 at least one failure, 2 usage/configuration error,
3 an insufficient window anywhere (raise --order or --slack).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional

from .errors import QThetaError, UnknownIdentity
from .identities import (
    VerificationReport,
    build_registry,
    expand,
    sample_points,
    verify,
)
from .series import format_rat

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INSUFFICIENT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtheta",
        description="Exact verification of partial theta function identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--order", type=int, default=30, metavar="N",
                       help="q-order to certify (default 30)")
        p.add_argument("--degree-cap", type=int, default=10, metavar="M",
                       help="a/b degree cap for symbolic runs (default 10)")
        p.add_argument("--slack", type=int, default=8, metavar="S",
                       help="extra working q-orders (default 8)")
        p.add_argument("--output", choices=("human", "json", "csv"),
                       default="human", help="report format")
        p.add_argument("--output-file", metavar="PATH",
                       help="write the report there instead of stdout")
        p.add_argument("--no-timing", action="store_true",
                       help="omit elapsed_ms from reports")

    p_list = sub.add_parser("list", help="list registered identities")
    common(p_list)

    p_verify = sub.add_parser("verify", help="verify identities")
    p_verify.add_argument("names", nargs="+", metavar="NAME",
                          help='identity names, or "all"')
    p_verify.add_argument("--points", type=int, default=3, metavar="K",
                          help="rational points per specialized identity (default 3)")
    p_verify.add_argument("--seed", type=int, default=0,
                          help="point-sampling seed (default 0)")
    p_verify.add_argument("--jobs", type=int, default=None, metavar="J",
                          help="worker count (default: available cores)")
    p_verify.add_argument("--perturb", metavar="NAME", help=argparse.SUPPRESS)
    common(p_verify)

    p_expand = sub.add_parser("expand", help="print series coefficients")
    p_expand.add_argument("target", metavar="TARGET",
                          help="theta | psi | L | P | poch_inf_q")
    common(p_expand)

    p_bench = sub.add_parser("bench", help="time one verification per identity")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--points", type=int, default=1, metavar="K")
    common(p_bench)
    return parser


def _validate(args: argparse.Namespace) -> Optional[str]:
    if args.order < 1:
        return "--order must be >= 1"
    if args.degree_cap < 1:
        return "--degree-cap must be >= 1"
    if args.slack < 0:
        return "--slack must be >= 0"
    if getattr(args, "points", 1) < 1:
        return "--points must be >= 1"
    if getattr(args, "seed", 0) is not None and getattr(args, "seed", 0) < 0:
        return "--seed must be >= 0"
    jobs = getattr(args, "jobs", None)
    if jobs is not None and jobs < 1:
        return "--jobs must be >= 1"
    return None


# -- report serialization --------------------------------------------------


def _point_json(point: Optional[dict]):
    if point is None:
        return "symbolic"
    return {k: format_rat(v) for k, v in sorted(point.items())}


def report_to_dict(rep: VerificationReport, no_timing: bool = False) -> dict:
    if rep.first_diff is None:
        diff = None
    else:
        (eq, ea, eb), lhs, rhs = rep.first_diff
        diff = {
            "e_q": eq,
            "e_a": ea,
            "e_b": eb,
            "lhs": format_rat(lhs),
            "rhs": format_rat(rhs),
        }
    out = {
        "identity": rep.name,
        "params": rep.params,
        "point": _point_json(rep.point),
        "order": rep.order,
        "window": {"q_lo": rep.window[0], "q_hi": rep.window[1]},
        "verdict": rep.verdict,
        "first_diff": diff,
    }
    if not no_timing:
        out["elapsed_ms"] = rep.elapsed_ms
    return out


def _point_str(point: Optional[dict]) -> str:
    if point is None:
        return "symbolic"
    if not point:
        return "(no parameters)"
    return " ".join("%s=%s" % (k, v) for k, v in sorted(point.items()))


def _reports_human(reports, elapsed_s: float, no_timing: bool) -> str:
    lines = []
    counts = {"pass": 0, "fail": 0, "insufficient": 0}
    for rep in reports:
        counts[rep.verdict] += 1
        timing = "" if no_timing else "  [%d ms]" % rep.elapsed_ms
        lines.append(
            "%-12s %-28s %s  window q:[%d, %d]%s"
            % (rep.verdict.upper(), rep.name, _point_str(rep.point),
               rep.window[0], rep.window[1], timing)
        )
        if rep.first_diff is not None:
            (eq, ea, eb), lhs, rhs = rep.first_diff
            lines.append(
                "             first difference at q^%d a^%d b^%d: "
                "lhs=%s rhs=%s" % (eq, ea, eb, lhs, rhs)
            )
        elif rep.verdict == "insufficient":
            lines.append(
                "             achieved q-order %d < requested %d; "
                "raise --order head-room or --slack" % (rep.window[1], rep.order)
            )
    wall = "" if no_timing else " in %.1fs" % elapsed_s
    lines.append(
        "%d pass, %d fail, %d insufficient%s"
        % (counts["pass"], counts["fail"], counts["insufficient"], wall)
    )
    return "\n".join(lines) + "\n"


def _reports_csv(reports, no_timing: bool) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["identity", "point", "order", "q_lo", "q_hi", "verdict",
              "diff_e_q", "diff_e_a", "diff_e_b", "diff_lhs", "diff_rhs"]
    if not no_timing:
        header.append("elapsed_ms")
    writer.writerow(header)
    for rep in reports:
        if rep.first_diff is None:
            diff_cols = ["", "", "", "", ""]
        else:
            (eq, ea, eb), lhs, rhs = rep.first_diff
            diff_cols = [eq, ea, eb, format_rat(lhs), format_rat(rhs)]
        row = [rep.name, _point_str(rep.point), rep.order,
               rep.window[0], rep.window[1], rep.verdict] + diff_cols
        if not no_timing:
            row.append(rep.elapsed_ms)
        writer.writerow(row)
    return buf.getvalue()


def render_reports(reports, output: str, elapsed_s: float, no_timing: bool) -> str:
    if output == "json":
        return json.dumps(
            [report_to_dict(r, no_timing) for r in reports], indent=2
        ) + "\n"
    if output == "csv":
        return _reports_csv(reports, no_timing)
    return _reports_human(reports, elapsed_s, no_timing)


# -- verify command --------------------------------------------------------


_TASK_CONFIG: dict = {}


def _init_worker(config: dict) -> None:
    _TASK_CONFIG.update(config)


def _run_task(task) -> VerificationReport:
    name, point = task
    cfg = _TASK_CONFIG
    registry = cfg.get("registry")
    if registry is None:
        registry = cfg["registry"] = build_registry(cfg.get("perturb"))
    return verify(
        name,
        point,
        order=cfg["order"],
        q_slack=cfg["slack"],
        degree_cap=cfg["degree_cap"],
        registry=registry,
    )


def _cmd_verify(args: argparse.Namespace) -> tuple[int, str]:
    registry = build_registry(args.perturb)
    if args.names == ["all"]:
        names = list(registry)
    else:
        unknown = [n for n in args.names if n not in registry]
        if unknown:
            raise UnknownIdentity(", ".join(unknown))
        names = args.names
    tasks = []
    for name in names:
        desc = registry[name]
        if desc.engine == "symbolic":
            tasks.append((name, None))
        else:
            for point in sample_points(desc, args.points, args.seed):
                tasks.append((name, point))
    config = {
        "order": args.order,
        "slack": args.slack,
        "degree_cap": args.degree_cap,
        "perturb": args.perturb,
    }
    started = time.perf_counter()
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs > 1 and len(tasks) > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(config,)
        ) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        _init_worker(config)
        reports = [_run_task(t) for t in tasks]
        _TASK_CONFIG.clear()
    elapsed_s = time.perf_counter() - started
    text = render_reports(reports, args.output, elapsed_s, args.no_timing)
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return EXIT_FAIL, text
    if "insufficient" in verdicts:
        return EXIT_INSUFFICIENT, text
    return EXIT_PASS, text


# -- list command ----------------------------------------------------------


def _cmd_list(args: argparse.Namespace) -> tuple[int, str]:
    registry = build_registry()
    if args.output == "json":
        rows = [
            {
                "identity": d.name,
                "engine": d.engine,
                "params": d.params_schema(),
                "summary": d.summary,
            }
            for d in registry.values()
        ]
        return EXIT_PASS, json.dumps(rows, indent=2) + "\n"
    if args.output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["identity", "engine", "vars", "summary"])
        for d in registry.values():
            writer.writerow([d.name, d.engine, " ".join(d.vars), d.summary])
        return EXIT_PASS, buf.getvalue()
    lines = []
    for d in registry.values():
        lines.append("%-26s %-10s vars(%s)  %s"
                     % (d.name, d.engine, ",".join(d.vars) or "-", d.summary))
    lines.append("%d identities" % len(registry))
    return EXIT_PASS, "\n".join(lines) + "\n"


# -- expand command --------------------------------------------------------


def _cmd_expand(args: argparse.Namespace) -> tuple[int, str]:
    rows = expand(args.target, order=args.order,
                  degree_cap=args.degree_cap, q_slack=args.slack)
    if args.output == "json":
        data = [
            {"e_q": eq, "e_a": ea, "e_b": eb, "coeff": format_rat(c)}
            for (eq, ea, eb), c in rows
        ]
        return EXIT_PASS, json.dumps(data, indent=2) + "\n"
    if args.output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["e_q", "e_a", "e_b", "coeff"])
        for (eq, ea, eb), c in rows:
            writer.writerow([eq, ea, eb, format_rat(c)])
        return EXIT_PASS, buf.getvalue()
    lines = ["%-6d %-4d %-4d %s" % (eq, ea, eb, c) for (eq, ea, eb), c in rows]
    lines.insert(0, "e_q    e_a  e_b  coeff")
    return EXIT_PASS, "\n".join(lines) + "\n"


# -- bench command ---------------------------------------------------------


def _cmd_bench(args: argparse.Namespace) -> tuple[int, str]:
    registry = build_registry()
    reports = []
    started = time.perf_counter()
    for name, desc in registry.items():
        if desc.engine == "symbolic":
            points = [None]
        else:
            points = sample_points(desc, args.points, args.seed)
        for point in points:
            reports.append(
                verify(name, point, order=args.order, q_slack=args.slack,
                       degree_cap=args.degree_cap, registry=registry)
            )
    elapsed_s = time.perf_counter() - started
    text = render_reports(reports, args.output, elapsed_s, args.no_timing)
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return EXIT_FAIL, text
    if "insufficient" in verdicts:
        return EXIT_INSUFFICIENT, text
    return EXIT_PASS, text


# -- entry point -----------------------------------------------------------


def run(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    problem = _validate(args)
    if problem is not None:
        print(problem, file=sys.stderr)
        return EXIT_USAGE
    handler = {
        "list": _cmd_list,
        "verify": _cmd_verify,
        "expand": _cmd_expand,
        "bench": _cmd_bench,
    }[args.command]
    try:
        code, text = handler(args)
    except UnknownIdentity as exc:
        print("unknown identity: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except QThetaError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if args.output_file:
        with open(args.output_file, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
