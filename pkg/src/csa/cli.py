"""Command-line interface: run jobs, explain reports, and one-off analyses."""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import BadReport, CSAError, ParseError, TaskError
from .jobs import dumps, parse_job, run_job, run_task


def _table(rows, header=None) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if header:
        rows = [[str(c) for c in header]] + rows
    if not rows:
        return ""
    widths = [max(len(r[k]) for r in rows if k < len(r)) for k in range(max(len(r) for r in rows))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def explain(report) -> str:
    """Human-readable rendering of a task report (or a job summary)."""
    if not isinstance(report, dict) or "schema_version" not in report:
        raise BadReport("not a csa report: missing schema_version")
    if "tasks" in report:
        if not isinstance(report["tasks"], list):
            raise BadReport("tasks must be a list")
        head = f"job: {'PASS' if report.get('pass') else 'FAIL'} ({len(report['tasks'])} tasks, seed {report.get('seed')})"
        return "\n\n".join([head] + [explain(r) for r in report["tasks"]])
    if "pass" not in report or "type" not in report:
        raise BadReport("task report needs 'type' and 'pass'")
    out = [f"[{'PASS' if report['pass'] else 'FAIL'}] {report.get('id')} ({report['type']})"]
    if "error" in report:
        out.append(f"error: {report['error']}")
    if "factors" in report and report["factors"] and isinstance(report["factors"][0], dict):
        out.append("factors:")
        out.append(_table([[f["name"], f["degree"], f["a"], f["b"], f["zeta"]] for f in report["factors"]],
                          ["name", "n", "a", "b", "zeta"]))
    arm = report.get("armature") or report.get("image")
    if isinstance(arm, dict) and "pairing_table" in arm:
        out.append(f"armature of order {arm['order']}, generator orders {arm['orders']}; pairing:")
        pt = arm["pairing_table"]
        out.append(_table([[f"x{i + 1}"] + row for i, row in enumerate(pt)],
                          [""] + [f"x{j + 1}" for j in range(len(pt))]))
    if "symplectic_base" in report:
        out.append("symplectic base:")
        sb = report["symplectic_base"]
        if sb and isinstance(sb[0], dict):
            out.append(_table([[p["g"], p["h"], p["order"], p["value"]] for p in sb], ["g", "h", "order", "<g,h>"]))
        else:
            out.append(_table([[e, f] for e, f in sb], ["e", "f"]))
    if "f_table" in report:
        out.append("f(sigma, tau):")
        out.append(_table(sorted(k.split("|") + [v] for k, v in report["f_table"].items()), ["sigma", "tau", "f"]))
    lift = report.get("lift")
    if isinstance(lift, dict) and "cocycle" in lift:
        out.append("cocycle c(sigma, tau) coordinates in C:")
        out.append(_table(sorted([k, json.dumps(v, sort_keys=True)] for k, v in lift["cocycle"].items()),
                          ["pair", "coords"]))
    if "verdict" in report:
        out.append(f"case {report['case']}, value {report['value']}, verdict {report['verdict']}")
        if report.get("dims"):
            out.append(f"dims {report['dims'][0]} / {report['dims'][1]}")
        if report.get("reason"):
            out.append(f"reason: {report['reason']}")
        if report.get("witness"):
            out.append(f"witness: {json.dumps(report['witness'], sort_keys=True)}")
    for key in ("checks", "separability_checks"):
        if isinstance(report.get(key), dict):
            out.append(f"{key}:")
            out.append(_table([[k, v] for k, v in sorted(report[key].items())]))
    for key in ("deltas", "eprime_parameters", "dim_E'", "dim_R", "order", "kernel_order", "samples"):
        if key in report:
            out.append(f"{key}: {report[key]}")
    return "\n".join(out)


def _one_task(args, task) -> int:
    with open(args.desc) as fh:
        desc = json.load(fh)
    desc = dict(desc)
    desc["tasks"] = [task]
    job = parse_job(json.dumps(desc))
    rep = run_task(job, task)
    sys.stdout.write(dumps(rep))
    return 0 if rep.get("pass") else 1


def _cmd_run(args) -> int:
    try:
        code, summary = run_job(args.job, args.out)
    except TaskError as exc:
        code, summary = 1, exc.summary
        print(f"error: {exc}", file=sys.stderr)
    if args.out is None:
        sys.stdout.write(dumps(summary))
    else:
        for r in summary["tasks"]:
            print(f"{r['id']}: {'PASS' if r.get('pass') else 'FAIL'}")
    return code


def _cmd_explain(args) -> int:
    try:
        with open(args.report) as fh:
            report = json.load(fh)
    except json.JSONDecodeError as exc:
        raise BadReport(f"invalid JSON: {exc}")
    print(explain(report))
    return 0


def _cmd_selftest(args) -> int:
    from .acceptance import run_all

    ok = True
    for name, passed, detail in run_all(args.only):
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    return 0 if ok else 1


def _cmd_armature(args) -> int:
    task = {"id": f"armature-{args.action}", "type": f"armature.{args.action}", "algebra": args.algebra}
    if args.generators:
        task["armature"] = json.loads(args.generators)
    return _one_task(args, task)


def _cmd_crossed(args) -> int:
    task = {"id": f"crossed-{args.action}", "type": f"crossed.{args.action}",
            "algebra": args.algebra, "kummer": args.kummer}
    if args.vars:
        task["vars"] = args.vars.split(",")
    if args.subfields:
        task["images"] = json.loads(args.subfields)
    if args.generators:
        task["armature"] = json.loads(args.generators)
    return _one_task(args, task)


def _cmd_sqcentral(args) -> int:
    task = {"id": "sqcentral-analyze", "type": "sqcentral.analyze", "algebra": args.algebra,
            "element": json.loads(args.element), "budget": args.budget}
    if args.index is not None:
        task["index"] = args.index
    return _one_task(args, task)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csa", description="Armatures, crossed products and square-central elements.")
    ap.add_argument("--version", action="version", version=f"csa {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a job file")
    p.add_argument("job", help="job JSON file")
    p.add_argument("--out", default=None, help="directory for per-task reports")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("explain", help="render a report as text")
    p.add_argument("report", help="report JSON file")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--only", nargs="*", default=None, metavar="N", help="criterion numbers to run (default: all)")
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("armature", help="verify or decompose by an armature")
    p.add_argument("action", choices=["verify", "decompose"])
    p.add_argument("desc", help="job-style JSON with tower and algebras")
    p.add_argument("--algebra", required=True, help="algebra name")
    p.add_argument("--generators", default=None, help='JSON {"generators": [...], "orders": [...]}')
    p.set_defaults(func=_cmd_armature)

    p = sub.add_parser("crossed", help="crossed-product constructions")
    p.add_argument("action", choices=["build", "lift", "nu", "residue", "decompose", "brauer", "properties"])
    p.add_argument("desc", help="job-style JSON with tower and algebras")
    p.add_argument("--algebra", required=True, help="algebra name")
    p.add_argument("--kummer", required=True, help="Kummer field name")
    p.add_argument("--vars", default=None, help="comma-separated names for the new variables")
    p.add_argument("--subfields", default=None, help="JSON list of element specs for the Kummer generators")
    p.add_argument("--generators", default=None, help="JSON armature spec")
    p.set_defaults(func=_cmd_crossed)

    p = sub.add_parser("sqcentral", help="square-central element analysis")
    p.add_argument("action", choices=["analyze"])
    p.add_argument("desc", help="job-style JSON with tower and algebras")
    p.add_argument("--algebra", required=True, help="algebra name")
    p.add_argument("--element", required=True, help="JSON element spec")
    p.add_argument("--budget", type=int, default=20000, help="search budget")
    p.add_argument("--index", type=int, default=None, help="index of the algebra, if known")
    p.set_defaults(func=_cmd_sqcentral)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BadReport as exc:
        print(f"bad report: {exc}", file=sys.stderr)
        return 2
    except (CSAError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
