"""Command-line surface: validators, queries, and the mission lifecycle."""

from __future__ import annotations

import argparse
import json
import sys

from . import builtin, intent, kb, kbx, lint, missions, ontoclean, sim, store
from .reasoner import classify, query

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _load_ontology(path):
    if path == "builtin":
        return builtin.load_builtin()
    with open(path) as fh:
        return kbx.parse(fh.read())


def _print_metrics(m, out):
    for f in kb.Metrics.FIELDS:
        print(f"{f}: {getattr(m, f)}", file=out)


def _build_parser():
    p = argparse.ArgumentParser(prog="shepherdkb")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="lint and meta-property checks")
    v.add_argument("file")
    v.add_argument("--meta", help="meta-property profile (.meta)")
    v.add_argument("--format", choices=("text", "json"), default="text")

    m = sub.add_parser("metrics", help="snapshot summary counts")
    m.add_argument("file")
    m.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("conformance",
                       help="shipped vs published summary statistics")
    c.add_argument("file")

    q = sub.add_parser("query", help="evaluate a class expression")
    q.add_argument("file")
    q.add_argument("--expr", required=True)

    r = sub.add_parser("resolve", help="resolve intent into a mission")
    r.add_argument("file")
    r.add_argument("--intent", required=True)
    r.add_argument("--goal", required=True, help="X,Y")
    r.add_argument("--sheep", required=True, type=int)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-steps", type=int, default=None)
    r.add_argument("--store", default=None)

    for name in ("approve", "reject"):
        d = sub.add_parser(name)
        d.add_argument("mission_id")
        d.add_argument("--store", default=None)

    run_p = sub.add_parser("run", help="run an approved mission")
    run_p.add_argument("mission_id")
    run_p.add_argument("--export", default=None)
    run_p.add_argument("--store", default=None)

    s = sub.add_parser("serve", help="start the HTTP service")
    s.add_argument("--port", type=int, default=8420)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--store", default=None)

    return p


def _service(args):
    return missions.MissionService(
        store_dir=args.store or missions.default_store_dir())


def _cmd_validate(args):
    o = _load_ontology(args.file)
    report = lint.scan(o)
    violations = []
    if args.meta:
        with open(args.meta) as fh:
            profile = ontoclean.load_profile(fh.read())
        violations = ontoclean.check(classify(o), profile)

    if args.format == "json":
        out = report.as_dict()
        out["meta_violations"] = [v.as_dict() for v in violations]
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(report.to_text())
        if args.meta:
            print(ontoclean.report_text(violations))

    critical = any(f.severity == "critical" for f in report.findings)
    return EXIT_FAILURE if critical or violations else EXIT_OK


def _cmd_metrics(args):
    m = kb.metrics(_load_ontology(args.file))
    if args.format == "json":
        print(json.dumps({f: getattr(m, f) for f in kb.Metrics.FIELDS},
                         indent=2, sort_keys=True))
    else:
        _print_metrics(m, sys.stdout)
    return EXIT_OK


def _cmd_conformance(args):
    report = builtin.conformance(_load_ontology(args.file))
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_query(args):
    o = _load_ontology(args.file)
    expr = kbx.parse_expr_text(args.expr)
    result = query(classify(o), expr)
    for name in result.individuals:
        print(name)
    return EXIT_OK


def _cmd_resolve(args):
    if args.file != "builtin":
        raise NotImplementedError(
            "missions currently resolve against the builtin ontology")
    service = _service(args)
    goal = tuple(float(v) for v in args.goal.split(","))
    if len(goal) != 2:
        raise ValueError("--goal expects X,Y")
    record = service.create(args.intent, goal, args.sheep, seed=args.seed,
                            max_steps=args.max_steps)
    print(f"mission: {record.plan.id}")
    print(record.brief.narrative)
    for w in record.brief.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def _cmd_decide(args, decision):
    record = _service(args).decide(args.mission_id, decision)
    print(f"mission {record.plan.id}: {record.plan.status}")
    return EXIT_OK


def _cmd_run(args):
    record = _service(args).run(args.mission_id, export_path=args.export)
    print(f"mission {record.plan.id}: {record.plan.status} "
          f"(trajectory: {record.trajectory_path})")
    return EXIT_OK if record.plan.status == "succeeded" else EXIT_OK


def _cmd_serve(args):
    import uvicorn

    from .server import create_app
    app = create_app(_service(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cli_dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE

    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "metrics":
            return _cmd_metrics(args)
        if args.command == "conformance":
            return _cmd_conformance(args)
        if args.command == "query":
            return _cmd_query(args)
        if args.command == "resolve":
            return _cmd_resolve(args)
        if args.command in ("approve", "reject"):
            return _cmd_decide(args, args.command)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "serve":
            return _cmd_serve(args)
        return EXIT_USAGE
    except (kb.KbError, kbx.ParseError, intent.IntentError, sim.SimError,
            store.StoreError, ontoclean.ProfileParseError,
            ontoclean.UncoveredConcepts, lint.MissingFixture,
            FileNotFoundError, ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
