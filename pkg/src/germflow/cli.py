"""Command line interface.

Every subcommand builds the same request model the HTTP service accepts,
runs the shared handler (or posts to a remote service when --url is
given), and prints one report. JSON output is deterministic: keys are
sorted and null fields are kept, so identical inputs give byte-identical
reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GermflowError
from .handlers import (
    handle_analyze,
    handle_blowup,
    handle_euclid,
    handle_exp,
    handle_flagcheck,
    handle_holonomy,
    handle_log,
    handle_orbit,
    handle_period,
)
from .models import (
    AnalyzeRequest,
    BlowupRequest,
    EuclidRequest,
    ExpRequest,
    FlagcheckRequest,
    HolonomyRequest,
    LogRequest,
    OrbitRequest,
    PeriodRequest,
    Report,
)
from .service import error_report

HANDLERS = {
    "analyze": handle_analyze,
    "holonomy": handle_holonomy,
    "blowup": handle_blowup,
    "exp": handle_exp,
    "log": handle_log,
    "period": handle_period,
    "orbit": handle_orbit,
    "euclid": handle_euclid,
    "flagcheck": handle_flagcheck,
}


def _csv_ints(text: str):
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated integers")


def _add_expr_arguments(sub):
    sub.add_argument(
        "path",
        nargs="?",
        help="file holding the germ expression, or - for stdin",
    )
    sub.add_argument("-e", "--expr", help="germ expression given inline")


def _add_common_arguments(sub):
    sub.add_argument("--format", choices=("json", "text"), default="json")
    sub.add_argument("--url", help="post to a running service instead of computing locally")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="germflow",
        description="exact germ computations: holonomy, blow-ups, formal flows",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("analyze", help="full diagnosis of a vector field germ")
    _add_expr_arguments(sub)
    sub.add_argument("--order", type=int, default=8)
    sub.add_argument("--pmax", type=int, default=24)
    sub.add_argument("--precision", type=int)
    _add_common_arguments(sub)

    sub = commands.add_parser("holonomy", help="holonomy generator along the axis")
    _add_expr_arguments(sub)
    sub.add_argument("--order", type=int, default=8)
    sub.add_argument("--axis", type=int)
    sub.add_argument("--precision", type=int)
    _add_common_arguments(sub)

    sub = commands.add_parser("blowup", help="blow up a plane map or an axis field")
    _add_expr_arguments(sub)
    sub.add_argument("--chart", choices=("t_x", "s_y"), default="t_x")
    sub.add_argument("--order", type=int)
    sub.add_argument("--axis", type=int, default=2)
    _add_common_arguments(sub)

    sub = commands.add_parser("exp", help="time-one map of a plane field")
    _add_expr_arguments(sub)
    sub.add_argument("--order", type=int, default=8)
    _add_common_arguments(sub)

    sub = commands.add_parser("log", help="formal logarithm of a tangent-to-identity map")
    _add_expr_arguments(sub)
    sub.add_argument("--order", type=int, default=8)
    _add_common_arguments(sub)

    sub = commands.add_parser("period", help="formal period of a plane map")
    _add_expr_arguments(sub)
    sub.add_argument("--order", type=int, default=8)
    sub.add_argument("--pmax", type=int, default=24)
    _add_common_arguments(sub)

    sub = commands.add_parser("orbit", help="count orbit points inside a polydisc")
    _add_expr_arguments(sub)
    sub.add_argument("--start", required=True, help="exact point, e.g. '0, 1/2'")
    sub.add_argument("--radius", default="1", help="polydisc radius as a rational")
    sub.add_argument("--order", type=int, default=8)
    sub.add_argument("--cap", type=int, default=1000)
    _add_common_arguments(sub)

    sub = commands.add_parser("euclid", help="mixed integer combination of exponents")
    sub.add_argument("--p", type=_csv_ints, required=True)
    sub.add_argument("--q", type=_csv_ints, required=True)
    _add_common_arguments(sub)

    sub = commands.add_parser("flagcheck", help="interior product, Frobenius, Kupka checks")
    _add_expr_arguments(sub)
    sub.add_argument("--form", required=True, help="one-form, e.g. '2*y dx - 3*x dy'")
    sub.add_argument("--order", type=int, default=8)
    sub.add_argument("--axis", type=int, default=2)
    _add_common_arguments(sub)

    sub = commands.add_parser("serve", help="run the HTTP service")
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8000)

    return parser


def _read_expression(args, parser) -> str:
    if args.expr is not None:
        if args.path is not None:
            parser.error("give the expression inline or as a path, not both")
        return args.expr
    if args.path is None:
        parser.error("an expression is required, inline with -e or from a path")
    if args.path == "-":
        return sys.stdin.read().strip()
    return Path(args.path).read_text().strip()


def _build_request(args, parser):
    command = args.command
    if command == "euclid":
        return EuclidRequest(p=args.p, q=args.q)
    expr = _read_expression(args, parser)
    if command == "analyze":
        return AnalyzeRequest(
            expr=expr, order=args.order, pmax=args.pmax, precision=args.precision
        )
    if command == "holonomy":
        return HolonomyRequest(
            expr=expr, order=args.order, axis=args.axis, precision=args.precision
        )
    if command == "blowup":
        return BlowupRequest(expr=expr, chart=args.chart, order=args.order, axis=args.axis)
    if command == "exp":
        return ExpRequest(expr=expr, order=args.order)
    if command == "log":
        return LogRequest(expr=expr, order=args.order)
    if command == "period":
        return PeriodRequest(expr=expr, order=args.order, pmax=args.pmax)
    if command == "orbit":
        return OrbitRequest(
            expr=expr,
            start=args.start,
            radius=args.radius,
            order=args.order,
            cap=args.cap,
        )
    if command == "flagcheck":
        return FlagcheckRequest(
            expr=expr, form=args.form, order=args.order, axis=args.axis
        )
    raise AssertionError("unhandled command %r" % command)


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _render_text(report: Report) -> str:
    data = report.model_dump()
    lines = []
    order = (
        "input",
        "order",
        "eigenvalues",
        "condition_star",
        "distinguished_axis",
        "holonomy",
        "period",
        "first_integrals",
        "flag_checks",
        "result",
        "verdict",
    )
    for key in order:
        value = data.get(key)
        if value is None:
            continue
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        elif isinstance(value, dict):
            value = "  ".join("%s=%s" % (k, value[k]) for k in sorted(value))
        lines.append("%s: %s" % (key, value))
    for note in report.notes:
        lines.append("note: %s" % note)
    return "\n".join(lines)


def _post_remote(url: str, command: str, request) -> int:
    import httpx

    target = url.rstrip("/") + "/v1/" + command
    try:
        response = httpx.post(target, json=request.model_dump(), timeout=60.0)
    except httpx.HTTPError as exc:
        print(_dump(error_report(exc).model_dump()))
        return 1
    print(_dump(response.json()))
    return 0 if response.status_code == 200 else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("germflow.service:app", host=args.host, port=args.port)
        return 0

    request = _build_request(args, parser)
    if getattr(args, "url", None):
        return _post_remote(args.url, args.command, request)

    try:
        report = HANDLERS[args.command](request)
    except (GermflowError, ValueError) as exc:
        print(_dump(error_report(exc).model_dump()))
        return 1

    if getattr(args, "format", "json") == "text":
        print(_render_text(report))
    else:
        print(_dump(report.model_dump()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
