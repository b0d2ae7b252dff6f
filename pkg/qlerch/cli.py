import argparse
import json
import logging
import re
import sys
from pathlib import Path

from pydantic import ValidationError

from qlerch.appell import CoeffTable, coefficient_table
from qlerch.cache import CacheFormatError, read_table, write_table
from qlerch.config import Settings, get_settings
from qlerch.core.logging import configure_logging
from qlerch.core.metrics import write_metrics
from qlerch.qid_dsl.evaluator import EvaluationError, Evaluator
from qlerch.qid_dsl.parser import parse, parse_expr
from qlerch.qid_dsl.reports import render_json, render_table
from qlerch.qid_dsl.runner import Runner
from qlerch.qid_dsl.syntax import QidSyntaxError, Scan
from qlerch.ring_series import Ring, coefficients, parse_ring

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _ring(text: str) -> Ring:
    try:
        return parse_ring(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid_integer_list:{text}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlerch")
    parser.add_argument("--log-level")
    parser.add_argument("--metrics-file", type=Path)
    subparsers = parser.add_subparsers(dest="command", required=True)

    expand = subparsers.add_parser("expand", help="print the coefficients of an expression")
    expand.add_argument("expression")
    expand.add_argument("--order", type=int)
    expand.add_argument("--ring", type=_ring)
    expand.add_argument("--format", choices=("text", "json"), default="text")

    verify = subparsers.add_parser("verify", help="check every statement of a .qid file")
    verify.add_argument("path", type=Path)
    verify.add_argument("--order", type=int)
    verify.add_argument("--ring", type=_ring)
    verify.add_argument("--jobs", type=int)
    verify.add_argument("--format", choices=("text", "json"), default="text")

    coeffs = subparsers.add_parser("coeffs", help="compute or load a coefficient table")
    coeffs.add_argument("expression")
    coeffs.add_argument("--count", type=int)
    coeffs.add_argument("--ring", type=_ring)
    coeffs.add_argument("--cache", type=Path)
    coeffs.add_argument("--start", type=int, default=0)
    coeffs.add_argument("--stop", type=int)
    coeffs.add_argument("--indices", type=_int_list)
    coeffs.add_argument("--format", choices=("text", "json"), default="text")

    scan = subparsers.add_parser("scan", help="search for progressions with vanishing coefficients")
    scan.add_argument("expression")
    scan.add_argument("--maxA", dest="max_a", type=int, required=True)
    scan.add_argument("--moduli", type=_int_list, required=True)
    scan.add_argument("--min-witnesses", type=int, default=25)
    scan.add_argument("--count", type=int)
    scan.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _positive(value: int | None, code: str) -> None:
    if value is not None and value < 1:
        raise ValueError(code)


def cmd_expand(args: argparse.Namespace, settings: Settings) -> int:
    _positive(args.order, "order_must_be_positive")
    expr = parse_expr(args.expression)
    ring = args.ring or settings.ring
    order = args.order or settings.default_order
    series = Evaluator(ring, settings.precision_retries).evaluate(expr, order)
    start = min(series.valuation, 0)
    stop = min(order, series.prec)
    values = coefficients(series, start, stop)
    if args.format == "json":
        payload = {
            "expression": args.expression,
            "ring": ring.descriptor,
            "order": order,
            "valuation": series.valuation if not series.is_zero else None,
            "start": start,
            "coefficients": [str(value) for value in values],
        }
        print(json.dumps(payload, indent=2))
    else:
        valuation = "none" if series.is_zero else str(series.valuation)
        print(f"valuation: {valuation}")
        print(f"trusted below: q^{stop}")
        print(", ".join(str(value) for value in values))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    _positive(args.order, "order_must_be_positive")
    _positive(args.jobs, "jobs_must_be_positive")
    statements = parse(args.path.read_text(encoding="utf-8"))
    runner = Runner(ring=args.ring, order=args.order, settings=settings)
    reports = runner.run(statements, jobs=args.jobs)
    print(render_json(reports) if args.format == "json" else render_table(reports))
    failed = [report.label for report in reports if report.verdict != "pass"]
    if failed:
        logger.warning("verification_failed:%s", ",".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def _load_or_build(args: argparse.Namespace, settings: Settings, ring: Ring, count: int) -> CoeffTable:
    label = args.expression.strip()
    cache_path: Path | None = args.cache
    if cache_path is None and settings.cache_dir is not None:
        slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", label)
        cache_path = settings.cache_dir / f"{slug}.{ring.descriptor.replace(':', '')}.coeffs"
    if cache_path is not None and cache_path.exists():
        table = read_table(cache_path, label=label, ring=ring)
        if table.count >= count:
            logger.info("cache_loaded:%s:%s", cache_path, table.count)
            return CoeffTable(label=table.label, ring=table.ring, values=table.values[:count])
        logger.info("cache_too_short:%s:%s", cache_path, table.count)
    series = Evaluator(ring, settings.precision_retries).evaluate(parse_expr(label), count)
    if series.prec < count:
        raise EvaluationError(f"insufficient_precision:{series.prec}", ("coeffs",))
    if series.valuation < 0:
        raise EvaluationError("coefficient_table_requires_power_series", ("coeffs",))
    table = coefficient_table(label, series, count)
    if cache_path is not None:
        write_table(cache_path, table)
    return table


def cmd_coeffs(args: argparse.Namespace, settings: Settings) -> int:
    _positive(args.count, "count_must_be_positive")
    ring = args.ring or settings.ring
    needed = args.count or settings.default_order
    if args.indices:
        needed = max(needed, max(args.indices) + 1)
    table = _load_or_build(args, settings, ring, needed)
    if args.indices:
        selected = args.indices
    else:
        selected = list(range(args.start, min(args.stop or table.count, table.count)))
    rows = [(n, table[n]) for n in selected]
    if args.format == "json":
        payload = {
            "label": table.label,
            "ring": ring.descriptor,
            "count": table.count,
            "values": {str(n): str(value) for n, value in rows},
        }
        print(json.dumps(payload, indent=2))
    else:
        for n, value in rows:
            print(f"{n}\t{value}")
    return EXIT_OK


def cmd_scan(args: argparse.Namespace, settings: Settings) -> int:
    _positive(args.count, "count_must_be_positive")
    _positive(args.max_a, "max_a_must_be_positive")
    _positive(args.min_witnesses, "witnesses_must_be_positive")
    if not args.moduli or min(args.moduli) < 2:
        raise ValueError("modulus_must_be_at_least_2")
    stmt = Scan(
        label="scan",
        expr=parse_expr(args.expression),
        max_a=args.max_a,
        moduli=tuple(args.moduli),
        min_witnesses=args.min_witnesses,
        count=args.count,
    )
    report = Runner(settings=settings).run_statement(stmt)
    if report.verdict != "pass":
        print(render_table([report]), file=sys.stderr)
        return EXIT_FAILED
    found = [tuple(item) for item in report.detail["progressions"]]
    if args.format == "json":
        print(json.dumps({"progressions": [list(item) for item in found], "count": report.order}, indent=2))
    else:
        for step, offset, modulus in found:
            print(f"c({step}n+{offset}) = 0 mod {modulus}")
        if not found:
            print("no progressions found")
    return EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "verify": cmd_verify,
    "coeffs": cmd_coeffs,
    "scan": cmd_scan,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as exc:
        print(f"invalid settings: {exc}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.log_level or settings.log_level)
    try:
        code = COMMANDS[args.command](args, settings)
    except QidSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except (CacheFormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        code = EXIT_IO
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        code = EXIT_FAILED
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    metrics_file = args.metrics_file or settings.metrics_file
    if metrics_file is not None:
        write_metrics(metrics_file)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
