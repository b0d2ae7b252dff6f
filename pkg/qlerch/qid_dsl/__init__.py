from qlerch.qid_dsl.evaluator import EvaluationError, Evaluator, evaluate
from qlerch.qid_dsl.parser import parse, parse_expr
from qlerch.qid_dsl.reports import Report, render_json, render_table
from qlerch.qid_dsl.runner import Runner, run
from qlerch.qid_dsl.syntax import QidSyntaxError, pretty, pretty_statement

__all__ = [
    "EvaluationError",
    "Evaluator",
    "QidSyntaxError",
    "Report",
    "Runner",
    "evaluate",
    "parse",
    "parse_expr",
    "pretty",
    "pretty_statement",
    "render_json",
    "render_table",
    "run",
]
