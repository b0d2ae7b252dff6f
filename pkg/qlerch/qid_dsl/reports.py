import json
from typing import Any, Literal

from pydantic import BaseModel, Field

Verdict = Literal["pass", "fail", "insufficient-precision"]


class Report(BaseModel):
    label: str
    verdict: Verdict
    order: int
    ring: str
    detail: dict[str, Any] = Field(default_factory=dict)
    millis: int = 0


def _detail_text(report: Report) -> str:
    detail = report.detail
    if "error" in detail:
        return str(detail["error"])
    if "progressions" in detail:
        found = detail["progressions"]
        return ", ".join(f"({a},{b},{m})" for a, b, m in found) or "none"
    if report.verdict == "fail" and "exponent" in detail:
        if "lhs" in detail:
            return f"q^{detail['exponent']}: {detail['lhs']} != {detail['rhs']}"
        return f"q^{detail['exponent']}: {detail['value']}"
    return " ".join(f"{key}={value}" for key, value in detail.items())


def render_table(reports: list[Report]) -> str:
    rows = [("label", "verdict", "order", "ring", "ms", "detail")]
    rows += [
        (r.label, r.verdict, str(r.order), r.ring, str(r.millis), _detail_text(r)) for r in reports
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)) + "  " + row[5] for row in rows]
    passed = sum(1 for r in reports if r.verdict == "pass")
    lines.append(f"{passed}/{len(reports)} passed")
    return "\n".join(lines)


def render_json(reports: list[Report]) -> str:
    return json.dumps({"reports": [r.model_dump() for r in reports]}, indent=2, sort_keys=True)
