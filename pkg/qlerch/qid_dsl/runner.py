"""Statement execution: identity checks, congruence checks and progression scans."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor

from qlerch.config import Settings, get_settings
from qlerch.core.metrics import observe_statement
from qlerch.core.logging import reset_statement, set_statement
from qlerch.qid_dsl.evaluator import EvaluationError, Evaluator
from qlerch.qid_dsl.reports import Report
from qlerch.qid_dsl.syntax import Expr, Scan, Statement, VerifyCong, VerifyEq
from qlerch.ring_series import INTEGER, RATIONAL, Ring, Series, coeff, first_mismatch, modular, to_ring

logger = logging.getLogger(__name__)


def evaluate_mod(expr: Expr, order: int, modulus: int, retries: int) -> Series:
    """Evaluate over Z/M when every step is defined there, else over Z or Q and reduce.

    A rational result is accepted only when every coefficient is integral at M.
    """
    target = modular(modulus)
    last_error: EvaluationError | None = None
    for ring in (target, INTEGER, RATIONAL):
        try:
            series = Evaluator(ring, retries).evaluate(expr, order)
        except EvaluationError as exc:
            logger.debug("modular_fallback:%s:%s", ring, exc)
            last_error = exc
            continue
        try:
            return to_ring(series, target)
        except ValueError as exc:
            raise EvaluationError("not_integral_mod_M", ("reduce",)) from exc
    assert last_error is not None
    raise last_error


def _progression_values(series: Series, step: int, offset: int) -> list[tuple[int, int]]:
    values = []
    index = offset
    while index < series.prec:
        values.append((index, int(coeff(series, index))))
        index += step
    return values


class Runner:
    def __init__(
        self,
        ring: Ring | None = None,
        order: int | None = None,
        settings: Settings | None = None,
    ) -> None:
        self.settings = settings or get_settings()
        self.ring = ring or self.settings.ring
        self.order_override = order

    def run(self, statements: list[Statement], jobs: int | None = None) -> list[Report]:
        workers = jobs or self.settings.jobs
        if workers <= 1 or len(statements) <= 1:
            return [self.run_statement(stmt) for stmt in statements]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.run_statement, statements))

    def run_statement(self, stmt: Statement) -> Report:
        token = set_statement(stmt.label)
        started = time.perf_counter()
        try:
            if isinstance(stmt, VerifyEq):
                report = self.verify(stmt)
            elif isinstance(stmt, VerifyCong):
                report = self.congruence(stmt)
            else:
                report = self.scan(stmt)
        finally:
            reset_statement(token)
        elapsed = time.perf_counter() - started
        report.millis = int(elapsed * 1000)
        observe_statement(stmt.kind, report.verdict, elapsed)
        logger.info("statement_checked:%s:%s", stmt.label, report.verdict)
        return report

    def verify(self, stmt: VerifyEq) -> Report:
        ring = stmt.ring or self.ring
        order = self.order_override or stmt.order or self.settings.default_order
        base = {"label": stmt.label, "order": order, "ring": ring.descriptor}
        evaluator = Evaluator(ring, self.settings.precision_retries)
        try:
            lhs = evaluator.evaluate(stmt.lhs, order, ("lhs",))
            rhs = evaluator.evaluate(stmt.rhs, order, ("rhs",))
        except EvaluationError as exc:
            return Report(**base, verdict="fail", detail={"error": str(exc)})
        window = min(order, lhs.prec, rhs.prec)
        mismatch = first_mismatch(lhs, rhs, window)
        if mismatch is not None:
            detail = {"exponent": mismatch, "lhs": str(coeff(lhs, mismatch)), "rhs": str(coeff(rhs, mismatch))}
            return Report(**base, verdict="fail", detail=detail)
        if window < order:
            return Report(**base, verdict="insufficient-precision", detail={"trusted": window})
        return Report(**base, verdict="pass", detail={"trusted": window})

    def congruence(self, stmt: VerifyCong) -> Report:
        order = self.order_override or stmt.order or stmt.step * (stmt.witnesses - 1) + stmt.offset + 1
        base = {"label": stmt.label, "order": order, "ring": f"mod:{stmt.modulus}"}
        try:
            series = evaluate_mod(stmt.expr, order, stmt.modulus, self.settings.precision_retries)
        except EvaluationError as exc:
            return Report(**base, verdict="fail", detail={"error": str(exc)})
        values = _progression_values(series, stmt.step, stmt.offset)
        for index, value in values:
            if value != 0:
                return Report(**base, verdict="fail", detail={"exponent": index, "value": str(value)})
        if len(values) < stmt.witnesses:
            detail = {"witnesses": len(values), "requested": stmt.witnesses}
            return Report(**base, verdict="insufficient-precision", detail=detail)
        return Report(**base, verdict="pass", detail={"witnesses": len(values)})

    def scan(self, stmt: Scan) -> Report:
        count = self.order_override or stmt.count or self.settings.default_order
        moduli = ",".join(str(m) for m in stmt.moduli)
        base = {"label": stmt.label, "order": count, "ring": f"mod:{moduli}"}
        found: list[tuple[int, int, int]] = []
        for modulus in stmt.moduli:
            try:
                series = evaluate_mod(stmt.expr, count, modulus, self.settings.precision_retries)
            except EvaluationError as exc:
                return Report(**base, verdict="fail", detail={"error": str(exc)})
            found.extend(scan_progressions(series, stmt.max_a, modulus, stmt.min_witnesses))
        return Report(**base, verdict="pass", detail={"progressions": [list(t) for t in found]})


def scan_progressions(series: Series, max_a: int, modulus: int, min_witnesses: int) -> list[tuple[int, int, int]]:
    """Minimal (A, B, M) with c(An+B) = 0 in series' ring for every trusted n, at least min_witnesses of them."""
    found: list[tuple[int, int, int]] = []
    for step in range(1, max_a + 1):
        for offset in range(step):
            if any(step % a == 0 and offset % a == b for a, b, _ in found):
                continue
            values = _progression_values(series, step, offset)
            if len(values) >= min_witnesses and all(value == 0 for _, value in values):
                found.append((step, offset, modulus))
    return found


def run(
    statements: list[Statement],
    ring: Ring | None = None,
    order: int | None = None,
    jobs: int | None = None,
) -> list[Report]:
    return Runner(ring=ring, order=order).run(statements, jobs)
