import json

import pytest

from qlerch.config import Settings
from qlerch.qid_dsl.evaluator import EvaluationError
from qlerch.qid_dsl.parser import parse, parse_expr
from qlerch.qid_dsl.reports import render_json, render_table
from qlerch.qid_dsl.runner import Runner, evaluate_mod, scan_progressions
from qlerch.qid_dsl.syntax import BinOp, Num, QPow, VerifyEq
from qlerch.ring_series import Series, modular


def make_runner(**overrides: object) -> Runner:
    defaults: dict[str, object] = {"default_order": 60, "default_ring": "int"}
    defaults.update(overrides)
    return Runner(settings=Settings(**defaults))


def run_one(text: str, **overrides: object):
    (stmt,) = parse(text)
    return make_runner(**overrides).run_statement(stmt)


def test_identity_passes_with_trusted_window():
    report = run_one("[psi] verify psi == E[2]^2 / E[1] order 80")
    assert report.verdict == "pass"
    assert report.detail == {"trusted": 80}
    assert report.order == 80
    assert report.ring == "int"


def test_identity_failure_reports_first_counterexample():
    report = run_one("[bad] verify E[1] == E[1] + q^3")
    assert report.verdict == "fail"
    assert report.detail == {"exponent": 3, "lhs": "0", "rhs": "1"}


def test_missing_factor_of_five_fails_at_constant_term():
    report = run_one("[partition-5n4] verify extract(p_partition, 5, 4) == E[5]^5 / E[1]^6")
    assert report.verdict == "fail"
    assert report.detail["exponent"] == 0
    assert report.detail["lhs"] == "5"


def test_short_window_is_insufficient_precision_not_pass():
    report = run_one("[short] verify q^-1 * E[1] == q^-1 * E[1] order 20", precision_retries=0)
    assert report.verdict == "insufficient-precision"
    assert report.detail == {"trusted": 19}


def test_precision_retries_recover_the_window():
    report = run_one("[short] verify q^-1 * E[1] == q^-1 * E[1] order 20")
    assert report.verdict == "pass"


def test_evaluation_error_becomes_a_failed_report():
    report = run_one("[err] verify ajp(2, 4) == 1")
    assert report.verdict == "fail"
    assert "ajp_requires_coprime_1_le_j_lt_p" in report.detail["error"]


def test_congruence_default_order_covers_requested_witnesses():
    report = run_one("[cong-10n9] congruence phiMock at 10n+9 mod 5 witnesses 40")
    assert report.verdict == "pass"
    assert report.order == 400
    assert report.detail == {"witnesses": 40}
    assert report.ring == "mod:5"


def test_congruence_counterexample():
    report = run_one("[wrong] congruence phiMock at 10n+1 mod 5")
    assert report.verdict == "fail"
    assert report.detail == {"exponent": 1, "value": "1"}


def test_congruence_with_too_few_witnesses_is_insufficient():
    report = run_one("[few] congruence phiMock at 10n+9 mod 5 witnesses 40 order 100")
    assert report.verdict == "insufficient-precision"
    assert report.detail == {"witnesses": 10, "requested": 40}


def test_modular_evaluation_falls_back_to_rationals():
    series = evaluate_mod(parse_expr("(E[1]^5 - E[5]) / 5"), 60, 5, retries=2)
    assert series.ring == modular(5)
    assert series.prec >= 60


def test_modular_evaluation_rejects_denominators_divisible_by_the_modulus():
    with pytest.raises(EvaluationError, match="not_integral_mod_M"):
        evaluate_mod(parse_expr("E[1] / (5 + q)"), 20, 5, retries=0)


def test_congruence_on_a_series_not_integral_at_the_modulus_fails():
    report = run_one("[bad] congruence E[1] / (5 + q) at 5n+2 mod 5 witnesses 3")
    assert report.verdict == "fail"
    assert report.detail["error"] == "not_integral_mod_M at reduce"


def test_partition_congruence_mod_125():
    report = run_one("[p125] congruence p_partition at 125n+99 mod 125 witnesses 3")
    assert report.verdict == "pass"


def test_scan_finds_phi_mock_progression():
    report = run_one("[scan] scan phiMock maxA 10 moduli 5 min 25 count 500")
    assert report.verdict == "pass"
    assert report.detail["progressions"] == [[10, 9, 5]]


def test_scan_finds_ramanujan_progression():
    report = run_one("[scan] scan p_partition maxA 7 moduli 5 min 25 count 300")
    assert report.detail["progressions"] == [[5, 4, 5]]


def test_scan_of_euler_product_finds_both_empty_classes():
    report = run_one("[scan] scan E[1] maxA 6 moduli 5 min 30 count 200")
    assert report.detail["progressions"] == [[5, 3, 5], [5, 4, 5]]


def test_scan_suppresses_sub_progressions():
    series = Series.build(modular(5), 0, [1 if n % 2 == 0 else 0 for n in range(40)], 40)
    assert scan_progressions(series, 8, 5, 3) == [(2, 1, 5)]


def test_scan_requires_minimum_witnesses():
    series = Series.build(modular(5), 0, [0 if n == 7 else 1 for n in range(20)], 20)
    assert scan_progressions(series, 20, 5, 1) == [(step, 7, 5) for step in range(13, 21)]
    assert scan_progressions(series, 20, 5, 2) == []


@pytest.mark.parametrize(
    "source",
    [
        "verify phi == E[2]^5 / (E[1]^2 * E[4]^2)",
        "verify psi == E[2]^2 / E[1]",
        "verify E[1]^3 == jacobiCube",
        "verify E[1]^2 * E[4]^2 / E[2] == cubeAnalog",
        "verify E[1] == E[25] * (T(subst 5) - q - q^2 / T(subst 5))",
        "verify 11 * q + E[1]^6 / E[5]^6 == T^5 - q^2 / T^5",
        "verify T * T(subst 2)^2 - q^2 / (T * T(subst 2)^2) == K",
        "verify extract(p_partition, 5, 4) == 5 * E[5]^5 / E[1]^6",
        "verify extract(phiMock, 2, 1) == E[2]^8 / E[1]^7",
        "verify f(-q, -q^4) * f(-q^2, -q^3) == E[1] * E[5]",
    ],
)
def test_seeded_mutations_are_detected(source: str):
    (stmt,) = parse(source)
    runner = make_runner()
    assert runner.run_statement(stmt).verdict == "pass"
    assert isinstance(stmt, VerifyEq)
    mutated = VerifyEq(stmt.label, stmt.lhs, BinOp("+", stmt.rhs, BinOp("*", Num(2), QPow(7))))
    report = runner.run_statement(mutated)
    assert report.verdict == "fail"
    assert report.detail["exponent"] == 7


def test_parallel_run_preserves_statement_order():
    statements = parse("[a] verify phi == f(q, q)\n[b] verify E[1] == q\n[c] verify psi == f(q, q^3)\n")
    reports = make_runner().run(statements, jobs=3)
    assert [r.label for r in reports] == ["a", "b", "c"]
    assert [r.verdict for r in reports] == ["pass", "fail", "pass"]


def test_reports_render_as_table_and_json():
    reports = make_runner().run(parse("[a] verify phi == f(q, q)\n[b] verify E[1] == q\n"))
    table = render_table(reports)
    assert table.splitlines()[-1] == "1/2 passed"
    assert "q^0: 1 != 0" in table
    payload = json.loads(render_json(reports))
    assert set(payload["reports"][0]) == {"label", "verdict", "order", "ring", "detail", "millis"}
