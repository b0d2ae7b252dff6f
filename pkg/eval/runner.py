import argparse
import json
import time
from pathlib import Path
from typing import Callable, Dict, List

from qlerch.config import Settings
from qlerch.core.logging import configure_logging
from qlerch.qid_dsl.parser import parse
from qlerch.qid_dsl.reports import Report
from qlerch.qid_dsl.runner import Runner
from qlerch.qid_dsl.syntax import Scan, Statement, VerifyEq
from qlerch.ring_series import INTEGER

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus" / "paper.qid"
FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"
MUTATIONS_FIXTURE = FIXTURES_DIR / "mutations.json"

THEOREM_BUDGET_SECONDS = 10.0
MOD_25_BUDGET_SECONDS = 30.0
MOD_125_BUDGET_SECONDS = 60.0
A_10_BUDGET_SECONDS = 30.0
CORPUS_BUDGET_SECONDS = 120.0

SCAN_EXPECTATIONS = {
    "scan-phi": [[10, 9, 5]],
    "scan-partition": [[5, 4, 5]],
}


def load_fixture(path: Path):
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def load_corpus(path: Path = CORPUS) -> Dict[str, Statement]:
    return {stmt.label: stmt for stmt in parse(path.read_text(encoding="utf-8"))}


def apply_mutation(text: str, mutation: Dict[str, str]) -> Statement:
    """Corrupt the corpus text once and return the mutated statement."""
    if text.count(mutation["find"]) != 1:
        raise ValueError(f"mutation_target_not_unique:{mutation['label']}")
    mutated = text.replace(mutation["find"], mutation["replace"])
    for stmt in parse(mutated):
        if stmt.label == mutation["label"]:
            return stmt
    raise ValueError(f"mutation_label_missing:{mutation['label']}")


def timed(check: Callable[[], List[Report]], budget: float) -> Dict[str, object]:
    started = time.perf_counter()
    reports = check()
    seconds = time.perf_counter() - started
    failures = [report.model_dump() for report in reports if report.verdict != "pass"]
    return {
        "passed": not failures and seconds <= budget,
        "seconds": round(seconds, 3),
        "budget_seconds": budget,
        "statements": len(reports),
        "failures": failures,
    }


def evaluate_theorem(runner: Runner, corpus: Dict[str, Statement]) -> Dict[str, object]:
    stmt = corpus["a10n9-closed"]
    assert isinstance(stmt, VerifyEq)
    at_300 = VerifyEq(stmt.label, stmt.lhs, stmt.rhs, order=300, ring=INTEGER)
    return timed(lambda: [runner.run_statement(at_300)], THEOREM_BUDGET_SECONDS)


def evaluate_labels(runner: Runner, corpus: Dict[str, Statement], labels: List[str], budget: float) -> Dict[str, object]:
    return timed(lambda: [runner.run_statement(corpus[label]) for label in labels], budget)


def evaluate_corpus(runner: Runner, corpus: Dict[str, Statement]) -> Dict[str, object]:
    return timed(lambda: runner.run(list(corpus.values())), CORPUS_BUDGET_SECONDS)


def evaluate_discovery(runner: Runner, corpus: Dict[str, Statement]) -> Dict[str, object]:
    failures = []
    for label, expected in SCAN_EXPECTATIONS.items():
        stmt = corpus[label]
        assert isinstance(stmt, Scan)
        report = runner.run_statement(stmt)
        found = report.detail.get("progressions")
        if found != expected:
            failures.append({"label": label, "expected": expected, "found": found})
    return {"passed": not failures, "failures": failures}


def evaluate_mutations(runner: Runner, mutations: List[Dict[str, str]]) -> Dict[str, object]:
    text = CORPUS.read_text(encoding="utf-8")
    failures = []
    for mutation in mutations:
        report = runner.run_statement(apply_mutation(text, mutation))
        if report.verdict != "fail" or report.label != mutation["label"]:
            failures.append({"label": mutation["label"], "verdict": report.verdict})
    return {"passed": not failures, "mutations": len(mutations), "failures": failures}


def run_eval() -> Dict[str, object]:
    runner = Runner(settings=Settings(default_order=120, default_ring="int"))
    corpus = load_corpus()
    results = {
        "theorem_order_300": evaluate_theorem(runner, corpus),
        "mod_25_congruences": evaluate_labels(
            runner, corpus, ["cong-50n19", "cong-50n39", "cong-50n49"], MOD_25_BUDGET_SECONDS
        ),
        "mod_125_congruences": evaluate_labels(
            runner, corpus, ["cong-1250n469", "cong-1250n969", "cong-1250n1219"], MOD_125_BUDGET_SECONDS
        ),
        "a_10_congruences": evaluate_labels(runner, corpus, ["cong-a110-10n5", "cong-a310-10n5"], A_10_BUDGET_SECONDS),
        "corpus": evaluate_corpus(runner, corpus),
        "discovery": evaluate_discovery(runner, corpus),
        "mutations": evaluate_mutations(runner, load_fixture(MUTATIONS_FIXTURE)),
    }
    return results


def print_results(results: Dict[str, object]) -> None:
    print(json.dumps(results, indent=2, sort_keys=True))


def check_thresholds(results: Dict[str, object]) -> bool:
    return all(bool(section["passed"]) for section in results.values())  # type: ignore[index]


def main() -> None:
    parser = argparse.ArgumentParser(prog="eval")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("run")
    args = parser.parse_args()
    if args.command == "run":
        configure_logging("WARNING")
        results = run_eval()
        print_results(results)
        if not check_thresholds(results):
            raise SystemExit(1)


if __name__ == "__main__":
    main()
