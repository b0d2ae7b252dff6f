import json
from pathlib import Path

import pytest

from eval.runner import apply_mutation
from qlerch.config import Settings
from qlerch.qid_dsl.parser import parse
from qlerch.qid_dsl.runner import Runner
from qlerch.qid_dsl.syntax import Scan, VerifyCong, VerifyEq

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus" / "paper.qid"
MUTATIONS = json.loads((ROOT / "eval" / "fixtures" / "mutations.json").read_text(encoding="utf-8"))
STATEMENTS = parse(CORPUS.read_text(encoding="utf-8"))
RUNNER = Runner(settings=Settings(default_order=120, default_ring="int"))

REQUIRED_LABELS = {
    "partition-5n4",
    "phi-eta",
    "psi-eta",
    "euler-5-dissection",
    "partition-5-dissection",
    "rr-quintic",
    "rr-k",
    "eta-relation-4q",
    "eta-relation-5q",
    "a10n9-closed",
    "a10n9-expanded",
    "a10n9-mod125",
    "eta-extract-5n1",
    "a110-theta",
    "a110-theta-recast",
    "odd-part-eta",
    "phi-pochhammer",
    "a110-5n2-extract",
    "phi-pair-5n2",
    "psi-pair-5n2",
    "rho-identity",
    "a16-6n3",
    "cong-10n9",
    "cong-50n19",
    "cong-1250n469",
    "cong-a310-10n5",
}


def test_corpus_labels_are_unique():
    labels = [stmt.label for stmt in STATEMENTS]
    assert len(labels) == len(set(labels))


def test_corpus_covers_the_documented_statements():
    labels = {stmt.label for stmt in STATEMENTS}
    assert REQUIRED_LABELS <= labels


def test_corpus_mixes_every_statement_kind():
    kinds = {type(stmt) for stmt in STATEMENTS}
    assert kinds == {VerifyEq, VerifyCong, Scan}


@pytest.mark.parametrize("stmt", STATEMENTS, ids=[stmt.label for stmt in STATEMENTS])
def test_corpus_statement_passes(stmt):
    report = RUNNER.run_statement(stmt)
    assert report.verdict == "pass", report.detail


def test_corpus_scans_report_the_known_progressions():
    scans = {stmt.label: stmt for stmt in STATEMENTS if isinstance(stmt, Scan)}
    assert RUNNER.run_statement(scans["scan-phi"]).detail["progressions"] == [[10, 9, 5]]
    assert RUNNER.run_statement(scans["scan-partition"]).detail["progressions"] == [[5, 4, 5]]


@pytest.mark.parametrize("mutation", MUTATIONS, ids=[m["label"] for m in MUTATIONS])
def test_seeded_corpus_corruption_fails_its_statement(mutation):
    stmt = apply_mutation(CORPUS.read_text(encoding="utf-8"), mutation)
    report = RUNNER.run_statement(stmt)
    assert report.label == mutation["label"]
    assert report.verdict == "fail"
