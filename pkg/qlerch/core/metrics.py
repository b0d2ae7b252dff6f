from pathlib import Path

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile

STATEMENTS_TOTAL = Counter(
    "qlerch_statements_total",
    "Total statements executed by the runner.",
    ["kind", "verdict"],
)
STATEMENT_DURATION_SECONDS = Histogram(
    "qlerch_statement_duration_seconds",
    "Wall time spent evaluating and checking one statement.",
    ["kind"],
    buckets=(0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 60.0),
)
SERIES_CACHE_HITS_TOTAL = Counter(
    "qlerch_series_cache_hits_total",
    "Subexpressions served from the per-statement memo.",
)


def observe_statement(kind: str, verdict: str, duration_seconds: float) -> None:
    STATEMENTS_TOTAL.labels(kind=kind, verdict=verdict).inc()
    STATEMENT_DURATION_SECONDS.labels(kind=kind).observe(duration_seconds)


def observe_cache_hit() -> None:
    SERIES_CACHE_HITS_TOTAL.inc()


def write_metrics(path: Path) -> None:
    write_to_textfile(str(path), REGISTRY)
