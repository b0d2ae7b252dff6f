import json
import logging

from qlerch.core.logging import JsonFormatter, configure_logging, get_statement, reset_statement, set_statement


def make_record(message: str) -> logging.LogRecord:
    return logging.LogRecord("qlerch.test", logging.INFO, __file__, 1, message, None, None)


def test_formatter_emits_json_with_statement_label():
    token = set_statement("a10n9-closed")
    try:
        payload = json.loads(JsonFormatter().format(make_record("statement_checked")))
    finally:
        reset_statement(token)
    assert payload["statement"] == "a10n9-closed"
    assert payload["message"] == "statement_checked"
    assert payload["level"] == "INFO"
    assert payload["logger"] == "qlerch.test"


def test_statement_defaults_to_dash_outside_a_run():
    assert get_statement() == "-"
    payload = json.loads(JsonFormatter().format(make_record("idle")))
    assert payload["statement"] == "-"


def test_configure_logging_installs_one_json_handler():
    configure_logging("info")
    configure_logging("debug")
    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert isinstance(root.handlers[0].formatter, JsonFormatter)
    assert root.level == logging.DEBUG
