import logging

import pytest

from quartic_iso.core.errors import InvalidIndexError
from quartic_iso.utils.logging_config import (
    PerformanceTimer,
    QuarticLogFormatter,
    get_logger,
    log_failure,
    log_stage,
    setup_logging,
)


@pytest.fixture
def restore_root_handlers():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


def _record(**fields) -> logging.LogRecord:
    record = logging.LogRecord("quartic_iso.test", logging.INFO, __file__, 1, "scan done", None, None)
    for key, value in fields.items():
        setattr(record, key, value)
    return record


def test_formatter_renders_fields_in_fixed_order():
    text = QuarticLogFormatter().format(_record(stage="prime-scan", n=14, d=53, duration_ms=1.5))
    assert text.endswith("[n=14 | d=53 | stage=prime-scan | duration=1.5ms] - scan done")
    assert " - quartic_iso.test - INFO " in text


def test_formatter_without_fields():
    assert QuarticLogFormatter().format(_record()).endswith("INFO - scan done")
    assert QuarticLogFormatter(include_fields=False).format(_record(n=6)).endswith("INFO - scan done")


def test_log_stage_attaches_fields(caplog):
    logger = get_logger("quartic_iso.tests.stage")
    with caplog.at_level(logging.DEBUG, logger="quartic_iso.tests.stage"):
        log_stage(logger, logging.INFO, "bucket", d=5, stage="bucket", chunk=None)
    record = caplog.records[-1]
    assert (record.d, record.stage) == (5, "bucket")
    assert not hasattr(record, "chunk")


def test_log_failure_uses_error_code(caplog):
    logger = get_logger("quartic_iso.tests.failure")
    with caplog.at_level(logging.ERROR, logger="quartic_iso.tests.failure"):
        log_failure(logger, "iso failed", InvalidIndexError("bad index", {"n": 3}), n=3)
    record = caplog.records[-1]
    assert record.error_code == -32001
    assert record.error_type == "InvalidIndexError"
    assert record.getMessage() == "iso failed: bad index"


def test_performance_timer_logs_duration(caplog):
    logger = get_logger("quartic_iso.tests.timer")
    with caplog.at_level(logging.INFO, logger="quartic_iso.tests.timer"):
        with PerformanceTimer(logger, "prime scan", n=6, workers=1):
            pass
    record = caplog.records[-1]
    assert record.getMessage() == "prime scan completed"
    assert record.duration_ms >= 0
    assert record.workers == 1


def test_setup_logging_writes_log_file(tmp_path, restore_root_handlers):
    path = tmp_path / "quartic.log"
    setup_logging(level=logging.INFO, log_file=str(path), force_reconfigure=True)
    logging.getLogger("quartic_iso.tests.file").info("written", extra={"t": 8})
    for handler in restore_root_handlers.handlers:
        handler.flush()
    assert "[t=8] - written" in path.read_text(encoding="utf-8")


def test_setup_logging_reads_level_from_environment(monkeypatch, restore_root_handlers):
    monkeypatch.setenv("QUARTIC_ISO_LOG_LEVEL", "debug")
    setup_logging(force_reconfigure=True)
    assert restore_root_handlers.level == logging.DEBUG
