import logging

import pytest

from ssguard.logger import LOGGER, log_to_file, set_log_level, setup_logger


@pytest.fixture
def restore_level():
    level = LOGGER.level
    yield
    LOGGER.setLevel(level)


def test_set_log_level_accepts_names(restore_level):
    set_log_level(LOGGER, "debug")
    assert LOGGER.level == logging.DEBUG
    with pytest.raises(ValueError, match="Unknown log level"):
        set_log_level(LOGGER, "verbose")


def test_log_to_file_is_scoped(tmp_path, restore_level):
    path = tmp_path / "logs" / "run.log"
    handlers = list(LOGGER.handlers)
    set_log_level(LOGGER, "INFO")
    with log_to_file(LOGGER, path):
        LOGGER.info("nodal scan finished")
    LOGGER.info("not mirrored")
    assert LOGGER.handlers == handlers
    text = path.read_text()
    assert "ssguard: INFO] - nodal scan finished" in text
    assert "not mirrored" not in text


def test_setup_logger_does_not_stack_handlers():
    first = setup_logger("ssguard.test-stack")
    second = setup_logger("ssguard.test-stack")
    assert first is second
    assert len(second.handlers) == 1
