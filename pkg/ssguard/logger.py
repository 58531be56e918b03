import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Union

from colorama import Fore, Style, init

init(autoreset=True)

LEVEL_NAMES = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_LEVEL_COLORS = dict(zip(LEVEL_NAMES, (Fore.BLUE, Fore.GREEN, Fore.YELLOW, Fore.RED, Fore.MAGENTA)))
_LINE_FORMAT = "[%(asctime)s %(name)s: %(levelname)s] - %(message)s"
_CLOCK_FORMAT = "%H:%M:%S"


class ColorFormatter(logging.Formatter):
    """Colours the level name; the record itself is left untouched for other handlers."""

    def format(self, record: logging.LogRecord) -> str:
        colour = _LEVEL_COLORS.get(record.levelname)
        if colour is None:
            return super().format(record)
        tinted = logging.makeLogRecord(record.__dict__)
        tinted.levelname = f"{Style.BRIGHT}{colour}{record.levelname}{Style.RESET_ALL}"
        return super().format(tinted)


def _formatter(colored: bool) -> logging.Formatter:
    # colours only on an interactive terminal
    if colored and sys.stdout.isatty():
        return ColorFormatter(_LINE_FORMAT, datefmt=_CLOCK_FORMAT)
    return logging.Formatter(_LINE_FORMAT, datefmt=_CLOCK_FORMAT)


def _file_handler(log_file: Union[str, Path]) -> logging.FileHandler:
    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(log_file)
    handler.setFormatter(_formatter(False))
    return handler


def setup_logger(
    name: str,
    log_file: Optional[Union[str, Path]] = None,
    level: int = logging.INFO,
    fmt_colors: bool = True,
) -> logging.Logger:
    """Return a logger with the specified name and level.

    Without a log file the logger writes to stdout, coloured when stdout is a terminal.
    Calling this twice for the same name does not stack handlers.

    Parameters
    ----------
    name : str
        The name of the logger.
    log_file : str or Path, optional
        Write plain-text records to this file instead of stdout.
    level : int, optional
        The logging level.
    fmt_colors : bool, optional
        Colour the level names on a terminal.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    if not logger.handlers:
        if log_file is not None:
            handler: logging.Handler = _file_handler(log_file)
        else:
            handler = logging.StreamHandler(sys.stdout)
            handler.setFormatter(_formatter(fmt_colors))
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def set_log_level(logger: logging.Logger, level: str):
    """Sets the level from its name as given on the command line."""
    name = level.strip().upper()
    if name not in LEVEL_NAMES:
        raise ValueError(f"Unknown log level '{level}', use one of {', '.join(LEVEL_NAMES)}.")
    logger.setLevel(name)


@contextmanager
def log_to_file(logger: logging.Logger, log_file: Optional[Union[str, Path]]) -> Iterator[None]:
    """Mirrors the logger into a plain-text file for the duration of the block."""
    if log_file is None:
        yield
        return
    handler = _file_handler(log_file)
    logger.addHandler(handler)
    try:
        yield
    finally:
        logger.removeHandler(handler)
        handler.close()


LOGGER = setup_logger("ssguard")
