"""Logging configuration. Call setup_logging() once at every entry point."""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Union

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def setup_logging(log_dir: str = "logs", level: Union[int, str] = logging.INFO,
                  console: bool = True) -> None:
    """Log to a rotating file (logs/ident.log, 5 MB x 5) and, unless console=False, stderr.

    numpy/scipy RuntimeWarnings (overflow during evolution, ill-conditioned
    solves) are routed through the "py.warnings" logger into the same file.
    """
    root = logging.getLogger()
    if root.handlers:  # already configured (tests, repeated calls)
        return
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    root.setLevel(level)
    fmt = logging.Formatter(LOG_FORMAT)

    Path(log_dir).mkdir(parents=True, exist_ok=True)
    file_handler = RotatingFileHandler(Path(log_dir) / "ident.log", maxBytes=5_000_000, backupCount=5,
                                       encoding="utf-8")
    file_handler.setFormatter(fmt)
    root.addHandler(file_handler)

    if console:
        stream = logging.StreamHandler()
        stream.setFormatter(fmt)
        root.addHandler(stream)

    logging.captureWarnings(True)
    logging.getLogger(__name__).info("=== session start (level %s, logs in %s) ===",
                                     logging.getLevelName(level), log_dir)
