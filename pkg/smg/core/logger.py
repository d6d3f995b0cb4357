import logging
import os
from collections.abc import Iterable

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] (%(name)s): %(message)s"


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)

    if not logger.handlers:
        level = os.getenv("SMG_LOG_LEVEL", "INFO").upper()
        logger.setLevel(level)

        handler = logging.StreamHandler()
        handler.setLevel(level)
        formatter = logging.Formatter(LOG_FORMAT)
        handler.setFormatter(formatter)

        logger.addHandler(handler)
        logger.propagate = False

    return logger


def attach_trace_file(path: str, names: Iterable[str]) -> logging.Handler:
    """Mirror the named loggers into one line-oriented trace file at DEBUG level."""
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.setLevel(logging.DEBUG)
    for name in names:
        logger = get_logger(name)
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
    return handler
