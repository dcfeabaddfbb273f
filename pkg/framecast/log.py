import logging
import sys
from typing import Optional, TextIO

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


def get_logger(name: str) -> logging.Logger:
    """Child logger under the framecast namespace"""
    if name.startswith("framecast"):
        return logging.getLogger(name)
    return logging.getLogger(f"framecast.{name}")


def configure_logging(level: int = logging.WARNING, stream: Optional[TextIO] = None) -> None:
    """Install a single stderr handler; stdout stays reserved for documents"""
    root = logging.getLogger("framecast")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
