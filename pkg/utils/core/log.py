"""
Logging helpers.

Library modules only call ``get_logger``; the command line calls
``configure_logging`` once before dispatching.
"""

import logging
import sys

try:
    import structlog
except ImportError:  # pragma: no cover - structlog is a declared dependency
    structlog = None


class KeywordAdapter(logging.LoggerAdapter):
    """Stdlib stand-in for a structlog logger: folds key=value context into the message."""

    def process(self, msg, kwargs):
        reserved = {key: kwargs.pop(key) for key in ("exc_info", "stack_info", "stacklevel", "extra") if key in kwargs}
        if kwargs:
            msg = f"{msg} " + " ".join(f"{key}={value!r}" for key, value in kwargs.items())
        return msg, reserved


def get_logger(name: str):
    """Return a structlog logger, or a keyword-tolerant stdlib logger when structlog is missing."""
    if structlog is not None:
        return structlog.get_logger(name)
    return KeywordAdapter(logging.getLogger(name), {})


def _stderr_logger(*args):
    # resolved per logger so a replaced sys.stderr is honoured
    return structlog.PrintLogger(file=sys.stderr)


def configure_logging(level: str = "WARNING", json: bool = False) -> None:
    """Route structured events to stderr at the given level."""
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ValueError(f"Unsupported log level: {level}")

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric)
    if structlog is None:
        return

    renderer = structlog.processors.JSONRenderer() if json else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
