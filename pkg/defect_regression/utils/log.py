import logging
import sys
from typing import Final

LOG_LEVELS: Final = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
}

_HANDLER_NAME: Final = "defect_regression"


def set_logging_config(verbosity: str | int) -> None:
    """Configure the logging of the package.

    The package logger writes to the standard error, so that the standard output of the command line
    interface only contains the reports.

    Args:
        verbosity:
            The minimum level of the messages to display. Either a level name (``"debug"``,
            ``"info"``, ``"warning"``, ``"error"`` or ``"critical"``) or a :mod:`logging` level.
    """
    if isinstance(verbosity, str):
        try:
            level = LOG_LEVELS[verbosity.lower()]
        except KeyError:
            msg = f"Unknown verbosity {verbosity!r}. Expected one of {', '.join(LOG_LEVELS)}."
            raise ValueError(msg) from None
    else:
        level = verbosity

    logger = logging.getLogger("defect_regression")
    logger.setLevel(level)
    for handler in logger.handlers:
        if handler.get_name() == _HANDLER_NAME:
            handler.setLevel(level)
            break
    else:
        handler = logging.StreamHandler(stream=sys.stderr)
        handler.set_name(_HANDLER_NAME)
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
