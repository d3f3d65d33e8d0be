"""
.. module:: log

:Synopsis: Logging layer and the error convention

Every module logs through ``get_logger(__name__)``, which drops the package prefix, so
messages read ``[synthesis] ...``. Errors caused by the user's input are raised as
:class:`LoggedError`: the message is logged where the error is found, and the scripts
turn it into exit code 3 without a traceback.
"""

# Global
import os
import sys
import logging
import traceback
from typing import Optional, Union

# Local
from opacsyn.conventions import debug_env

_package_prefix = "opacsyn."


class LoggedError(Exception):
    """
    Error that has already been reported through a logger.

    ``LoggedError(log, "Unknown event %r.", name)`` logs the formatted message at ERROR
    level and carries it as the exception message.
    """

    def __init__(self, logger: Union[logging.Logger, str], *args, **kwargs):
        if isinstance(logger, str):
            logger = get_logger(logger)
        if not isinstance(logger, logging.Logger):
            raise TypeError("%s needs a logger or a logger name as first argument, "
                            "got %r." % (type(self).__name__, logger))
        msg = ""
        if args:
            logger.error(*args, **kwargs)
            msg = args[0] % args[1:] if len(args) > 1 else str(args[0])
        super().__init__(msg)


def get_logger(name: str) -> logging.Logger:
    if name.startswith(_package_prefix):
        name = name[len(_package_prefix):].split(".")[-1]
    return logging.getLogger(name)


def is_debug(log: Optional[logging.Logger] = None) -> bool:
    return (log or logging.root).getEffectiveLevel() <= logging.DEBUG


class NoLogging:
    """Context manager silencing every message up to ``level`` (inclusive)."""

    def __init__(self, level=logging.WARNING):
        self._level = level

    def __enter__(self):
        if self._level:
            logging.disable(self._level)
        return self

    def __exit__(self, exit_type, exit_value, exit_traceback):
        if self._level:
            logging.disable(logging.NOTSET)


class _LevelFormatter(logging.Formatter):
    """``[name] *ERROR* message``, with a timestamp in front in debug mode."""

    _tags = {logging.CRITICAL: "*ERROR* ", logging.ERROR: "*ERROR* ",
             logging.WARNING: "*WARNING* "}

    def __init__(self, timestamps: bool):
        super().__init__()
        self._timestamps = timestamps

    def format(self, record):
        self._style._fmt = (("%(asctime)s " if self._timestamps else "") +
                            "[%(name)s] " + self._tags.get(record.levelno, "") +
                            "%(message)s")
        return super().format(record)


def exception_handler(exception_type, exception_instance, trace_back):
    log = logging.getLogger("opacsyn")
    if issubclass(exception_type, LoggedError) and not is_debug(log):
        # already reported
        return
    if issubclass(exception_type, KeyboardInterrupt):
        log.critical("Interrupted by the user.")
        return
    log.critical("Unexpected error:\n%s", "".join(traceback.format_exception(
        exception_type, exception_instance, trace_back)))
    if not is_debug(log):
        log.critical("Run again with '--debug' (or '--debug-file file.log') and include "
                     "the output if you report this error.")


def logger_setup(debug: Union[bool, int, None] = None, debug_file: Optional[str] = None):
    """
    Configures the root logger, which module loggers inherit from.

    ``debug`` may be a bool or a ``logging`` level; the ``OPACSYN_DEBUG`` env variable
    forces DEBUG. With ``debug_file``, the full output goes to the file and the console
    stays at INFO. Calling it again reconfigures the existing handlers.
    """
    if debug is True or os.getenv(debug_env):
        level = logging.DEBUG
    elif debug in (False, None):
        level = logging.INFO
    else:
        level = int(debug)
    logging.root.setLevel(level)
    formatter = _LevelFormatter(timestamps=level <= logging.DEBUG)
    for handler in [h for h in logging.root.handlers if getattr(h, "_opacsyn", False)]:
        logging.root.removeHandler(handler)
        handler.close()
    console = logging.StreamHandler(sys.stdout)
    console.setLevel(logging.INFO if debug_file else level)
    handlers = [console]
    if debug_file:
        handlers.append(logging.FileHandler(debug_file, mode="w"))
        handlers[-1].setLevel(level)
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._opacsyn = True  # type: ignore
        logging.root.addHandler(handler)
    sys.excepthook = exception_handler


class HasLogger:
    """
    Mixin giving instances a ``log`` attribute named after them.

    The logger is left out when pickling or copying, and recreated afterwards.
    """

    log: logging.Logger

    def set_logger(self, name: Optional[str] = None):
        self._logger_name = name
        self.log = logging.getLogger((name or type(self).__name__).lower())

    def __getstate__(self):
        return {k: v for k, v in self.__dict__.items() if k != "log"}

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.set_logger(getattr(self, "_logger_name", None))
