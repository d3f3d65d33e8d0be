"""
.. module:: tools

:Synopsis: General tools

"""

# Global
import warnings
from inspect import cleandoc
from typing import Iterable, Optional, Sequence

# Local
from opacsyn.log import LoggedError


def create_banner(msg, symbol="*", length=None):
    """
    Puts message into an attention-grabbing banner.

    The banner is delimited by two lines of ``symbol`` (default ``*``)
    of length ``length`` (default: length of message).
    """
    msg_clean = cleandoc(msg)
    if not length:
        length = max(len(line) for line in msg_clean.split("\n"))
    return symbol * length + "\n" + msg_clean + "\n" + symbol * length + "\n"


def fuzzy_match(input_string, choices, n=3, score_cutoff=50):
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore")
        # Suppress message about optional dependency
        from fuzzywuzzy import process as fuzzy_process
    try:
        return list(zip(*(fuzzy_process.extractBests(
            input_string, choices, score_cutoff=score_cutoff))))[0][:n]
    except IndexError:
        return []


def check_known_keys(log, given: Iterable[str], allowed: Sequence[str], where: str,
                     position_of=None):
    """
    Raises :class:`~log.LoggedError` for the first key in ``given`` not in ``allowed``,
    suggesting the closest allowed ones.

    ``position_of`` optionally maps a key to a ``(line, column)`` tuple.
    """
    for key in given:
        if key in allowed:
            continue
        suggestions = fuzzy_match(str(key), list(allowed))
        position = position_of(key) if position_of else None
        raise LoggedError(
            log, "Unknown key '%s' in %s%s.%s", key, where,
            (" (line %d, column %d)" % position) if position else "",
            (" Did you mean %s?" % " or ".join("'%s'" % s for s in suggestions))
            if suggestions else " Allowed keys are %r." % list(allowed))


def as_name_list(value, what: str, log, position: Optional[tuple] = None):
    """Returns a list of strings from a YAML scalar or list, or fails with a message."""
    if value is None:
        return []
    if isinstance(value, (str, int)) and not isinstance(value, bool):
        return [str(value)]
    if isinstance(value, (list, tuple)) and \
            all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in value):
        return [str(v) for v in value]
    raise LoggedError(log, "%s must be a list of names%s, got %r.", what,
                      (" (line %d, column %d)" % position) if position else "", value)
