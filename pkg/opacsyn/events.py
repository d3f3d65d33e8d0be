"""
.. module:: events

:Synopsis: Events of the closed-loop universe and their name encoding

Every event is identified by its name. The kind of an event can always be recovered from
the name: edited copies end in ``#``, control commands start with ``cmd:`` followed by the
``+``-joined, sorted names of the events they enable, and ``stop`` and ``decode`` are
reserved.
"""

# Global
from enum import Enum
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, List

# Local
from opacsyn.conventions import stop_name, decode_name, edited_suffix, \
    command_prefix, command_separator, reserved_event_names


class EventKind(Enum):
    PLANT = "plant"
    EDITED = "edited"
    COMMAND = "command"
    STOP = "stop"
    DECODE = "decode"


@dataclass(frozen=True, eq=False)
class Event:
    name: str
    kind: EventKind = EventKind.PLANT
    # plant event behind an edited copy
    base: Optional[str] = None
    # plant events enabled by a command
    enables: FrozenSet[str] = field(default_factory=frozenset)

    def __eq__(self, other):
        return isinstance(other, Event) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __lt__(self, other):
        return self.name < other.name

    def __str__(self):
        return self.name

    def __repr__(self):
        return "Event(%r)" % self.name


STOP = Event(stop_name, EventKind.STOP)
DECODE = Event(decode_name, EventKind.DECODE)


def plant_event(name: str) -> Event:
    return Event(name)


def edited_copy(base: str) -> Event:
    return Event(base + edited_suffix, EventKind.EDITED, base=base)


def command(enables: Iterable[str]) -> Event:
    enables = frozenset(enables)
    return Event(command_prefix + command_separator.join(sorted(enables)),
                 EventKind.COMMAND, enables=enables)


def event_from_name(name: str) -> Event:
    """Inverse of the name encoding."""
    if name == stop_name:
        return STOP
    if name == decode_name:
        return DECODE
    if name.startswith(command_prefix):
        return command(name[len(command_prefix):].split(command_separator))
    if name.endswith(edited_suffix):
        return edited_copy(name[:-len(edited_suffix)])
    return plant_event(name)


def is_reserved_name(name: str) -> bool:
    return (name in reserved_event_names or name.endswith(edited_suffix) or
            name.startswith(command_prefix) or command_separator in name)


def canonical(events: Iterable[Event]) -> List[Event]:
    return sorted(events, key=lambda e: e.name)


def names(events: Iterable[Event]) -> List[str]:
    return [e.name for e in canonical(events)]
