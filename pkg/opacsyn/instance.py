"""
.. module:: instance

:Synopsis: Problem instances: plant, alphabet partitions, secret and avoid sets

Event sets are kept as frozensets of plant-event *names*; the ``*_events`` properties
return the corresponding :class:`~events.Event` sets of the closed-loop universe.
"""

# Global
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Tuple, Optional, Mapping, List, Any

# Local
from opacsyn.events import Event, EventKind, plant_event, edited_copy, STOP, DECODE, \
    is_reserved_name
from opacsyn.automaton import Automaton, validate
from opacsyn.log import LoggedError, get_logger

log = get_logger(__name__)


@dataclass(frozen=True)
class AlphabetSpec:
    sigma: FrozenSet[str]
    controllable: FrozenSet[str]
    observable: FrozenSet[str]
    edit_observable: FrozenSet[str]
    editable: FrozenSet[str]
    intruder_observable: FrozenSet[str]
    bound: int
    # explicit control commands; empty means all nonempty subsets of the controllable set
    commands: Tuple[Event, ...] = ()
    # editable events sharing the edited copy of another editable event
    aliases: Mapping[str, str] = field(default_factory=dict)

    __hash__ = None  # type: ignore

    @property
    def uncontrollable(self) -> FrozenSet[str]:
        return self.sigma - self.controllable

    @property
    def unobservable(self) -> FrozenSet[str]:
        return self.sigma - self.observable

    def edited_name(self, name: str) -> str:
        return self.aliases.get(name, name)

    def edited_event(self, name: str) -> Event:
        """Edited copy through which the editable event ``name`` is reported."""
        return edited_copy(self.edited_name(name))

    @cached_property
    def plant_events(self) -> FrozenSet[Event]:
        return frozenset(plant_event(name) for name in self.sigma)

    @cached_property
    def edited_events(self) -> FrozenSet[Event]:
        return frozenset(self.edited_event(name) for name in self.editable)

    def events(self, names) -> FrozenSet[Event]:
        return frozenset(plant_event(name) for name in names)

    def universe(self, gamma) -> FrozenSet[Event]:
        return self.plant_events | self.edited_events | frozenset(gamma) | {STOP, DECODE}

    def intruder_visible(self) -> FrozenSet[Event]:
        """Events whose occurrence the intruder observes in the closed loop."""
        return self.events(self.intruder_observable - self.editable) | self.edited_events

    def check(self):
        """
        Raises :class:`~log.LoggedError` if the partitions are inconsistent.
        """
        for name in self.sigma:
            if is_reserved_name(name):
                raise LoggedError(log, "Event name '%s' is reserved (names 'stop', "
                                       "'decode', ending in '#', starting with 'cmd:' "
                                       "or containing '+' cannot be plant events).",
                                  name)
        subsets = [("controllable", self.controllable, "events", self.sigma),
                   ("observable", self.observable, "events", self.sigma),
                   ("edit observable", self.edit_observable, "observable",
                    self.observable),
                   ("editable", self.editable, "edit observable", self.edit_observable),
                   ("intruder observable", self.intruder_observable, "events",
                    self.sigma)]
        for what, subset, where, superset in subsets:
            if not subset <= superset:
                raise LoggedError(log, "The %s events %r are not %s events.", what,
                                  sorted(subset - superset), where)
        if self.bound < 0:
            raise LoggedError(log, "The edit bound must be a nonnegative integer, got %r.",
                              self.bound)
        for alias, target in self.aliases.items():
            if alias not in self.editable or target not in self.editable:
                raise LoggedError(log, "Aliases must relate editable events, got %s: %s.",
                                  alias, target)
            if target in self.aliases:
                raise LoggedError(log, "Alias target '%s' is itself aliased.", target)
        seen = set()
        for gamma in self.commands:
            if gamma.kind is not EventKind.COMMAND or not gamma.enables:
                raise LoggedError(log, "Commands must enable a nonempty set of events, "
                                       "got %s.", gamma)
            if not gamma.enables <= self.controllable:
                raise LoggedError(log, "Command %s enables uncontrollable events %r.",
                                  gamma, sorted(gamma.enables - self.controllable))
            if gamma in seen:
                raise LoggedError(log, "Duplicate command %s.", gamma)
            seen.add(gamma)


@dataclass(frozen=True)
class ProblemInstance:
    plant: Automaton
    spec: AlphabetSpec
    secret: FrozenSet[str] = frozenset()
    avoid: FrozenSet[str] = frozenset()
    requirement: Optional[Automaton] = None
    name: str = "instance"
    # options of the co-synthesis given with the instance
    options: Mapping[str, Any] = field(default_factory=dict)

    __hash__ = None  # type: ignore

    def check(self):
        """
        Raises :class:`~log.LoggedError` if the instance is inconsistent.
        """
        self.spec.check()
        problems: List[str] = []
        for what, automaton in (("plant", self.plant), ("requirement", self.requirement)):
            if automaton is None:
                continue
            problems.extend("%s: %s" % (what, v) for v in validate(automaton))
            if not {e.name for e in automaton.alphabet} <= self.spec.sigma:
                problems.append("%s uses events outside the alphabet: %r" % (
                    what, sorted({e.name for e in automaton.alphabet} - self.spec.sigma)))
        if {e.name for e in self.plant.alphabet} != self.spec.sigma:
            problems.append("the plant alphabet differs from the declared events")
        for what, subset in (("secret", self.secret), ("avoid", self.avoid)):
            if not subset <= set(self.plant.states):
                problems.append("%s states %r are not plant states" %
                                (what, sorted(subset - set(self.plant.states))))
        if problems:
            raise LoggedError(log, "Invalid instance '%s':\n - %s", self.name,
                              "\n - ".join(problems))
