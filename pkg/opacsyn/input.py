"""
.. module:: input

:Synopsis: Input parsing (instances and automata) and class defaults

Instance files are YAML documents::

    alphabet:
      events: [a, b, u]
      controllable: [a, b]
      observable: [a, b]
    edit:
      observable: [a, b]
      editable: [a]
      bound: 1
      aliases: {}           # optional, e.g. {b_uc: b}
    intruder:
      observable: [a, b]
    commands:               # optional, default: all nonempty sets of controllable events
      - [a]
      - [a, b]
    plant:
      states: [0, 1, 2]
      initial: 0
      marked: [2]
      secret: [1]
      avoid: []
      transitions:
        - [0, a, 1]
        - [1, b, 2]
    requirement:            # optional, same shape as the plant (no secret/avoid)
      ...
    cosynthesis:            # optional, options of the co-synthesis
      procedure: 2

State names are strings (numbers are converted) and cannot contain ``|``.
"""

# Global
import os
import inspect
from typing import Optional, Mapping, Any, Tuple, Dict, List, Callable

# Local
from opacsyn.yaml import yaml_load, yaml_load_file, yaml_positions
from opacsyn.events import Event, event_from_name, plant_event, command, \
    is_reserved_name
from opacsyn.automaton import Automaton, validate_definition, from_triples
from opacsyn.instance import AlphabetSpec, ProblemInstance
from opacsyn.conventions import InstanceKey, instance_keys, product_separator
from opacsyn.tools import check_known_keys, as_name_list
from opacsyn.typing import InfoDict, InfoDictIn, empty_dict, Position
from opacsyn.log import LoggedError, get_logger

log = get_logger(__name__)

_alphabet_keys = ("events", "controllable", "observable")
_edit_keys = ("observable", "editable", "bound", "aliases")
_intruder_keys = ("observable",)
_plant_keys = ("states", "initial", "marked", "secret", "avoid", "transitions")
_requirement_keys = ("events", "states", "initial", "marked", "transitions")
automaton_keys = ("name", "states", "initial", "marked", "alphabet", "transitions",
                  "factors", "parts", "members")

PositionOf = Callable[[Tuple[Any, ...]], Optional[Position]]


def _no_positions(path) -> Optional[Position]:
    return None


def _at(position: Optional[Position]) -> str:
    return (" (line %d, column %d)" % position) if position else ""


def _block(info: InfoDictIn, key: str, position_of: PositionOf, required=True) \
        -> InfoDictIn:
    value = info.get(key)
    if value is None:
        if required:
            raise LoggedError(log, "Missing block '%s' in the instance.", key)
        return empty_dict
    if not isinstance(value, Mapping):
        raise LoggedError(log, "Block '%s'%s must be a mapping.", key,
                          _at(position_of((key,))))
    return value


def _names(block: InfoDictIn, key: str, path: tuple, position_of: PositionOf,
           required=True) -> List[str]:
    if key not in block:
        if required:
            raise LoggedError(log, "Missing key '%s' in '%s'%s.", key, ".".join(path),
                              _at(position_of(path)))
        return []
    return as_name_list(block[key], "'%s'" % ".".join(path + (key,)), log,
                        position_of(path + (key,)))


def _automaton_block(block: InfoDictIn, path: tuple, name: str,
                     alphabet: Mapping[str, Event], position_of: PositionOf) \
        -> Automaton:
    states = _names(block, "states", path, position_of)
    for q in states:
        if product_separator in q:
            raise LoggedError(log, "State name '%s'%s cannot contain '%s'.", q,
                              _at(position_of(path + ("states",))), product_separator)
    initial = _names(block, "initial", path, position_of)
    if len(initial) != 1:
        raise LoggedError(log, "'%s.initial'%s must be a single state.", ".".join(path),
                          _at(position_of(path + ("initial",))))
    marked = _names(block, "marked", path, position_of, required=False)
    triples = []
    for i, triple in enumerate(block.get("transitions") or []):
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise LoggedError(log, "Transition %r%s must be a [source, event, target] "
                                   "triple.", triple,
                              _at(position_of(path + ("transitions", i))))
        triples.append(tuple(str(x) for x in triple))
    violations = validate_definition(states, alphabet, triples, initial[0], marked)
    if violations:
        raise LoggedError(log, "Invalid automaton '%s'%s:\n - %s", ".".join(path),
                          _at(position_of(path)), "\n - ".join(violations))
    return from_triples(name, states, alphabet.values(),
                        ((src, alphabet[e], dst) for src, e, dst in triples),
                        initial[0], marked)


def load_instance_dict(info: InfoDictIn, name: str = "instance",
                       position_of: PositionOf = _no_positions) -> ProblemInstance:
    """
    Builds and validates a :class:`~instance.ProblemInstance` from a parsed document.
    ``position_of`` maps key paths to (line, column) for error messages.
    """
    if not isinstance(info, Mapping):
        raise LoggedError(log, "The instance must be a mapping with blocks %r.",
                          list(instance_keys))
    check_known_keys(log, info, instance_keys, "the instance",
                     lambda k: position_of((k,)))
    blocks = {}
    for key, keys, required in ((InstanceKey.alphabet, _alphabet_keys, True),
                                (InstanceKey.edit, _edit_keys, True),
                                (InstanceKey.intruder, _intruder_keys, True),
                                (InstanceKey.plant, _plant_keys, True),
                                (InstanceKey.requirement, _requirement_keys, False)):
        blocks[key] = _block(info, key, position_of, required)
        check_known_keys(log, blocks[key], keys, "block '%s'" % key,
                         lambda k, _key=key: position_of((_key, k)))
    alphabet_block = blocks[InstanceKey.alphabet]
    sigma = _names(alphabet_block, "events", ("alphabet",), position_of)
    for e in sigma:
        if is_reserved_name(e):
            raise LoggedError(log, "Event name '%s'%s is reserved.", e,
                              _at(position_of(("alphabet", "events"))))
    edit = blocks[InstanceKey.edit]
    bound = edit.get("bound", 1)
    if not isinstance(bound, int) or isinstance(bound, bool) or bound < 0:
        raise LoggedError(log, "'edit.bound'%s must be a nonnegative integer, got %r.",
                          _at(position_of(("edit", "bound"))), bound)
    aliases = edit.get("aliases") or {}
    if not isinstance(aliases, Mapping):
        raise LoggedError(log, "'edit.aliases'%s must be a mapping.",
                          _at(position_of(("edit", "aliases"))))
    commands = []
    for i, enables in enumerate(info.get(InstanceKey.commands) or []):
        names = as_name_list(enables, "command %d" % (i + 1), log,
                             position_of((InstanceKey.commands, i)))
        commands.append(command(names))
    spec = AlphabetSpec(
        sigma=frozenset(sigma),
        controllable=frozenset(_names(alphabet_block, "controllable", ("alphabet",),
                                      position_of, required=False)),
        observable=frozenset(_names(alphabet_block, "observable", ("alphabet",),
                                    position_of, required=False)),
        edit_observable=frozenset(_names(edit, "observable", ("edit",), position_of,
                                         required=False)),
        editable=frozenset(_names(edit, "editable", ("edit",), position_of,
                                  required=False)),
        intruder_observable=frozenset(_names(
            blocks[InstanceKey.intruder], "observable", ("intruder",), position_of,
            required=False)),
        bound=bound, commands=tuple(commands),
        aliases={str(k): str(v) for k, v in aliases.items()})
    events = {e: plant_event(e) for e in sigma}
    plant_block = blocks[InstanceKey.plant]
    plant = _automaton_block(plant_block, ("plant",), "G", events, position_of)
    requirement = None
    requirement_block = blocks[InstanceKey.requirement]
    if requirement_block:
        requirement_events = _names(requirement_block, "events", ("requirement",),
                                    position_of, required=False) or sigma
        unknown = set(requirement_events) - set(sigma)
        if unknown:
            raise LoggedError(log, "Requirement events %r%s are not plant events.",
                              sorted(unknown), _at(position_of(("requirement", "events"))))
        requirement = _automaton_block(
            requirement_block, ("requirement",), "K",
            {e: events[e] for e in requirement_events}, position_of)
    options = info.get(InstanceKey.cosynthesis) or {}
    if not isinstance(options, Mapping):
        raise LoggedError(log, "Block 'cosynthesis'%s must be a mapping.",
                          _at(position_of(("cosynthesis",))))
    inst = ProblemInstance(
        plant=plant, spec=spec,
        secret=frozenset(_names(plant_block, "secret", ("plant",), position_of,
                                required=False)),
        avoid=frozenset(_names(plant_block, "avoid", ("plant",), position_of,
                               required=False)),
        requirement=requirement, name=name, options=dict(options))
    inst.check()
    return inst


def load_instance(text: str, file_name: Optional[str] = None) -> ProblemInstance:
    """Parses an instance document, with line/column information in errors."""
    info = yaml_load(text, file_name=file_name)
    positions = yaml_positions(text)
    name = os.path.splitext(os.path.basename(file_name))[0] if file_name else "instance"
    return load_instance_dict(info, name=name, position_of=positions.get)


def load_instance_file(file_name: str) -> ProblemInstance:
    with open(file_name, "r", encoding="utf-8-sig") as f:
        text = f.read()
    return load_instance(text, file_name=file_name)


def example_instance_file() -> str:
    """Path of the bundled example instance."""
    return os.path.join(os.path.dirname(__file__), "data", "vehicle.yaml")


def load_example_instance() -> ProblemInstance:
    return load_instance_file(example_instance_file())


# Automaton files ########################################################################

def load_automaton_dict(info: InfoDictIn, position_of: PositionOf = _no_positions) \
        -> Automaton:
    """Inverse of :func:`~output.automaton_to_dict`."""
    if not isinstance(info, Mapping):
        raise LoggedError(log, "An automaton must be a mapping with keys %r.",
                          list(automaton_keys))
    check_known_keys(log, info, automaton_keys, "the automaton",
                     lambda k: position_of((k,)))
    alphabet = {name: event_from_name(name)
                for name in _names(info, "alphabet", (), position_of)}
    automaton = _automaton_block(info, (), str(info.get("name", "A")), alphabet,
                                 position_of)
    bookkeeping: Dict[str, Any] = {}
    if info.get("factors"):
        bookkeeping["factors"] = tuple(str(f) for f in info["factors"])
        bookkeeping["parts"] = {str(q): tuple(str(x) for x in p)
                                for q, p in (info.get("parts") or {}).items()}
    if info.get("members"):
        bookkeeping["members"] = {str(q): tuple(str(x) for x in m)
                                  for q, m in info["members"].items()}
    if bookkeeping:
        automaton = Automaton(automaton.name, automaton.states, automaton.alphabet,
                              automaton.transitions, automaton.initial,
                              automaton.marked, **bookkeeping)
    return automaton


def load_automaton(text: str, file_name: Optional[str] = None) -> Automaton:
    info = yaml_load(text, file_name=file_name)
    return load_automaton_dict(info, position_of=yaml_positions(text).get)


def load_automaton_file(file_name: str) -> Automaton:
    with open(file_name, "r", encoding="utf-8-sig") as f:
        text = f.read()
    return load_automaton(text, file_name=file_name)


# Class defaults #########################################################################

class HasDefaults:
    """
    Base class for components that can read settings from a .yaml file
    named after the class and placed next to its module.
    """

    @classmethod
    def get_qualified_class_name(cls) -> str:
        return cls.__name__

    @classmethod
    def get_class_path(cls) -> str:
        """
        Get the file path for the class.
        """
        return os.path.abspath(os.path.dirname(inspect.getfile(cls)))

    @classmethod
    def get_yaml_file(cls) -> Optional[str]:
        """
        Gets the file name of the .yaml file for this component if it exists on file
        (otherwise None).
        """
        filename = os.path.join(cls.get_class_path(), cls.__name__ + ".yaml")
        if os.path.exists(filename):
            return filename
        return None

    @classmethod
    def get_defaults(cls) -> InfoDict:
        """
        Return defaults for this class, with syntax:

        .. code::

           option: value
           [...]

        Defaults of base classes are included, overridden by the class' own.
        """
        defaults: InfoDict = {}
        for base in cls.__bases__:
            if issubclass(base, HasDefaults) and base is not HasDefaults:
                defaults.update(base.get_defaults())
        yaml_file = cls.get_yaml_file()
        if yaml_file:
            defaults.update(yaml_load_file(yaml_file) or {})
        return defaults
