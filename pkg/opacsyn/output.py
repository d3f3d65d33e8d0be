"""
.. module:: output

:Synopsis: Automaton files and run reports

Automata are dumped as YAML documents with a fixed key order, so that dumping the same
automaton twice gives identical bytes::

    name: S
    states: [s0, s1]
    initial: s0
    marked: [s0, s1]
    alphabet: [a, b#, 'cmd:a', stop]
    transitions:
    - [s0, 'cmd:a', s1]
    ...

Product automata also carry ``factors`` and ``parts``, and belief automata ``members``.
"""

# Global
import os
from typing import Optional, Any

# Local
from opacsyn.automaton import Automaton
from opacsyn.conventions import Extension
from opacsyn.log import HasLogger, LoggedError
from opacsyn.typing import InfoDict, InfoDictIn
from opacsyn.yaml import yaml_dump, yaml_dump_file, OutputError


def automaton_to_dict(a: Automaton) -> InfoDict:
    """Inverse of :func:`~input.load_automaton_dict`."""
    info: InfoDict = {
        "name": a.name,
        "states": list(a.states),
        "initial": a.initial,
        "marked": [q for q in a.states if q in a.marked],
        "alphabet": [e.name for e in a.sorted_alphabet],
        "transitions": [[src, e.name, dst] for src, e, dst in a.triples()]}
    if a.factors:
        info["factors"] = list(a.factors)
        info["parts"] = {q: list(a.parts[q]) for q in a.states}
    if a.members:
        info["members"] = {q: list(a.members[q]) for q in a.states if q in a.members}
    return info


def automaton_to_yaml(a: Automaton) -> str:
    return yaml_dump(automaton_to_dict(a))


def split_prefix(prefix: str):
    """Splits an output prefix into folder and file name prefix."""
    folder = os.path.dirname(prefix) or "."
    return folder, os.path.basename(prefix)


class Output(HasLogger):
    """
    Writes the products of a run as ``<prefix>_<what>.yaml`` files. Existing files are
    only overwritten if ``force`` is set.
    """

    def __init__(self, prefix: str, force: bool = False):
        self.set_logger("output")
        self.folder, self.prefix = split_prefix(prefix)
        self.force = force
        if not os.path.exists(self.folder):
            self.log.debug("Creating output folder '%s'", self.folder)
            try:
                os.makedirs(self.folder)
            except OSError as excpt:
                raise LoggedError(self.log, "Could not create folder '%s': %s",
                                  self.folder, excpt)
        self.log.info("Output to be written into folder '%s', with prefix '%s'",
                      self.folder, self.prefix)

    def add_suffix(self, suffix: str, separator: str = "_") -> str:
        return os.path.join(
            self.folder, self.prefix + (separator if self.prefix else "") + suffix)

    def file_name(self, what: str) -> str:
        return self.add_suffix(what) + Extension.yamls[0]

    def _dump(self, what: str, info: Any, comment: Optional[str] = None) -> str:
        file_name = self.file_name(what)
        try:
            yaml_dump_file(file_name, info, comment=comment,
                           error_if_exists=not self.force)
        except OutputError as excpt:
            raise LoggedError(self.log, "%s. Use --force to overwrite it.", excpt)
        self.log.info("Written %s", file_name)
        return file_name

    def dump_automaton(self, a: Automaton, what: Optional[str] = None,
                       comment: Optional[str] = None) -> str:
        return self._dump(what or a.name, automaton_to_dict(a), comment=comment)

    def dump_report(self, report: InfoDictIn, what: str = "report") -> str:
        return self._dump(what, dict(report))
