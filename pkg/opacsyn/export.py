"""
.. module:: export

:Synopsis: Graphviz (DOT) rendering of automata

Nodes and edges are emitted in the automaton's canonical order, so the output of the same
automaton is always the same text. Marked states are drawn with a double ring and the
initial state is pointed at by an arrow from an invisible node.
"""

# Global
from collections import OrderedDict
from typing import Iterator, List, Tuple

# Local
from opacsyn.automaton import Automaton
from opacsyn.log import LoggedError, get_logger

log = get_logger(__name__)

graph_styles = ("plain", "merged")


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", r"\\").replace('"', r'\"'))


def _edges(a: Automaton, style: str) -> List[Tuple[str, str, str]]:
    if style == "plain":
        return [(src, dst, e.name) for src, e, dst in a.triples()]
    merged: "OrderedDict[Tuple[str, str], List[str]]" = OrderedDict()
    for src, e, dst in a.triples():
        merged.setdefault((src, dst), []).append(e.name)
    return [(src, dst, ", ".join(labels)) for (src, dst), labels in merged.items()]


def iter_graph(a: Automaton, style: str = "plain") -> Iterator[str]:
    """Lines of the DOT description of ``a``."""
    if style not in graph_styles:
        raise LoggedError(log, "Unknown graph style '%s'. Use one of %r.", style,
                          list(graph_styles))
    yield "digraph %s {\n" % _gvquote(a.name)
    yield "  rankdir=LR;\n"
    yield '  __start [shape=none, label="", width=0];\n'
    for q in a.states:
        shape = "doublecircle" if q in a.marked else "circle"
        yield "  %s [shape=%s];\n" % (_gvquote(q), shape)
    yield "  __start -> %s;\n" % _gvquote(a.initial)
    for src, dst, label in _edges(a, style):
        yield "  %s -> %s [label=%s];\n" % (_gvquote(src), _gvquote(dst), _gvquote(label))
    yield "}\n"


def emit_graph(a: Automaton, style: str = "plain") -> str:
    return "".join(iter_graph(a, style))
