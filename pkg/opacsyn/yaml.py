"""
.. module:: yaml

:Synopsis: Custom YAML loader and dumper

Customization of YAML's loader and dumper:

1. Syntax errors are reported with line, column and the surrounding lines.
2. The node positions of a document can be indexed by key path, so that
   validation errors of an already-parsed document can point at the offending line.
3. Dumping preserves dict order and writes leaf lists in flow style, so that
   dumps of the same data are byte-identical.

"""
# Global
import os
import yaml
import numpy as np
from yaml.resolver import BaseResolver
from collections import OrderedDict
from typing import Mapping, Optional, Any, Dict, Tuple

# Local
from opacsyn.typing import InfoDict, Position


# Exceptions #############################################################################

class InputSyntaxError(Exception):
    """Syntax error in YAML input."""


class OutputError(Exception):
    """Error when dumping YAML info."""


# Custom loader ##########################################################################

class InstanceLoader(yaml.SafeLoader):
    pass


def _syntax_error(text_stream, errstr, exception):
    mark = getattr(exception, "problem_mark", None)
    if mark is None:
        return InputSyntaxError(errstr)
    line = 1 + mark.line
    column = 1 + mark.column
    signal = " --> "
    signal_right = "    <---- "
    sep = "|"
    context = 4
    lines = text_stream.split("\n")
    pre = ((("\n" + " " * len(signal) + sep).join(
        [""] + lines[max(line - 1 - context, 0):line - 1]))) + "\n"
    errorline = (signal + sep + (lines[line - 1] if line - 1 < len(lines) else "") +
                 signal_right + "column %s" % column)
    post = ((("\n" + " " * len(signal) + sep).join(
        [""] + lines[line:min(line + context, len(lines))]))) + "\n"
    bullet = "\n- "
    return InputSyntaxError(
        errstr + " at line %d, column %d." % (line, column) +
        pre + errorline + post +
        "Some possible causes:" + bullet +
        bullet.join([
            "inconsistent indentation", "'=' instead of ':'",
            "no space after ':'", "a missing ':'", "an empty group"]))


def yaml_load(text_stream, file_name=None) -> InfoDict:
    errstr = "Error in your input file " + (
        "'" + file_name + "'" if file_name else "")
    try:
        return yaml.load(text_stream, InstanceLoader)
    except (yaml.YAMLError, TypeError) as exception:
        raise _syntax_error(text_stream, errstr, exception)


def yaml_load_file(file_name: Optional[str], yaml_text: Optional[str] = None) -> InfoDict:
    """Wrapper to load a yaml file."""
    if yaml_text is None:
        assert file_name
        with open(file_name, "r", encoding="utf-8-sig") as file:
            yaml_text = "".join(file.readlines())
    return yaml_load(yaml_text, file_name=file_name)


def yaml_positions(text_stream) -> Dict[Tuple[Any, ...], Position]:
    """
    Returns a map from key paths (tuples of mapping keys and sequence indices) to the
    1-based (line, column) of the corresponding node.

    Returns an empty map if the text cannot be composed; syntax errors are reported by
    :func:`yaml_load`.
    """
    try:
        root = yaml.compose(text_stream, InstanceLoader)
    except yaml.YAMLError:
        return {}
    positions: Dict[Tuple[Any, ...], Position] = {}

    def walk(node, path):
        positions[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                key = key_node.value
                walk(value_node, path + (key,))
                # keep the key position, more useful in messages
                positions[path + (key,)] = (key_node.start_mark.line + 1,
                                            key_node.start_mark.column + 1)
        elif isinstance(node, yaml.SequenceNode):
            for i, item in enumerate(node.value):
                walk(item, path + (i,))

    if root is not None:
        walk(root, ())
    return positions


# Custom dumper ##########################################################################

def yaml_dump(info: Mapping[str, Any], stream=None, **kwds):
    class CustomDumper(yaml.SafeDumper):
        pass

    # Make sure dicts preserve order when dumped
    def _dict_representer(dumper, data):
        return dumper.represent_mapping(
            BaseResolver.DEFAULT_MAPPING_TAG, data.items())

    CustomDumper.add_representer(dict, _dict_representer)
    CustomDumper.add_representer(OrderedDict, _dict_representer)

    # Dump tuples as yaml "sequences"
    def _tuple_representer(dumper, data):
        return dumper.represent_sequence(
            BaseResolver.DEFAULT_SEQUENCE_TAG, list(data))

    CustomDumper.add_representer(tuple, _tuple_representer)

    def _numpy_int_representer(dumper, data):
        return dumper.represent_int(int(data))

    CustomDumper.add_representer(np.int64, _numpy_int_representer)

    def _numpy_bool_representer(dumper, data):
        return dumper.represent_bool(bool(data))

    CustomDumper.add_representer(np.bool_, _numpy_bool_representer)

    kwds.setdefault("default_flow_style", None)
    kwds.setdefault("sort_keys", False)
    kwds.setdefault("width", 88)
    return yaml.dump(info, stream, CustomDumper, allow_unicode=True, **kwds)


def prepare_comment(comment):
    """Prepares a string (maybe containing multiple lines) to be written as a comment."""
    return "\n".join(
        ["# " + line.lstrip("#") for line in comment.split("\n") if line]) + "\n"


def yaml_dump_file(file_name: str, data, comment=None, error_if_exists=True):
    if error_if_exists and os.path.isfile(file_name):
        raise OutputError("File exists: '%s'" % file_name)
    with open(file_name, "w+", encoding="utf-8") as f:
        if comment:
            f.write(prepare_comment(comment))
        f.write(yaml_dump(data))
