from typing import Dict, Any, Mapping, Tuple, FrozenSet, Sequence
from types import MappingProxyType

InfoDict = Dict[str, Any]
InfoDictIn = Mapping[str, Any]

# an immutable empty dict (e.g. for argument defaults)
empty_dict: InfoDictIn = MappingProxyType({})

StateSet = FrozenSet[str]
# a belief is a canonically ordered tuple of underlying states
Belief = Tuple[str, ...]
# transition given by names: (source, event, target)
Triple = Tuple[str, str, str]
Word = Sequence[Any]
# position of a YAML node: (line, column), 1-based
Position = Tuple[int, int]
