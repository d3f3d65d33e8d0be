"""
.. module:: verifier

:Synopsis: Closed-loop assembly and verification of edit function-supervisor pairs

The closed loop is ``B = G||CE||EC||SC||I||E||S``. A pair is

- *opaque* if the intruder never becomes sure the plant is in a secret state
  (``q_unsafe`` unreachable, equivalently ``decode`` never fires),
- *covert* if the intruder's estimate never becomes empty,

and the closed loop must also be nonblocking and keep away from the states to avoid.
Failed checks come with a shortest witness run, as a tuple of event names.
"""

# Global
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Dict, Tuple, Iterable, Collection

# Local
from opacsyn.events import Event, DECODE, STOP, canonical
from opacsyn.automaton import Automaton, sync_all, from_triples, observer, \
    reachable_states, coreachable_states, run_word
from opacsyn.components import Components, build_components
from opacsyn.conventions import Factor, unsafe_state, empty_belief
from opacsyn.instance import ProblemInstance, AlphabetSpec
from opacsyn.log import LoggedError, get_logger
from opacsyn.typing import InfoDict, Word

log = get_logger(__name__)


@dataclass
class VerificationReport:
    opaque: bool
    covert: bool
    nonblocking: bool
    avoid_unreachable: bool
    closed_loop_states: int
    # shortest run to a violation, per failed check
    witnesses: Dict[str, Word] = field(default_factory=dict)

    __hash__ = None  # type: ignore

    @property
    def passed(self) -> bool:
        return self.opaque and self.covert and self.nonblocking and self.avoid_unreachable

    def checks(self) -> Dict[str, bool]:
        return {"opaque": self.opaque, "covert": self.covert,
                "nonblocking": self.nonblocking,
                "avoid_unreachable": self.avoid_unreachable}

    def to_dict(self) -> InfoDict:
        info: InfoDict = dict(self.checks())
        info["closed_loop_states"] = self.closed_loop_states
        if self.witnesses:
            info["witnesses"] = {k: list(w) for k, w in self.witnesses.items()}
        return info

    def __str__(self):
        lines = ["%-18s %s" % (k + ":", "yes" if v else "NO")
                 for k, v in self.checks().items()]
        lines.append("%-18s %d" % ("closed-loop states:", self.closed_loop_states))
        for k, w in self.witnesses.items():
            lines.append("witness (%s): %s" % (k, " ".join(w) or "<empty run>"))
        return "\n".join(lines)


def assemble_closed_loop(inst: ProblemInstance, e: Automaton, s: Automaton,
                         components: Optional[Components] = None,
                         **component_options) -> Automaton:
    """``G||CE||EC||SC||I||E||S``, reachable part."""
    components = components or build_components(inst, **component_options)
    return sync_all(*components.automata(), e, s, name="B")


def shortest_witness(b: Automaton, targets: Collection[str]) -> Optional[Word]:
    """Event names of a shortest run from the initial state into ``targets``, if any."""
    targets = frozenset(targets)
    parent: Dict[str, Optional[Tuple[str, Event]]] = {b.initial: None}
    queue = deque([b.initial])
    while queue:
        q = queue.popleft()
        if q in targets:
            word = []
            while parent[q] is not None:
                q, e = parent[q]
                word.append(e.name)
            return tuple(reversed(word))
        for e in canonical(b.enabled(q)):
            dst = b.delta(q, e)
            if dst not in parent:
                parent[dst] = (q, e)
                queue.append(dst)
    return None


def replay(b: Automaton, witness: Iterable[str]) -> Optional[str]:
    """State of ``b`` reached by a witness, or None if ``b`` rejects it."""
    return run_word(b, witness)


def _intruder_states(b: Automaton, value: str):
    return [q for q in reachable_states(b) if b.component(q, Factor.intruder) == value]


def check_opacity(b: Automaton) -> Tuple[bool, Optional[Word]]:
    unsafe = _intruder_states(b, unsafe_state)
    decoding = [q for q in reachable_states(b) if DECODE in b.enabled(q)]
    if bool(unsafe) != bool(decoding):
        raise LoggedError(log, "Inconsistent closed loop %s: %d states with the intruder "
                               "in '%s', but decode enabled at %d.",
                          b.name, len(unsafe), unsafe_state, len(decoding))
    if not unsafe:
        return True, None
    return False, shortest_witness(b, unsafe)


def check_covertness(b: Automaton) -> Tuple[bool, Optional[Word]]:
    discovered = _intruder_states(b, empty_belief)
    if not discovered:
        return True, None
    return False, shortest_witness(b, discovered)


def check_avoid_and_nonblocking(b: Automaton, avoid: Collection[str]) \
        -> Tuple[bool, bool, Dict[str, Word]]:
    """
    Whether no reachable state has a plant component in ``avoid`` (the avoid set of the
    plant refined by the requirement), and whether ``b`` is nonblocking.
    """
    witnesses = {}
    reachable = reachable_states(b)
    avoid = frozenset(avoid)
    reached_avoid = [q for q in reachable if b.component(q, Factor.plant) in avoid]
    if reached_avoid:
        witnesses["avoid_unreachable"] = shortest_witness(b, reached_avoid)
    blocking = reachable - coreachable_states(b)
    if blocking:
        witnesses["nonblocking"] = shortest_witness(b, blocking)
    return not reached_avoid, not blocking, witnesses


def check_cso(g: Automaton, inst: ProblemInstance) -> bool:
    """
    Current-state opacity of ``g`` without edits: no reachable estimate of an intruder
    observing the intruder-observable events is a nonempty set of secret states.
    """
    estimator = observer(g, inst.spec.events(inst.spec.intruder_observable))
    return not any(estimator.members[q] and set(estimator.members[q]) <= inst.secret
                   for q in reachable_states(estimator))


def verify(inst: ProblemInstance, e: Automaton, s: Automaton,
           components: Optional[Components] = None,
           **component_options) -> VerificationReport:
    components = components or build_components(inst, **component_options)
    b = assemble_closed_loop(inst, e, s, components=components)
    opaque, opacity_witness = check_opacity(b)
    covert, covertness_witness = check_covertness(b)
    avoid_unreachable, nonblocking, witnesses = \
        check_avoid_and_nonblocking(b, components.avoid)
    if not opaque:
        witnesses["opaque"] = opacity_witness
    if not covert:
        witnesses["covert"] = covertness_witness
    report = VerificationReport(
        opaque=opaque, covert=covert, nonblocking=nonblocking,
        avoid_unreachable=avoid_unreachable, closed_loop_states=len(b.states),
        witnesses=witnesses)
    log.info("Verified %s: %s", b, "passed" if report.passed else "FAILED")
    return report


def intruder_observation(word: Iterable, spec: AlphabetSpec) -> Word:
    """What the intruder observes of a closed-loop run (events or event names)."""
    visible = {e.name for e in spec.intruder_visible()}
    names = (e if isinstance(e, str) else e.name for e in word)
    return tuple(name for name in names if name in visible)


def plant_projection(word: Iterable, spec: AlphabetSpec) -> Word:
    """The plant events of a closed-loop run, in order."""
    names = (e if isinstance(e, str) else e.name for e in word)
    return tuple(name for name in names if name in spec.sigma)


# Reference pairs ########################################################################

def permissive_automaton(alphabet: Collection[Event], name: str) -> Automaton:
    """One marked state with a self-loop on every event: composes neutrally."""
    q = name.lower() + "0"
    return from_triples(name, [q], alphabet, [(q, e, q) for e in canonical(alphabet)],
                        q, [q])


def identity_edit_function(components: Components) -> Automaton:
    """
    Edit function reporting every editable event by its edited copy and passing the other
    edit-observable events through. Needs an edit bound of at least 1.
    """
    spec = components.spec
    if spec.editable and spec.bound < 1:
        raise LoggedError(log, "The identity edit function needs an edit bound of at "
                               "least 1.")
    universe = components.universe
    idle, passed = "e_idle", "e_pass"
    pending = {e: "e_" + e.name for e in canonical(spec.edited_events)}
    states = [idle, passed] + list(pending.values())
    silent = canonical(spec.events(spec.sigma - spec.edit_observable) |
                       set(components.gamma) | {DECODE})
    observed = canonical(spec.events(spec.edit_observable))
    triples = []
    for q in states:
        triples.extend((q, e, q) for e in silent)
        if q == idle:
            for e in observed:
                target = pending[spec.edited_event(e.name)] if e.name in spec.editable \
                    else passed
                triples.append((q, e, target))
        else:
            triples.extend((q, e, q) for e in observed)
    for label, q in pending.items():
        triples.append((q, label, passed))
    triples.append((passed, STOP, idle))
    return from_triples(Factor.edit_function, states, universe, triples, idle, states)
