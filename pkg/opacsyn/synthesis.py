"""
.. module:: synthesis

:Synopsis: Partial-observation synthesis of local supervisors

Given a plant automaton ``p``, a set of bad states and a control constraint, builds a
supervisor ``S`` over the full alphabet of ``p`` such that ``p||S`` never reaches a bad
state and is marker-reachable or nonblocking.

The supervisor's states are beliefs (sets of plant states consistent with its
observations), and its control decisions depend on the belief only. The result is safe
but not necessarily the most permissive one.

The algorithm:

1. close the bad states under uncontrollable predecessors;
2. build the belief automaton of ``p`` over the observable events;
3. iterate to a fixpoint: a belief is illegal if it contains a closed-bad state, if an
   uncontrollable event leads to an illegal belief or (with ``prune_dead_ends``) if all of
   its members are unmarked dead ends once controllable events into illegal beliefs are
   disabled;
4. compute the closed loop of plant states and legal beliefs; for the nonblocking goal,
   beliefs of blocking closed-loop states are declared illegal and 3-4 repeated;
5. complete the surviving belief automaton over the full alphabet.
"""

# Global
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Dict, Set, Tuple, List, Collection

# Local
from opacsyn.events import Event, STOP, canonical
from opacsyn.automaton import Automaton, observer, backward_closure
from opacsyn.instance import AlphabetSpec
from opacsyn.conventions import empty_belief
from opacsyn.log import LoggedError, get_logger

log = get_logger(__name__)


class SynthesisGoal(Enum):
    MARKER_REACHABLE = "MarkerReachable"
    NONBLOCKING = "Nonblocking"


class EmptyReason(Enum):
    INITIAL_BELIEF_FORBIDDEN = "InitialBeliefForbidden"
    NO_MARKER_REACHABLE = "NoMarkerReachable"
    NONBLOCKING_FIXPOINT_EMPTY = "NonblockingFixpointEmpty"


@dataclass(frozen=True)
class ControlConstraint:
    controllable: FrozenSet[Event]
    observable: FrozenSet[Event]

    def check(self):
        if not self.controllable <= self.observable:
            raise LoggedError(log, "Controllable events must be observable, but %r are "
                                   "not.", sorted(e.name for e in
                                                  self.controllable - self.observable))


def supervisor_constraint(spec: AlphabetSpec, gamma: Collection[Event]) \
        -> ControlConstraint:
    """The supervisor issues commands, and observes them and the edited observations."""
    return ControlConstraint(
        controllable=frozenset(gamma),
        observable=(spec.events(spec.observable - spec.editable) | spec.edited_events |
                    frozenset(gamma)))


def edit_constraint(spec: AlphabetSpec) -> ControlConstraint:
    """The edit function emits edited copies and ``stop``."""
    return ControlConstraint(
        controllable=spec.edited_events | {STOP},
        observable=spec.events(spec.edit_observable) | spec.edited_events | {STOP})


@dataclass(frozen=True)
class SynthesisOutcome:
    supervisor: Optional[Automaton] = None
    reason: Optional[EmptyReason] = None
    # number of legality fixpoints computed
    rounds: int = 0

    __hash__ = None  # type: ignore

    @property
    def is_empty(self) -> bool:
        return self.supervisor is None

    def __str__(self):
        return ("Empty (%s)" % self.reason.value) if self.is_empty \
            else str(self.supervisor)


def uncontrollable_bad_closure(p: Automaton, bad: Collection[str],
                               constraint: ControlConstraint) -> FrozenSet[str]:
    """Least superset of ``bad`` containing every uncontrollable predecessor."""
    controllable = constraint.controllable
    return backward_closure(p, bad, through=lambda e: e not in controllable)


class _BeliefGame:
    """Belief automaton of a plant, with the legality fixpoint on top."""

    def __init__(self, p: Automaton, constraint: ControlConstraint,
                 prune_dead_ends: bool, state_limit: Optional[int] = None):
        self.p = p
        self.controllable = constraint.controllable
        self.observable = constraint.observable & p.alphabet
        self.prune_dead_ends = prune_dead_ends
        estimator = observer(p, self.observable, limit=state_limit)
        self.initial = estimator.initial
        self.beliefs = [b for b in estimator.states if b != empty_belief]
        self.members = estimator.members
        observable = canonical(self.observable)
        self.successors: Dict[str, Dict[Event, str]] = {
            b: {e: estimator.delta(b, e) for e in observable
                if estimator.delta(b, e) not in (None, empty_belief)}
            for b in self.beliefs}

    def legal_fixpoint(self, illegal: Set[str]) -> Set[str]:
        changed = True
        while changed:
            changed = False
            for b in self.beliefs:
                if b in illegal:
                    continue
                if any(t in illegal for e, t in self.successors[b].items()
                       if e not in self.controllable) or \
                        (self.prune_dead_ends and self._is_dead_end(b, illegal)):
                    illegal.add(b)
                    changed = True
        return illegal

    def _is_dead_end(self, b: str, illegal: Set[str]) -> bool:
        successors = self.successors[b]
        for q in self.members[b]:
            if q in self.p.marked:
                return False
            for e in self.p.enabled(q):
                if e not in self.controllable or successors[e] not in illegal:
                    return False
        return True

    def closed_loop(self, illegal: Set[str]) \
            -> Tuple[List[Tuple[str, str]], Dict[Tuple[str, str], List[Tuple[str, str]]]]:
        """Reachable (plant state, belief) pairs and their predecessors."""
        start = (self.p.initial, self.initial)
        order = [start]
        preds: Dict[Tuple[str, str], List[Tuple[str, str]]] = {start: []}
        queue = deque([start])
        while queue:
            pair = queue.popleft()
            q, b = pair
            for e, q_next in self.p.enabled(q).items():
                if e in self.observable:
                    b_next = self.successors[b][e]
                    if b_next in illegal:
                        continue
                else:
                    b_next = b
                target = (q_next, b_next)
                if target not in preds:
                    preds[target] = []
                    order.append(target)
                    queue.append(target)
                preds[target].append(pair)
        return order, preds

    def belief_automaton(self, illegal: Set[str], name: str) -> Automaton:
        """Surviving beliefs reachable from the initial one, over the observable events."""
        order = [self.initial]
        seen = {self.initial}
        queue = deque(order)
        transitions: Dict[str, Dict[Event, str]] = {}
        while queue:
            b = queue.popleft()
            out = {e: t for e, t in self.successors[b].items() if t not in illegal}
            for t in out.values():
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
            if out:
                transitions[b] = out
        return Automaton(name=name, states=tuple(order),
                         alphabet=frozenset(self.observable), transitions=transitions,
                         initial=self.initial, marked=frozenset(order),
                         members={b: self.members[b] for b in order})


def synthesize(p: Automaton, bad: Collection[str], constraint: ControlConstraint,
               goal: SynthesisGoal, prune_dead_ends: bool = True, name: str = "S",
               state_prefix: str = "s", state_limit: Optional[int] = None) \
        -> SynthesisOutcome:
    """
    Synthesizes a supervisor for ``p`` over ``constraint`` such that ``p||S`` avoids
    ``bad`` and reaches the ``goal``. Empty outcomes carry an :class:`EmptyReason`.

    :raises StateLimitExceeded: if the belief automaton has more than ``state_limit``
        states.
    """
    constraint.check()
    closure = uncontrollable_bad_closure(p, bad, constraint)
    game = _BeliefGame(p, constraint, prune_dead_ends, state_limit)
    log.debug("Synthesizing %s: %d plant states, %d bad (%d after closure), "
              "%d beliefs.", name, len(p.states), len(bad), len(closure),
              len(game.beliefs))
    illegal = {b for b in game.beliefs if any(q in closure for q in game.members[b])}
    rounds = 0
    while True:
        illegal = game.legal_fixpoint(illegal)
        rounds += 1
        if game.initial in illegal:
            reason = EmptyReason.INITIAL_BELIEF_FORBIDDEN if rounds == 1 \
                else EmptyReason.NONBLOCKING_FIXPOINT_EMPTY
            log.debug("%s is empty: %s", name, reason.value)
            return SynthesisOutcome(reason=reason, rounds=rounds)
        pairs, preds = game.closed_loop(illegal)
        marked = [pair for pair in pairs if pair[0] in p.marked]
        if goal is SynthesisGoal.MARKER_REACHABLE:
            if not marked:
                log.debug("%s is empty: no marker reachable", name)
                return SynthesisOutcome(reason=EmptyReason.NO_MARKER_REACHABLE,
                                        rounds=rounds)
            break
        coreachable = set(marked)
        stack = list(marked)
        while stack:
            for pred in preds[stack.pop()]:
                if pred not in coreachable:
                    coreachable.add(pred)
                    stack.append(pred)
        blocking = {b for q, b in pairs if (q, b) not in coreachable}
        if not blocking:
            break
        log.debug("Round %d: forbidding %d beliefs with blocking states.",
                  rounds, len(blocking))
        illegal |= blocking
    supervisor = lift_to_full_alphabet(game.belief_automaton(illegal, name), constraint,
                                       p.alphabet, state_prefix=state_prefix)
    log.debug("Synthesized %s after %d round(s).", supervisor, rounds)
    return SynthesisOutcome(supervisor=supervisor, rounds=rounds)


def lift_to_full_alphabet(belief_automaton: Automaton, constraint: ControlConstraint,
                          full_alphabet: Collection[Event],
                          state_prefix: Optional[str] = None) -> Automaton:
    """
    Completes a belief automaton over the full alphabet: uncontrollable observable events
    undefined at a belief self-loop there, unobservable events self-loop everywhere, and
    every state is marked.

    With ``state_prefix``, states are renamed ``<prefix>0``, ``<prefix>1``, ... in order.
    """
    full_alphabet = frozenset(full_alphabet)
    names = {b: (state_prefix + str(i)) if state_prefix is not None else b
             for i, b in enumerate(belief_automaton.states)}
    transitions: Dict[str, Dict[Event, str]] = {}
    for b in belief_automaton.states:
        out: Dict[Event, str] = {}
        for e in canonical(full_alphabet):
            target = belief_automaton.delta(b, e) if e in constraint.observable else None
            if target is not None:
                out[e] = names[target]
            elif e not in constraint.controllable:
                out[e] = names[b]
        transitions[names[b]] = out
    return Automaton(
        name=belief_automaton.name,
        states=tuple(names[b] for b in belief_automaton.states),
        alphabet=full_alphabet, transitions=transitions,
        initial=names[belief_automaton.initial],
        marked=frozenset(names.values()),
        members={names[b]: m for b, m in belief_automaton.members.items()})


def check_constraint_shape(s: Automaton, constraint: ControlConstraint) -> List[str]:
    """
    Returns the violations of the shape a supervisor must have under ``constraint``:
    every uncontrollable event is defined everywhere, and unobservable events can only
    self-loop.
    """
    violations = []
    for q in s.states:
        out = s.enabled(q)
        for e in s.sorted_alphabet:
            if e not in constraint.controllable and e not in out:
                violations.append("controllability shape: '%s' undefined at '%s'" %
                                  (e, q))
            if e not in constraint.observable and e in out and out[e] != q:
                violations.append("observability shape: '%s' moves '%s' to '%s'" %
                                  (e, q, out[e]))
    return violations
