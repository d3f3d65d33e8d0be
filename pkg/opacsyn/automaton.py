"""
.. module:: automaton

:Synopsis: Deterministic finite-state automata and their compositional and
           observational operations

All automata are immutable and all operations are pure functions returning new automata.
Transition functions are partial: an event is defined at a state iff it appears in
``transitions[state]``.

Composite states keep track of where they come from:

- a synchronous product has one *factor* per (atomic) operand, and its state ids are
  ``(c1|c2|...)``, with the component states stored in ``parts``;
- an observer's state ids are beliefs ``{m1,m2,...}``, with the member states stored in
  ``members``; the empty belief is ``{}``.
"""

# Global
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property, reduce
from types import MappingProxyType
from typing import Mapping, Tuple, FrozenSet, Iterable, Optional, List, Dict, Set, \
    Callable, Collection, Iterator

# Local
from opacsyn.events import Event, canonical
from opacsyn.conventions import product_separator, belief_separator, empty_belief
from opacsyn.typing import Belief, StateSet, Triple

_no_transitions: Mapping[Event, str] = MappingProxyType({})


class EmptyResult(Exception):
    """Raised when an operation would remove the initial state of an automaton."""


class StateLimitExceeded(Exception):
    """Raised when a construction grows past the number of states it was allowed."""

    def __init__(self, what: str, limit: int):
        super().__init__("%s exceeded %d states" % (what, limit))
        self.what, self.limit = what, limit


def _check_limit(n: int, limit: Optional[int], what: str):
    if limit is not None and n > limit:
        raise StateLimitExceeded(what, limit)


@dataclass(frozen=True)
class Automaton:
    name: str
    states: Tuple[str, ...]
    alphabet: FrozenSet[Event]
    transitions: Mapping[str, Mapping[Event, str]]
    initial: str
    marked: FrozenSet[str]
    factors: Tuple[str, ...] = field(default=(), compare=False)
    parts: Mapping[str, Tuple[str, ...]] = field(default_factory=dict, compare=False)
    members: Mapping[str, Belief] = field(default_factory=dict, compare=False)

    __hash__ = None  # type: ignore

    def delta(self, state: str, event: Event) -> Optional[str]:
        return self.transitions.get(state, _no_transitions).get(event)

    def enabled(self, state: str) -> Mapping[Event, str]:
        return self.transitions.get(state, _no_transitions)

    @cached_property
    def state_index(self) -> Mapping[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def events_by_name(self) -> Mapping[str, Event]:
        return {e.name: e for e in self.alphabet}

    @cached_property
    def sorted_alphabet(self) -> Tuple[Event, ...]:
        return tuple(canonical(self.alphabet))

    def event(self, name: str) -> Event:
        return self.events_by_name[name]

    @property
    def factor_names(self) -> Tuple[str, ...]:
        return self.factors or (self.name,)

    def state_parts(self, state: str) -> Tuple[str, ...]:
        return self.parts.get(state, (state,)) if self.factors else (state,)

    def component(self, state: str, factor: str) -> str:
        """Component state of ``state`` in the given factor of a product."""
        return self.state_parts(state)[self.factor_names.index(factor)]

    def triples(self) -> Iterator[Tuple[str, Event, str]]:
        """Transitions as (source, event, target), in canonical order."""
        for q in self.states:
            out = self.enabled(q)
            for e in sorted(out, key=lambda x: x.name):
                yield q, e, out[e]

    @property
    def num_transitions(self) -> int:
        return sum(len(self.enabled(q)) for q in self.states)

    def __str__(self):
        return "%s (%d states, %d events, %d transitions)" % (
            self.name, len(self.states), len(self.alphabet), self.num_transitions)


# Construction and validation ############################################################

def validate_definition(states: Iterable[str], alphabet: Iterable[str],
                        triples: Iterable[Triple], initial: str,
                        marked: Iterable[str]) -> List[str]:
    """
    Checks the invariants of an automaton given by names. Returns the list of violations
    (empty if valid).
    """
    violations = []
    states = list(states)
    state_set = set(states)
    if len(state_set) != len(states):
        seen: Set[str] = set()
        for q in states:
            if q in seen:
                violations.append("duplicate state '%s'" % q)
            seen.add(q)
    alphabet = set(alphabet)
    if initial not in state_set:
        violations.append("initial state '%s' not in states" % initial)
    for q in marked:
        if q not in state_set:
            violations.append("marked state '%s' not in states" % q)
    targets: Dict[Tuple[str, str], str] = {}
    for src, e, dst in triples:
        for q in (src, dst):
            if q not in state_set:
                violations.append(
                    "endpoint not in states: '%s' in (%s, %s, %s)" % (q, src, e, dst))
        if e not in alphabet:
            violations.append("label not in alphabet: '%s' in (%s, %s, %s)" %
                              (e, src, e, dst))
        previous = targets.setdefault((src, e), dst)
        if previous != dst:
            violations.append("nondeterministic: '%s' from '%s' goes to both '%s' and "
                              "'%s'" % (e, src, previous, dst))
    return violations


def validate(a: Automaton) -> List[str]:
    """Returns the invariant violations of an automaton (empty list if valid)."""
    violations = validate_definition(
        a.states, (e.name for e in a.alphabet),
        ((src, e.name, dst) for src, e, dst in _all_triples(a)), a.initial, a.marked)
    for q in a.transitions:
        if q not in a.state_index:
            violations.append("transitions defined at undeclared state '%s'" % q)
    return violations


def _all_triples(a: Automaton):
    for q, out in a.transitions.items():
        for e, dst in out.items():
            yield q, e, dst


def from_triples(name: str, states: Iterable[str], alphabet: Iterable[Event],
                 triples: Iterable[Tuple[str, Event, str]], initial: str,
                 marked: Iterable[str], **bookkeeping) -> Automaton:
    states = tuple(states)
    transitions: Dict[str, Dict[Event, str]] = {q: {} for q in states}
    for src, e, dst in triples:
        transitions[src][e] = dst
    return Automaton(name=name, states=states, alphabet=frozenset(alphabet),
                     transitions={q: out for q, out in transitions.items() if out},
                     initial=initial, marked=frozenset(marked), **bookkeeping)


# Composition ############################################################################

def product_state_id(parts: Iterable[str]) -> str:
    return "(" + product_separator.join(parts) + ")"


def sync_product(a: Automaton, b: Automaton, name: Optional[str] = None,
                 limit: Optional[int] = None) -> Automaton:
    """
    Synchronous product: shared events move both operands, private events interleave.
    Only the reachable part is built, in breadth-first order.

    :raises StateLimitExceeded: if more than ``limit`` states are reached.
    """
    a_alphabet, b_alphabet = a.alphabet, b.alphabet
    start = (a.initial, b.initial)
    parts = {start: a.state_parts(a.initial) + b.state_parts(b.initial)}
    ids = {start: product_state_id(parts[start])}
    order = [start]
    queue = deque([start])
    transitions: Dict[str, Dict[Event, str]] = {}
    while queue:
        pair = queue.popleft()
        qa, qb = pair
        out_a, out_b = a.enabled(qa), b.enabled(qb)
        out: Dict[Event, str] = {}
        for e in sorted(set(out_a) | set(out_b), key=lambda x: x.name):
            if e in a_alphabet and e in b_alphabet:
                if e not in out_a or e not in out_b:
                    continue
                target = (out_a[e], out_b[e])
            elif e in out_a:
                target = (out_a[e], qb)
            else:
                target = (qa, out_b[e])
            if target not in ids:
                parts[target] = a.state_parts(target[0]) + b.state_parts(target[1])
                ids[target] = product_state_id(parts[target])
                order.append(target)
                queue.append(target)
                _check_limit(len(order), limit, "product %s||%s" % (a.name, b.name))
            out[e] = ids[target]
        if out:
            transitions[ids[pair]] = out
    return Automaton(
        name=name or "%s||%s" % (a.name, b.name),
        states=tuple(ids[p] for p in order),
        alphabet=a_alphabet | b_alphabet,
        transitions=transitions,
        initial=ids[start],
        marked=frozenset(ids[p] for p in order if p[0] in a.marked and p[1] in b.marked),
        factors=a.factor_names + b.factor_names,
        parts={ids[p]: parts[p] for p in order})


def sync_all(*automata: Automaton, name: Optional[str] = None,
             limit: Optional[int] = None) -> Automaton:
    product = reduce(lambda a, b: sync_product(a, b, limit=limit), automata)
    return replace(product, name=name) if name else product


# Observation ############################################################################

def natural_projection(word: Iterable, visible: Collection) -> tuple:
    """Erases the events of ``word`` outside ``visible``, preserving order."""
    return tuple(e for e in word if e in visible)


def _closure(a: Automaton, seeds: Iterable[str], visible: Collection[Event]) -> Belief:
    seen = set(seeds)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for e, dst in a.enabled(q).items():
            if e not in visible and dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return tuple(sorted(seen, key=a.state_index.__getitem__))


def unobservable_reach(a: Automaton, q: str, visible: Collection[Event]) -> Belief:
    """States reachable from ``q`` through events outside ``visible``."""
    return _closure(a, (q,), visible)


def belief_name(members: Iterable[str]) -> str:
    return "{" + belief_separator.join(members) + "}"


def observer(a: Automaton, visible: Collection[Event],
             relabel: Optional[Mapping[Event, Event]] = None,
             name: Optional[str] = None, limit: Optional[int] = None) -> Automaton:
    """
    Reachable part of the observer of ``a`` over the full alphabet.

    Visible events move between beliefs (possibly to the empty belief, which has no
    transitions); invisible events self-loop at every nonempty belief.

    With ``relabel``, events are first mapped to observation labels: the target of a
    label is the closure of the union of the images of its visible members, and labels
    without visible members self-loop. The observer's alphabet is then the set of labels.

    Marked beliefs are those containing a marked state.

    :raises StateLimitExceeded: if more than ``limit`` beliefs are reached.
    """
    visible = frozenset(visible)
    relabel = relabel or {}
    groups: Dict[Event, List[Event]] = {}
    for e in a.sorted_alphabet:
        groups.setdefault(relabel.get(e, e), []).append(e)
    labels = canonical(groups)
    seen_visible = {label: [e for e in groups[label] if e in visible]
                    for label in labels}
    start = _closure(a, (a.initial,), visible)
    ids = {start: belief_name(start)}
    order = [start]
    queue = deque([start])
    transitions: Dict[str, Dict[Event, str]] = {}
    while queue:
        belief = queue.popleft()
        if not belief:
            continue
        out: Dict[Event, str] = {}
        for label in labels:
            moving = seen_visible[label]
            if not moving:
                out[label] = ids[belief]
                continue
            image = {dst for q in belief for e in moving
                     for dst in (a.delta(q, e),) if dst is not None}
            target = _closure(a, image, visible) if image else ()
            if target not in ids:
                ids[target] = belief_name(target) if target else empty_belief
                order.append(target)
                queue.append(target)
                _check_limit(len(order), limit, "observer of %s" % a.name)
            out[label] = ids[target]
        transitions[ids[belief]] = out
    return Automaton(
        name=name or "Obs(%s)" % a.name,
        states=tuple(ids[b] for b in order),
        alphabet=frozenset(labels),
        transitions=transitions,
        initial=ids[start],
        marked=frozenset(ids[b] for b in order if any(q in a.marked for q in b)),
        members={ids[b]: b for b in order})


# Reachability ###########################################################################

def reachable_states(a: Automaton) -> StateSet:
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for dst in a.enabled(q).values():
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return frozenset(seen)


def predecessors(a: Automaton) -> Dict[str, List[Tuple[str, Event]]]:
    preds: Dict[str, List[Tuple[str, Event]]] = {q: [] for q in a.states}
    for src, e, dst in _all_triples(a):
        preds.setdefault(dst, []).append((src, e))
    return preds


def backward_closure(a: Automaton, targets: Iterable[str],
                     through: Callable[[Event], bool] = lambda e: True,
                     preds: Optional[Dict[str, List[Tuple[str, Event]]]] = None) \
        -> StateSet:
    """States from which ``targets`` can be reached using only events in ``through``."""
    preds = predecessors(a) if preds is None else preds
    seen = set(targets)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for src, e in preds.get(q, ()):
            if src not in seen and through(e):
                seen.add(src)
                stack.append(src)
    return frozenset(seen)


def coreachable_states(a: Automaton) -> StateSet:
    return backward_closure(a, a.marked)


def is_nonblocking(a: Automaton) -> bool:
    return reachable_states(a) <= coreachable_states(a)


def is_marker_reachable(a: Automaton) -> bool:
    return bool(reachable_states(a) & a.marked)


def blocking_states(g: Automaton) -> StateSet:
    """States from which no marked state can be reached."""
    return frozenset(g.states) - coreachable_states(g)


# Restriction ############################################################################

def remove_states(a: Automaton, cut: Collection[str]) -> Automaton:
    """
    Deletes ``cut`` and all incident transitions, without trimming.

    :raises EmptyResult: if the initial state is cut.
    """
    cut = frozenset(cut)
    if a.initial in cut:
        raise EmptyResult("initial state '%s' of %s is cut" % (a.initial, a.name))
    if not cut:
        return a
    transitions = {}
    for q, out in a.transitions.items():
        if q in cut:
            continue
        kept = {e: dst for e, dst in out.items() if dst not in cut}
        if kept:
            transitions[q] = kept
    return Automaton(
        name=a.name, states=tuple(q for q in a.states if q not in cut),
        alphabet=a.alphabet, transitions=transitions, initial=a.initial,
        marked=a.marked - cut, factors=a.factors,
        parts={q: p for q, p in a.parts.items() if q not in cut},
        members={q: m for q, m in a.members.items() if q not in cut})


def reachable_part(a: Automaton) -> Automaton:
    return remove_states(a, frozenset(a.states) - reachable_states(a))


def _bfs_order(a: Automaton) -> List[str]:
    order = [a.initial]
    seen = {a.initial}
    for q in order:
        out = a.enabled(q)
        for e in a.sorted_alphabet:
            dst = out.get(e)
            if dst is not None and dst not in seen:
                seen.add(dst)
                order.append(dst)
    return order


def minimize(a: Automaton, state_prefix: Optional[str] = None) -> Automaton:
    """
    Smallest automaton equivalent to the reachable part of ``a``, by partition
    refinement: states are split by marking, then by the blocks their events lead to
    (an undefined event counting as a block of its own), until no block splits.

    Blocks are numbered in breadth-first order, so the initial state comes first. With
    ``state_prefix`` they are named ``<prefix>0``, ``<prefix>1``, ...; otherwise after
    their first state. Beliefs of merged states are joined, and product bookkeeping is
    dropped.
    """
    order = _bfs_order(a)
    events = a.sorted_alphabet
    block = {q: int(q in a.marked) for q in order}
    n_blocks = -1
    while True:
        numbering: Dict[tuple, int] = {}
        refined = {}
        for q in order:
            out = a.enabled(q)
            signature = (block[q],) + tuple(
                block[out[e]] if e in out else -1 for e in events)
            refined[q] = numbering.setdefault(signature, len(numbering))
        block = refined
        if len(numbering) == n_blocks:
            break
        n_blocks = len(numbering)
    representatives: Dict[int, str] = {}
    for q in order:
        representatives.setdefault(block[q], q)
    names = {i: (state_prefix + str(i)) if state_prefix is not None else q
             for i, q in representatives.items()}
    transitions = {}
    for i, q in representatives.items():
        out = {e: names[block[dst]] for e, dst in a.enabled(q).items()}
        if out:
            transitions[names[i]] = out
    members: Dict[str, Belief] = {}
    if a.members:
        for q in order:
            merged = members.get(names[block[q]], ())
            members[names[block[q]]] = merged + tuple(
                m for m in a.members.get(q, ()) if m not in merged)
    return Automaton(
        name=a.name, states=tuple(names[i] for i in range(n_blocks)),
        alphabet=a.alphabet, transitions=transitions,
        initial=names[block[a.initial]],
        marked=frozenset(names[block[q]] for q in order if q in a.marked),
        members=members)


def run_word(a: Automaton, word: Iterable) -> Optional[str]:
    """State reached from the initial state after ``word`` (events or names), or None."""
    q = a.initial
    for e in word:
        if isinstance(e, str):
            e = a.events_by_name.get(e)
            if e is None:
                return None
        q = a.delta(q, e)
        if q is None:
            return None
    return q
