from collections import deque
from itertools import product
from typing import Optional, Sequence, List

import numpy as np

from opacsyn.events import Event, plant_event, command, canonical
from opacsyn.automaton import Automaton, from_triples
from opacsyn.instance import AlphabetSpec, ProblemInstance
from opacsyn.synthesis import ControlConstraint


def hand_automaton(name, states, events, transitions, initial, marked) -> Automaton:
    """Automaton from plain names: ``transitions`` as (source, event name, target)."""
    alphabet = {e: plant_event(e) for e in events}
    return from_triples(name, [str(q) for q in states], alphabet.values(),
                        [(str(src), alphabet[e], str(dst)) for src, e, dst in transitions],
                        str(initial), [str(q) for q in marked])


def hand_instance(states, transitions, initial, marked, events, controllable,
                  observable, edit_observable=(), editable=(), intruder_observable=(),
                  bound=1, commands=(), secret=(), avoid=(), aliases=None,
                  requirement=None) -> ProblemInstance:
    spec = AlphabetSpec(
        sigma=frozenset(events), controllable=frozenset(controllable),
        observable=frozenset(observable), edit_observable=frozenset(edit_observable),
        editable=frozenset(editable), intruder_observable=frozenset(intruder_observable),
        bound=bound, commands=tuple(command(c) for c in commands),
        aliases=dict(aliases or {}))
    plant = hand_automaton("G", states, events, transitions, initial, marked)
    inst = ProblemInstance(plant=plant, spec=spec,
                           secret=frozenset(str(q) for q in secret),
                           avoid=frozenset(str(q) for q in avoid),
                           requirement=requirement, name="hand")
    inst.check()
    return inst


# Random generators ######################################################################

def random_subset(rng: np.random.Generator, items: Sequence, p=0.5) -> List:
    return [x for x in items if rng.random() < p]


def random_automaton(rng: np.random.Generator, n_states: int, events: Sequence[Event],
                     name="A", p_edge=0.5) -> Automaton:
    states = [str(i) for i in range(n_states)]
    triples = [(q, e, states[rng.integers(n_states)])
               for q in states for e in events if rng.random() < p_edge]
    marked = random_subset(rng, states, 0.3) or [states[-1]]
    return from_triples(name, states, events, triples, states[0], marked)


def random_spec(rng: np.random.Generator, n_events: int, max_bound: int = 2,
                explicit_commands: bool = False) -> AlphabetSpec:
    sigma = ["a", "b", "c", "d", "e", "f"][:n_events]
    controllable = random_subset(rng, sigma) or [sigma[0]]
    observable = random_subset(rng, sigma, 0.7)
    edit_observable = random_subset(rng, observable, 0.7)
    editable = random_subset(rng, edit_observable, 0.6)
    commands = ()
    if explicit_commands:
        n_commands = int(rng.integers(1, 4))
        commands = tuple(canonical(
            {command(random_subset(rng, controllable) or controllable[:1])
             for _ in range(n_commands)}))
    return AlphabetSpec(
        sigma=frozenset(sigma), controllable=frozenset(controllable),
        observable=frozenset(observable), edit_observable=frozenset(edit_observable),
        editable=frozenset(editable),
        intruder_observable=frozenset(random_subset(rng, sigma, 0.7)),
        bound=int(rng.integers(0, max_bound + 1)), commands=commands)


def random_instance(rng: np.random.Generator, max_states: int = 5, max_events: int = 4,
                    max_bound: int = 2, explicit_commands: bool = True,
                    spec: Optional[AlphabetSpec] = None) -> ProblemInstance:
    spec = spec or random_spec(rng, int(rng.integers(1, max_events + 1)), max_bound,
                               explicit_commands)
    n_states = int(rng.integers(1, max_states + 1))
    plant = random_automaton(rng, n_states, canonical(spec.plant_events), name="G",
                             p_edge=0.4)
    inst = ProblemInstance(plant=plant, spec=spec,
                           secret=frozenset(random_subset(rng, plant.states, 0.3)),
                           avoid=frozenset(random_subset(rng, plant.states[1:], 0.15)),
                           name="random")
    inst.check()
    return inst


def random_shape_valid(rng: np.random.Generator, constraint: ControlConstraint,
                       alphabet, n_states: int = 3, name="S") -> Automaton:
    """
    Random automaton over ``alphabet`` defining every uncontrollable event everywhere,
    moving only on observable events, and defining controllable events at random.
    """
    states = [name.lower() + str(i) for i in range(n_states)]
    triples = []
    for q in states:
        for e in canonical(alphabet):
            if e in constraint.controllable and rng.random() < 0.5:
                continue
            target = states[rng.integers(n_states)] if e in constraint.observable else q
            triples.append((q, e, target))
    return from_triples(name, states, alphabet, triples, states[0], states)


# Brute-force oracles ####################################################################

def all_words(events: Sequence, max_length: int):
    for n in range(max_length + 1):
        yield from product(events, repeat=n)


def estimate(a: Automaton, visible, observed: Sequence[Event]) -> frozenset:
    """
    States in which ``a`` can be after producing the observation ``observed``, by a
    search over pairs (state, observed prefix length).
    """
    start = (a.initial, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        q, i = queue.popleft()
        for e, dst in a.enabled(q).items():
            if e in visible:
                if i == len(observed) or observed[i] != e:
                    continue
                nxt = (dst, i + 1)
            else:
                nxt = (dst, i)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(q for q, i in seen if i == len(observed))


def supremal_nonblocking(p: Automaton, bad, controllable) -> frozenset:
    """
    States kept by the supremal controllable and nonblocking supervisor of ``p`` under
    full observation: bad states go, then alternately the states with an uncontrollable
    way out and those that cannot reach a marked state any longer.
    """
    good = set(p.states) - set(bad)
    while True:
        safe = {q for q in good
                if all(dst in good for e, dst in p.enabled(q).items()
                       if e not in controllable)}
        coreachable = {q for q in safe if q in p.marked}
        grown = True
        while grown:
            grown = False
            for q in safe - coreachable:
                if any(dst in coreachable for dst in p.enabled(q).values()):
                    coreachable.add(q)
                    grown = True
        if coreachable == good:
            return frozenset(good)
        good = coreachable


# Closed-loop runs #######################################################################

def find_run(b: Automaton, spec: AlphabetSpec, plant_word: Optional[Sequence[str]] = None,
             intruder_word: Optional[Sequence[str]] = None) -> Optional[List[str]]:
    """
    A run of ``b`` whose plant projection is ``plant_word`` and whose intruder
    observation is ``intruder_word`` (each one if given), as event names.
    """
    intruder_visible = {e.name for e in spec.intruder_visible()}
    plant_word = tuple(plant_word) if plant_word is not None else None
    intruder_word = tuple(intruder_word) if intruder_word is not None else None

    def advance(word, position, name, relevant):
        if word is None or name not in relevant:
            return position
        if position < len(word) and word[position] == name:
            return position + 1
        return None

    def done(word, position):
        return word is None or position == len(word)

    start = (b.initial, 0, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, i, j = node
        if done(plant_word, i) and done(intruder_word, j):
            run = []
            while parent[node] is not None:
                node, name = parent[node]
                run.append(name)
            return run[::-1]
        for e in canonical(b.enabled(q)):
            i_next = advance(plant_word, i, e.name, spec.sigma)
            j_next = advance(intruder_word, j, e.name, intruder_visible)
            if i_next is None or j_next is None:
                continue
            nxt = (b.delta(q, e), i_next, j_next)
            if nxt not in parent:
                parent[nxt] = (node, e.name)
                queue.append(nxt)
    return None

