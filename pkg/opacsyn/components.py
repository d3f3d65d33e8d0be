"""
.. module:: components

:Synopsis: Builders of the closed-loop component automata

The closed loop is the synchronous product of

- ``G``: the plant (refined by the requirement automaton, if any),
- ``CE``: command execution, which lets the plant use the last issued control command,
- ``EC``: edit constraints, which bound the number of edited copies the edit function
  may emit per observed event, and end each round of editing with ``stop``,
- ``SC``: supervisor constraints, which force the supervisor to observe something
  between two commands,
- ``I``: the intruder, a current-state estimator of the plant fed with the edited
  observations, which ``decode``-s into ``q_unsafe`` when it is sure the plant is in a
  secret state, and lands in the empty belief ``{}`` when the observations contradict the
  plant model,

plus the edit function ``E`` and the supervisor ``S`` to be synthesized.
"""

# Global
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Tuple, FrozenSet, Dict, List, Optional

# Local
from opacsyn.events import Event, STOP, DECODE, command, canonical, plant_event
from opacsyn.automaton import Automaton, from_triples, observer, sync_product, \
    sync_all
from opacsyn.instance import AlphabetSpec, ProblemInstance
from opacsyn.conventions import ec_init, ec_counter_state, sc_init, sc_issue, ce_init, \
    ce_command_state, unsafe_state, empty_belief, dump_state, Factor
from opacsyn.log import LoggedError, get_logger

log = get_logger(__name__)

default_gamma_limit = 12


def build_gamma(spec: AlphabetSpec, limit: int = default_gamma_limit) \
        -> Tuple[Event, ...]:
    """
    Control commands: the explicit ones if given, otherwise all nonempty subsets of the
    controllable events, by size and then lexicographically.
    """
    if spec.commands:
        return tuple(spec.commands)
    if not spec.controllable:
        raise LoggedError(log, "No controllable events and no explicit commands: the set "
                               "of control commands would be empty.")
    if len(spec.controllable) > limit:
        raise LoggedError(log, "Enumerating all commands over %d controllable events "
                               "exceeds the limit of %d: list the commands explicitly "
                               "or raise 'gamma_limit'.", len(spec.controllable), limit)
    ordered = sorted(spec.controllable)
    return tuple(command(subset) for size in range(1, len(ordered) + 1)
                 for subset in combinations(ordered, size))


def build_edit_constraints(spec: AlphabetSpec, gamma: Tuple[Event, ...],
                           allow_delete: bool = True,
                           count_pass_as_output: bool = True) -> Automaton:
    """
    Edit constraints, with states ``q_ec_init`` and ``q_0`` ... ``q_U``.

    After an editable event the edit function may emit up to U edited copies, after a
    non-editable observable event up to U - 1 (it has been passed through already, unless
    ``count_pass_as_output`` is False). ``stop`` ends the round; ``stop`` right after an
    editable event deletes it, which ``allow_delete=False`` forbids.
    """
    if not allow_delete:
        if not count_pass_as_output:
            raise LoggedError(log, "Forbidding deletions is incompatible with not "
                                   "counting passed events as outputs.")
        if spec.bound < 1:
            raise LoggedError(log, "Forbidding deletions needs an edit bound of at "
                                   "least 1.")
    counters = [ec_counter_state(n) for n in range(spec.bound + 1)]
    pass_target = counters[1] if (count_pass_as_output and spec.bound >= 1) \
        else counters[0]
    triples = []
    for e in canonical(spec.events(spec.sigma - spec.edit_observable) | set(gamma) |
                       {DECODE}):
        triples.append((ec_init, e, ec_init))
    for e in canonical(spec.events(spec.editable)):
        triples.append((ec_init, e, counters[0]))
    for e in canonical(spec.events(spec.edit_observable - spec.editable)):
        triples.append((ec_init, e, pass_target))
    for n, q in enumerate(counters):
        if n < spec.bound:
            for e in canonical(spec.edited_events):
                triples.append((q, e, counters[n + 1]))
        if n > 0 or allow_delete:
            triples.append((q, STOP, ec_init))
    return from_triples(Factor.edit_constraints, [ec_init] + counters,
                        spec.universe(gamma), triples, ec_init, [ec_init])


def build_supervisor_constraints(spec: AlphabetSpec, gamma: Tuple[Event, ...]) \
        -> Automaton:
    """
    Supervisor constraints: after issuing a command the supervisor waits at ``q_issue``
    for one of its observations before it may issue the next one. All states are marked.
    """
    universe = spec.universe(gamma)
    observations = spec.events(spec.observable - spec.editable) | spec.edited_events
    triples = [(sc_init, e, sc_issue if e in gamma else sc_init)
               for e in canonical(universe)]
    for e in canonical(universe - set(gamma)):
        triples.append((sc_issue, e, sc_init if e in observations else sc_issue))
    return from_triples(Factor.supervisor_constraints, [sc_init, sc_issue], universe,
                        triples, sc_init, [sc_init, sc_issue])


def build_command_execution(spec: AlphabetSpec, gamma: Tuple[Event, ...]) -> Automaton:
    """
    Command execution: a command moves to its own state, where the events it enables
    (and the uncontrollable ones) may occur; unobservable ones keep it in use, observable
    ones consume it.
    """
    if not gamma:
        raise LoggedError(log, "Command execution needs at least one command.")
    uncontrollable = spec.uncontrollable
    triples = [(ce_init, e, ce_init) for e in canonical(spec.events(uncontrollable))]
    states = [ce_init]
    for gamma_i in gamma:
        q = ce_command_state(gamma_i.name)
        states.append(q)
        triples.append((ce_init, gamma_i, q))
        for name in sorted(gamma_i.enables | uncontrollable):
            triples.append((q, plant_event(name),
                            q if name in spec.unobservable else ce_init))
    return from_triples(Factor.command_execution, states,
                        spec.plant_events | set(gamma), triples, ce_init, [ce_init])


def build_intruder(inst: ProblemInstance) -> Automaton:
    """
    Intruder: the reachable observer of the plant over the intruder-observable events,
    with editable events relabelled to their edited copies, plus ``q_unsafe``, reached by
    ``decode`` from the beliefs made only of secret states. The empty belief (edit
    function discovered) and ``q_unsafe`` (secret inferred) self-loop on every event but
    ``decode``. Nonempty beliefs are marked.
    """
    spec = inst.spec
    relabel = {plant_event(name): spec.edited_event(name) for name in spec.editable}
    estimator = observer(inst.plant, spec.events(spec.intruder_observable),
                         relabel=relabel, name=Factor.intruder)
    transitions: Dict[str, Dict[Event, str]] = {
        q: dict(out) for q, out in estimator.transitions.items()}
    for q in estimator.states:
        belief = estimator.members[q]
        if belief and set(belief) <= inst.secret:
            transitions[q][DECODE] = unsafe_state
    absorbing = [unsafe_state] + ([empty_belief] if empty_belief in estimator.members
                                  else [])
    for q in absorbing:
        transitions[q] = {e: q for e in estimator.sorted_alphabet}
    members = dict(estimator.members)
    return Automaton(
        name=Factor.intruder,
        states=estimator.states + (unsafe_state,),
        alphabet=estimator.alphabet | {DECODE},
        transitions=transitions,
        initial=estimator.initial,
        marked=frozenset(q for q in estimator.states if members[q]),
        members=members)


def compile_requirement(inst: ProblemInstance) -> Tuple[Automaton, FrozenSet[str]]:
    """
    Refines the plant by the requirement automaton, if any: strings leaving the
    requirement's language end up in states composed with a ``dump`` completion state,
    which join the avoid set. Refined states are named ``(g,k)``.
    """
    plant = replace(inst.plant, name=Factor.plant)
    requirement = inst.requirement
    if requirement is None:
        return plant, frozenset(inst.avoid)
    dump = dump_state
    while dump in requirement.state_index:
        dump += "_"
    triples = []
    for q in requirement.states + (dump,):
        for e in requirement.sorted_alphabet:
            target = requirement.delta(q, e) if q != dump else None
            triples.append((q, e, target if target is not None else dump))
    completed = from_triples(requirement.name, requirement.states + (dump,),
                             requirement.alphabet, triples, requirement.initial,
                             requirement.marked)
    product = sync_product(plant, completed)
    names = {q: "(%s,%s)" % product.parts[q] for q in product.states}
    refined = from_triples(
        Factor.plant, [names[q] for q in product.states], product.alphabet,
        ((names[src], e, names[dst]) for src, e, dst in product.triples()),
        names[product.initial], (names[q] for q in product.marked))
    avoid = frozenset(names[q] for q in product.states
                      if product.parts[q][0] in inst.avoid or product.parts[q][1] == dump)
    log.debug("Refined plant by the requirement: %d states, %d to avoid.",
              len(refined.states), len(avoid))
    return refined, avoid


@dataclass(frozen=True)
class Components:
    """The fixed components of the closed loop for one instance."""
    instance: ProblemInstance
    plant: Automaton
    avoid: FrozenSet[str]
    gamma: Tuple[Event, ...]
    command_execution: Automaton
    edit_constraints: Automaton
    supervisor_constraints: Automaton
    intruder: Automaton

    __hash__ = None  # type: ignore

    @property
    def spec(self) -> AlphabetSpec:
        return self.instance.spec

    @property
    def universe(self) -> FrozenSet[Event]:
        return self.spec.universe(self.gamma)

    def automata(self) -> List[Automaton]:
        return [self.plant, self.command_execution, self.edit_constraints,
                self.supervisor_constraints, self.intruder]

    def plant_product(self, limit: Optional[int] = None) -> Automaton:
        """``G||CE||EC||SC||I``, reachable part."""
        return sync_all(*self.automata(), name="P", limit=limit)


def build_components(inst: ProblemInstance, no_delete: bool = False,
                     count_pass_as_output: bool = True,
                     gamma_limit: int = default_gamma_limit) -> Components:
    plant, avoid = compile_requirement(inst)
    gamma = build_gamma(inst.spec, gamma_limit)
    components = Components(
        instance=inst, plant=plant, avoid=avoid, gamma=gamma,
        command_execution=build_command_execution(inst.spec, gamma),
        edit_constraints=build_edit_constraints(
            inst.spec, gamma, allow_delete=not no_delete,
            count_pass_as_output=count_pass_as_output),
        supervisor_constraints=build_supervisor_constraints(inst.spec, gamma),
        intruder=build_intruder(inst))
    log.debug("Components: %s", ", ".join(str(a) for a in components.automata()))
    return components
