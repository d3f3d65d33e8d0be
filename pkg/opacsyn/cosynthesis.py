"""
.. module:: cosynthesis

:Synopsis: Co-synthesis of an edit function and a supervisor
:Author: opacsyn developers

Two synthesis orders are implemented on top of :func:`~synthesis.synthesize`:

**Procedure 1** (supervisor first)
  The requirement ``P_S`` starts as ``P = G||CE||EC||SC||I`` without the states whose plant
  component must be avoided, is blocking, or is stuck under the command in use. A
  supervisor reaching some marker is synthesized against it; requirement states from which
  the plant can no longer complete a task, or that the supervisor never reaches, are
  removed and the supervisor resynthesized, until nothing is removed. The edit function is
  then synthesized for ``P||S``, keeping the intruder out of ``q_unsafe`` and ``{}``.

**Procedure 2** (edit function first)
  The edit function is synthesized for ``P``, keeping the intruder out of ``q_unsafe`` and
  ``{}`` for any supervisor; the supervisor is then synthesized for ``P||E`` to avoid the
  states to avoid and be nonblocking.

Both orders return a :class:`CoSynthesisResult` holding both automata, or neither of them
with the failing step and the reason.
"""

# Global
from dataclasses import dataclass, field, fields, asdict, replace
from typing import Optional, List, Dict, Tuple, FrozenSet, Union, Any
import pandas as pd
from tqdm import tqdm

# Local
from opacsyn.automaton import Automaton, EmptyResult, StateLimitExceeded, sync_product, \
    remove_states, backward_closure, blocking_states, product_state_id, minimize
from opacsyn.components import Components, build_components
from opacsyn.component import OpacsynComponent
from opacsyn.conventions import Factor, unsafe_state, empty_belief, ce_command_state
from opacsyn.instance import ProblemInstance
from opacsyn.synthesis import SynthesisGoal, SynthesisOutcome, synthesize, \
    supervisor_constraint, edit_constraint
from opacsyn.log import LoggedError, get_logger
from opacsyn.typing import InfoDict, InfoDictIn, empty_dict

log = get_logger(__name__)

initial_state_cut = "initial state cut"


class StateLimitError(LoggedError):
    """An automaton built during co-synthesis grew past the ``state_limit`` option."""


@dataclass(frozen=True)
class RoundRecord:
    """Requirement size at one supervisor synthesis round of procedure 1."""
    round: int
    requirement_states: int
    requirement_marked: int
    supervisor_states: int
    deleted: int


@dataclass
class CoSynthesisResult:
    procedure: int
    supervisor: Optional[Automaton] = None
    edit_function: Optional[Automaton] = None
    # number of supervisor syntheses of procedure 1
    iterations: int = 0
    trace: List[RoundRecord] = field(default_factory=list)
    stage: Optional[int] = None
    reason: Optional[str] = None
    # number of states of the initial requirement (procedure 1)
    bound: Optional[int] = None
    sizes: Dict[str, int] = field(default_factory=dict)

    __hash__ = None  # type: ignore

    @property
    def is_empty(self) -> bool:
        return self.supervisor is None or self.edit_function is None

    def fail(self, stage: int, reason: str):
        self.stage, self.reason = stage, reason
        self.supervisor, self.edit_function = None, None
        log.info("Empty result at step %d: %s", stage, reason)
        return self

    def rounds_frame(self) -> pd.DataFrame:
        columns = [f.name for f in fields(RoundRecord)]
        return pd.DataFrame([asdict(r) for r in self.trace], columns=columns)

    def to_report(self) -> InfoDict:
        report: InfoDict = {"procedure": self.procedure,
                            "status": "empty" if self.is_empty else "ok"}
        if self.is_empty:
            report["stage"] = self.stage
            report["reason"] = self.reason
        if self.procedure == 1:
            report["iterations"] = self.iterations
            report["bound"] = self.bound
            report["rounds"] = [asdict(r) for r in self.trace]
        report["sizes"] = dict(self.sizes)
        for key, a in (("supervisor", self.supervisor),
                       ("edit_function", self.edit_function)):
            if a is not None:
                report[key] = {"states": len(a.states), "transitions": a.num_transitions}
        return report

    def __str__(self):
        if self.is_empty:
            return "Procedure %d: Empty at step %s (%s)" % (
                self.procedure, self.stage, self.reason)
        return "Procedure %d: %s; %s" % (self.procedure, self.supervisor,
                                         self.edit_function)


def states_with_component(a: Automaton, factor: str, values) -> FrozenSet[str]:
    values = frozenset(values)
    return frozenset(q for q in a.states if a.component(q, factor) in values)


def intruder_revealing_states(a: Automaton) -> FrozenSet[str]:
    """States where the intruder inferred the secret or discovered the edit function."""
    return states_with_component(a, Factor.intruder, (unsafe_state, empty_belief))


def build_plant_p(inst: Union[ProblemInstance, Components], limit: Optional[int] = None,
                  **component_options) -> Automaton:
    """``P = G||CE||EC||SC||I``."""
    components = inst if isinstance(inst, Components) \
        else build_components(inst, **component_options)
    return components.plant_product(limit)


def build_requirement_ps0(p: Automaton, components: Components) \
        -> Tuple[Automaton, Dict[str, FrozenSet[str]]]:
    """
    Initial requirement of procedure 1: ``p`` without the states whose plant component

    - ``Q1``: is to be avoided,
    - ``Q2``: is blocking in the plant,
    - ``Q3``: is unmarked and enables none of the events the command in use allows.

    Returns the requirement and the cut sets.

    :raises EmptyResult: if the initial state is cut.
    """
    plant = components.plant
    uncontrollable = components.spec.uncontrollable
    command_of = {ce_command_state(gamma.name): gamma for gamma in components.gamma}
    cuts = {"Q1": states_with_component(p, Factor.plant, components.avoid),
            "Q2": states_with_component(p, Factor.plant, blocking_states(plant))}
    stuck = set()
    for q in p.states:
        g = p.component(q, Factor.plant)
        gamma = command_of.get(p.component(q, Factor.command_execution))
        if g in plant.marked or gamma is None:
            continue
        allowed = gamma.enables | uncontrollable
        if not any(e.name in allowed for e in plant.enabled(g)):
            stuck.add(q)
    cuts["Q3"] = frozenset(stuck)
    for key, cut in cuts.items():
        log.debug("%s: %d states", key, len(cut))
    return remove_states(p, frozenset().union(*cuts.values())), cuts


def compute_qdel(p: Automaton, requirement: Automaton, supervisor: Automaton,
                 plant_marked, limit: Optional[int] = None) -> FrozenSet[str]:
    """
    Requirement states to delete after a supervisor synthesis round: those paired in
    ``p||supervisor`` with a supervisor state from which no state with a marked plant
    component can be reached, and those never reached under the supervisor.

    The result may contain the initial state of ``p``.
    """
    closed = sync_product(p, supervisor, limit=limit)
    plant_marked = frozenset(plant_marked)
    completing = backward_closure(
        closed, (x for x in closed.states
                 if closed.component(x, Factor.plant) in plant_marked))
    p_state = {x: product_state_id(closed.state_parts(x)[:-1]) for x in closed.states}
    stuck = {p_state[x] for x in closed.states if x not in completing}
    reached = set(p_state.values())
    kept = set(requirement.states)
    return frozenset((stuck & kept) | (kept - reached))


class CoSynthesis(OpacsynComponent):
    """Co-synthesis of an edit function and a supervisor for one instance."""

    procedure: int
    no_delete: bool
    strict_first_nonblocking: bool
    prune_dead_ends: bool
    count_pass_as_output: bool
    gamma_limit: int
    state_limit: int
    progress: bool

    def __init__(self, info: InfoDictIn = empty_dict, name: Optional[str] = None,
                 timing: Optional[bool] = None):
        super().__init__(info, name=name or "cosynthesis", timing=timing)

    def initialize(self):
        for option in ("no_delete", "strict_first_nonblocking", "prune_dead_ends",
                       "count_pass_as_output", "progress"):
            self.check_option_type(option, bool)
        for option in ("procedure", "gamma_limit", "state_limit"):
            self.check_option_type(option, int)
        if self.procedure not in (1, 2):
            raise LoggedError(self.log, "'procedure' must be 1 or 2, got %r.",
                              self.procedure)
        for option in ("gamma_limit", "state_limit"):
            if getattr(self, option) < 1:
                raise LoggedError(self.log, "'%s' must be positive, got %r.", option,
                                  getattr(self, option))

    def build_components(self, inst: ProblemInstance) -> Components:
        return build_components(inst, no_delete=self.no_delete,
                                count_pass_as_output=self.count_pass_as_output,
                                gamma_limit=self.gamma_limit)

    def _lap(self, label):
        if self.timer:
            self.timer.lap(label, self.log)

    def run(self, inst: ProblemInstance) -> CoSynthesisResult:
        """
        Runs the configured procedure.

        :raises StateLimitError: if an automaton grows past ``state_limit`` states.
        """
        if self.timer:
            self.timer.start()
        self.log.info("Running procedure %d on '%s'.", self.procedure, inst.name)
        components = self.build_components(inst)
        try:
            p = build_plant_p(components, self.state_limit)
            self.log.info("Plant product: %s", p)
            self._lap("plant product")
            if self.procedure == 1:
                result = self.procedure1(components, p)
            else:
                result = self.procedure2(components, p)
        except StateLimitExceeded as excpt:
            raise StateLimitError(self.log, "The %s. Raise the option 'state_limit' to "
                                            "go on.", excpt)
        self.log.info("%s", result)
        return result

    def _synthesize(self, p: Automaton, bad, constraint, goal: SynthesisGoal,
                    name: str, state_prefix: str) -> SynthesisOutcome:
        outcome = synthesize(p, bad, constraint, goal, self.prune_dead_ends, name=name,
                             state_prefix=state_prefix, state_limit=self.state_limit)
        if outcome.is_empty:
            return outcome
        reduced = minimize(outcome.supervisor, state_prefix=state_prefix)
        self.log.debug("%s: %d states, %d after minimization.", name,
                       len(outcome.supervisor.states), len(reduced.states))
        return replace(outcome, supervisor=reduced)

    # Procedure 1 ########################################################################

    def procedure1(self, components: Components, p: Automaton) -> CoSynthesisResult:
        result = CoSynthesisResult(procedure=1, sizes={"P": len(p.states)})
        try:
            requirement, cuts = build_requirement_ps0(p, components)
        except EmptyResult:
            return result.fail(2, initial_state_cut)
        result.bound = len(requirement.states)
        self.log.info("Initial requirement: %d states (cut %s).", result.bound,
                      ", ".join("%s: %d" % (k, len(v)) for k, v in cuts.items()))
        try:
            s_outcome = self.synthesize_supervisor_first(p, requirement, components,
                                                         result)
        except EmptyResult:
            return result.fail(8, initial_state_cut)
        self._lap("supervisor")
        if s_outcome.is_empty:
            return result.fail(3 if result.iterations == 1 else 8,
                               s_outcome.reason.value)
        e_outcome = self.synthesize_edit_function_for(p, s_outcome.supervisor,
                                                      components, result)
        self._lap("edit function")
        if e_outcome.is_empty:
            return result.fail(11, e_outcome.reason.value)
        result.supervisor = s_outcome.supervisor
        result.edit_function = e_outcome.supervisor
        return result

    def synthesize_supervisor_first(self, p: Automaton, requirement: Automaton,
                                    components: Components,
                                    result: CoSynthesisResult) -> SynthesisOutcome:
        """
        Supervisor rounds of procedure 1: synthesizes against the requirement and shrinks
        it until no requirement state has to be deleted. Rounds are recorded in ``result``.

        :raises EmptyResult: if a round deletes the initial state of the requirement.
        """
        constraint = supervisor_constraint(components.spec, components.gamma)
        goal = SynthesisGoal.NONBLOCKING if self.strict_first_nonblocking \
            else SynthesisGoal.MARKER_REACHABLE
        with tqdm(total=result.bound, desc="supervisor rounds",
                  disable=not self.progress) as progress_bar:
            while True:
                bad = frozenset(p.states) - set(requirement.states)
                outcome = self._synthesize(p, bad, constraint, goal, Factor.supervisor,
                                           "s")
                result.iterations += 1
                progress_bar.update(1)
                if outcome.is_empty:
                    return outcome
                q_del = compute_qdel(p, requirement, outcome.supervisor,
                                     components.plant.marked, limit=self.state_limit)
                result.trace.append(RoundRecord(
                    round=result.iterations - 1,
                    requirement_states=len(requirement.states),
                    requirement_marked=len(requirement.marked),
                    supervisor_states=len(outcome.supervisor.states),
                    deleted=len(q_del)))
                self.log.debug("Round %d: %s, deleting %d requirement states.",
                               result.iterations - 1, outcome.supervisor, len(q_del))
                if not q_del:
                    return outcome
                requirement = remove_states(requirement, q_del)
                goal = SynthesisGoal.MARKER_REACHABLE

    def synthesize_edit_function_for(self, p: Automaton, supervisor: Automaton,
                                     components: Components,
                                     result: Optional[CoSynthesisResult] = None) \
            -> SynthesisOutcome:
        """Edit function for ``p||supervisor``, hiding the secret and itself."""
        p_e = sync_product(p, supervisor, name="P_E", limit=self.state_limit)
        if result is not None:
            result.sizes["P_E"] = len(p_e.states)
        bad = intruder_revealing_states(p_e)
        self.log.info("Edit function stage: %s, %d states to cut.", p_e, len(bad))
        return self._synthesize(p_e, bad, edit_constraint(components.spec),
                                SynthesisGoal.NONBLOCKING, Factor.edit_function, "e")

    # Procedure 2 ########################################################################

    def procedure2(self, components: Components, p: Automaton) -> CoSynthesisResult:
        result = CoSynthesisResult(procedure=2, sizes={"P": len(p.states)})
        e_outcome = self.synthesize_edit_function_first(p, components)
        self._lap("edit function")
        if e_outcome.is_empty:
            return result.fail(3, e_outcome.reason.value)
        s_outcome = self.synthesize_supervisor_for(p, e_outcome.supervisor, components,
                                                   result)
        self._lap("supervisor")
        if s_outcome.is_empty:
            return result.fail(6, s_outcome.reason.value)
        result.edit_function = e_outcome.supervisor
        result.supervisor = s_outcome.supervisor
        return result

    def synthesize_edit_function_first(self, p: Automaton, components: Components) \
            -> SynthesisOutcome:
        """Edit function for ``p``, hiding the secret and itself under any supervisor."""
        bad = intruder_revealing_states(p)
        goal = SynthesisGoal.NONBLOCKING if self.strict_first_nonblocking \
            else SynthesisGoal.MARKER_REACHABLE
        self.log.info("Edit function stage: %d states to cut.", len(bad))
        return self._synthesize(p, bad, edit_constraint(components.spec), goal,
                                Factor.edit_function, "e")

    def synthesize_supervisor_for(self, p: Automaton, edit_function: Automaton,
                                  components: Components,
                                  result: Optional[CoSynthesisResult] = None) \
            -> SynthesisOutcome:
        """Nonblocking supervisor for ``p||edit_function`` avoiding the states to avoid."""
        p_s = sync_product(p, edit_function, name="P_S", limit=self.state_limit)
        if result is not None:
            result.sizes["P_S"] = len(p_s.states)
        bad = states_with_component(p_s, Factor.plant, components.avoid)
        self.log.info("Supervisor stage: %s, %d states to cut.", p_s, len(bad))
        return self._synthesize(p_s, bad,
                                supervisor_constraint(components.spec, components.gamma),
                                SynthesisGoal.NONBLOCKING, Factor.supervisor, "s")


def cosynthesis_options(inst: ProblemInstance, **options) -> Dict[str, Any]:
    """Options of the instance file, overridden by the given non-None ones."""
    merged = dict(inst.options)
    merged.update({k: v for k, v in options.items() if v is not None})
    return merged


def procedure1(inst: ProblemInstance, **options) -> CoSynthesisResult:
    options = cosynthesis_options(inst, **options)
    options["procedure"] = 1
    return CoSynthesis(options).run(inst)


def procedure2(inst: ProblemInstance, no_delete: Optional[bool] = None,
               **options) -> CoSynthesisResult:
    options = cosynthesis_options(inst, no_delete=no_delete, **options)
    options["procedure"] = 2
    return CoSynthesis(options).run(inst)
