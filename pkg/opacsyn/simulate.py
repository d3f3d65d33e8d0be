"""
.. module:: simulate

:Synopsis: Random walks of a closed loop

Each step fires one of the events enabled at the current state, chosen uniformly (plant
events, commands, edited copies, ``stop`` and ``decode`` alike). A walk ends after the
requested number of steps or at a state without enabled events (deadlock).
"""

# Global
from dataclasses import dataclass, asdict, fields
from typing import Optional, List
import pandas as pd
from numpy.random import SeedSequence, default_rng

# Local
from opacsyn.automaton import Automaton
from opacsyn.conventions import Factor
from opacsyn.events import canonical
from opacsyn.log import get_logger

log = get_logger(__name__)


@dataclass(frozen=True)
class TraceRecord:
    step: int
    # event fired to reach this record (None for the initial one)
    event: Optional[str]
    state: str
    plant: Optional[str] = None
    command_execution: Optional[str] = None
    edit_constraints: Optional[str] = None
    supervisor_constraints: Optional[str] = None
    intruder: Optional[str] = None
    edit_function: Optional[str] = None
    supervisor: Optional[str] = None
    deadlock: bool = False


_record_factors = {"plant": Factor.plant,
                   "command_execution": Factor.command_execution,
                   "edit_constraints": Factor.edit_constraints,
                   "supervisor_constraints": Factor.supervisor_constraints,
                   "intruder": Factor.intruder,
                   "edit_function": Factor.edit_function,
                   "supervisor": Factor.supervisor}


def _record(b: Automaton, step: int, event: Optional[str], state: str) -> TraceRecord:
    factors = b.factor_names
    components = {field_name: b.component(state, factor)
                  for field_name, factor in _record_factors.items() if factor in factors}
    return TraceRecord(step=step, event=event, state=state,
                       deadlock=not b.enabled(state), **components)


def simulate_run(b: Automaton, seed: Optional[int] = None, steps: int = 20) \
        -> List[TraceRecord]:
    """Seeded random walk of at most ``steps`` transitions from the initial state."""
    if seed is not None:
        log.warning("This run has been SEEDED with seed %s", seed)
    rng = default_rng(SeedSequence(seed))
    state = b.initial
    trace = [_record(b, 0, None, state)]
    for step in range(1, steps + 1):
        enabled = canonical(b.enabled(state))
        if not enabled:
            log.info("Deadlock at step %d, state %s.", step - 1, state)
            break
        event = enabled[rng.integers(len(enabled))]
        state = b.delta(state, event)
        trace.append(_record(b, step, event.name, state))
    return trace


def trace_events(trace: List[TraceRecord]) -> List[str]:
    return [r.event for r in trace[1:]]


def trace_to_frame(trace: List[TraceRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([asdict(r) for r in trace],
                         columns=[f.name for f in fields(TraceRecord)])
    return frame.set_index("step")
