from opacsyn.events import Event, EventKind
from opacsyn.automaton import Automaton, EmptyResult, sync_product, observer
from opacsyn.instance import AlphabetSpec, ProblemInstance
from opacsyn.components import build_components
from opacsyn.synthesis import synthesize, SynthesisGoal, EmptyReason
from opacsyn.cosynthesis import CoSynthesis, CoSynthesisResult, procedure1, procedure2
from opacsyn.verifier import verify, VerificationReport, check_cso
from opacsyn.input import load_instance_file, load_example_instance
from opacsyn.log import LoggedError

__version__ = "1.0.0"
__year__ = "2026"
