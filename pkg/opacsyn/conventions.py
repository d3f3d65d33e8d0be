"""
.. module:: conventions

:Synopsis: Reserved names and naming conventions
           to make the life of the maintainer easier.

"""


def get_version():
    from opacsyn import __version__
    return __version__


# Environment variable forcing debug output
debug_env = "OPACSYN_DEBUG"

# Reserved event names and encodings
stop_name = "stop"
decode_name = "decode"
edited_suffix = "#"
command_prefix = "cmd:"
command_separator = "+"
reserved_event_names = (stop_name, decode_name)

# Separators of composite state ids
product_separator = "|"
belief_separator = ","

# Names of the constructed component states
ec_init = "q_ec_init"
sc_init = "q_sc_init"
sc_issue = "q_issue"
ce_init = "q_ce_init"
unsafe_state = "q_unsafe"
empty_belief = "{}"
dump_state = "dump"


def ec_counter_state(n):
    return "q_%d" % n


def ce_command_state(command_name):
    return "q_" + command_name


# Names of the closed-loop factors, in composition order
class Factor:
    plant = "G"
    command_execution = "CE"
    edit_constraints = "EC"
    supervisor_constraints = "SC"
    intruder = "I"
    edit_function = "E"
    supervisor = "S"


# Exit codes of the command line scripts
class ExitCode:
    ok = 0
    verification_failed = 1
    synthesis_empty = 2
    input_error = 3


class Extension:
    yamls = (".yaml", ".yml")
    dot = ".dot"


# Keys of the instance file, in dumping order
class InstanceKey:
    alphabet = "alphabet"
    edit = "edit"
    intruder = "intruder"
    commands = "commands"
    plant = "plant"
    requirement = "requirement"
    cosynthesis = "cosynthesis"


instance_keys = (InstanceKey.alphabet, InstanceKey.edit, InstanceKey.intruder,
                 InstanceKey.commands, InstanceKey.plant, InstanceKey.requirement,
                 InstanceKey.cosynthesis)

# Environment variable with keywords of tests to skip
test_skip_env = "OPACSYN_TEST_SKIP"
