"""
.. module:: run

:Synopsis: Command-line scripts

Every script takes its arguments (``sys.argv`` by default) and returns the exit code:
0 on success, 1 if a verification failed, 2 if the synthesis was empty, 3 for input errors.
"""

# Global
import argparse
import shutil
import sys
from typing import Optional, Sequence, Callable, Dict

# Local
from opacsyn.conventions import ExitCode, Factor, get_version
from opacsyn.automaton import Automaton
from opacsyn.components import Components
from opacsyn.cosynthesis import CoSynthesis, cosynthesis_options
from opacsyn.export import emit_graph, graph_styles
from opacsyn.input import load_instance_file, load_automaton_file, example_instance_file
from opacsyn.instance import ProblemInstance
from opacsyn.log import logger_setup, get_logger, LoggedError
from opacsyn.output import Output
from opacsyn.simulate import simulate_run, trace_to_frame
from opacsyn.verifier import verify, assemble_closed_loop
from opacsyn.yaml import InputSyntaxError
from opacsyn.tools import create_banner

log = get_logger("run")


def _parser(command: str, description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opacsyn " + command, description=description)
    parser.add_argument("-d", "--debug", action="store_true",
                        help="Produce verbose debug output.")
    parser.add_argument("--debug-file", action="store", metavar="file.log", default=None,
                        help="Write the debug output into this file.")
    parser.add_argument("--version", action="version", version=get_version())
    return parser


def _add_instance(parser: argparse.ArgumentParser):
    parser.add_argument("instance", action="store", metavar="instance.yaml",
                        help="Problem instance file.")


def _add_pair(parser: argparse.ArgumentParser):
    parser.add_argument("-s", "--supervisor", action="store", required=True,
                        metavar="S.yaml", help="Supervisor automaton file.")
    parser.add_argument("-e", "--edit-function", action="store", required=True,
                        metavar="E.yaml", help="Edit function automaton file.")


def _add_output(parser: argparse.ArgumentParser, required=False):
    parser.add_argument("-o", "--output", action="store", metavar="/some/path",
                        default=None, required=required,
                        help="Path and prefix for the output files.")
    parser.add_argument("-f", "--force", action="store_true",
                        help="Overwrite previous output, if it exists.")


def _guarded(script: Callable[[argparse.Namespace], int], parser: argparse.ArgumentParser,
             args: Optional[Sequence[str]]) -> int:
    arguments = parser.parse_args(args)
    logger_setup(arguments.debug, arguments.debug_file)
    try:
        return script(arguments)
    except LoggedError:
        return ExitCode.input_error
    except InputSyntaxError as excpt:
        log.error("%s", excpt)
        return ExitCode.input_error
    except OSError as excpt:
        log.error("%s", excpt)
        return ExitCode.input_error


def _load_pair(arguments) -> Dict[str, Automaton]:
    return {Factor.supervisor: load_automaton_file(arguments.supervisor),
            Factor.edit_function: load_automaton_file(arguments.edit_function)}


# build ##################################################################################

def build_script(args=None) -> int:
    parser = _parser("build", "Writes the component automata of an instance.")
    _add_instance(parser)
    _add_output(parser, required=True)
    parser.add_argument("--no-delete", action="store_true", default=None,
                        help="Edit constraints without deletions.")

    def script(arguments):
        inst = load_instance_file(arguments.instance)
        options = cosynthesis_options(inst, no_delete=arguments.no_delete)
        components = CoSynthesis(options).build_components(inst)
        out = Output(arguments.output, force=arguments.force)
        for a in components.automata():
            out.dump_automaton(a)
        return ExitCode.ok

    return _guarded(script, parser, args)


# synthesize #############################################################################

def synthesize_script(args=None) -> int:
    parser = _parser("synthesize",
                     "Co-synthesizes an edit function and a supervisor.")
    _add_instance(parser)
    _add_output(parser)
    parser.add_argument("--procedure", action="store", type=int, choices=(1, 2),
                        default=None, help="1: supervisor first; 2: edit function first.")
    parser.add_argument("--no-delete", action="store_true", default=None,
                        help="Forbid the edit function to delete editable events.")
    parser.add_argument("--strict-first-nonblocking", action="store_true", default=None,
                        help="Demand nonblockingness from the first synthesis.")
    parser.add_argument("--no-prune", dest="prune_dead_ends", action="store_false",
                        default=None, help="Do not prune dead-end beliefs.")
    parser.add_argument("--progress", action="store_true", default=None,
                        help="Show a progress bar over the supervisor rounds.")
    parser.add_argument("--verify", action="store_true",
                        help="Verify the synthesized pair.")

    def script(arguments):
        inst = load_instance_file(arguments.instance)
        options = cosynthesis_options(
            inst, procedure=arguments.procedure, no_delete=arguments.no_delete,
            strict_first_nonblocking=arguments.strict_first_nonblocking,
            prune_dead_ends=arguments.prune_dead_ends, progress=arguments.progress)
        cosynthesis = CoSynthesis(options, timing=arguments.debug)
        result = cosynthesis.run(inst)
        report = result.to_report()
        exit_code = ExitCode.ok
        if result.is_empty:
            exit_code = ExitCode.synthesis_empty
        elif arguments.verify:
            verification = verify(inst, result.edit_function, result.supervisor,
                                  components=cosynthesis.build_components(inst))
            report["verification"] = verification.to_dict()
            print(verification)
            if not verification.passed:
                exit_code = ExitCode.verification_failed
        if arguments.output:
            out = Output(arguments.output, force=arguments.force)
            if not result.is_empty:
                out.dump_automaton(result.supervisor)
                out.dump_automaton(result.edit_function)
            out.dump_report(report)
        print(create_banner(str(result)))
        if result.trace:
            print(result.rounds_frame().to_string(index=False))
        return exit_code

    return _guarded(script, parser, args)


def _instance_components(inst: ProblemInstance) -> Components:
    """Components built with the options of the instance's ``cosynthesis`` block."""
    return CoSynthesis(cosynthesis_options(inst)).build_components(inst)


# verify #################################################################################

def verify_script(args=None) -> int:
    parser = _parser("verify", "Verifies an edit function-supervisor pair.")
    _add_instance(parser)
    _add_pair(parser)

    def script(arguments):
        inst = load_instance_file(arguments.instance)
        pair = _load_pair(arguments)
        report = verify(inst, pair[Factor.edit_function], pair[Factor.supervisor],
                        components=_instance_components(inst))
        print(report)
        return ExitCode.ok if report.passed else ExitCode.verification_failed

    return _guarded(script, parser, args)


# simulate ###############################################################################

def simulate_script(args=None) -> int:
    parser = _parser("simulate", "Random walk of a closed loop.")
    _add_instance(parser)
    _add_pair(parser)
    parser.add_argument("--seed", action="store", type=int, default=None,
                        help="Seed of the random generator.")
    parser.add_argument("--steps", action="store", type=int, default=20,
                        help="Maximum number of steps.")

    def script(arguments):
        inst = load_instance_file(arguments.instance)
        pair = _load_pair(arguments)
        b = assemble_closed_loop(inst, pair[Factor.edit_function],
                                 pair[Factor.supervisor],
                                 components=_instance_components(inst))
        trace = simulate_run(b, seed=arguments.seed, steps=arguments.steps)
        print(trace_to_frame(trace).to_string())
        return ExitCode.ok

    return _guarded(script, parser, args)


# export #################################################################################

_component_choices = (Factor.plant, Factor.command_execution, Factor.edit_constraints,
                      Factor.supervisor_constraints, Factor.intruder, "P")


def _instance_component(inst: ProblemInstance, which: str) -> Automaton:
    components = _instance_components(inst)
    if which == "P":
        return components.plant_product()
    return next(a for a in components.automata() if a.name == which)


def export_script(args=None) -> int:
    parser = _parser("export", "Graphviz (DOT) description of an automaton.")
    parser.add_argument("file", action="store", metavar="file.yaml",
                        help="Automaton file, or instance file with --component.")
    parser.add_argument("--component", action="store", choices=_component_choices,
                        default=None, help="Component of the given instance to export.")
    parser.add_argument("--style", action="store", choices=graph_styles,
                        default="plain", help="One edge per transition, or merged.")
    parser.add_argument("-o", "--output", action="store", metavar="file.dot",
                        default=None, help="Output file (default: standard output).")

    def script(arguments):
        if arguments.component:
            a = _instance_component(load_instance_file(arguments.file),
                                    arguments.component)
        else:
            a = load_automaton_file(arguments.file)
        text = emit_graph(a, arguments.style)
        if arguments.output:
            with open(arguments.output, "w", encoding="utf-8") as f:
                f.write(text)
            log.info("Written %s", arguments.output)
        else:
            sys.stdout.write(text)
        return ExitCode.ok

    return _guarded(script, parser, args)


# example ################################################################################

def example_script(args=None) -> int:
    parser = _parser("example", "Writes the bundled example instance.")
    parser.add_argument("path", action="store", nargs="?", default="vehicle.yaml",
                        help="Where to write the instance.")

    def script(arguments):
        shutil.copyfile(example_instance_file(), arguments.path)
        log.info("Written %s", arguments.path)
        return ExitCode.ok

    return _guarded(script, parser, args)


commands: Dict[str, Callable[..., int]] = {
    "build": build_script,
    "synthesize": synthesize_script,
    "verify": verify_script,
    "simulate": simulate_script,
    "export": export_script,
    "example": example_script}

help_msg = ("Add one of the following commands and its arguments "
            "(`<command> -h` for help): %r" % list(commands))


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatches ``argv`` (without the program name) to a command script."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(help_msg)
        return ExitCode.ok
    script = commands.get(argv[0].lower())
    if script is None:
        print("Unknown command '%s'. %s" % (argv[0], help_msg))
        return ExitCode.input_error
    return script(argv[1:])


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
