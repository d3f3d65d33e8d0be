# Tests of the instance and automaton files, the graph export, the random walks
# and the command line scripts

import os
from itertools import islice

import pytest

from opacsyn.automaton import from_triples
from opacsyn.events import EventKind
from opacsyn.input import load_instance, load_automaton, load_instance_file, \
    load_automaton_file, example_instance_file
from opacsyn.output import automaton_to_yaml, Output
from opacsyn.export import emit_graph
from opacsyn.components import build_components, build_intruder
from opacsyn.conventions import Factor, ExitCode, empty_belief
from opacsyn.cosynthesis import procedure1
from opacsyn.simulate import simulate_run, trace_events, trace_to_frame
from opacsyn.verifier import assemble_closed_loop, permissive_automaton, verify, \
    intruder_observation
from opacsyn.log import LoggedError, NoLogging
from opacsyn.yaml import InputSyntaxError
from opacsyn.run import run_cli

from .common import hand_automaton

small_yaml = """
alphabet:
  events: [a, b, u]
  controllable: [a, b]
  observable: [a, b]
edit:
  observable: [a, b]
  editable: [a]
  bound: 1
intruder:
  observable: [a, b]
plant:
  states: [0, 1, 2]
  initial: 0
  marked: [2]
  secret: [1]
  transitions:
    - [0, a, 1]
    - [1, u, 1]
    - [1, b, 2]
"""


def test_parse_example(example):
    spec = example.spec
    assert len(spec.sigma) == 5
    assert spec.uncontrollable == {"b_uc"}
    assert spec.unobservable == {"c_uo"}
    assert spec.bound == 1
    assert spec.aliases == {"b_uc": "b"}
    assert len(spec.commands) == 7
    assert example.secret == {"5"}
    assert example.requirement is not None
    assert example.name == "vehicle"
    assert example.plant.initial == "0"


def test_parse_small():
    inst = load_instance(small_yaml)
    assert inst.name == "instance"
    assert inst.spec.commands == ()
    assert inst.requirement is None
    assert inst.options == {}
    assert inst.plant.marked == {"2"}


def test_input_errors():
    with pytest.raises(LoggedError, match="not edit observable"):
        load_instance(small_yaml.replace("editable: [a]", "editable: [u]"))
    with pytest.raises(LoggedError, match="reserved"):
        load_instance(small_yaml.replace("events: [a, b, u]", "events: [a, b, u, x#]"))
    with pytest.raises(LoggedError, match=r"Unknown key 'intruders'.*line 10"):
        load_instance(small_yaml.replace("intruder:", "intruders:"))
    with pytest.raises(LoggedError, match="nondeterministic"):
        load_instance(small_yaml + "    - [0, a, 2]\n")
    with pytest.raises(LoggedError, match="Missing block 'plant'"):
        load_instance(small_yaml.split("plant:")[0])
    with pytest.raises(InputSyntaxError):
        load_instance(small_yaml.replace("bound: 1", "bound = 1\n  x: [1"))


def test_automaton_files(example):
    s = procedure1(example).supervisor
    text = automaton_to_yaml(s)
    loaded = load_automaton(text)
    assert loaded.states == s.states
    assert loaded.alphabet == s.alphabet
    assert loaded.members == s.members
    assert all(dict(loaded.enabled(q)) == dict(s.enabled(q)) for q in s.states)
    # byte stability
    assert automaton_to_yaml(loaded) == text
    intruder = build_intruder(example)
    text = automaton_to_yaml(intruder)
    loaded = load_automaton(text)
    assert empty_belief in loaded.states
    assert automaton_to_yaml(loaded) == text


def test_output_files(tmp_path):
    a = hand_automaton("G", [0, 1], "a", [(0, "a", 1)], 0, [1])
    out = Output(str(tmp_path / "sub" / "run"))
    name = out.dump_automaton(a, comment="hand made")
    assert name == str(tmp_path / "sub" / "run_G.yaml")
    with open(name) as f:
        assert f.readline() == "# hand made\n"
    with pytest.raises(LoggedError, match="force"):
        out.dump_automaton(a)
    Output(str(tmp_path / "sub" / "run"), force=True).dump_automaton(a)


def test_graphs():
    a = hand_automaton("G", [0, 1], "ab", [(0, "a", 1), (0, "b", 1)], 0, [1])
    plain = emit_graph(a)
    assert plain.startswith('digraph "G" {\n')
    assert '"1" [shape=doublecircle];' in plain
    assert '"0" [shape=circle];' in plain
    assert '__start -> "0";' in plain
    assert '"0" -> "1" [label="a"];' in plain
    assert '"0" -> "1" [label="b"];' in plain
    merged = emit_graph(a, "merged")
    assert '"0" -> "1" [label="a, b"];' in merged
    assert merged.count("->") == 2
    assert emit_graph(a) == plain
    with pytest.raises(LoggedError):
        emit_graph(a, "fancy")


def test_simulation(example):
    result = procedure1(example)
    b = assemble_closed_loop(example, result.edit_function, result.supervisor)
    trace = simulate_run(b, seed=1234, steps=30)
    assert trace == simulate_run(b, seed=1234, steps=30)
    assert trace[0].event is None and trace[0].state == b.initial
    for before, after in zip(trace, trace[1:]):
        assert b.delta(before.state, b.event(after.event)) == after.state
        assert after.step == before.step + 1
    assert trace[-1].plant == b.component(trace[-1].state, Factor.plant)
    assert len(trace_events(trace)) == len(trace) - 1
    frame = trace_to_frame(trace)
    assert frame.index.name == "step"
    assert list(frame["event"])[1:] == trace_events(trace)


def test_simulation_deadlock():
    a = hand_automaton("G", [0, 1], "a", [(0, "a", 1)], 0, [1])
    trace = simulate_run(a, seed=0, steps=10)
    assert trace_events(trace) == ["a"]
    assert trace[-1].deadlock
    assert not trace[0].deadlock
    assert trace[-1].plant == "1"


@pytest.mark.slow
def test_simulation_reaches_edited_observation(example):
    result = procedure1(example)
    b = assemble_closed_loop(example, result.edit_function, result.supervisor)
    target = ("b#", "c#", "b#")
    with NoLogging():
        seed = next((seed for seed in range(20000)
                     if intruder_observation(
                         trace_events(simulate_run(b, seed=seed, steps=20)),
                         example.spec)[:len(target)] == target), None)
    assert seed is not None


# Command line ###########################################################################

def test_cli(tmp_path):
    instance = str(tmp_path / "example.yaml")
    assert run_cli(["example", instance]) == ExitCode.ok
    assert os.path.isfile(instance)
    prefix = str(tmp_path / "out" / "run")
    assert run_cli(["synthesize", instance, "-o", prefix]) == ExitCode.ok
    s_file, e_file = prefix + "_S.yaml", prefix + "_E.yaml"
    for name in (s_file, e_file, prefix + "_report.yaml"):
        assert os.path.isfile(name)
    # existing output is kept
    assert run_cli(["synthesize", instance, "-o", prefix]) == ExitCode.input_error
    assert run_cli(["synthesize", instance, "-o", prefix, "-f", "--verify"]) == \
        ExitCode.ok
    assert run_cli(["verify", instance, "-s", s_file, "-e", e_file]) == ExitCode.ok
    components = build_components(load_instance_file(instance))
    tampered = Output(prefix + "_tampered")
    e_permissive = tampered.dump_automaton(
        permissive_automaton(components.universe, Factor.edit_function))
    assert run_cli(["verify", instance, "-s", s_file, "-e", e_permissive]) == \
        ExitCode.verification_failed
    assert run_cli(["synthesize", instance, "--strict-first-nonblocking"]) == \
        ExitCode.synthesis_empty
    assert run_cli(["simulate", instance, "-s", s_file, "-e", e_file, "--seed", "3"]) \
        == ExitCode.ok
    dot = str(tmp_path / "intruder.dot")
    assert run_cli(["export", instance, "--component", "I", "-o", dot]) == ExitCode.ok
    with open(dot) as f:
        assert f.read().startswith('digraph "I"')
    assert run_cli(["export", s_file, "--style", "merged"]) == ExitCode.ok


def test_cli_reproducible(tmp_path):
    instance = str(tmp_path / "example.yaml")
    assert run_cli(["example", instance]) == ExitCode.ok
    prefixes = [str(tmp_path / name) for name in ("first", "second")]
    for prefix in prefixes:
        assert run_cli(["synthesize", instance, "-o", prefix]) == ExitCode.ok
    for what in ("S", "E", "report"):
        with open(prefixes[0] + "_%s.yaml" % what, "rb") as first, \
                open(prefixes[1] + "_%s.yaml" % what, "rb") as second:
            assert first.read() == second.read(), what


def _redirections(e):
    """Copies of ``e`` with a single edited-copy transition sent elsewhere."""
    triples = list(e.triples())
    for i, (src, event, dst) in enumerate(triples):
        if event.kind is not EventKind.EDITED:
            continue
        for q in e.states:
            if q != dst:
                changed = triples[:i] + [(src, event, q)] + triples[i + 1:]
                yield from_triples(e.name, e.states, e.alphabet, changed, e.initial,
                                   e.marked)


def test_cli_tampered_edit_function(tmp_path, capsys):
    instance = str(tmp_path / "example.yaml")
    assert run_cli(["example", instance]) == ExitCode.ok
    prefix = str(tmp_path / "run")
    assert run_cli(["synthesize", instance, "-o", prefix]) == ExitCode.ok
    s_file, e_file = prefix + "_S.yaml", prefix + "_E.yaml"
    inst = load_instance_file(instance)
    s, e = load_automaton_file(s_file), load_automaton_file(e_file)
    components = build_components(inst)
    with NoLogging():
        tampered = next((t for t in islice(_redirections(e), 300)
                         if not verify(inst, t, s, components=components).passed), None)
    assert tampered is not None
    assert sum(tampered.delta(q, x) != e.delta(q, x)
               for q in e.states for x in e.alphabet) == 1
    e_tampered = Output(prefix + "_tampered").dump_automaton(tampered)
    capsys.readouterr()
    assert run_cli(["verify", instance, "-s", s_file, "-e", e_tampered]) == \
        ExitCode.verification_failed
    assert "witness (" in capsys.readouterr().out


def test_cli_instance_options(tmp_path):
    with open(example_instance_file()) as f:
        text = f.read()
    plain, no_delete = str(tmp_path / "plain.yaml"), str(tmp_path / "no_delete.yaml")
    with open(plain, "w") as f:
        f.write(text)
    with open(no_delete, "w") as f:
        f.write(text + "cosynthesis:\n  procedure: 2\n  no_delete: true\n")
    graphs = []
    for instance in (plain, no_delete):
        dot = instance.replace(".yaml", "_EC.dot")
        assert run_cli(["export", instance, "--component", "EC", "-o", dot]) == \
            ExitCode.ok
        with open(dot) as f:
            graphs.append(f.read())
    # the edit constraints follow the option of the instance file
    assert graphs[0] != graphs[1]
    prefix = str(tmp_path / "run")
    assert run_cli(["synthesize", no_delete, "-o", prefix, "--verify"]) == ExitCode.ok
    s_file, e_file = prefix + "_S.yaml", prefix + "_E.yaml"
    assert run_cli(["verify", no_delete, "-s", s_file, "-e", e_file]) == ExitCode.ok
    assert run_cli(["simulate", no_delete, "-s", s_file, "-e", e_file, "--seed", "7"]) \
        == ExitCode.ok


def test_cli_errors(tmp_path):
    missing = str(tmp_path / "missing.yaml")
    assert run_cli(["verify", missing, "-s", missing, "-e", missing]) == \
        ExitCode.input_error
    broken = str(tmp_path / "broken.yaml")
    with open(broken, "w") as f:
        f.write(small_yaml.replace("bound: 1", "bound: -1"))
    assert run_cli(["synthesize", broken]) == ExitCode.input_error
    assert run_cli(["frobnicate"]) == ExitCode.input_error
    assert run_cli([]) == ExitCode.ok
    assert os.path.isfile(example_instance_file())
