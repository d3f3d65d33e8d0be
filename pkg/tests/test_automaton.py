# Tests of the automaton operations: products, observers, reachability and restriction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from opacsyn.events import plant_event, edited_copy, command, event_from_name, \
    is_reserved_name, STOP, DECODE, EventKind
from opacsyn.automaton import EmptyResult, sync_product, sync_all, observer, \
    natural_projection, unobservable_reach, reachable_states, coreachable_states, \
    is_nonblocking, is_marker_reachable, blocking_states, remove_states, run_word, \
    validate_definition, validate, reachable_part, minimize, StateLimitExceeded
from opacsyn.conventions import empty_belief

from .common import hand_automaton, random_automaton, all_words, estimate

a, b, c, u = (plant_event(x) for x in "abcu")


def two_automata():
    left = hand_automaton("L", [0, 1], "ab", [(0, "a", 1), (1, "b", 0)], 0, [0])
    right = hand_automaton("R", ["x", "y"], "bc", [("x", "b", "y"), ("x", "c", "x")],
                           "x", ["x", "y"])
    return left, right


def test_event_names():
    assert edited_copy("b").name == "b#"
    assert command(["c", "a"]).name == "cmd:a+c"
    assert event_from_name("cmd:a+c").enables == frozenset("ac")
    assert event_from_name("b#").kind is EventKind.EDITED
    assert event_from_name("b#").base == "b"
    assert event_from_name("stop") is STOP
    assert event_from_name("decode") is DECODE
    for name in ("stop", "decode", "x#", "cmd:x", "a+b"):
        assert is_reserved_name(name)
    assert not is_reserved_name("b_uc")
    # identity is the name
    assert plant_event("a") == event_from_name("a")
    assert len({plant_event("a"), plant_event("a")}) == 1


def test_sync_product_hand():
    left, right = two_automata()
    p = sync_product(left, right)
    assert p.states == ("(0|x)", "(1|x)", "(0|y)", "(1|y)")
    assert p.delta("(0|x)", b) is None
    assert p.delta("(1|x)", b) == "(0|y)"
    assert p.delta("(0|x)", c) == "(0|x)"
    assert p.delta("(1|y)", b) is None
    assert not p.enabled("(1|y)")
    assert p.marked == {"(0|x)", "(0|y)"}
    assert p.factor_names == ("L", "R")
    assert p.component("(0|y)", "R") == "y"
    assert p.alphabet == {a, b, c}


def test_sync_all_flattens_factors():
    left, right = two_automata()
    third = hand_automaton("T", ["t"], "c", [("t", "c", "t")], "t", ["t"])
    p = sync_all(left, right, third, name="P")
    assert p.name == "P"
    assert p.factor_names == ("L", "R", "T")
    assert p.initial == "(0|x|t)"
    assert p.component(p.initial, "T") == "t"


@given(integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_sync_product_language(seed):
    rng = np.random.default_rng(seed)
    left = random_automaton(rng, int(rng.integers(1, 4)), [a, b, c], name="L")
    right = random_automaton(rng, int(rng.integers(1, 4)), [b, c, u], name="R")
    p = sync_product(left, right)
    for word in all_words([a, b, c, u], 5):
        in_product = run_word(p, word) is not None
        in_both = (run_word(left, natural_projection(word, left.alphabet)) is not None and
                   run_word(right, natural_projection(word, right.alphabet)) is not None)
        assert in_product == in_both, word


def test_observer_hand():
    g = hand_automaton("G", [0, 1, 2, 3], "au",
                       [(0, "u", 1), (0, "a", 2), (1, "a", 3)], 0, [3])
    obs = observer(g, {a})
    assert obs.states == ("{0,1}", "{2,3}", empty_belief)
    assert obs.delta("{0,1}", a) == "{2,3}"
    assert obs.delta("{0,1}", u) == "{0,1}"
    assert obs.delta("{2,3}", a) == empty_belief
    assert not obs.enabled(empty_belief)
    assert obs.members["{2,3}"] == ("2", "3")
    assert obs.marked == {"{2,3}"}
    assert unobservable_reach(g, "0", {a}) == ("0", "1")


def test_observer_relabel():
    # a and b are both observed as b#
    g = hand_automaton("G", [0, 1, 2], "ab", [(0, "a", 1), (0, "b", 2)], 0, [2])
    label = edited_copy("b")
    obs = observer(g, {a, b}, relabel={a: label, b: label})
    assert obs.alphabet == {label}
    assert obs.delta("{0}", label) == "{1,2}"


@given(integers(0, 2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_observer_matches_estimates(seed):
    rng = np.random.default_rng(seed)
    events = [a, b, c, u]
    g = random_automaton(rng, int(rng.integers(1, 7)), events, name="G")
    visible = frozenset(e for e in events if rng.random() < 0.6)
    obs = observer(g, visible)
    for word in all_words(sorted(visible, key=lambda e: e.name), 4):
        belief = run_word(obs, word)
        expected = estimate(g, visible, word)
        if belief is None:
            # only prefixes of an already empty estimate are undefined
            assert not expected
            continue
        assert set(obs.members[belief]) == expected, word
    # every run of the plant ends in the belief of its observation
    for word in all_words(events, 5):
        q = run_word(g, word)
        if q is not None:
            belief = run_word(obs, natural_projection(word, visible))
            assert q in obs.members[belief]


def test_reachability():
    g = hand_automaton("G", [0, 1, 2, 3], "abc",
                       [(0, "a", 1), (0, "b", 2), (2, "c", 2)], 0, [1])
    assert reachable_states(g) == {"0", "1", "2"}
    assert coreachable_states(g) == {"0", "1"}
    assert blocking_states(g) == {"2", "3"}
    assert not is_nonblocking(g)
    assert is_marker_reachable(g)
    trimmed = remove_states(g, {"2"})
    assert is_nonblocking(reachable_part(trimmed))
    assert reachable_part(g).states == ("0", "1", "2")


def test_remove_states():
    g = hand_automaton("G", [0, 1, 2], "ab", [(0, "a", 1), (1, "b", 2)], 0, [2])
    cut = remove_states(g, {"1"})
    assert cut.states == ("0", "2")
    assert cut.delta("0", a) is None
    # not trimmed
    assert "2" in cut.states
    assert cut.marked == {"2"}
    with pytest.raises(EmptyResult):
        remove_states(g, {"0"})


def test_run_word_by_name():
    g = hand_automaton("G", [0, 1, 2], "ab", [(0, "a", 1), (1, "b", 2)], 0, [2])
    assert run_word(g, ["a", "b"]) == "2"
    assert run_word(g, ["b"]) is None
    assert run_word(g, ["zz"]) is None
    assert run_word(g, []) == "0"


def test_validate_definition():
    assert not validate_definition(["0", "1"], ["a"], [("0", "a", "1")], "0", ["1"])
    violations = validate_definition(["0", "1"], ["a"],
                                     [("0", "a", "1"), ("0", "a", "0"),
                                      ("0", "b", "1"), ("0", "a", "2")], "3", ["4"])
    assert any(v.startswith("nondeterministic") for v in violations)
    assert any(v.startswith("label not in alphabet") for v in violations)
    assert any(v.startswith("endpoint not in states") for v in violations)
    assert any(v.startswith("initial state") for v in violations)
    assert any(v.startswith("marked state") for v in violations)
    g = hand_automaton("G", [0, 1], "a", [(0, "a", 1)], 0, [1])
    assert validate(g) == []


def test_minimize():
    # 1 and 2 both loop on b forever: they merge, 3 is unreachable
    g = hand_automaton("G", [0, 1, 2, 3], "ab",
                       [(0, "a", 1), (0, "b", 2), (1, "b", 2), (2, "b", 1), (3, "a", 0)],
                       0, [1, 2])
    small = minimize(g, state_prefix="m")
    assert small.states == ("m0", "m1")
    assert small.initial == "m0"
    assert small.marked == {"m1"}
    assert small.delta("m0", a) == small.delta("m0", b) == "m1"
    assert small.delta("m1", b) == "m1"
    assert small.delta("m1", a) is None
    # names kept without a prefix
    assert minimize(g).states == ("0", "1")
    # the beliefs after a and after b only differ by their members
    h = hand_automaton("H", [0, 1, 2, 3], "abc",
                       [(0, "a", 1), (0, "b", 2), (1, "c", 3), (2, "c", 3)], 0, [3])
    beliefs = minimize(observer(h, {a, b, c}))
    assert beliefs.states == ("{0}", "{1}", empty_belief, "{3}")
    assert beliefs.delta("{0}", b) == "{1}"
    assert beliefs.members["{1}"] == ("1", "2")


@given(integers(0, 2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_minimize_keeps_language(seed):
    rng = np.random.default_rng(seed)
    events = [a, b, c]
    g = random_automaton(rng, int(rng.integers(1, 8)), events, name="G")
    small = minimize(g, state_prefix="m")
    assert len(small.states) <= len(reachable_states(g))
    assert not validate(small)
    for word in all_words(events, 5):
        q = run_word(g, word)
        q_small = run_word(small, word)
        assert (q is None) == (q_small is None), word
        if q is not None:
            assert (q in g.marked) == (q_small in small.marked), word
    # already minimal
    assert len(minimize(small).states) == len(small.states)


def test_state_limit():
    left, right = two_automata()
    assert len(sync_product(left, right, limit=4).states) == 4
    with pytest.raises(StateLimitExceeded, match="exceeded 2 states"):
        sync_product(left, right, limit=2)
    with pytest.raises(StateLimitExceeded):
        sync_all(left, right, limit=1)
    g = hand_automaton("G", [0, 1, 2], "ab", [(0, "a", 1), (1, "b", 2)], 0, [2])
    assert len(observer(g, {a, b}, limit=4).states) == 4
    with pytest.raises(StateLimitExceeded):
        observer(g, {a, b}, limit=3)
