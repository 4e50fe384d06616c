"""Multihead automaton semantics: runs, validation, and the clock."""

import itertools
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_strings, looping_unary_machine, random_multihead
from fewcoin.automata import (MHConfiguration, MultiheadAutomaton,
                              accepting_path, accepts, add_clock,
                              clock_step_bound, enumerate_language,
                              start_configuration, successors, validate)
from fewcoin.symbols import ENDMARKER, HeadMode


def test_accepts_matches_brute_force_on_random_machines():
    rng = random.Random(11)
    for _ in range(40):
        m = random_multihead(rng, head_count=1)
        for x in all_strings("ab", 4):
            expected = _reachable_accept(m, x)
            assert accepts(m, x) == expected


def _reachable_accept(m, x):
    """Independent fixpoint over configurations, written without reusing
    the successor helper's internals."""
    tape = (ENDMARKER,) + tuple(x) + (ENDMARKER,)
    n1 = len(x) + 1
    seen = set()
    stack = [(m.start, (0,) * m.head_count)]
    while stack:
        q, pos = stack.pop()
        if q in m.accept:
            return True
        if (q, pos) in seen:
            continue
        seen.add((q, pos))
        scanned = tuple(tape[p] for p in pos)
        for q2, moves in m.transitions.get((q, scanned), ()):
            pos2 = tuple(p + mv for p, mv in zip(pos, moves))
            if all(0 <= p <= n1 for p in pos2):
                stack.append((q2, pos2))
    return False


def test_accepting_path_replays_to_acceptance():
    rng = random.Random(23)
    checked = 0
    for _ in range(40):
        m = random_multihead(rng, head_count=1)
        for x in all_strings("ab", 4):
            path = accepting_path(m, x)
            if path is None:
                assert not accepts(m, x)
                continue
            assert accepts(m, x)
            checked += 1
            cur = start_configuration(m)
            for step in path:
                assert step.config == cur
                options = {c for c in successors(m, x, cur)}
                assert step.next in options
                cur = step.next
            assert cur.state in m.accept
    assert checked > 50


def test_accept_states_are_terminal():
    m = random_multihead(random.Random(3))
    for q in m.accept:
        cfg = MHConfiguration(q, (0,) * m.head_count)
        assert successors(m, "ab", cfg) == []


def test_missing_transition_halts():
    m = MultiheadAutomaton(
        states={"s", "ACC"}, start="s", accept={"ACC"},
        alphabet={"a"}, head_count=1, head_modes=[HeadMode.TWO_WAY],
        transitions={("s", (ENDMARKER,)): [("ACC", (0,))]})
    assert accepts(m, "")
    cfg = MHConfiguration("s", (1,))
    assert successors(m, "a", cfg) == []


def test_escaping_choice_is_dropped_at_runtime():
    m = MultiheadAutomaton(
        states={"s", "ACC"}, start="s", accept={"ACC"},
        alphabet={"a"}, head_count=1, head_modes=[HeadMode.TWO_WAY],
        transitions={("s", (ENDMARKER,)): [("s", (-1,)), ("ACC", (1,))]})
    cfg = start_configuration(m)
    nxt = successors(m, "a", cfg)
    assert [c.state for c in nxt] == ["ACC"]


def test_validate_flags_structural_errors():
    m = MultiheadAutomaton(
        states={"s"}, start="missing", accept={"also-missing"},
        alphabet={"a", ENDMARKER}, head_count=2,
        head_modes=[HeadMode.TWO_WAY, HeadMode.ONE_WAY],
        transitions={("s", ("a",)): [("s", (1, -1))]})
    rep = validate(m)
    kinds = {kind for kind, _ in rep.violations}
    assert "state" in kinds
    assert "alphabet" in kinds
    assert "arity" in kinds


def test_validate_flags_one_way_head_moving_left():
    m = MultiheadAutomaton(
        states={"s", "ACC"}, start="s", accept={"ACC"},
        alphabet={"a"}, head_count=1, head_modes=[HeadMode.ONE_WAY],
        transitions={("s", ("a",)): [("s", (-1,))]})
    rep = validate(m)
    assert any(kind == "mode" for kind, _ in rep.violations)


def test_validate_flags_reachable_marker_escape():
    m = MultiheadAutomaton(
        states={"s", "ACC"}, start="s", accept={"ACC"},
        alphabet={"a"}, head_count=1, head_modes=[HeadMode.TWO_WAY],
        transitions={("s", (ENDMARKER,)): [("s", (-1,))]})
    rep = validate(m)
    assert any(kind == "end-marker escape" for kind, _ in rep.violations)


def test_validate_accepts_clean_machine():
    rep = validate(looping_unary_machine())
    assert rep.ok, rep.violations


@given(st.integers(min_value=0, max_value=5), st.data())
@settings(max_examples=60, deadline=None)
def test_enumerate_language_agrees_with_accepts(seed, data):
    rng = random.Random(seed)
    m = random_multihead(rng, head_count=1)
    max_len = data.draw(st.integers(min_value=0, max_value=3))
    lang = enumerate_language(m, max_len)
    for x in all_strings("ab", max_len):
        assert (x in lang) == accepts(m, x)


# ---------------------------------------------------------------------------
# Clock augmentation.
# ---------------------------------------------------------------------------


def _has_nonhalting_cycle(m, x):
    start = start_configuration(m)
    color = {start: 1}
    node_stack = [start]
    it_stack = [iter(successors(m, x, start))]
    while node_stack:
        try:
            nxt = next(it_stack[-1])
        except StopIteration:
            color[node_stack.pop()] = 2
            it_stack.pop()
            continue
        if nxt.state in m.accept:
            continue
        c = color.get(nxt, 0)
        if c == 1:
            return True
        if c == 0:
            color[nxt] = 1
            node_stack.append(nxt)
            it_stack.append(iter(successors(m, x, nxt)))
    return False


def _longest_run(m, x):
    sys.setrecursionlimit(1000000)
    memo = {}

    def depth(cfg):
        if cfg in memo:
            return memo[cfg]
        memo[cfg] = 0
        best = 0
        for c2 in successors(m, x, cfg):
            best = max(best, 1 + depth(c2))
        memo[cfg] = best
        return best

    return depth(start_configuration(m))


def test_add_clock_removes_loops_and_preserves_language():
    m = looping_unary_machine()
    assert _has_nonhalting_cycle(m, "aa")
    clocked = add_clock(m)
    assert clocked.head_count == 2 * m.head_count
    for x in all_strings("ab", 6):
        assert accepts(m, x) == accepts(clocked, x)
    for x in all_strings("ab", 4):
        assert not _has_nonhalting_cycle(clocked, x)


def test_add_clock_runs_stay_within_declared_bound():
    clocked = add_clock(looping_unary_machine())
    for x in ["", "a", "aaaa", "abab", "bbbb"]:
        assert _longest_run(clocked, x) <= clock_step_bound(clocked, len(x))


def test_add_clock_on_random_machines():
    rng = random.Random(41)
    for _ in range(6):
        m = random_multihead(rng, max_states=3, head_count=1, density=0.5)
        clocked = add_clock(m)
        for x in all_strings("ab", 3):
            assert accepts(m, x) == accepts(clocked, x)
            assert not _has_nonhalting_cycle(clocked, x)
