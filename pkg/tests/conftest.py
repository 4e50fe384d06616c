"""Shared helpers: brute-force oracles and random machine generators."""

from __future__ import annotations

import itertools
import random

from fewcoin.automata import MultiheadAutomaton
from fewcoin.symbols import ENDMARKER, NULL_SYM, HeadMode
from fewcoin.verifier import VerifierMachine


def all_strings(alphabet, max_len):
    """Every string over the alphabet of length at most max_len."""
    for length in range(max_len + 1):
        for tup in itertools.product(sorted(alphabet), repeat=length):
            yield "".join(tup)


def random_multihead(rng: random.Random, max_states: int = 4,
                     head_count: int = 1, alphabet: str = "ab",
                     density: float = 0.7) -> MultiheadAutomaton:
    """Random small nondeterministic multihead automaton.

    Transitions are sampled per (state, scanned) pair; accept states are
    terminal by construction and escaping moves are left in (the runtime
    drops them), so the generated machines exercise the permissive paths.
    """
    n = rng.randint(2, max_states)
    states = [f"q{i}" for i in range(n)]
    accept = {states[-1]}
    syms = [ENDMARKER] + list(alphabet)
    transitions = {}
    for q in states:
        if q in accept:
            continue
        for scanned in itertools.product(syms, repeat=head_count):
            if rng.random() > density:
                continue
            choices = []
            for _ in range(rng.randint(1, 2)):
                q2 = rng.choice(states)
                moves = tuple(rng.choice([-1, 0, 1])
                              for _ in range(head_count))
                choices.append((q2, moves))
            transitions[(q, scanned)] = choices
    return MultiheadAutomaton(
        states=set(states), start=states[0], accept=accept,
        alphabet=set(alphabet), head_count=head_count,
        head_modes=[HeadMode.TWO_WAY] * head_count,
        transitions=transitions)


def random_2pfa(rng: random.Random, max_states: int = 3,
                alphabet: str = "ab", density: float = 0.85
                ) -> VerifierMachine:
    """Random two-way probabilistic finite automaton in verifier form.

    Every nonhalting state is a coin state that communicates nothing; a
    missing coin entry is a halt-reject, matching the runtime convention.
    """
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    syms = [ENDMARKER] + list(alphabet)
    delta = {}
    for q in states:
        for s in syms:
            for bit in (0, 1):
                if rng.random() > density:
                    continue
                target = rng.choice(states + ["ACC", "REJ"])
                move = rng.choice([-1, 0, 1])
                delta[(q, s, NULL_SYM, bit)] = (target, move)
    return VerifierMachine(
        states=set(states) | {"ACC", "REJ"}, start=states[0],
        accept="ACC", reject="REJ",
        coin_states=set(states),
        input_alphabet=set(alphabet), comm_alphabet={NULL_SYM},
        comm_symbol={q: NULL_SYM for q in states},
        input_head_mode=HeadMode.TWO_WAY,
        coin_budget=None, delta_coin=delta, delta_det={})


def looping_unary_machine() -> MultiheadAutomaton:
    """One-head machine for strings over {a, b} that end in b, with a
    nondeterministic branch that spins forever on any interior a."""
    transitions = {
        ("walk", (ENDMARKER,)): [("scan", (1,))],
        ("scan", ("a",)): [("spin", (0,)), ("scan", (1,))],
        ("scan", ("b",)): [("scan", (1,)), ("final", (1,))],
        ("spin", ("a",)): [("spin", (0,))],
        ("final", (ENDMARKER,)): [("ACC", (0,))],
    }
    return MultiheadAutomaton(
        states={"walk", "scan", "spin", "final", "ACC"}, start="walk",
        accept={"ACC"}, alphabet={"a", "b"}, head_count=1,
        head_modes=[HeadMode.TWO_WAY], transitions=transitions)
