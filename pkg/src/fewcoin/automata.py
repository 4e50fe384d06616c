"""Multihead finite automata over end-marked input tapes.

A machine has k heads, each with its own movement mode, walking over
``CENT x CENT`` (positions 0 .. n+1).  Transitions map a (state, scanned
symbol tuple) pair to an ordered list of (next state, move tuple) choices;
the list order is semantically relevant because certificate formats refer
to choices by index.

Conventions:
  * accept states are terminal (no outgoing transitions);
  * a missing transition entry means halt-and-reject;
  * a nondeterministic choice whose move would push a head past an
    end-marker is simply inapplicable at that position.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .symbols import ENDMARKER, HeadMode

Move = int
Scanned = tuple
Choice = tuple  # (next_state, moves)


@dataclass
class MultiheadAutomaton:
    states: set
    start: str
    accept: set
    alphabet: set
    head_count: int
    head_modes: list
    # (state, scanned) -> ordered list of (next_state, moves)
    transitions: dict = field(default_factory=dict)

    @property
    def deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.transitions.values())

    def tape(self, x: str):
        """Tape cells for input x: CENT, x..., CENT."""
        return (ENDMARKER,) + tuple(x) + (ENDMARKER,)


@dataclass(frozen=True)
class MHConfiguration:
    state: str
    positions: tuple

    def __iter__(self):
        yield self.state
        yield self.positions


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, detail: str):
        self.violations.append((kind, detail))


# Abstract head-position categories for end-marker analysis.
_LEFT, _MID, _RIGHT = "L", "M", "R"


def _abstract_moves(cat: str, move: int):
    """Possible categories after a move, or None if the move escapes."""
    if move == 0:
        return (cat,)
    if cat == _LEFT:
        return None if move < 0 else (_MID, _RIGHT)
    if cat == _RIGHT:
        return None if move > 0 else (_LEFT, _MID)
    # interior
    return (_LEFT, _MID) if move < 0 else (_MID, _RIGHT)


def validate(m: MultiheadAutomaton) -> ValidationReport:
    """Check structural invariants; returns a report, never raises.

    The end-marker rule is checked by an abstract reachability analysis
    over (state, per-head position category) where a category is one of
    left-marker / interior / right-marker.  A transition is reported as an
    escape when some abstractly reachable situation would move a head past
    a marker.  Runtime simulation additionally drops escaping choices, so
    the report is advisory for machines that rely on position knowledge
    the analysis cannot see.
    """
    rep = ValidationReport()
    if m.start not in m.states:
        rep.add("state", f"start state {m.start!r} not declared")
    for q in m.accept:
        if q not in m.states:
            rep.add("state", f"accept state {q!r} not declared")
    if len(m.head_modes) != m.head_count:
        rep.add("heads", "head_modes length differs from head_count")
        return rep
    if ENDMARKER in m.alphabet:
        rep.add("alphabet", "end-marker symbol is reserved")

    symbols_ok = set(m.alphabet) | {ENDMARKER}
    for (q, scanned), choices in m.transitions.items():
        if q not in m.states:
            rep.add("state", f"transition from undeclared state {q!r}")
        if q in m.accept:
            rep.add("terminal", f"accept state {q!r} has outgoing transitions")
        if len(scanned) != m.head_count:
            rep.add("arity", f"scanned tuple {scanned!r} has wrong arity")
            continue
        for s in scanned:
            if s not in symbols_ok:
                rep.add("alphabet", f"undeclared symbol {s!r} in transition key")
        for q2, moves in choices:
            if q2 not in m.states:
                rep.add("state", f"transition into undeclared state {q2!r}")
            if len(moves) != m.head_count:
                rep.add("arity", f"move tuple {moves!r} has wrong arity")
                continue
            for i, mv in enumerate(moves):
                if not m.head_modes[i].allows(mv):
                    rep.add("mode", f"head {i + 1} move {mv} violates "
                                    f"{m.head_modes[i].value} in state {q!r}")

    if not rep.ok:
        return rep

    _check_marker_escapes(m, rep)
    return rep


def _check_marker_escapes(m: MultiheadAutomaton, rep: ValidationReport):
    by_state = {}
    for (q, scanned), choices in m.transitions.items():
        by_state.setdefault(q, []).append((scanned, choices))

    start = (m.start, (_LEFT,) * m.head_count)
    seen = {start}
    queue = deque([start])
    flagged = set()
    while queue:
        q, cats = queue.popleft()
        for scanned, choices in by_state.get(q, ()):
            # consistency of the scanned tuple with the categories
            if any((s == ENDMARKER) != (c in (_LEFT, _RIGHT))
                   for s, c in zip(scanned, cats)):
                continue
            for q2, moves in choices:
                new_cats_options = []
                escape = False
                for c, mv in zip(cats, moves):
                    opts = _abstract_moves(c, mv)
                    if opts is None:
                        escape = True
                        break
                    new_cats_options.append(opts)
                if escape:
                    key = (q, scanned, q2, moves)
                    if key not in flagged:
                        flagged.add(key)
                        rep.add("end-marker escape",
                                f"state {q!r} on {scanned!r} moves {moves!r} "
                                f"past a marker")
                    continue
                if q2 in m.accept:
                    continue
                for combo in itertools.product(*new_cats_options):
                    nxt = (q2, combo)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)


def start_configuration(m: MultiheadAutomaton) -> MHConfiguration:
    return MHConfiguration(m.start, (0,) * m.head_count)


def successors(m: MultiheadAutomaton, x: str, c: MHConfiguration):
    """One-step successor configurations; empty for terminal configurations."""
    if c.state in m.accept:
        return []
    tape = m.tape(x)
    n1 = len(x) + 1
    scanned = tuple(tape[p] for p in c.positions)
    out = []
    for q2, moves in m.transitions.get((c.state, scanned), ()):
        pos2 = tuple(p + mv for p, mv in zip(c.positions, moves))
        if any(p < 0 or p > n1 for p in pos2):
            continue  # end-marker escape: choice inapplicable
        out.append(MHConfiguration(q2, pos2))
    return out


@dataclass(frozen=True)
class RunStep:
    """One step of a concrete run: configuration, scanned tuple, and the
    index of the chosen transition in construction order."""
    config: MHConfiguration
    scanned: tuple
    choice: int
    next: MHConfiguration


def _step_options(m: MultiheadAutomaton, x: str, c: MHConfiguration):
    """(choice index, scanned, successor) triples, skipping inapplicable moves
    but keeping the construction-order index."""
    if c.state in m.accept:
        return []
    tape = m.tape(x)
    n1 = len(x) + 1
    scanned = tuple(tape[p] for p in c.positions)
    out = []
    for j, (q2, moves) in enumerate(m.transitions.get((c.state, scanned), ())):
        pos2 = tuple(p + mv for p, mv in zip(c.positions, moves))
        if any(p < 0 or p > n1 for p in pos2):
            continue
        out.append((j, scanned, MHConfiguration(q2, pos2)))
    return out


def accepts(m: MultiheadAutomaton, x: str) -> bool:
    """Reachability of an accepting configuration in the finite
    configuration graph (at most |Q| (n+2)^k nodes)."""
    start = start_configuration(m)
    if start.state in m.accept:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for c2 in successors(m, x, c):
            if c2.state in m.accept:
                return True
            if c2 not in seen:
                seen.add(c2)
                queue.append(c2)
    return False


def accepting_path(m: MultiheadAutomaton, x: str):
    """One shortest accepting run as a list of RunStep, or None.

    Breadth-first layering; ties break on construction order of the
    transition lists, so the result is deterministic.
    """
    start = start_configuration(m)
    if start.state in m.accept:
        return []
    parent = {start: None}
    queue = deque([start])
    goal = None
    while queue and goal is None:
        c = queue.popleft()
        for j, scanned, c2 in _step_options(m, x, c):
            if c2 in parent:
                continue
            parent[c2] = (c, j, scanned)
            if c2.state in m.accept:
                goal = c2
                break
            queue.append(c2)
    if goal is None:
        return None
    steps = []
    cur = goal
    while parent[cur] is not None:
        prev, j, scanned = parent[cur]
        steps.append(RunStep(prev, scanned, j, cur))
        cur = prev
    steps.reverse()
    return steps


def enumerate_language(m: MultiheadAutomaton, max_len: int, alphabet=None):
    """All accepted strings of length <= max_len (desk scale only)."""
    syms = sorted(alphabet if alphabet is not None else m.alphabet)
    out = set()
    for length in range(max_len + 1):
        for tup in itertools.product(syms, repeat=length):
            x = "".join(tup)
            if accepts(m, x):
                out.add(x)
    return out


# ---------------------------------------------------------------------------
# Clock augmentation: k extra heads implementing a base-(n+2) odometer that
# cuts off every branch after |Q| (n+2)^k simulated steps.
# ---------------------------------------------------------------------------

_ACCEPT = "CLK_ACCEPT"


def clock_step_bound(m: MultiheadAutomaton, n: int) -> int:
    """Upper bound on the total step count of any branch of add_clock(m)
    on inputs of length n."""
    return (len(m.states) + 8) * (n + 2) ** m.head_count


def add_clock(m: MultiheadAutomaton) -> MultiheadAutomaton:
    """Equivalent 2k-head machine in which every branch halts.

    Heads 1..k replay the original machine; heads k+1..2k hold the digits
    of a base-(n+2) counter (digit value = head position).  The counter
    ticks once every |Q| simulated steps, so overflow of the last digit
    means more than |Q| (n+2)^k steps were simulated, which only happens
    on looping branches; those are cut off by halt-rejection.
    """
    k = m.head_count
    nq = len(m.states)
    sim_alphabet = sorted(m.alphabet) + [ENDMARKER]

    def s_sim(q, cnt, bits):
        return f"sim[{q}]{cnt}{''.join('1' if b else '0' for b in bits)}"

    def s_inc(i, q, cnt, bits):
        return f"inc{i}[{q}]{cnt}{''.join('1' if b else '0' for b in bits)}"

    def s_rst(i, q, cnt, bits):
        return f"rst{i}[{q}]{cnt}{''.join('1' if b else '0' for b in bits)}"

    transitions = {}
    states = {_ACCEPT}
    all_bits = list(itertools.product((False, True), repeat=k))
    zero = (0,) * k

    by_state = {}
    for (q, scanned), choices in m.transitions.items():
        by_state.setdefault(q, []).append((scanned, choices))

    for q in m.states:
        if q in m.accept:
            continue
        for cnt in range(nq):
            for bits in all_bits:
                sim = s_sim(q, cnt, bits)
                states.add(sim)
                for scanned, choices in by_state.get(q, ()):
                    for clock_scanned in itertools.product(sim_alphabet, repeat=k):
                        key = (sim, scanned + clock_scanned)
                        ch = []
                        for q2, moves in choices:
                            mv = moves + zero
                            if q2 in m.accept:
                                ch.append((_ACCEPT, mv))
                            elif cnt + 1 < nq:
                                ch.append((s_sim(q2, cnt + 1, bits), mv))
                            else:
                                ch.append((s_inc(1, q2, 0, bits), mv))
                        transitions.setdefault(key, []).extend(ch)

    # increment / reset machinery; sim heads stay put, sim symbols ignored
    def clock_entries(name, digit, entry_fn):
        """Add entries for every scanned combination; entry_fn maps the
        digit head's symbol to (target, digit move) or None."""
        for sim_scanned in itertools.product(sim_alphabet, repeat=k):
            for clock_scanned in itertools.product(sim_alphabet, repeat=k):
                res = entry_fn(clock_scanned[digit - 1])
                if res is None:
                    continue
                target, dmv = res
                moves = zero + tuple(
                    dmv if i == digit - 1 else 0 for i in range(k))
                transitions.setdefault(
                    (name, sim_scanned + clock_scanned), []).append((target, moves))

    for q in m.states:
        if q in m.accept:
            continue
        for cnt in range(nq):
            for bits in all_bits:
                for i in range(1, k + 1):
                    inc = s_inc(i, q, cnt, bits)
                    states.add(inc)
                    at_left = bits[i - 1]
                    bits_off = tuple(b if j != i - 1 else False
                                     for j, b in enumerate(bits))
                    bits_on = tuple(b if j != i - 1 else True
                                    for j, b in enumerate(bits))

                    def inc_entry(sym, *, i=i, at_left=at_left,
                                  bits_off=bits_off, q=q, cnt=cnt, bits=bits):
                        if at_left or sym != ENDMARKER:
                            return (s_sim(q, cnt, bits_off), 1)
                        # at the right marker: digit overflow
                        if i == k:
                            return None  # clock expired: halt-reject
                        return (s_rst(i, q, cnt, bits), -1)

                    clock_entries(inc, i, inc_entry)

                    if i < k:
                        rst = s_rst(i, q, cnt, bits)
                        states.add(rst)

                        # the walk keeps the current bits; only completion
                        # flips the digit's at-left bit
                        def rst_entry(sym, *, i=i, q=q, cnt=cnt, bits=bits,
                                      bits_on=bits_on):
                            if sym != ENDMARKER:
                                return (s_rst(i, q, cnt, bits), -1)
                            return (s_inc(i + 1, q, cnt, bits_on), 0)

                        clock_entries(rst, i, rst_entry)

    start_bits = (True,) * k
    if m.start in m.accept:
        start = _ACCEPT
    else:
        start = s_sim(m.start, 0, start_bits)

    modes = list(m.head_modes) + [HeadMode.TWO_WAY] * k
    return MultiheadAutomaton(
        states=states,
        start=start,
        accept={_ACCEPT},
        alphabet=set(m.alphabet),
        head_count=2 * k,
        head_modes=modes,
        transitions=transitions,
    )
