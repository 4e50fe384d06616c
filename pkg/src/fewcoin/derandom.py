"""Deterministic replacements for constant-coin verifiers.

Three constructions:
  * expand_coins hardwires each coin string, yielding 2^B deterministic
    verifiers whose uniform mixture reproduces the original distribution;
  * check_private_coin / check_public_coin validate multi-track
    certificates (one track per hardwired machine) against the machines'
    actual behavior and take a strict majority vote;
  * to_one_way_multihead turns a one-way-input verifier into a one-way
    nondeterministic multihead automaton (one head per coin string) that
    guesses certificate symbols on the fly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .automata import MultiheadAutomaton
from .symbols import (ENDMARKER, HALT_MARK, LOOP_MARK, NULL_SYM, PAD_SYM,
                      HeadMode)
from .verifier import (VerifierMachine, _A, _N, _R, _advance,
                       all_coin_strings)

_ACC = "ACC"
_REJ = "REJ"


def expand_coins(v: VerifierMachine) -> list:
    """One deterministic verifier per coin string, states annotated with
    the number of coins consumed so far."""
    out = []
    budget = v.coin_budget

    def name(q, u):
        if q == v.accept:
            return _ACC
        if q == v.reject:
            return _REJ
        return f"{q}@{u}"

    for coins in all_coin_strings(budget):
        states = {_ACC, _REJ}
        comm_symbol = {}
        delta_det = {}
        for u in range(budget + 1):
            for q in v.states:
                if q in (v.accept, v.reject):
                    continue
                nq = name(q, u)
                states.add(nq)
                if v.communicates(q):
                    comm_symbol[nq] = v.sent(q)
                if q in v.coin_states:
                    if u >= budget:
                        continue  # budget spent: missing entry rejects
                    bit = coins[u]
                    for (q0, sym, recv, b), (q2, mv) in v.delta_coin.items():
                        if q0 == q and b == bit:
                            delta_det[(nq, sym, recv)] = (name(q2, u + 1), mv)
                else:
                    for (q0, sym, recv), (q2, mv) in v.delta_det.items():
                        if q0 == q:
                            delta_det[(nq, sym, recv)] = (name(q2, u), mv)
        out.append(VerifierMachine(
            states=states,
            start=name(v.start, 0),
            accept=_ACC,
            reject=_REJ,
            coin_states=set(),
            input_alphabet=set(v.input_alphabet),
            comm_alphabet=set(v.comm_alphabet),
            comm_symbol=comm_symbol,
            input_head_mode=v.input_head_mode,
            coin_budget=0,
            delta_det=delta_det,
        ))
    return out


@dataclass
class CheckResult:
    accepted: bool
    reason: str = ""

    def __bool__(self):
        return self.accepted


def step_cutoff(v: VerifierMachine, n: int) -> int:
    """Configuration count of a constant-space verifier between
    communications."""
    return len(v.states) * (n + 2)


def default_column_cap(v: VerifierMachine, n: int) -> int:
    return step_cutoff(v, n) * 2 ** v.coin_budget


def _majority(accepting: int, machine_count: int) -> bool:
    return 2 * accepting > machine_count


def check_private_coin(v: VerifierMachine, x: str, columns,
                       max_columns: int | None = None) -> CheckResult:
    """Validate a multi-track certificate against every hardwired-coin
    machine simultaneously.

    Column j claims, per machine, either its j-th received symbol, an
    early-halt mark, or a communication-free-loop mark.  Claims are
    checked against the machines' actual behavior; machines whose sent
    transcripts agree so far must claim identical responses (the prover
    cannot tell them apart).  Accept iff a strict majority is observed to
    halt in the accept state.
    """
    coin_strings = all_coin_strings(v.coin_budget)
    n_mach = len(coin_strings)
    cap = max_columns if max_columns is not None else default_column_cap(v, len(x))
    if len(columns) > cap:
        return CheckResult(False, f"certificate longer than the {cap}-column cap")

    status = [_advance(v, x, coins, v.start, 0, 0, None)
              for coins in coin_strings]
    sent_history = [[] for _ in range(n_mach)]

    for j, column in enumerate(columns, start=1):
        if len(column) != n_mach:
            return CheckResult(
                False, f"column {j} has {len(column)} tracks, expected {n_mach}")
        # private-coin consistency: same sent transcript, same response
        claims = {}
        for i, entry in enumerate(column):
            st = status[i]
            if isinstance(st, tuple):
                key = tuple(sent_history[i]) + (v.sent(st[1]),)
                prev = claims.get(key)
                if prev is not None and prev != entry:
                    return CheckResult(
                        False, f"column {j}: tracks with equal transcripts "
                               f"claim {prev!r} and {entry!r}")
                claims[key] = entry
        for i, entry in enumerate(column):
            st = status[i]
            if st == _A or st == _R:
                if entry != HALT_MARK:
                    return CheckResult(
                        False, f"column {j}, track {i + 1}: machine halted "
                               f"but track shows {entry!r}")
            elif st == _N:
                if entry != LOOP_MARK:
                    return CheckResult(
                        False, f"column {j}, track {i + 1}: machine loops "
                               f"but track shows {entry!r}")
            else:
                if entry in (HALT_MARK, LOOP_MARK, NULL_SYM):
                    return CheckResult(
                        False, f"column {j}, track {i + 1}: machine "
                               f"communicates but track shows {entry!r}")
                if entry not in v.comm_alphabet and entry != PAD_SYM:
                    return CheckResult(
                        False, f"column {j}, track {i + 1}: unknown "
                               f"response {entry!r}")
                _, q, pos, used = st
                sent_history[i].append(v.sent(q))
                status[i] = _advance(v, x, coin_strings[i], q, pos, used, entry)

    accepted = sum(1 for st in status if st == _A)
    if _majority(accepted, n_mach):
        return CheckResult(True, f"{accepted}/{n_mach} machines accept")
    return CheckResult(
        False, f"only {accepted}/{n_mach} machines verified accepting")


def make_multitrack_certificate(v: VerifierMachine, x: str, cert,
                                max_columns: int | None = None) -> list:
    """Transcribe the runs of every hardwired-coin machine on a one-way
    certificate into the multi-track format accepted by
    check_private_coin."""
    cert = list(cert)
    coin_strings = all_coin_strings(v.coin_budget)
    cap = max_columns if max_columns is not None else default_column_cap(v, len(x))
    status = [_advance(v, x, coins, v.start, 0, 0, None)
              for coins in coin_strings]
    columns = []
    j = 0
    while any(isinstance(st, tuple) for st in status):
        if j >= cap:
            raise ValueError("certificate transcription exceeds the column cap")
        recv = cert[j] if j < len(cert) else PAD_SYM
        column = []
        for i, st in enumerate(status):
            if isinstance(st, tuple):
                column.append(recv)
                _, q, pos, used = st
                status[i] = _advance(v, x, coin_strings[i], q, pos, used, recv)
            elif st == _N:
                column.append(LOOP_MARK)
            else:
                column.append(HALT_MARK)
        columns.append(column)
        j += 1
    columns.append([LOOP_MARK if st == _N else HALT_MARK for st in status])
    return columns


def search_private_coin_certificate(v: VerifierMachine, x: str,
                                    alphabet=None,
                                    max_columns: int | None = None):
    """Multi-track certificate accepted by check_private_coin, or None.

    Searches over joint machine states, choosing one response per block of
    transcript-equivalent machines per column, so it explores exactly the
    certificates a private-coin prover could produce.
    """
    if alphabet is None:
        alphabet = sorted(s for s in v.comm_alphabet if s != NULL_SYM)
    coin_strings = all_coin_strings(v.coin_budget)
    n_mach = len(coin_strings)
    cap = max_columns if max_columns is not None else default_column_cap(v, len(x))

    start_status = tuple(_advance(v, x, coins, v.start, 0, 0, None)
                         for coins in coin_strings)
    start_blocks = (tuple(range(n_mach)),)

    def accepted(statuses):
        return _majority(sum(1 for st in statuses if st == _A), n_mach)

    if accepted(start_status):
        return make_multitrack_certificate(v, x, [])

    seen = {(start_status, start_blocks)}
    frontier = [(start_status, start_blocks, [])]
    for _ in range(cap):
        nxt = []
        for statuses, blocks, columns in frontier:
            waiting_blocks = []
            for block in blocks:
                groups = {}
                for i in block:
                    st = statuses[i]
                    if isinstance(st, tuple):
                        groups.setdefault(v.sent(st[1]), []).append(i)
                for sent, members in sorted(groups.items()):
                    waiting_blocks.append(tuple(members))
            if not waiting_blocks:
                continue
            for combo in itertools.product(alphabet, repeat=len(waiting_blocks)):
                response = {}
                for block, sym in zip(waiting_blocks, combo):
                    for i in block:
                        response[i] = sym
                column = []
                new_status = list(statuses)
                for i, st in enumerate(statuses):
                    if i in response:
                        column.append(response[i])
                        _, q, pos, used = st
                        new_status[i] = _advance(
                            v, x, coin_strings[i], q, pos, used, response[i])
                    elif st == _N:
                        column.append(LOOP_MARK)
                    else:
                        column.append(HALT_MARK)
                new_status = tuple(new_status)
                new_cols = columns + [column]
                if accepted(new_status):
                    final = [LOOP_MARK if st == _N else HALT_MARK
                             if not isinstance(st, tuple) else PAD_SYM
                             for st in new_status]
                    # machines still waiting keep their tracks unresolved;
                    # the checker never counts them as accepting, so the
                    # found columns alone already pass
                    return new_cols
                key = (new_status, tuple(waiting_blocks))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((new_status, tuple(waiting_blocks), new_cols))
        if not nxt:
            return None
        frontier = nxt
    return None


def check_public_coin(v: VerifierMachine, x: str, transcripts) -> CheckResult:
    """Per-machine claimed transcripts, checked independently (the prover
    sees the coins, so no cross-machine consistency applies)."""
    coin_strings = all_coin_strings(v.coin_budget)
    n_mach = len(coin_strings)
    if len(transcripts) != n_mach:
        return CheckResult(
            False, f"{len(transcripts)} transcripts for {n_mach} machines")
    accepted = 0
    for i, (coins, transcript) in enumerate(zip(coin_strings, transcripts)):
        st = _advance(v, x, coins, v.start, 0, 0, None)
        ok = True
        for sent, recv in transcript:
            if not isinstance(st, tuple):
                ok = False  # claims a communication that never happens
                break
            _, q, pos, used = st
            if v.sent(q) != sent:
                ok = False
                break
            st = _advance(v, x, coins, q, pos, used, recv)
        if ok and st == _A:
            accepted += 1
    if _majority(accepted, n_mach):
        return CheckResult(True, f"{accepted}/{n_mach} machines accept")
    return CheckResult(
        False, f"only {accepted}/{n_mach} machines verified accepting")


# ---------------------------------------------------------------------------
# One-way verifier -> one-way multihead nondeterministic automaton.
# ---------------------------------------------------------------------------

_INIT = "INIT"
_PADMODE = "PADMODE"


class _Universe:
    """Stand-in state set for machines whose reachable states are not
    enumerated up front."""

    def __contains__(self, item):
        return True

    def __iter__(self):
        return iter(())

    def __len__(self):
        return 0


class _OneWayTable:
    """On-demand transition table of the 2^B-head simulation automaton."""

    def __init__(self, v: VerifierMachine, guess_alphabet):
        self.v = v
        self.coin_strings = all_coin_strings(v.coin_budget)
        self.n_mach = len(self.coin_strings)
        self.guess_alphabet = list(guess_alphabet)
        self.threshold = len(v.states) * (v.coin_budget + 1)
        self.zero = (0,) * self.n_mach
        self._cache = {}

    def get(self, key, default=()):
        try:
            return self._cache[key]
        except KeyError:
            choices = self._compute(*key)
            self._cache[key] = choices
            return choices if choices else default

    def __getitem__(self, key):
        got = self.get(key, None)
        if got is None:
            raise KeyError(key)
        return got

    def _machine_step(self, i, status, sym, gamma):
        """One step of hardwired machine i; returns (new status, head move)."""
        v = self.v
        if status[0] == "w":
            _, q, used, left = status
            recv = PAD_SYM if gamma == _PADMODE else gamma
            cnt = 0
        else:
            _, q, used, cnt, left = status
            recv = NULL_SYM
        if q in v.coin_states:
            if used >= v.coin_budget:
                return ("R", 0)
            bit = self.coin_strings[i][used]
            used += 1
            tr = v.delta_coin.get((q, sym, recv, bit))
        else:
            tr = v.delta_det.get((q, sym, recv))
        if tr is None:
            return ("R", 0)
        q2, mv = tr
        if q2 == v.accept:
            return ("A", 0)
        if q2 == v.reject:
            return ("R", 0)
        if mv > 0 and sym == ENDMARKER and not left:
            return ("R", 0)  # would walk past the right end-marker
        left2 = left and mv == 0
        if v.communicates(q2):
            return (("w", q2, used, left2), mv)
        cnt2 = 0 if mv > 0 else cnt + 1
        if cnt2 >= self.threshold:
            return ("L", 0)  # stationary non-communicating loop
        return (("run", q2, used, cnt2, left2), mv)

    def _compute(self, control, scanned):
        if control == _ACC:
            return []
        kind = control[0]
        if kind == "ready":
            statuses = control[1]
            out = [(("adv", 0, g, statuses), self.zero)
                   for g in self.guess_alphabet]
            out.append((("adv", 0, _PADMODE, statuses), self.zero))
            return out

        _, t, gamma, statuses = control
        accepted = sum(1 for st in statuses if st == "A")
        if 2 * accepted > self.n_mach:
            return [(_ACC, self.zero)]
        if t == self.n_mach:
            if not any(isinstance(st, tuple) and st[0] == "w"
                       for st in statuses):
                return []  # nothing can progress and no majority: reject
            if gamma == _PADMODE:
                return [(("adv", 0, _PADMODE, statuses), self.zero)]
            return [(("ready", statuses), self.zero)]

        st = statuses[t]
        if st in ("A", "R", "L") or (st[0] == "w" and gamma == _INIT):
            return [(("adv", t + 1, gamma, statuses), self.zero)]
        st2, mv = self._machine_step(t, st, scanned[t], gamma)
        moves = tuple(mv if i == t else 0 for i in range(self.n_mach))
        t2 = t if isinstance(st2, tuple) and st2[0] == "run" else t + 1
        statuses2 = statuses[:t] + (st2,) + statuses[t + 1:]
        return [(("adv", t2, gamma, statuses2), moves)]


def to_one_way_multihead(v: VerifierMachine) -> MultiheadAutomaton:
    """One-way nondeterministic automaton with 2^B heads accepting exactly
    the strings some one-way certificate makes a majority of the
    hardwired-coin machines accept.

    Each head replays one machine's input head.  Between communication
    rounds the control nondeterministically guesses the next certificate
    symbol (or certificate end, after which every response is the pad
    symbol), advances each machine to its next communication, halt, or
    detected loop, and accepts as soon as a strict majority has halted
    accepting.  The transition table is computed on demand; use
    materialize_one_way for an explicit table.
    """
    if v.input_head_mode == HeadMode.TWO_WAY:
        raise ValueError("the construction needs a one-way input head")
    guess = sorted(s for s in v.comm_alphabet if s != NULL_SYM)
    table = _OneWayTable(v, guess)
    n_mach = table.n_mach

    def initial(i):
        if v.communicates(v.start):
            return ("w", v.start, 0, True)
        return ("run", v.start, 0, 0, True)

    start = ("adv", 0, _INIT, tuple(initial(i) for i in range(n_mach)))
    return MultiheadAutomaton(
        states=_Universe(),
        start=start,
        accept={_ACC},
        alphabet=set(v.input_alphabet),
        head_count=n_mach,
        head_modes=[HeadMode.ONE_WAY] * n_mach,
        transitions=table,
    )


def materialize_one_way(v: VerifierMachine, rename: bool = False,
                        max_states: int = 200000) -> MultiheadAutomaton:
    """Explicit-table version of to_one_way_multihead, built by forward
    exploration over all scanned-symbol combinations.  Only feasible for
    small coin budgets."""
    lazy = to_one_way_multihead(v)
    table = lazy.transitions
    symbols = sorted(lazy.alphabet) + [ENDMARKER]
    k = lazy.head_count
    states = {lazy.start, _ACC}
    transitions = {}
    frontier = [lazy.start]
    while frontier:
        state = frontier.pop()
        for scanned in itertools.product(symbols, repeat=k):
            choices = table.get((state, scanned), ())
            if choices:
                transitions[(state, scanned)] = list(choices)
            for q2, _mv in choices:
                if q2 not in states:
                    if len(states) >= max_states:
                        raise ValueError("state budget exhausted; "
                                         "use the on-demand table instead")
                    states.add(q2)
                    frontier.append(q2)
    out = MultiheadAutomaton(
        states=states,
        start=lazy.start,
        accept={_ACC},
        alphabet=set(lazy.alphabet),
        head_count=k,
        head_modes=list(lazy.head_modes),
        transitions=transitions,
    )
    if rename:
        out = _rename_states(out)
    return out


def _rename_states(m: MultiheadAutomaton) -> MultiheadAutomaton:
    order = sorted(m.states, key=repr)
    names = {}
    for q in order:
        names[q] = "ACCEPT" if q in m.accept else f"S{len(names)}"
    return MultiheadAutomaton(
        states=set(names.values()),
        start=names[m.start],
        accept={names[q] for q in m.accept},
        alphabet=set(m.alphabet),
        head_count=m.head_count,
        head_modes=list(m.head_modes),
        transitions={(names[q], scanned): [(names[q2], mv) for q2, mv in ch]
                     for (q, scanned), ch in m.transitions.items()},
    )
