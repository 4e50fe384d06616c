"""Exact probabilistic analysis of two-way probabilistic finite automata.

A 2pfa here is a VerifierMachine that never communicates and has no coin
budget (coin_budget None): every coin state branches half/half forever.
Acceptance probabilities come from absorbing Markov chains solved exactly
over rationals, never from sampling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .symbols import ENDMARKER, NULL_SYM
from .verifier import VerifierMachine

HALF = Fraction(1, 2)
ONE = Fraction(1)


@dataclass
class MarkovChain:
    """Row-stochastic chain with exact rational entries, rows stored as
    sparse index->probability maps."""
    size: int
    rows: list
    absorbing: set = field(default_factory=set)

    def validate(self):
        problems = []
        for i, row in enumerate(self.rows):
            if sum(row.values(), Fraction(0)) != 1:
                problems.append(f"row {i} does not sum to 1")
            if any(p < 0 for p in row.values()):
                problems.append(f"row {i} has a negative entry")
            if i in self.absorbing and row != {i: ONE}:
                problems.append(f"absorbing state {i} is not a self-loop")
        return problems


def _reachable_absorbing(chain: MarkovChain):
    """States from which some absorbing state is reachable."""
    # walk the reversed edges starting from the absorbing set
    preds = [[] for _ in range(chain.size)]
    for i, row in enumerate(chain.rows):
        for j, p in row.items():
            if p > 0:
                preds[j].append(i)
    ok = set(chain.absorbing)
    stack = list(chain.absorbing)
    while stack:
        j = stack.pop()
        for i in preds[j]:
            if i not in ok:
                ok.add(i)
                stack.append(i)
    return ok


def solve_linear(matrix, rhs):
    """Gaussian elimination over exact rationals; matrix is a list of
    rows, rhs a list of right-hand-side vectors (columns of a block).
    Returns the solution as a list of rows aligned with rhs columns."""
    n = len(matrix)
    m = len(rhs[0]) if n else 0
    a = [list(row) + list(r) for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system: some state never absorbs")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:n + m] for row in a]


def absorption(chain: MarkovChain, start: int) -> dict:
    """Exact absorption probabilities from `start` into each absorbing
    state; requires every transient state to reach the absorbing set."""
    if start in chain.absorbing:
        return {a: (ONE if a == start else Fraction(0))
                for a in chain.absorbing}
    if _reachable_absorbing(chain) != set(range(chain.size)):
        raise ValueError("some state cannot reach an absorbing state")
    transient = [i for i in range(chain.size) if i not in chain.absorbing]
    index = {s: k for k, s in enumerate(transient)}
    absorbers = sorted(chain.absorbing)
    n = len(transient)
    matrix = []
    rhs = []
    for s in transient:
        row = [Fraction(0)] * n
        row[index[s]] = ONE
        b = [Fraction(0)] * len(absorbers)
        for j, p in chain.rows[s].items():
            if j in chain.absorbing:
                b[absorbers.index(j)] += p
            else:
                row[index[j]] -= p
        matrix.append(row)
        rhs.append(b)
    sol = solve_linear(matrix, rhs)
    return dict(zip(absorbers, sol[index[start]]))


# ---------------------------------------------------------------------------
# Configuration-level chains of 2pfa's.
# ---------------------------------------------------------------------------

def _check_two_pfa(a: VerifierMachine):
    for q in a.states:
        if a.communicates(q):
            raise ValueError(f"state {q!r} communicates; not a 2pfa")


def _config_moves(a: VerifierMachine, q: str, sym: str):
    """(probability, target state, move) triples for one configuration;
    missing transitions map to the reject state."""
    if q in a.coin_states:
        out = []
        for b in (0, 1):
            tr = a.delta_coin.get((q, sym, NULL_SYM, b))
            if tr is None:
                out.append((HALF, a.reject, 0))
            else:
                out.append((HALF, tr[0], tr[1]))
        return out
    tr = a.delta_det.get((q, sym, NULL_SYM))
    if tr is None:
        return [(ONE, a.reject, 0)]
    return [(ONE, tr[0], tr[1])]


def _region_chain(a: VerifierMachine, tape, lo: int, hi: int):
    """Absorbing chain over configurations (q, pos) with lo <= pos <= hi.

    Absorbers: ("exit", q, pos) for the first configuration outside the
    window, ("acc",), ("rej",).  Walking off the tape rejects.  Trapped
    configurations are redirected to ("trap",).
    """
    nonhalt = sorted(q for q in a.states if q not in (a.accept, a.reject))
    states = [(q, p) for q in nonhalt for p in range(lo, hi + 1)]
    rows = {}
    n_cells = len(tape)
    for q, p in states:
        row = {}
        for prob, q2, mv in _config_moves(a, q, tape[p]):
            if q2 == a.accept:
                key = ("acc",)
            elif q2 == a.reject:
                key = ("rej",)
            else:
                p2 = p + mv
                if p2 < 0 or p2 >= n_cells:
                    key = ("rej",)
                elif lo <= p2 <= hi:
                    key = (q2, p2)
                else:
                    key = ("exit", q2, p2)
            row[key] = row.get(key, Fraction(0)) + prob
        rows[(q, p)] = row

    # redirect configurations that cannot leave the window to the trap
    indexed = {s: i for i, s in enumerate(states)}
    absorb_keys = set()
    for row in rows.values():
        for key in row:
            if key not in indexed:
                absorb_keys.add(key)
    order = states + sorted(absorb_keys)
    idx = {s: i for i, s in enumerate(order)}
    chain_rows = []
    for s in order:
        if s in rows:
            chain_rows.append({idx[t]: p for t, p in rows[s].items()})
        else:
            chain_rows.append({idx[s]: ONE})
    chain = MarkovChain(len(order), chain_rows,
                        absorbing={idx[s] for s in absorb_keys})
    reach = _reachable_absorbing(chain)
    trapped = [i for i in range(chain.size) if i not in reach]
    if trapped:
        order.append(("trap",))
        t_i = len(order) - 1
        chain_rows = []
        for i, s in enumerate(order[:-1]):
            if i in trapped:
                chain_rows.append({t_i: ONE})
            else:
                chain_rows.append(dict(chain.rows[i]))
        chain_rows.append({t_i: ONE})
        chain = MarkovChain(len(order), chain_rows,
                            absorbing=chain.absorbing | {t_i})
    return chain, order, idx


def _region_absorption(a: VerifierMachine, tape, lo, hi, starts):
    """Absorption rows for each start configuration of a window chain."""
    chain, order, idx = _region_chain(a, tape, lo, hi)
    out = {}
    for start in starts:
        if start not in idx:
            continue
        out[start] = {order[j]: p
                      for j, p in absorption(chain, idx[start]).items()}
    return out


def acceptance_probability_2pfa(a: VerifierMachine, w: str) -> Fraction:
    """Probability that the 2pfa halts accepting on w, from the exact
    configuration-level absorbing chain."""
    _check_two_pfa(a)
    if a.start == a.accept:
        return ONE
    if a.start == a.reject:
        return Fraction(0)
    tape = (ENDMARKER,) + tuple(w) + (ENDMARKER,)
    sol = _region_absorption(a, tape, 0, len(tape) - 1, [(a.start, 0)])
    return sol[(a.start, 0)].get(("acc",), Fraction(0))


# ---------------------------------------------------------------------------
# The split chain: 2c states summarizing boundary crossings between the
# left region (end-marker plus x) and the right region (y plus end-marker).
# ---------------------------------------------------------------------------

@dataclass
class SplitChain:
    """Chain state i corresponds to the classical numbering i+1: states
    0..2c-3 are boundary configurations, state 2c-2 aggregates rejection
    and loops, state 2c-1 is acceptance."""
    chain: MarkovChain
    c: int
    state_names: list
    start: int = 0

    @property
    def accept_state(self) -> int:
        return 2 * self.c - 1

    @property
    def reject_state(self) -> int:
        return 2 * self.c - 2

    def acceptance_probability(self) -> Fraction:
        return absorption(self.chain, self.start).get(
            self.accept_state, Fraction(0))


_WALK = "WALK_LEFT"


def _normalize_start(a: VerifierMachine) -> VerifierMachine:
    """Prepend a deterministic walk so the machine can be started on the
    last symbol of the left region yet still compute from scratch: the
    walk returns the head to the left end-marker and hands over to the
    original start state."""
    walk = _WALK
    while walk in a.states:
        walk += "_"
    delta_det = dict(a.delta_det)
    for sym in sorted(a.input_alphabet):
        delta_det[(walk, sym, NULL_SYM)] = (walk, -1)
    delta_det[(walk, ENDMARKER, NULL_SYM)] = (a.start, 0)
    return VerifierMachine(
        states=set(a.states) | {walk},
        start=walk,
        accept=a.accept,
        reject=a.reject,
        coin_states=set(a.coin_states),
        input_alphabet=set(a.input_alphabet),
        comm_alphabet=set(a.comm_alphabet),
        comm_symbol=dict(a.comm_symbol),
        input_head_mode=a.input_head_mode,
        coin_budget=a.coin_budget,
        delta_coin=dict(a.delta_coin),
        delta_det=delta_det,
    )


def build_split_chain(a: VerifierMachine, x: str, y: str) -> SplitChain:
    """2c-state chain over the boundary columns of tape CENT x | y CENT.

    Transient state j < c-1 is the j-th nonhalting state sitting on the
    last cell of the left region; c-1 <= j < 2c-2 is the same state on the
    first cell of the right region.  Transition probabilities are the
    exact distributions over the next boundary crossing or halt, computed
    by solving each region's absorbing sub-chain.  Boundary states that
    can never reach a halting event are redirected to the loop state.
    """
    if not x or not y:
        raise ValueError("both halves must be nonempty")
    _check_two_pfa(a)
    norm = _normalize_start(a)
    tape = (ENDMARKER,) + tuple(x + y) + (ENDMARKER,)
    bl = len(x)       # last cell of the left region
    br = len(x) + 1   # first cell of the right region
    nonhalt = [norm.start] + sorted(
        q for q in a.states if q not in (a.accept, a.reject))
    c = len(nonhalt) + 1
    q_index = {q: j for j, q in enumerate(nonhalt)}

    left_starts = [(q, bl) for q in nonhalt]
    right_starts = [(q, br) for q in nonhalt]
    left = _region_absorption(norm, tape, 0, bl, left_starts)
    right = _region_absorption(norm, tape, br, len(tape) - 1, right_starts)

    size = 2 * c
    rej = size - 2
    acc = size - 1

    def chain_index(side, q):
        return q_index[q] + (0 if side == "left" else c - 1)

    rows = [dict() for _ in range(size)]
    names = [None] * size
    for q in nonhalt:
        for side, sol in (("left", left), ("right", right)):
            i = chain_index(side, q)
            names[i] = (q, "left" if side == "left" else "right")
            start = (q, bl if side == "left" else br)
            row = {}
            for key, p in sol[start].items():
                if p == 0:
                    continue
                if key == ("acc",):
                    row[acc] = row.get(acc, Fraction(0)) + p
                elif key in (("rej",), ("trap",)):
                    row[rej] = row.get(rej, Fraction(0)) + p
                else:
                    kind, q2, pos = key
                    other = "right" if side == "left" else "left"
                    row[chain_index(other, q2)] = (
                        row.get(chain_index(other, q2), Fraction(0)) + p)
            rows[i] = row
    rows[rej] = {rej: ONE}
    rows[acc] = {acc: ONE}
    names[rej] = ("reject-or-loop",)
    names[acc] = ("accept",)
    chain = MarkovChain(size, rows, absorbing={rej, acc})

    # boundary states caught in probability-1 crossing cycles never halt;
    # the classical construction folds them into the reject state
    reach = _reachable_absorbing(chain)
    for i in range(size - 2):
        if i not in reach:
            chain.rows[i] = {rej: ONE}
    return SplitChain(chain, c, names)


# ---------------------------------------------------------------------------
# The n-dissimilarity measure.
# ---------------------------------------------------------------------------

@dataclass
class DissimilarityReport:
    n: int
    value: int
    witnesses: list            # the pairwise dissimilar strings
    distinguishers: dict       # (w, w') -> v with disagreeing membership


def _all_strings(alphabet, max_len):
    syms = sorted(alphabet)
    for length in range(max_len + 1):
        for tup in itertools.product(syms, repeat=length):
            yield "".join(tup)


def n_dissimilarity(membership, alphabet, n: int) -> DissimilarityReport:
    """Largest set of strings of length <= n that are pairwise
    distinguished by continuations keeping both totals within n.

    Strings whose visible behavior is covered by a shorter string are
    dropped first: if |w1| <= |w2| and both agree on every continuation
    w2 can afford, any dissimilar set through w2 works through w1, so the
    pruning preserves the maximum.  The survivors feed an exact
    maximum-clique search.
    """
    import networkx as nx

    strings = [w for w in _all_strings(alphabet, n)]
    # levels[w][d] = membership profile over all continuations of length d
    levels = {}
    for w in strings:
        levels[w] = [tuple(membership(w + v)
                           for v in _all_strings(alphabet, n - len(w))
                           if len(v) == d)
                     for d in range(n - len(w) + 1)]

    def dissimilar(w1, w2):
        depth = n - max(len(w1), len(w2))
        return any(levels[w1][d] != levels[w2][d] for d in range(depth + 1))

    # dominance pruning
    survivors = []
    for w2 in strings:
        dominated = False
        d2 = n - len(w2)
        for w1 in survivors:
            if len(w1) <= len(w2) and all(
                    levels[w1][d] == levels[w2][d] for d in range(d2 + 1)):
                dominated = True
                break
        if not dominated:
            survivors.append(w2)

    g = nx.Graph()
    g.add_nodes_from(survivors)
    for i, w1 in enumerate(survivors):
        for w2 in survivors[i + 1:]:
            if dissimilar(w1, w2):
                g.add_edge(w1, w2)
    clique, _ = nx.algorithms.clique.max_weight_clique(g, weight=None)
    clique = sorted(clique, key=lambda w: (len(w), w))

    distinguishers = {}
    for i, w1 in enumerate(clique):
        for w2 in clique[i + 1:]:
            depth = n - max(len(w1), len(w2))
            for v in _all_strings(alphabet, depth):
                if membership(w1 + v) != membership(w2 + v):
                    distinguishers[(w1, w2)] = v
                    break
    return DissimilarityReport(n, len(clique), clique, distinguishers)
