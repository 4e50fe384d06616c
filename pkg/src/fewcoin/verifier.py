"""Finite-state verifiers with a bounded coin budget and a one-way
certificate tape.

A verifier's state set splits into coin states (the next step consumes one
random bit), deterministic states, and the two halting states.  Every state
carries a communication symbol; a state whose symbol is not NULL sends that
symbol and receives one certificate symbol on entry.  The certificate head
only moves forward; once the certificate is exhausted every further
response is the padding symbol.

All probabilities are exact rationals: an outcome distribution enumerates
the 2^B equally likely coin strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .symbols import ENDMARKER, NULL_SYM, PAD_SYM, HeadMode

ACCEPT_VERDICT = "accept"
REJECT_VERDICT = "reject"
NONHALT_VERDICT = "nonhalt"


class CoinBudgetExceededError(Exception):
    """A run tried to flip more coins than the declared budget."""


@dataclass
class VerifierMachine:
    states: set
    start: str
    accept: str
    reject: str
    coin_states: set
    input_alphabet: set
    comm_alphabet: set
    # state -> symbol sent on entry; absent means NULL (no communication)
    comm_symbol: dict
    input_head_mode: HeadMode
    coin_budget: int
    # (state, input symbol, response, bit) -> (next state, move)
    delta_coin: dict = field(default_factory=dict)
    # (state, input symbol, response) -> (next state, move)
    delta_det: dict = field(default_factory=dict)

    def sent(self, q: str) -> str:
        return self.comm_symbol.get(q, NULL_SYM)

    def communicates(self, q: str) -> bool:
        return self.sent(q) != NULL_SYM

    def tape(self, x: str):
        return (ENDMARKER,) + tuple(x) + (ENDMARKER,)


@dataclass
class BranchOutcome:
    verdict: str
    steps: int
    coins_used: int
    # (sent, received) pairs in order of occurrence
    transcript: list = field(default_factory=list)


def validate_verifier(v: VerifierMachine):
    """Structural checks; returns a list of (kind, detail) violations."""
    out = []
    for q in (v.start, v.accept, v.reject):
        if q not in v.states:
            out.append(("state", f"{q!r} not declared"))
    for q in v.coin_states:
        if q not in v.states:
            out.append(("state", f"coin state {q!r} not declared"))
        if q in (v.accept, v.reject):
            out.append(("state", f"halting state {q!r} cannot flip coins"))
    if NULL_SYM not in v.comm_alphabet:
        out.append(("alphabet", "communication alphabet lacks the null symbol"))
    if ENDMARKER in v.input_alphabet:
        out.append(("alphabet", "end-marker symbol is reserved"))
    for key, (q2, mv) in itertools.chain(
            ((k, val) for k, val in v.delta_det.items()),
            ((k, val) for k, val in v.delta_coin.items())):
        q = key[0]
        if q in (v.accept, v.reject):
            out.append(("terminal", f"halting state {q!r} has transitions"))
        if q2 not in v.states:
            out.append(("state", f"transition into undeclared {q2!r}"))
        if not v.input_head_mode.allows(mv):
            out.append(("mode", f"move {mv} from {q!r} violates "
                                f"{v.input_head_mode.value}"))
        in_coin = len(key) == 4
        if in_coin != (q in v.coin_states):
            out.append(("coin", f"state {q!r} used in the wrong table"))
    return out


def run_branch(v: VerifierMachine, x: str, coins, cert,
               max_cert_use: int | None = None) -> BranchOutcome:
    """Deterministic branch for a fixed coin string and certificate.

    Loop detection keys on (state, head position, certificate position,
    coins used); once a configuration repeats with no remaining coin or
    certificate progress possible along the cycle, the branch can never
    halt, so the verdict is nonhalt.
    """
    tape = v.tape(x)
    n1 = len(x) + 1
    state = v.start
    pos = 0
    cert = list(cert)
    cert_pos = 0
    used = 0
    steps = 0
    transcript = []
    seen = set()
    while True:
        if state == v.accept:
            return BranchOutcome(ACCEPT_VERDICT, steps, used, transcript)
        if state == v.reject:
            return BranchOutcome(REJECT_VERDICT, steps, used, transcript)
        key = (state, pos, cert_pos, used)
        if key in seen:
            return BranchOutcome(NONHALT_VERDICT, steps, used, transcript)
        seen.add(key)

        sym = tape[pos]
        if v.communicates(state):
            sent = v.sent(state)
            if cert_pos < len(cert):
                recv = cert[cert_pos]
                cert_pos += 1
            else:
                recv = PAD_SYM
            transcript.append((sent, recv))
        else:
            recv = NULL_SYM

        if state in v.coin_states:
            if v.coin_budget is not None and used >= v.coin_budget:
                raise CoinBudgetExceededError(
                    f"state {state!r} needs coin {used + 1} with budget "
                    f"{v.coin_budget}")
            bit = coins[used]
            used += 1
            tr = v.delta_coin.get((state, sym, recv, bit))
        else:
            tr = v.delta_det.get((state, sym, recv))

        if tr is None:
            return BranchOutcome(REJECT_VERDICT, steps + 1, used, transcript)
        state, mv = tr
        steps += 1
        if state in (v.accept, v.reject):
            continue  # halt before moving; declared move may be off-tape
        pos += mv
        if pos < 0 or pos > n1:
            return BranchOutcome(REJECT_VERDICT, steps, used, transcript)


@dataclass
class OutcomeDistribution:
    p_accept: Fraction
    p_reject: Fraction
    p_nonhalt: Fraction

    @property
    def total(self) -> Fraction:
        return self.p_accept + self.p_reject + self.p_nonhalt

    def __str__(self):
        def f(p):
            return f"{p.numerator}/{p.denominator}"
        return (f"accept={f(self.p_accept)} reject={f(self.p_reject)} "
                f"nonhalt={f(self.p_nonhalt)}")


def all_coin_strings(budget: int):
    return list(itertools.product((0, 1), repeat=budget))


def outcome_distribution(v: VerifierMachine, x: str, cert) -> OutcomeDistribution:
    """Exact verdict distribution over the 2^B coin strings."""
    weight = Fraction(1, 2 ** v.coin_budget)
    acc = rej = non = Fraction(0)
    for coins in all_coin_strings(v.coin_budget):
        out = run_branch(v, x, coins, cert)
        if out.verdict == ACCEPT_VERDICT:
            acc += weight
        elif out.verdict == REJECT_VERDICT:
            rej += weight
        else:
            non += weight
    return OutcomeDistribution(acc, rej, non)


# ---------------------------------------------------------------------------
# Best-certificate search.
#
# Instead of enumerating certificates outright, search over the joint state
# of all 2^B coin branches ("ensembles").  Two certificate prefixes that put
# every branch in the same situation extend to the same achievable
# acceptance probabilities, so memoising on the ensemble prunes the search
# to at most (number of distinct ensembles) nodes, independent of the
# certificate alphabet size beyond branching.
# ---------------------------------------------------------------------------

_A, _R, _N = "A", "R", "N"


def _advance(v: VerifierMachine, x: str, coins, state, pos, used, recv_first):
    """Run one branch from a communication point (delivering recv_first)
    until the next communication request, a halt, or a loop.

    Returns a status: "A" / "R" / "N", or ("W", state, pos, used) when the
    branch waits at a communicating state for the next response.
    """
    tape = v.tape(x)
    n1 = len(x) + 1
    seen = set()
    recv = recv_first
    while True:
        if state == v.accept:
            return _A
        if state == v.reject:
            return _R
        if recv is None:
            if v.communicates(state):
                return ("W", state, pos, used)
            recv = NULL_SYM
        key = (state, pos, used)
        if key in seen:
            return _N
        seen.add(key)
        sym = tape[pos]
        if state in v.coin_states:
            if v.coin_budget is not None and used >= v.coin_budget:
                raise CoinBudgetExceededError(state)
            bit = coins[used]
            used += 1
            tr = v.delta_coin.get((state, sym, recv, bit))
        else:
            tr = v.delta_det.get((state, sym, recv))
        recv = None
        if tr is None:
            return _R
        state, mv = tr
        if state in (v.accept, v.reject):
            continue
        pos += mv
        if pos < 0 or pos > n1:
            return _R


def _finish_with_pad(v: VerifierMachine, x: str, coins, status):
    """Final verdict of a branch once the certificate has ended: every
    further response is PAD forever."""
    if status in (_A, _R, _N):
        return status
    _, state, pos, used = status
    tape = v.tape(x)
    n1 = len(x) + 1
    seen = set()
    while True:
        if state == v.accept:
            return _A
        if state == v.reject:
            return _R
        key = (state, pos, used)
        if key in seen:
            return _N
        seen.add(key)
        sym = tape[pos]
        recv = PAD_SYM if v.communicates(state) else NULL_SYM
        if state in v.coin_states:
            if v.coin_budget is not None and used >= v.coin_budget:
                raise CoinBudgetExceededError(state)
            bit = coins[used]
            used += 1
            tr = v.delta_coin.get((state, sym, recv, bit))
        else:
            tr = v.delta_det.get((state, sym, recv))
        if tr is None:
            return _R
        state, mv = tr
        if state in (v.accept, v.reject):
            continue
        pos += mv
        if pos < 0 or pos > n1:
            return _R


@dataclass
class CertificateSearchResult:
    certificate: list
    p_accept: Fraction
    distribution: OutcomeDistribution


def best_certificate(v: VerifierMachine, x: str, max_len: int,
                     alphabet=None) -> CertificateSearchResult:
    """Certificate of length <= max_len maximising acceptance probability.

    Ties break toward shorter certificates, then lexicographically.
    """
    if alphabet is None:
        alphabet = sorted(s for s in v.comm_alphabet if s != NULL_SYM)
    else:
        alphabet = sorted(alphabet)
    coin_strings = all_coin_strings(v.coin_budget)
    weight = Fraction(1, 2 ** v.coin_budget)

    def value(ensemble):
        acc = Fraction(0)
        for coins, status in zip(coin_strings, ensemble):
            if _finish_with_pad(v, x, coins, status) == _A:
                acc += weight
        return acc

    start = tuple(_advance(v, x, coins, v.start, 0, 0, None)
                  for coins in coin_strings)
    best_val = value(start)
    best_cert = []
    frontier = {start: []}
    seen = {start}
    for _ in range(max_len):
        nxt = {}
        for ensemble, cert in frontier.items():
            if not any(isinstance(s, tuple) for s in ensemble):
                continue  # no branch is waiting; extensions change nothing
            for sym in alphabet:
                ens2 = tuple(
                    _advance(v, x, coins, s[1], s[2], s[3], sym)
                    if isinstance(s, tuple) else s
                    for coins, s in zip(coin_strings, ensemble))
                if ens2 in seen:
                    continue
                seen.add(ens2)
                cert2 = cert + [sym]
                nxt[ens2] = cert2
                val = value(ens2)
                if val > best_val:
                    best_val = val
                    best_cert = cert2
        if not nxt:
            break
        frontier = nxt

    dist = outcome_distribution(v, x, best_cert)
    assert dist.p_accept == best_val
    return CertificateSearchResult(best_cert, best_val, dist)


# ---------------------------------------------------------------------------
# Interactive (two-way) provers and private-coin recognizers.
# ---------------------------------------------------------------------------

@dataclass
class ProverStrategy:
    """Deterministic prover: the response is a function of the sequence of
    symbols the verifier has sent so far (the prover cannot see coins)."""
    responses: dict = field(default_factory=dict)
    default: str = PAD_SYM

    def respond(self, sent_history) -> str:
        return self.responses.get(tuple(sent_history), self.default)

    @property
    def depth(self) -> int:
        return max((len(k) for k in self.responses), default=0)


def interact_branch(v: VerifierMachine, x: str, coins,
                    prover: ProverStrategy) -> BranchOutcome:
    tape = v.tape(x)
    n1 = len(x) + 1
    state = v.start
    pos = 0
    used = 0
    steps = 0
    sent_history = []
    transcript = []
    seen = set()
    depth = prover.depth
    while True:
        if state == v.accept:
            return BranchOutcome(ACCEPT_VERDICT, steps, used, transcript)
        if state == v.reject:
            return BranchOutcome(REJECT_VERDICT, steps, used, transcript)
        # past the prover's decision depth the response is constant, so
        # the truncated history length keeps the key space finite
        key = (state, pos, used, min(len(sent_history), depth + 1))
        if key in seen:
            return BranchOutcome(NONHALT_VERDICT, steps, used, transcript)
        seen.add(key)
        sym = tape[pos]
        if v.communicates(state):
            sent = v.sent(state)
            sent_history.append(sent)
            recv = prover.respond(sent_history)
            transcript.append((sent, recv))
        else:
            recv = NULL_SYM
        if state in v.coin_states:
            if v.coin_budget is not None and used >= v.coin_budget:
                raise CoinBudgetExceededError(state)
            bit = coins[used]
            used += 1
            tr = v.delta_coin.get((state, sym, recv, bit))
        else:
            tr = v.delta_det.get((state, sym, recv))
        if tr is None:
            return BranchOutcome(REJECT_VERDICT, steps + 1, used, transcript)
        state, mv = tr
        steps += 1
        if state in (v.accept, v.reject):
            continue
        pos += mv
        if pos < 0 or pos > n1:
            return BranchOutcome(REJECT_VERDICT, steps, used, transcript)


def interact_distribution(v: VerifierMachine, x: str,
                          prover: ProverStrategy) -> OutcomeDistribution:
    weight = Fraction(1, 2 ** v.coin_budget)
    acc = rej = non = Fraction(0)
    for coins in all_coin_strings(v.coin_budget):
        out = interact_branch(v, x, coins, prover)
        if out.verdict == ACCEPT_VERDICT:
            acc += weight
        elif out.verdict == REJECT_VERDICT:
            rej += weight
        else:
            non += weight
    return OutcomeDistribution(acc, rej, non)


def derandomize_recognizer(v: VerifierMachine, x: str) -> bool:
    """Majority vote over all coin strings for a verifier that never
    communicates: accept iff strictly more than half the branches accept."""
    for q in v.states:
        if v.communicates(q):
            raise ValueError(f"state {q!r} communicates; majority vote "
                             "applies to recognizers only")
    count = sum(
        1 for coins in all_coin_strings(v.coin_budget)
        if run_branch(v, x, coins, []).verdict == ACCEPT_VERDICT)
    return 2 * count > 2 ** v.coin_budget
