"""Compile multihead nondeterministic automata into constant-coin
certificate verifiers.

The weak compiler turns a k-head automaton M into a verifier that flips
r = ceil(log2 k) coins to secretly pick one head to track, then replays a
claimed accepting run of M from the certificate, checking only the tracked
head's view.  A cheating certificate is caught with probability at least
2^-r per replay, and chaining m replays drives the error down to
(1 - 2^-r)^m.

The strong compiler prefixes a single replay with an (r+1)-coin gadget
that rejects outright with probability (2^r - 1) / 2^(r+1), trading some
completeness for a guaranteed rejection probability on non-members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .automata import MultiheadAutomaton, accepting_path
from .symbols import ENDMARKER, NULL_SYM, PAD_SYM, REQUEST_SYM, HeadMode
from .verifier import VerifierMachine

STEP = "STEP"
REWIND = "REWIND"
NEXTCOPY = "NEXTCOPY"
END = "END"

_ACC = "ACC"
_REJ = "REJ"

# head-position knowledge carried in the verifier's finite control:
# "L" = on the left end-marker, "N" = not on it, "P" = moved left last
# step, so on the left end-marker exactly when now scanning the marker
_AT_LEFT, _NOT_LEFT, _PENDING = "L", "N", "P"


class NotMemberError(ValueError):
    """Asked for an honest certificate of a string the automaton rejects."""


@dataclass(frozen=True)
class TrackSymbol:
    """One certificate token: either a replay step (the k scanned symbols
    plus the nondeterministic choice index) or a control marker."""
    control: str
    scanned: tuple = None
    choice: int = None

    def encode(self) -> str:
        if self.control == STEP:
            return f"({','.join(self.scanned)}|{self.choice}|STEP)"
        return f"({self.control})"


def decode_track_symbol(token: str):
    """Inverse of TrackSymbol.encode; None for foreign tokens."""
    if not (token.startswith("(") and token.endswith(")")):
        return None
    body = token[1:-1]
    if body in (REWIND, NEXTCOPY, END):
        return TrackSymbol(body)
    parts = body.split("|")
    if len(parts) != 3 or parts[2] != STEP:
        return None
    try:
        choice = int(parts[1])
    except ValueError:
        return None
    return TrackSymbol(STEP, tuple(parts[0].split(",")), choice)


@dataclass
class CompiledVerifier:
    verifier: VerifierMachine
    source: MultiheadAutomaton
    r: int
    m: int
    kind: str  # "weak" | "strong"
    certificate_alphabet: list = field(default_factory=list)


def coins_per_head_choice(k: int) -> int:
    return (k - 1).bit_length()


def copies_for_error(r: int, eps: Fraction) -> int:
    """Smallest m with (1 - 2^-r)^m <= eps."""
    if r == 0:
        return 1
    q = 1 - Fraction(1, 2 ** r)
    m = 1
    err = q
    while err > eps:
        m += 1
        err *= q
    return m


def _toss_state(c: int, bits: str) -> str:
    return f"toss{c}_{bits}"


def _sim_state(c: int, path: int, q: str, flag: str) -> str:
    return f"sim{c}p{path}[{q}]{flag}"


def _rwd_state(c: int, path: int, flag: str) -> str:
    return f"rwd{c}p{path}{flag}"


def _at_left(flag: str, sym: str) -> bool:
    return flag == _AT_LEFT or (flag == _PENDING and sym == ENDMARKER)


def _build_verifier(m_src: MultiheadAutomaton, r: int, copies: int,
                    gadget_bits: int) -> VerifierMachine:
    k = m_src.head_count
    states = {_ACC, _REJ}
    coin_states = set()
    comm_symbol = {}
    delta_coin = {}
    delta_det = {}

    track_symbols = []
    for (q, scanned), choices in m_src.transitions.items():
        for j in range(len(choices)):
            track_symbols.append(TrackSymbol(STEP, scanned, j).encode())
    controls = [TrackSymbol(REWIND).encode(), TrackSymbol(NEXTCOPY).encode(),
                TrackSymbol(END).encode()]

    def dispatch(c: int, idx: int):
        path = idx + 1 if idx < k else 1  # surplus coin outcomes alias
        if m_src.start in m_src.accept:
            return _rwd_state(c, path, _AT_LEFT)
        return _sim_state(c, path, m_src.start, _AT_LEFT)

    # direct-rejection gadget (strong variant): gadget_bits coins on the
    # left end-marker; the lowest 2^r - 1 outcomes reject outright
    if gadget_bits:
        cutoff = 2 ** r - 1
        for depth in range(gadget_bits):
            for v in range(2 ** depth):
                bits = format(v, f"0{depth}b") if depth else ""
                g = f"gate_{bits}"
                states.add(g)
                coin_states.add(g)
                for b in (0, 1):
                    v2 = (v << 1) | b
                    if depth + 1 == gadget_bits:
                        nxt = _REJ if v2 < cutoff else _toss_state(1, "")
                    else:
                        nxt = f"gate_{format(v2, f'0{depth + 1}b')}"
                    delta_coin[(g, ENDMARKER, NULL_SYM, b)] = (nxt, 0)

    for c in range(1, copies + 1):
        # coin tower choosing which head this copy tracks
        if r == 0:
            t = _toss_state(c, "")
            states.add(t)
            delta_det[(t, ENDMARKER, NULL_SYM)] = (dispatch(c, 0), 0)
        else:
            for depth in range(r):
                for v in range(2 ** depth):
                    bits = format(v, f"0{depth}b") if depth else ""
                    t = _toss_state(c, bits)
                    states.add(t)
                    coin_states.add(t)
                    for b in (0, 1):
                        v2 = (v << 1) | b
                        if depth + 1 == r:
                            nxt = dispatch(c, v2)
                        else:
                            nxt = _toss_state(c, format(v2, f"0{depth + 1}b"))
                        delta_coin[(t, ENDMARKER, NULL_SYM, b)] = (nxt, 0)

        for path in range(1, k + 1):
            i = path - 1
            # replay states
            for (q, scanned), choices in m_src.transitions.items():
                sym = scanned[i]
                for flag in (_AT_LEFT, _NOT_LEFT, _PENDING):
                    sim = _sim_state(c, path, q, flag)
                    at0 = _at_left(flag, sym)
                    for j, (q2, moves) in enumerate(choices):
                        mv = moves[i]
                        if at0 and mv < 0:
                            continue  # claimed move escapes left
                        if not at0 and sym == ENDMARKER and mv > 0:
                            continue  # claimed move escapes right
                        if mv > 0:
                            flag2 = _NOT_LEFT
                        elif mv == 0:
                            flag2 = _AT_LEFT if at0 else _NOT_LEFT
                        else:
                            flag2 = _PENDING
                        if q2 in m_src.accept:
                            target = _rwd_state(c, path, flag2)
                        else:
                            target = _sim_state(c, path, q2, flag2)
                        resp = TrackSymbol(STEP, scanned, j).encode()
                        delta_det[(sim, sym, resp)] = (target, mv)
            for q in m_src.states:
                if q in m_src.accept:
                    continue
                for flag in (_AT_LEFT, _NOT_LEFT, _PENDING):
                    sim = _sim_state(c, path, q, flag)
                    states.add(sim)
                    comm_symbol[sim] = REQUEST_SYM

            # rewind states walking the tracked head back to the left
            # end-marker between copies
            alphabet_all = sorted(m_src.alphabet) + [ENDMARKER]
            for flag in (_AT_LEFT, _NOT_LEFT, _PENDING):
                rwd = _rwd_state(c, path, flag)
                states.add(rwd)
                comm_symbol[rwd] = REQUEST_SYM
                rw = TrackSymbol(REWIND).encode()
                nc = TrackSymbol(NEXTCOPY).encode()
                en = TrackSymbol(END).encode()
                for sym in alphabet_all:
                    at0 = _at_left(flag, sym)
                    if at0:
                        delta_det[(rwd, sym, rw)] = (
                            _rwd_state(c, path, _AT_LEFT), 0)
                        if c < copies:
                            delta_det[(rwd, sym, nc)] = (
                                _toss_state(c + 1, ""), 0)
                    else:
                        delta_det[(rwd, sym, rw)] = (
                            _rwd_state(c, path, _PENDING), -1)
                    if c == copies:
                        delta_det[(rwd, sym, en)] = (_ACC, 0)

    comm_alphabet = ({NULL_SYM, PAD_SYM, REQUEST_SYM}
                     | set(track_symbols) | set(controls))
    start = f"gate_" if gadget_bits else _toss_state(1, "")
    return VerifierMachine(
        states=states,
        start=start,
        accept=_ACC,
        reject=_REJ,
        coin_states=coin_states,
        input_alphabet=set(m_src.alphabet),
        comm_alphabet=comm_alphabet,
        comm_symbol=comm_symbol,
        input_head_mode=HeadMode.TWO_WAY,
        coin_budget=copies * r + gadget_bits,
        delta_coin=delta_coin,
        delta_det=delta_det,
    )


def _cert_alphabet(m_src: MultiheadAutomaton) -> list:
    syms = []
    for (q, scanned), choices in m_src.transitions.items():
        for j in range(len(choices)):
            syms.append(TrackSymbol(STEP, scanned, j).encode())
    syms += [TrackSymbol(REWIND).encode(), TrackSymbol(NEXTCOPY).encode(),
             TrackSymbol(END).encode()]
    return sorted(set(syms))


def compile_weak(m_src: MultiheadAutomaton, eps: Fraction) -> CompiledVerifier:
    """Verifier with error at most eps on non-members and acceptance
    probability 1 on members holding an honest certificate."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("error bound must be strictly between 0 and 1")
    r = coins_per_head_choice(m_src.head_count)
    copies = copies_for_error(r, eps)
    v = _build_verifier(m_src, r, copies, gadget_bits=0)
    return CompiledVerifier(v, m_src, r, copies, "weak",
                            _cert_alphabet(m_src))


def compile_strong(m_src: MultiheadAutomaton) -> CompiledVerifier:
    """Single-replay verifier with the direct-rejection gadget: it accepts
    members with probability (2^r + 1) / 2^(r+1) and both accepts and fails
    to reject non-members with probability at most (2^2r - 1) / 2^(2r+1)."""
    r = coins_per_head_choice(m_src.head_count)
    v = _build_verifier(m_src, r, 1, gadget_bits=r + 1)
    return CompiledVerifier(v, m_src, r, 1, "strong",
                            _cert_alphabet(m_src))


def direct_rejection_probability(r: int) -> Fraction:
    return Fraction(2 ** r - 1, 2 ** (r + 1))


def strong_completeness(r: int) -> Fraction:
    return Fraction(2 ** r + 1, 2 ** (r + 1))


def strong_error_bound(r: int) -> Fraction:
    return Fraction(2 ** (2 * r) - 1, 2 ** (2 * r + 1))


def weak_error_bound(r: int, m: int) -> Fraction:
    return (1 - Fraction(1, 2 ** r)) ** m


def honest_certificate(c: CompiledVerifier, x: str) -> list:
    """Certificate tokens replaying one shortest accepting run once per
    copy, with rewind markers returning every tracked head to the left
    end-marker between copies."""
    path = accepting_path(c.source, x)
    if path is None:
        raise NotMemberError(f"{x!r} is not accepted by the source automaton")
    body = [TrackSymbol(STEP, step.scanned, step.choice).encode()
            for step in path]
    final = path[-1].next.positions if path else (0,) * c.source.head_count
    rewinds = [TrackSymbol(REWIND).encode()] * max(final)
    nc = [TrackSymbol(NEXTCOPY).encode()]
    cert = list(body)
    for _ in range(c.m - 1):
        cert += rewinds + nc + body
    cert.append(TrackSymbol(END).encode())
    return cert


def honest_length_bound(c: CompiledVerifier, n: int) -> int:
    """Length cap covering every honest certificate for inputs of length
    n: per copy one shortest run (at most the configuration count) plus
    the rewinds and markers."""
    k = c.source.head_count
    body = len(c.source.states) * (n + 2) ** k
    return c.m * body + (c.m - 1) * (n + 2) + 1
