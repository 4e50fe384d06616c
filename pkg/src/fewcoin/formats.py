"""Line-oriented machine, certificate, and chain file formats.

All files are plain ASCII, `#` starts a comment, tokens are whitespace
separated.  Serialization is canonical: states and transition keys are
emitted sorted so files are diffable, while the order of nondeterministic
choices within one transition key is preserved (certificates refer to
choices by position).
"""

from __future__ import annotations

from fractions import Fraction

from .automata import MultiheadAutomaton
from .compiler import CompiledVerifier
from .markov import MarkovChain
from .symbols import HeadMode
from .verifier import VerifierMachine


class MachineFormatError(ValueError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def format_fraction(fr: Fraction) -> str:
    fr = Fraction(fr)
    return f"{fr.numerator}/{fr.denominator}"


def parse_fraction(token: str) -> Fraction:
    return Fraction(token)


def _logical_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _mode(token: str, line_no: int) -> HeadMode:
    for mode in HeadMode:
        if mode.value == token:
            return mode
    raise MachineFormatError(line_no, f"unknown head mode {token!r}")


def _move(token: str, line_no: int) -> int:
    try:
        mv = int(token)
    except ValueError:
        raise MachineFormatError(line_no, f"bad move {token!r}") from None
    if mv not in (-1, 0, 1):
        raise MachineFormatError(line_no, f"move {mv} out of range")
    return mv


def _fmt_move(mv: int) -> str:
    return f"+{mv}" if mv > 0 else str(mv)


# ---------------------------------------------------------------------------
# Multihead automata.
# ---------------------------------------------------------------------------

def automaton_type_name(m: MultiheadAutomaton) -> str:
    if all(mode != HeadMode.TWO_WAY for mode in m.head_modes):
        return "1nfa"
    return "2dfa" if m.deterministic else "2nfa"


def serialize_automaton(m: MultiheadAutomaton) -> str:
    lines = [
        f"type: {automaton_type_name(m)}",
        f"heads: {m.head_count}",
        "modes: " + " ".join(mode.value for mode in m.head_modes),
        "alphabet: " + " ".join(sorted(m.alphabet)),
        "states: " + " ".join(sorted(m.states)),
        f"start: {m.start}",
        "accept: " + " ".join(sorted(m.accept)),
    ]
    for (q, scanned), choices in sorted(m.transitions.items()):
        for q2, moves in choices:
            lines.append(
                f"trans: {q} {','.join(scanned)} -> {q2} "
                + ",".join(_fmt_move(mv) for mv in moves))
    return "\n".join(lines) + "\n"


def _parse_automaton(lines):
    header = {}
    transitions = {}
    order = []
    for no, line in lines:
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key != "trans":
            if key in header:
                raise MachineFormatError(no, f"duplicate header {key!r}")
            header[key] = (no, rest)
            continue
        try:
            left, right = rest.split("->")
            q, scanned = left.split()
            q2, moves = right.split()
        except ValueError:
            raise MachineFormatError(no, "expected "
                                         "'trans: q a,b -> q2 m1,m2'") from None
        scanned = tuple(scanned.split(","))
        moves = tuple(_move(t, no) for t in moves.split(","))
        k = (q, scanned)
        if k not in transitions:
            transitions[k] = []
            order.append(k)
        transitions[k].append((q2, moves))

    def need(key):
        if key not in header:
            raise MachineFormatError(0, f"missing header {key!r}")
        return header[key]

    no, heads = need("heads")
    try:
        head_count = int(heads)
    except ValueError:
        raise MachineFormatError(no, f"bad head count {heads!r}") from None
    no, modes_raw = need("modes")
    modes = [_mode(t, no) for t in modes_raw.split()]
    _, alphabet = need("alphabet")
    _, states = need("states")
    no, start = need("start")
    _, accept = need("accept")
    m = MultiheadAutomaton(
        states=set(states.split()),
        start=start,
        accept=set(accept.split()),
        alphabet=set(alphabet.split()),
        head_count=head_count,
        head_modes=modes,
        transitions=transitions,
    )
    if start not in m.states:
        raise MachineFormatError(no, f"unknown start state {start!r}")
    return m


# ---------------------------------------------------------------------------
# Verifiers.
# ---------------------------------------------------------------------------

def serialize_verifier(v: VerifierMachine) -> str:
    lines = [
        "type: verifier",
        f"input-mode: {v.input_head_mode.value}",
        "alphabet: " + " ".join(sorted(v.input_alphabet)),
        "comm-alphabet: " + " ".join(sorted(v.comm_alphabet)),
        f"coin-budget: {v.coin_budget}",
        "states: " + " ".join(sorted(v.states)),
        "coin-states: " + " ".join(sorted(v.coin_states)),
        f"start: {v.start}",
        f"accept: {v.accept}",
        f"reject: {v.reject}",
    ]
    for q, sym in sorted(v.comm_symbol.items()):
        lines.append(f"comm: {q} {sym}")
    for (q, sym, recv, bit), (q2, mv) in sorted(v.delta_coin.items()):
        lines.append(f"rtrans: {q} {sym} {recv} {bit} -> {q2} {_fmt_move(mv)}")
    for (q, sym, recv), (q2, mv) in sorted(v.delta_det.items()):
        lines.append(f"dtrans: {q} {sym} {recv} -> {q2} {_fmt_move(mv)}")
    return "\n".join(lines) + "\n"


def _parse_verifier(lines):
    header = {}
    comm_symbol = {}
    delta_coin = {}
    delta_det = {}
    for no, line in lines:
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "comm":
            try:
                q, sym = rest.split()
            except ValueError:
                raise MachineFormatError(no, "expected 'comm: q sym'") from None
            comm_symbol[q] = sym
        elif key == "rtrans":
            try:
                left, right = rest.split("->")
                q, sym, recv, bit = left.split()
                q2, mv = right.split()
            except ValueError:
                raise MachineFormatError(
                    no, "expected 'rtrans: q sym recv bit -> q2 mv'") from None
            if bit not in ("0", "1"):
                raise MachineFormatError(no, f"bad coin bit {bit!r}")
            delta_coin[(q, sym, recv, int(bit))] = (q2, _move(mv, no))
        elif key == "dtrans":
            try:
                left, right = rest.split("->")
                q, sym, recv = left.split()
                q2, mv = right.split()
            except ValueError:
                raise MachineFormatError(
                    no, "expected 'dtrans: q sym recv -> q2 mv'") from None
            delta_det[(q, sym, recv)] = (q2, _move(mv, no))
        else:
            if key in header:
                raise MachineFormatError(no, f"duplicate header {key!r}")
            header[key] = (no, rest)

    def need(key):
        if key not in header:
            raise MachineFormatError(0, f"missing header {key!r}")
        return header[key]

    no, mode_raw = need("input-mode")
    no_b, budget = need("coin-budget")
    try:
        coin_budget = None if budget == "none" else int(budget)
    except ValueError:
        raise MachineFormatError(no_b, f"bad coin budget {budget!r}") from None
    _, alphabet = need("alphabet")
    _, comm_alpha = need("comm-alphabet")
    _, states = need("states")
    _, coin_states = need("coin-states")
    _, start = need("start")
    _, accept = need("accept")
    _, reject = need("reject")
    v = VerifierMachine(
        states=set(states.split()),
        start=start,
        accept=accept,
        reject=reject,
        coin_states=set(coin_states.split()),
        input_alphabet=set(alphabet.split()),
        comm_alphabet=set(comm_alpha.split()),
        comm_symbol=comm_symbol,
        input_head_mode=_mode(mode_raw, no),
        coin_budget=coin_budget,
        delta_coin=delta_coin,
        delta_det=delta_det,
    )
    for q in (start, accept, reject):
        if q not in v.states:
            raise MachineFormatError(0, f"undeclared state {q!r}")
    return v


def serialize_verifier_unbounded(v: VerifierMachine) -> str:
    """Same format, with 'coin-budget: none' for 2pfa's."""
    text = serialize_verifier(
        VerifierMachine(**{**v.__dict__, "coin_budget": 0}))
    return text.replace("coin-budget: 0", "coin-budget: none", 1)


# ---------------------------------------------------------------------------
# Compiled verifiers (verifier plus embedded source automaton).
# ---------------------------------------------------------------------------

def serialize_compiled(c: CompiledVerifier) -> str:
    body = serialize_verifier(c.verifier).splitlines()
    assert body[0] == "type: verifier"
    lines = [
        "type: compiled-verifier",
        f"kind: {c.kind}",
        f"copies: {c.m}",
        f"bits-per-copy: {c.r}",
        "cert-alphabet: " + " ".join(c.certificate_alphabet),
    ] + body[1:] + ["begin-source"] + \
        serialize_automaton(c.source).splitlines() + ["end-source"]
    return "\n".join(lines) + "\n"


def _parse_compiled(lines):
    own = []
    source = []
    in_source = False
    for no, line in lines:
        if line == "begin-source":
            in_source = True
        elif line == "end-source":
            in_source = False
        elif in_source:
            source.append((no, line))
        else:
            own.append((no, line))
    header = {}
    body = []
    for no, line in own:
        key, _, rest = line.partition(":")
        if key.strip() in ("kind", "copies", "bits-per-copy", "cert-alphabet"):
            header[key.strip()] = (no, rest.strip())
        else:
            body.append((no, line))
    for key in ("kind", "copies", "bits-per-copy", "cert-alphabet"):
        if key not in header:
            raise MachineFormatError(0, f"missing header {key!r}")
    verifier = _parse_verifier(body)
    automaton = _parse_automaton(source)
    return CompiledVerifier(
        verifier=verifier,
        source=automaton,
        r=int(header["bits-per-copy"][1]),
        m=int(header["copies"][1]),
        kind=header["kind"][1],
        certificate_alphabet=header["cert-alphabet"][1].split(),
    )


# ---------------------------------------------------------------------------
# Entry points.
# ---------------------------------------------------------------------------

def parse_machine(text: str):
    """Parse any machine file; the `type:` header picks the shape."""
    lines = list(_logical_lines(text))
    for no, line in lines:
        key, _, rest = line.partition(":")
        if key.strip() == "type":
            kind = rest.strip()
            break
    else:
        raise MachineFormatError(0, "missing 'type:' header")
    rest_lines = [(no, line) for no, line in lines
                  if line.partition(":")[0].strip() != "type"]
    if kind in ("2nfa", "2dfa", "1nfa"):
        return _parse_automaton(rest_lines)
    if kind == "verifier":
        return _parse_verifier(rest_lines)
    if kind == "compiled-verifier":
        return _parse_compiled(rest_lines)
    raise MachineFormatError(no, f"unknown machine type {kind!r}")


def serialize_machine(m) -> str:
    if isinstance(m, MultiheadAutomaton):
        return serialize_automaton(m)
    if isinstance(m, CompiledVerifier):
        return serialize_compiled(m)
    if isinstance(m, VerifierMachine):
        if m.coin_budget is None:
            return serialize_verifier_unbounded(m)
        return serialize_verifier(m)
    raise TypeError(f"cannot serialize {type(m).__name__}")


# ---------------------------------------------------------------------------
# Certificates and chains.
# ---------------------------------------------------------------------------

def serialize_certificate(tokens) -> str:
    return " ".join(tokens) + "\n"


def parse_certificate(text: str) -> list:
    out = []
    for _no, line in _logical_lines(text):
        out.extend(line.split())
    return out


def serialize_multitrack(columns) -> str:
    return "\n".join(";".join(column) for column in columns) + "\n"


def parse_multitrack(text: str) -> list:
    return [line.split(";") for _no, line in _logical_lines(text)]


def serialize_transcripts(transcripts) -> str:
    """One line per machine: whitespace-separated sent:recv pairs."""
    return "\n".join(
        " ".join(f"{sent}:{recv}" for sent, recv in transcript)
        or "-" for transcript in transcripts) + "\n"


def parse_transcripts(text: str) -> list:
    out = []
    for no, line in _logical_lines(text):
        if line == "-":
            out.append([])
            continue
        pairs = []
        for token in line.split():
            sent, sep, recv = token.partition(":")
            if not sep:
                raise MachineFormatError(no, f"bad transcript token {token!r}")
            pairs.append((sent, recv))
        out.append(pairs)
    return out


def serialize_chain(chain: MarkovChain) -> str:
    lines = ["# absorbing: " + " ".join(str(i) for i in sorted(chain.absorbing))]
    for row in chain.rows:
        lines.append(" ".join(
            format_fraction(row.get(j, Fraction(0)))
            for j in range(chain.size)))
    return "\n".join(lines) + "\n"


def parse_chain(text: str) -> MarkovChain:
    rows = []
    for _no, line in _logical_lines(text):
        rows.append({j: parse_fraction(tok)
                     for j, tok in enumerate(line.split())
                     if parse_fraction(tok) != 0})
    size = len(rows)
    absorbing = {i for i, row in enumerate(rows) if row == {i: Fraction(1)}}
    return MarkovChain(size, rows, absorbing)
