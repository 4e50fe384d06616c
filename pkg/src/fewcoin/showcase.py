"""Hand-built example languages, verifiers, and recognizers.

TWIN = { w c w : w over {a,b} }.  NH = { a^x b a^y1 b ... a^yt b : all
exponents positive and some prefix sum y1 + ... + yk equals x }.

Both verifiers use a real-time input head and three coins: the first coin
splits the run into two branches that each check half of the membership
condition against the certificate, and two more coins make each satisfied
branch accept with probability 3/4.  A member convinces both branches, so
it is accepted with probability exactly 3/4; a non-member can satisfy at
most one branch with any single certificate, capping its acceptance
probability at 3/8.
"""

from __future__ import annotations

from .automata import MultiheadAutomaton
from .symbols import ENDMARKER, NULL_SYM, PAD_SYM, REQUEST_SYM, HeadMode
from .verifier import VerifierMachine

_ACC = "ACC"
_REJ = "REJ"


def twin_oracle(x: str) -> bool:
    """Membership in { w c w : w over {a,b} }."""
    if x.count("c") != 1:
        return False
    w, _, w2 = x.partition("c")
    return w == w2 and set(w) <= {"a", "b"}


def nh_oracle(x: str) -> bool:
    """True iff x = a^j b a^y1 b ... a^yt b with j, t, y_i >= 1 and some
    prefix sum of the y_i equal to j."""
    if set(x) - {"a", "b"} or not x.endswith("b"):
        return False
    blocks = x.split("b")[:-1]
    if len(blocks) < 2 or any(len(b) == 0 for b in blocks):
        return False
    j = len(blocks[0])
    total = 0
    for b in blocks[1:]:
        total += len(b)
        if total == j:
            return True
    return False


def _verdict(delta_det, state, sym, recv, bits):
    """Final transition at the right end-marker: the run accepts unless
    both extra coins came up zero."""
    target = _REJ if bits == (0, 0) else _ACC
    delta_det[(state, sym, recv)] = (target, 1)


def build_twin_verifier() -> VerifierMachine:
    """Three-coin real-time verifier for TWIN; the honest certificate for
    w c w is w itself."""
    coin_states = set()
    comm_symbol = {}
    delta_coin = {}
    delta_det = {}
    states = {_ACC, _REJ, "S"}

    # branch split on the left end-marker
    coin_states.add("S")
    delta_coin[("S", ENDMARKER, NULL_SYM, 0)] = ("1c2", 1)
    delta_coin[("S", ENDMARKER, NULL_SYM, 1)] = ("2c2", 1)

    bit_pairs = [(b2, b3) for b2 in (0, 1) for b3 in (0, 1)]

    # branch 1: certificate must equal the prefix before the first c,
    # exhausting exactly at the c; afterwards no second c may occur.
    # The two extra coins are flipped while scanning the first two cells.
    states.add("1c2")
    coin_states.add("1c2")
    comm_symbol["1c2"] = REQUEST_SYM
    for b2 in (0, 1):
        st3 = f"1c3[{b2}]"
        states.add(st3)
        coin_states.add(st3)
        comm_symbol[st3] = REQUEST_SYM
        for sym in "ab":
            delta_coin[("1c2", sym, sym, b2)] = (st3, 1)
        delta_coin[("1c2", "c", PAD_SYM, b2)] = (f"1s3[{b2}]", 1)
        sc = f"1s3[{b2}]"
        states.add(sc)
        coin_states.add(sc)
        for b3 in (0, 1):
            cmp_st = f"1cmp[{b2}{b3}]"
            scan_st = f"1scan[{b2}{b3}]"
            for sym in "ab":
                delta_coin[(st3, sym, sym, b3)] = (cmp_st, 1)
                delta_coin[(sc, sym, NULL_SYM, b3)] = (scan_st, 1)
            delta_coin[(st3, "c", PAD_SYM, b3)] = (scan_st, 1)
            target = _REJ if (b2, b3) == (0, 0) else _ACC
            delta_coin[(sc, ENDMARKER, NULL_SYM, b3)] = (target, 1)
    for b2, b3 in bit_pairs:
        cmp_st = f"1cmp[{b2}{b3}]"
        scan_st = f"1scan[{b2}{b3}]"
        states.update({cmp_st, scan_st})
        comm_symbol[cmp_st] = REQUEST_SYM
        for sym in "ab":
            delta_det[(cmp_st, sym, sym)] = (cmp_st, 1)
            delta_det[(scan_st, sym, NULL_SYM)] = (scan_st, 1)
        delta_det[(cmp_st, "c", PAD_SYM)] = (scan_st, 1)
        _verdict(delta_det, scan_st, ENDMARKER, NULL_SYM, (b2, b3))

    # branch 2: skip the prefix without communicating, then the
    # certificate must equal the suffix after the first c.
    states.add("2c2")
    coin_states.add("2c2")
    for b2 in (0, 1):
        st3 = f"2c3[{b2}]"
        m3 = f"2m3[{b2}]"
        states.update({st3, m3})
        coin_states.update({st3, m3})
        comm_symbol[m3] = REQUEST_SYM
        for sym in "ab":
            delta_coin[("2c2", sym, NULL_SYM, b2)] = (st3, 1)
        delta_coin[("2c2", "c", NULL_SYM, b2)] = (m3, 1)
        for b3 in (0, 1):
            skip_st = f"2skip[{b2}{b3}]"
            cmp_st = f"2cmp[{b2}{b3}]"
            for sym in "ab":
                delta_coin[(st3, sym, NULL_SYM, b3)] = (skip_st, 1)
                delta_coin[(m3, sym, sym, b3)] = (cmp_st, 1)
            delta_coin[(st3, "c", NULL_SYM, b3)] = (cmp_st, 1)
            target = _REJ if (b2, b3) == (0, 0) else _ACC
            delta_coin[(m3, ENDMARKER, PAD_SYM, b3)] = (target, 1)
    for b2, b3 in bit_pairs:
        skip_st = f"2skip[{b2}{b3}]"
        cmp_st = f"2cmp[{b2}{b3}]"
        states.update({skip_st, cmp_st})
        comm_symbol[cmp_st] = REQUEST_SYM
        for sym in "ab":
            delta_det[(skip_st, sym, NULL_SYM)] = (skip_st, 1)
            delta_det[(cmp_st, sym, sym)] = (cmp_st, 1)
        delta_det[(skip_st, "c", NULL_SYM)] = (cmp_st, 1)
        _verdict(delta_det, cmp_st, ENDMARKER, PAD_SYM, (b2, b3))

    return VerifierMachine(
        states=states,
        start="S",
        accept=_ACC,
        reject=_REJ,
        coin_states=coin_states,
        input_alphabet={"a", "b", "c"},
        comm_alphabet={NULL_SYM, REQUEST_SYM, PAD_SYM, "a", "b"},
        comm_symbol=comm_symbol,
        input_head_mode=HeadMode.REAL_TIME,
        coin_budget=3,
        delta_coin=delta_coin,
        delta_det=delta_det,
    )


def build_nh_verifier() -> VerifierMachine:
    """Three-coin real-time verifier for NH; the honest certificate for
    a^j b ... is a^j followed by the separator STOP.

    Branch 1 checks the certificate length against the leading a-block and
    validates the block format of the whole string.  Branch 2 matches
    certificate a's one-to-one against input a's after the first b and
    requires the STOP to arrive exactly at a block boundary, which happens
    iff some prefix sum of the block lengths equals the certificate's a
    count.
    """
    coin_states = set()
    comm_symbol = {}
    delta_coin = {}
    delta_det = {}
    states = {_ACC, _REJ, "S"}

    coin_states.add("S")
    delta_coin[("S", ENDMARKER, NULL_SYM, 0)] = ("1c2", 1)
    delta_coin[("S", ENDMARKER, NULL_SYM, 1)] = ("2c2", 1)

    bit_pairs = [(b2, b3) for b2 in (0, 1) for b3 in (0, 1)]

    # branch 1: leading block vs certificate plus full format check
    states.add("1c2")
    coin_states.add("1c2")
    comm_symbol["1c2"] = REQUEST_SYM
    for b2 in (0, 1):
        st3 = f"1c3[{b2}]"
        states.add(st3)
        coin_states.add(st3)
        comm_symbol[st3] = REQUEST_SYM
        delta_coin[("1c2", "a", "a", b2)] = (st3, 1)
        for b3 in (0, 1):
            lead = f"1lead[{b2}{b3}]"
            need = f"1need[{b2}{b3}]"
            delta_coin[(st3, "a", "a", b3)] = (lead, 1)
            delta_coin[(st3, "b", "STOP", b3)] = (need, 1)
    for b2, b3 in bit_pairs:
        lead = f"1lead[{b2}{b3}]"
        need = f"1need[{b2}{b3}]"
        inside = f"1in[{b2}{b3}]"
        after = f"1tb[{b2}{b3}]"
        states.update({lead, need, inside, after})
        comm_symbol[lead] = REQUEST_SYM
        delta_det[(lead, "a", "a")] = (lead, 1)
        delta_det[(lead, "b", "STOP")] = (need, 1)
        delta_det[(need, "a", NULL_SYM)] = (inside, 1)
        delta_det[(inside, "a", NULL_SYM)] = (inside, 1)
        delta_det[(inside, "b", NULL_SYM)] = (after, 1)
        delta_det[(after, "a", NULL_SYM)] = (inside, 1)
        _verdict(delta_det, after, ENDMARKER, NULL_SYM, (b2, b3))

    # branch 2: prefix-sum alignment
    states.add("2c2")
    coin_states.add("2c2")
    for b2 in (0, 1):
        st3 = f"2c3[{b2}]"
        states.add(st3)
        coin_states.add(st3)
        delta_coin[("2c2", "a", NULL_SYM, b2)] = (st3, 1)
        for b3 in (0, 1):
            skip = f"2skip[{b2}{b3}]"
            match = f"2m[{b2}{b3}]"
            delta_coin[(st3, "a", NULL_SYM, b3)] = (skip, 1)
            delta_coin[(st3, "b", NULL_SYM, b3)] = (match, 1)
    for b2, b3 in bit_pairs:
        skip = f"2skip[{b2}{b3}]"
        match = f"2m[{b2}{b3}]"
        paid = f"2p[{b2}{b3}]"
        tneed = f"2tn[{b2}{b3}]"
        tin = f"2ti[{b2}{b3}]"
        states.update({skip, match, paid, tneed, tin})
        comm_symbol[match] = REQUEST_SYM
        delta_det[(skip, "a", NULL_SYM)] = (skip, 1)
        delta_det[(skip, "b", NULL_SYM)] = (match, 1)
        # the matcher consumes one certificate symbol per cell: a cert a on
        # an input a pairs them, a cert a on a boundary b pre-pays the next
        # block's first a (which then passes through the silent state), and
        # the separator must arrive exactly on a boundary b
        delta_det[(match, "a", "a")] = (match, 1)
        delta_det[(match, "b", "a")] = (paid, 1)
        delta_det[(match, "b", "STOP")] = (tneed, 1)
        delta_det[(paid, "a", NULL_SYM)] = (match, 1)
        # tail after the sum completed: loose block-format scan
        delta_det[(tneed, "a", NULL_SYM)] = (tin, 1)
        delta_det[(tin, "a", NULL_SYM)] = (tin, 1)
        delta_det[(tin, "b", NULL_SYM)] = (tneed, 1)
        _verdict(delta_det, tneed, ENDMARKER, NULL_SYM, (b2, b3))

    return VerifierMachine(
        states=states,
        start="S",
        accept=_ACC,
        reject=_REJ,
        coin_states=coin_states,
        input_alphabet={"a", "b"},
        comm_alphabet={NULL_SYM, REQUEST_SYM, PAD_SYM, "a", "STOP"},
        comm_symbol=comm_symbol,
        input_head_mode=HeadMode.REAL_TIME,
        coin_budget=3,
        delta_coin=delta_coin,
        delta_det=delta_det,
    )


def twin_honest_certificate(x: str) -> list:
    if not twin_oracle(x):
        raise ValueError(f"{x!r} is not of the form w c w")
    return list(x.partition("c")[0])


def nh_honest_certificate(x: str) -> list:
    if not nh_oracle(x):
        raise ValueError(f"{x!r} is not in the language")
    return ["a"] * x.index("b") + ["STOP"]


def build_twin_recognizer_2head() -> MultiheadAutomaton:
    """Deterministic one-way 2-head recognizer of TWIN: head 2 advances to
    the symbol after the first c, then both heads compare in lockstep."""
    sigma = {"a", "b", "c"}
    t = {}
    # advance head 2 to just past the first c; scanning the end-marker
    # again in SEEK means head 2 ran off the end without finding a c
    t[("INIT", (ENDMARKER, ENDMARKER))] = [("SEEK", (0, 1))]
    for s in "ab":
        t[("SEEK", (ENDMARKER, s))] = [("SEEK", (0, 1))]
    t[("SEEK", (ENDMARKER, "c"))] = [("CMP", (1, 1))]
    # lockstep comparison; head 1 must reach the c exactly when head 2
    # reaches the right end-marker
    for s in "ab":
        t[("CMP", (s, s))] = [("CMP", (1, 1))]
    t[("CMP", ("c", ENDMARKER))] = [("ACCEPT", (0, 0))]
    return MultiheadAutomaton(
        states={"INIT", "SEEK", "CMP", "ACCEPT"},
        start="INIT",
        accept={"ACCEPT"},
        alphabet=sigma,
        head_count=2,
        head_modes=[HeadMode.ONE_WAY, HeadMode.ONE_WAY],
        transitions=t,
    )
