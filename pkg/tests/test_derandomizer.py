"""Deterministic certificate checking and one-way conversions."""

import itertools
from fractions import Fraction

import pytest

from conftest import all_strings
from fewcoin.automata import enumerate_language, validate
from fewcoin.compiler import compile_weak, honest_certificate, honest_length_bound
from fewcoin.derandom import (check_private_coin, check_public_coin,
                              expand_coins, make_multitrack_certificate,
                              materialize_one_way,
                              search_private_coin_certificate,
                              to_one_way_multihead)
from fewcoin.showcase import (build_twin_recognizer_2head, build_twin_verifier,
                              twin_honest_certificate, twin_oracle)
from fewcoin.symbols import PAD_SYM, HeadMode
from fewcoin.verifier import (all_coin_strings, outcome_distribution,
                              run_branch)


def _compiled_twin():
    return compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))


def test_expand_coins_yields_one_machine_per_coin_string():
    v = _compiled_twin().verifier
    machines = expand_coins(v)
    assert len(machines) == 2 ** v.coin_budget
    for m in machines:
        assert m.coin_budget == 0
        assert m.coin_states == set()


def test_expand_coins_preserves_branch_verdicts():
    v = build_twin_verifier()
    machines = expand_coins(v)
    for x in ["aca", "ab", "cc"]:
        cert = twin_honest_certificate(x) if twin_oracle(x) else ["a"]
        for coins, m in zip(all_coin_strings(v.coin_budget), machines):
            assert (run_branch(m, x, (), cert).verdict
                    == run_branch(v, x, coins, cert).verdict)


def test_private_coin_accepts_honest_multitrack():
    c = _compiled_twin()
    for x in ["c", "aca", "abcab"]:
        cols = make_multitrack_certificate(
            c.verifier, x, honest_certificate(c, x))
        res = check_private_coin(c.verifier, x, cols)
        assert res.accepted, res.reason


def test_private_coin_rejects_inconsistent_columns():
    c = _compiled_twin()
    x = "aca"
    cols = make_multitrack_certificate(
        c.verifier, x, honest_certificate(c, x))
    # corrupt one response in an early column: tracks that shared a
    # transcript now claim different prover responses
    tampered = [list(col) for col in cols]
    changed = False
    for col in tampered:
        for i, sym in enumerate(col):
            if sym not in ("O", "INF") and sym != PAD_SYM:
                col[i] = PAD_SYM if sym != PAD_SYM else "a"
                changed = True
                break
        if changed:
            break
    res = check_private_coin(c.verifier, x, tampered)
    assert not res.accepted


def test_private_coin_search_agrees_with_membership():
    c = _compiled_twin()
    v = c.verifier
    for x in all_strings("abc", 4):
        found = search_private_coin_certificate(
            v, x, alphabet=c.certificate_alphabet,
            max_columns=honest_length_bound(c, len(x)))
        assert (found is not None) == twin_oracle(x)
        if found is not None:
            assert check_private_coin(v, x, found).accepted


def test_public_coin_accepts_honest_transcripts_and_rejects_garbage():
    c = _compiled_twin()
    v = c.verifier

    def transcripts_for(x, cert):
        out = []
        from fewcoin.derandom import _advance
        for coins in all_coin_strings(v.coin_budget):
            tr = []
            st = _advance(v, x, coins, v.start, 0, 0, None)
            j = 0
            while isinstance(st, tuple):
                _, q, pos, used = st
                recv = cert[j] if j < len(cert) else PAD_SYM
                tr.append((v.sent(q), recv))
                j += 1
                st = _advance(v, x, coins, q, pos, used, recv)
            out.append(tr)
        return out

    for x in ["c", "aca"]:
        res = check_public_coin(v, x, transcripts_for(x, honest_certificate(c, x)))
        assert res.accepted, res.reason
    res = check_public_coin(v, "ab", transcripts_for("ab", []))
    assert not res.accepted
    res = check_public_coin(v, "aca", [])
    assert not res.accepted


def test_to_one_way_multihead_requires_one_way_input():
    c = _compiled_twin()
    with pytest.raises(ValueError):
        to_one_way_multihead(c.verifier)


def test_to_one_way_multihead_recognizes_the_verified_language():
    v = build_twin_verifier()
    m = to_one_way_multihead(v)
    assert m.head_count == 2 ** v.coin_budget
    lang = enumerate_language(m, 4, alphabet="abc")
    expected = {x for x in all_strings("abc", 4) if twin_oracle(x)}
    assert lang == expected


def test_materialized_one_way_validates_with_one_way_heads():
    # a one-coin thinned copy keeps materialization small: drop the coin
    # at the first branch point by fixing the remaining two bits
    v = build_twin_verifier()
    m = materialize_one_way(v, rename=True)
    report = validate(m)
    assert report.ok, report.violations
    assert all(mode == HeadMode.ONE_WAY for mode in m.head_modes)
    lang = enumerate_language(m, 3, alphabet="abc")
    expected = {x for x in all_strings("abc", 3) if twin_oracle(x)}
    assert lang == expected
