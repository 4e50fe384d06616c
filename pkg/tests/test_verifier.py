"""Verifier branch semantics and exact outcome distributions."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_strings
from fewcoin.showcase import (build_twin_verifier, twin_honest_certificate,
                              twin_oracle)
from fewcoin.symbols import (ENDMARKER, NULL_SYM, PAD_SYM, REQUEST_SYM,
                             HeadMode)
from fewcoin.verifier import (ProverStrategy, VerifierMachine,
                              all_coin_strings, best_certificate,
                              derandomize_recognizer, interact_distribution,
                              outcome_distribution, run_branch,
                              validate_verifier)


def test_validate_verifier_accepts_showcase_machine():
    assert validate_verifier(build_twin_verifier()) == []


def test_distribution_sums_to_one_exactly():
    v = build_twin_verifier()
    for x in all_strings("abc", 4):
        for cert in ["", "a", "ab", x]:
            d = outcome_distribution(v, x, list(cert))
            assert d.p_accept + d.p_reject + d.p_nonhalt == 1


def test_distribution_string_format():
    v = build_twin_verifier()
    d = outcome_distribution(v, "aca", twin_honest_certificate("aca"))
    assert str(d) == "accept=3/4 reject=1/4 nonhalt=0/1"


def test_coin_strings_cover_the_full_space():
    coins = list(all_coin_strings(3))
    assert len(coins) == 8
    assert len(set(coins)) == 8
    assert all(len(c) == 3 for c in coins)


def test_run_branch_reports_coin_usage_within_budget():
    v = build_twin_verifier()
    for coins in all_coin_strings(v.coin_budget):
        out = run_branch(v, "aca", coins, twin_honest_certificate("aca"))
        assert out.coins_used <= v.coin_budget


def _brute_force_best(v, x, max_len, alphabet):
    best = Fraction(0)
    arg = []
    for length in range(max_len + 1):
        for tup in itertools.product(alphabet, repeat=length):
            p = outcome_distribution(v, x, list(tup)).p_accept
            if p > best:
                best, arg = p, list(tup)
    return best, arg


def test_best_certificate_matches_brute_force():
    v = build_twin_verifier()
    alphabet = sorted(set(v.comm_alphabet) - {NULL_SYM, REQUEST_SYM})
    for x in ["", "a", "c", "ac", "ca", "aca", "abc", "cc"]:
        max_len = len(x) + 1
        expected, _ = _brute_force_best(v, x, max_len, alphabet)
        result = best_certificate(v, x, max_len)
        assert result.p_accept == expected
        replay = outcome_distribution(v, x, result.certificate)
        assert replay.p_accept == expected


def test_best_certificate_on_members_reaches_honest_value():
    v = build_twin_verifier()
    for x in ["c", "aca", "bcb", "abcab"]:
        assert twin_oracle(x)
        result = best_certificate(v, x, len(x) + 1)
        assert result.p_accept == Fraction(3, 4)


def test_interacting_prover_replays_a_fixed_certificate():
    v = build_twin_verifier()
    for x in ["aca", "ab", "bcb", "cc"]:
        cert = twin_honest_certificate(x) if twin_oracle(x) else ["a"]
        responses = {}
        history = []
        for sym in cert:
            history.append(REQUEST_SYM)
            responses[tuple(history)] = sym
        prover = ProverStrategy(responses=responses, default=PAD_SYM)
        d1 = interact_distribution(v, x, prover)
        d2 = outcome_distribution(v, x, cert)
        assert (d1.p_accept, d1.p_reject, d1.p_nonhalt) == (
            d2.p_accept, d2.p_reject, d2.p_nonhalt)


def _coin_flip_recognizer(threshold):
    """Recognizer with no communication: accepts iff at least `threshold`
    of its two coins come up heads."""
    delta = {}
    for bit in (0, 1):
        delta[("c1", ENDMARKER, NULL_SYM, bit)] = (f"c2h{bit}", 0)
    for h1 in (0, 1):
        for bit in (0, 1):
            verdict = "ACC" if h1 + bit >= threshold else "REJ"
            delta[(f"c2h{h1}", ENDMARKER, NULL_SYM, bit)] = (verdict, 0)
    coin = {"c1", "c2h0", "c2h1"}
    return VerifierMachine(
        states=coin | {"ACC", "REJ"}, start="c1",
        accept="ACC", reject="REJ", coin_states=coin,
        input_alphabet={"a"}, comm_alphabet={NULL_SYM},
        comm_symbol={q: NULL_SYM for q in coin},
        input_head_mode=HeadMode.TWO_WAY, coin_budget=2,
        delta_coin=delta, delta_det={})


def test_derandomize_recognizer_takes_strict_majority():
    # accepts when the second coin is heads or both are: 3/4 > 1/2
    lenient = _coin_flip_recognizer(1)
    assert outcome_distribution(lenient, "", []).p_accept == Fraction(3, 4)
    assert derandomize_recognizer(lenient, "")
    # accepts only when both coins are heads: 1/4, and 2/4 is not strict
    strict = _coin_flip_recognizer(2)
    assert outcome_distribution(strict, "", []).p_accept == Fraction(1, 4)
    assert not derandomize_recognizer(strict, "")


def test_derandomize_recognizer_rejects_communicating_machines():
    with pytest.raises(ValueError):
        derandomize_recognizer(build_twin_verifier(), "aca")


@given(st.text(alphabet="abc", max_size=5))
@settings(max_examples=40, deadline=None)
def test_certificate_order_of_branch_outcomes_is_exhaustive(x):
    v = build_twin_verifier()
    cert = twin_honest_certificate(x) if twin_oracle(x) else list(x)
    outcomes = [run_branch(v, x, coins, cert)
                for coins in all_coin_strings(v.coin_budget)]
    d = outcome_distribution(v, x, cert)
    acc = sum(1 for o in outcomes if o.verdict == "accept")
    assert d.p_accept == Fraction(acc, 2 ** v.coin_budget)
