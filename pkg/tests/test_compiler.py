"""Compilation of multihead recognizers into constant-coin verifiers."""

import itertools
from fractions import Fraction

import pytest

from conftest import all_strings
from fewcoin.compiler import (NotMemberError, coins_per_head_choice,
                              compile_strong, compile_weak,
                              copies_for_error, direct_rejection_probability,
                              honest_certificate, honest_length_bound,
                              strong_completeness, strong_error_bound,
                              weak_error_bound)
from fewcoin.showcase import build_twin_recognizer_2head, twin_oracle
from fewcoin.verifier import (best_certificate, outcome_distribution,
                              validate_verifier)


def test_coins_per_head_choice_is_ceil_log2():
    assert coins_per_head_choice(2) == 1
    assert coins_per_head_choice(3) == 2
    assert coins_per_head_choice(4) == 2
    assert coins_per_head_choice(5) == 3
    assert coins_per_head_choice(8) == 3


def test_weak_error_bound_formula():
    assert weak_error_bound(1, 1) == Fraction(1, 2)
    assert weak_error_bound(1, 2) == Fraction(1, 4)
    assert weak_error_bound(2, 2) == Fraction(9, 16)
    assert weak_error_bound(2, 5) == Fraction(243, 1024)


def test_copies_for_error_is_minimal():
    for r in (1, 2):
        for eps_num, eps_den in [(1, 4), (1, 2), (9, 16), (1, 100)]:
            eps = Fraction(eps_num, eps_den)
            m = copies_for_error(r, eps)
            assert weak_error_bound(r, m) <= eps
            assert m == 1 or weak_error_bound(r, m - 1) > eps


def test_strong_formulas():
    assert direct_rejection_probability(1) == Fraction(1, 4)
    assert strong_completeness(1) == Fraction(3, 4)
    assert strong_error_bound(1) == Fraction(3, 8)
    assert direct_rejection_probability(2) == Fraction(3, 8)
    assert strong_completeness(2) == Fraction(5, 8)
    assert strong_error_bound(2) == Fraction(15, 32)


def test_compile_weak_chooses_two_copies_for_quarter_error():
    c = compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))
    assert c.r == 1
    assert c.m == 2
    assert c.verifier.coin_budget == 2
    assert validate_verifier(c.verifier) == []


def test_compile_strong_budget_and_validity():
    c = compile_strong(build_twin_recognizer_2head())
    assert c.r == 1
    assert c.m == 1
    assert c.verifier.coin_budget == 3
    assert validate_verifier(c.verifier) == []


def test_weak_completeness_on_members():
    c = compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))
    for x in ["c", "aca", "bcb", "abcab"]:
        assert twin_oracle(x)
        d = outcome_distribution(c.verifier, x, honest_certificate(c, x))
        assert d.p_accept == 1
        assert d.p_nonhalt == 0


def test_strong_completeness_on_members():
    c = compile_strong(build_twin_recognizer_2head())
    for x in ["c", "aca", "bcb", "abcab"]:
        d = outcome_distribution(c.verifier, x, honest_certificate(c, x))
        assert d.p_accept == strong_completeness(c.r)
        assert d.p_nonhalt == 0


def test_weak_soundness_on_short_nonmembers():
    c = compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))
    for x in all_strings("abc", 3):
        if twin_oracle(x):
            continue
        bound = honest_length_bound(c, len(x))
        res = best_certificate(c.verifier, x, bound,
                               alphabet=c.certificate_alphabet)
        assert res.p_accept <= Fraction(1, 4)


def test_strong_soundness_on_short_nonmembers():
    c = compile_strong(build_twin_recognizer_2head())
    for x in all_strings("abc", 3):
        if twin_oracle(x):
            continue
        bound = honest_length_bound(c, len(x))
        res = best_certificate(c.verifier, x, bound,
                               alphabet=c.certificate_alphabet)
        assert res.p_accept <= strong_error_bound(c.r)


def test_honest_certificate_raises_for_nonmembers():
    c = compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))
    with pytest.raises(NotMemberError):
        honest_certificate(c, "ab")


def test_honest_certificate_respects_length_bound():
    for c in (compile_weak(build_twin_recognizer_2head(), Fraction(1, 4)),
              compile_strong(build_twin_recognizer_2head())):
        for x in ["c", "aca", "abcab", "abcba"[:5]]:
            if not twin_oracle(x):
                continue
            cert = honest_certificate(c, x)
            assert len(cert) <= honest_length_bound(c, len(x))


def test_compiled_verifier_never_nonhalts():
    c = compile_weak(build_twin_recognizer_2head(), Fraction(1, 4))
    for x in all_strings("abc", 2):
        for cert in [[], ["(REWIND)"], list(honest_certificate(c, x))
                     if twin_oracle(x) else ["(END)"]]:
            d = outcome_distribution(c.verifier, x, cert)
            assert d.p_nonhalt == 0
