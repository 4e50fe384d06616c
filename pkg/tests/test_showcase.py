"""The two showcase languages and their hand-built verifiers."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import all_strings
from fewcoin.automata import enumerate_language, validate
from fewcoin.showcase import (build_nh_verifier, build_twin_recognizer_2head,
                              build_twin_verifier, nh_honest_certificate,
                              nh_oracle, twin_honest_certificate, twin_oracle)
from fewcoin.verifier import (best_certificate, outcome_distribution,
                              validate_verifier)


def test_twin_oracle_examples():
    assert twin_oracle("c")
    assert twin_oracle("aca")
    assert twin_oracle("abcab")
    assert not twin_oracle("")
    assert not twin_oracle("cc")
    assert not twin_oracle("acb")
    assert not twin_oracle("abcba")


def test_nh_oracle_examples():
    # a^j b a^{y_1} b a^{y_2} b ... with some prefix of the y's summing to j
    assert nh_oracle("abab")          # j=1, y_1=1
    assert nh_oracle("aabaabab")      # j=2, y_1=2
    assert nh_oracle("aababab")       # j=2, y_1=1, y_2=1
    assert not nh_oracle("")
    assert not nh_oracle("ab")        # no y blocks at all
    assert not nh_oracle("aabab")     # j=2 but prefix sums are {1, 2}? no: {1}
    assert not nh_oracle("ba")


@given(st.text(alphabet="ab", max_size=8))
@settings(max_examples=200, deadline=None)
def test_nh_oracle_requires_leading_block_match(x):
    if nh_oracle(x):
        assert "b" in x
        j = x.index("b")
        assert j >= 1
        rest = x[j + 1:]
        blocks = rest.split("b")
        assert rest.endswith("a") is False or True
        # some nonempty prefix of complete blocks sums to j
        total = 0
        found = False
        for i, blk in enumerate(blocks):
            if blk == "" and i < len(blocks) - 1:
                return  # malformed would have been rejected already
            total += len(blk)
            complete = i < len(blocks) - 1 or x.endswith("b")
            if complete and len(blk) >= 1 and total == j:
                found = True
                break
            if total >= j:
                break
        assert found


def test_twin_recognizer_language():
    m = build_twin_recognizer_2head()
    assert validate(m).ok
    lang = enumerate_language(m, 5)
    expected = {x for x in all_strings("abc", 5) if twin_oracle(x)}
    assert lang == expected


def test_twin_verifier_members_exact_three_quarters():
    v = build_twin_verifier()
    for x in ["c", "aca", "bcb", "abcab", "bacba"[:5]]:
        if not twin_oracle(x):
            continue
        d = outcome_distribution(v, x, twin_honest_certificate(x))
        assert d.p_accept == Fraction(3, 4)
        assert d.p_nonhalt == 0


def test_twin_verifier_nonmembers_at_most_three_eighths():
    v = build_twin_verifier()
    for x in all_strings("abc", 4):
        if twin_oracle(x):
            continue
        res = best_certificate(v, x, len(x) + 1)
        assert res.p_accept <= Fraction(3, 8)


def test_nh_verifier_members_exact_three_quarters():
    v = build_nh_verifier()
    assert validate_verifier(v) == []
    for x in ["abab", "aababab", "aabaabab", "abaab"[:5]]:
        if not nh_oracle(x):
            continue
        d = outcome_distribution(v, x, nh_honest_certificate(x))
        assert d.p_accept == Fraction(3, 4)
        assert d.p_nonhalt == 0


def test_nh_verifier_nonmembers_at_most_three_eighths():
    v = build_nh_verifier()
    for x in all_strings("ab", 5):
        if nh_oracle(x):
            continue
        res = best_certificate(v, x, len(x) + 2)
        assert res.p_accept <= Fraction(3, 8)


def test_honest_certificates_have_linear_length():
    for x in ["aca", "abcab"]:
        assert len(twin_honest_certificate(x)) <= len(x) + 1
    for x in ["abab", "aababab"]:
        assert len(nh_honest_certificate(x)) <= len(x) + 1
