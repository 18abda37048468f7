import numpy as np
import pytest

from groupdet.core import d4, d4x2x2_fast
from groupdet.errors import UsageError
from groupdet.sets import Classification, Family, GroupTag, classify_c4c2c2
from groupdet.verify import (
    LemmaReport,
    check_inclusion_chain,
    check_lemma_3_2,
    check_lemma_4_4,
    check_lemmas_4_5_to_4_10,
    check_remarks,
    chain_samples,
    exhaustive01_vectors,
    random_vectors,
    search_cross_validate,
    splitmix64,
)


def sum_of_squares_d4(x0, x1, x2, x3):
    """A plausible-looking wrong D4: drops the difference-of-squares factor."""
    return (x0 - x2) ** 2 + (x1 - x3) ** 2


def shifted_d4(x0, x1, x2, x3):
    return d4(x0, x1, x2, x3) + 16


def test_splitmix64_reference_output():
    # first output of the reference generator seeded with 0
    assert splitmix64(0, 1) == 0xE220A8397B1DCDAF


def test_random_vectors_in_range_and_reproducible():
    a = random_vectors(42, 0, 500, 3)
    assert a.shape == (500, 16)
    assert a.min() >= -3 and a.max() <= 3
    assert set(np.unique(a).tolist()) == set(range(-3, 4))
    assert np.array_equal(a, random_vectors(42, 0, 500, 3))
    # chunk boundaries do not change the stream
    assert np.array_equal(a[200:], random_vectors(42, 200, 300, 3))


def test_exhaustive01_covers_every_vector():
    v = exhaustive01_vectors(0, 1 << 16)
    assert len({tuple(r) for r in v.tolist()}) == 1 << 16


def test_remarks_small_box_counts_and_passes():
    r = check_remarks(2, samples=100)
    assert isinstance(r, LemmaReport)
    assert r.passed and r.counterexample is None
    assert r.details["R2.2"] == 5**4


def test_remarks_default_bound_passes():
    assert check_remarks(3).passed


def test_remarks_detects_mutant():
    r = check_remarks(2, samples=50, d4_fn=sum_of_squares_d4)
    assert not r.passed
    x = r.counterexample
    assert sum_of_squares_d4(*x) != -sum_of_squares_d4(x[1], x[2], x[3], x[0])


def test_mod16_congruences_full_residue_system():
    r = check_lemma_3_2()
    assert r.passed and r.checked == 2 * 16**4
    assert r.details == {"3.2(1)": 16**4, "3.2(2)": 16**4}


def test_mod16_check_detects_mutant():
    r = check_lemma_3_2(d4_fn=lambda *x: d4(*x) + 8)
    assert not r.passed and r.counterexample is not None


def test_valuation_cases_small_box():
    r = check_lemma_4_4(3)
    assert r.passed and r.checked == 4 * 6**4


@pytest.mark.parametrize("k, l, m, n, exact", [
    (1, 0, 0, 0, 4),  # k+m-l-n odd
    (0, 0, 0, 0, None),  # zero value, divisible by everything
])
def test_all_even_valuation_examples(k, l, m, n, exact):
    v = d4(2 * k, 2 * l, 2 * m, 2 * n)
    if exact is None:
        assert v == 0
    else:
        assert v % 2**exact == 0 and v % 2 ** (exact + 1)


def test_valuation_check_detects_mutant():
    assert not check_lemma_4_4(2, d4_fn=shifted_d4).passed


def test_conditional_lemmas_meet_quota():
    reports = check_lemmas_4_5_to_4_10(4, quota=100)
    assert [r.lemma for r in reports] == ["4.5(1)", "4.5(2)", "4.6(1)", "4.6(2)", "4.7", "4.10"]
    for r in reports:
        assert r.passed, r.lemma
        assert not r.inconclusive
        assert r.nonvacuous >= 100
        assert r.vacuous + r.nonvacuous == r.checked


def test_conditional_lemmas_report_inconclusive_when_capped():
    reports = check_lemmas_4_5_to_4_10(4, quota=10**9, max_bound=4)
    assert all(r.inconclusive for r in reports)
    assert all(r.passed for r in reports)


def test_conditional_lemmas_reject_small_bound():
    with pytest.raises(UsageError):
        check_lemmas_4_5_to_4_10(2)


def test_search_exhaustive01_clean():
    s = search_cross_validate("exhaustive01")
    assert s.vectors_tested == 1 << 16
    assert s.violation_count == 0 and s.violations == []
    assert s.values_seen > 1


def test_search_is_deterministic_and_thread_independent():
    a = search_cross_validate("random", 20000, 3, seed=5, chunk=3000)
    b = search_cross_validate("random", 20000, 3, seed=5, chunk=3000, threads=4)
    assert a == b
    c = search_cross_validate("random", 20000, 3, seed=6, chunk=3000)
    assert c.vectors_tested == a.vectors_tested


def test_search_flags_classifier_without_A_branch():
    def no_a(v):
        c = classify_c4c2c2(v)
        if c.family is Family.E16_A:
            return Classification(v, False, Family.NON_MEMBER, {}, "mutant", c.group)
        return c

    s = search_cross_validate("random", 200000, 3, seed=42, classify=no_a)
    assert s.violation_count > 0
    coeffs, v = s.violations[0]
    assert classify_c4c2c2(v).family is Family.E16_A
    assert d4x2x2_fast(coeffs) == v


def test_search_rejects_bad_arguments():
    with pytest.raises(UsageError):
        search_cross_validate("random", 0)
    with pytest.raises(UsageError):
        search_cross_validate("grid", 10)


def test_chain_samples_in_bound_and_reproducible():
    xs = chain_samples(2000, 1 << 26, 7)
    assert xs == chain_samples(2000, 1 << 26, 7)
    assert all(abs(v) <= 1 << 26 for v in xs)
    assert any(v % (1 << 16) == 0 and v for v in xs)


def test_inclusion_chain_small():
    r = check_inclusion_chain(3000, 1 << 26, 7)
    assert r.passed and not r.inconclusive
    gaps = r.details["strictness_witnesses"]
    assert len(gaps) == 5 and all(v is not None for v in gaps.values())


def test_strictness_examples():
    from groupdet.sets import CHAIN, classify_group
    assert all(classify_group(g, 17).member for g in CHAIN)
    assert classify_group(GroupTag.C16, 3).member
    assert not classify_group(GroupTag.D16, 3).member
    assert classify_group(GroupTag.D16, 5).member
    assert not classify_group(GroupTag.C8xC2, 5).member
