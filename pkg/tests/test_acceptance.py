"""End-to-end acceptance gate.

Each test is one criterion, timed against its budget.  The terminal summary
prints one PASS/FAIL line per criterion.
"""
import random
import time
from math import isqrt

import pytest
import sympy

from groupdet.core import d4x2x2_fast, d4x2x2_oracle
from groupdet.sets import Family, classify_c4c2c2, in_A
from groupdet.verify import (
    check_inclusion_chain,
    check_lemma_3_2,
    check_lemma_4_4,
    check_lemmas_4_5_to_4_10,
    exhaustive01_vectors,
    random_vectors,
    search_cross_validate,
)
from groupdet.witness import (
    synthesize,
    w_B,
    w_P5,
    w_e16_4m1,
    w_e16_4m1_8n3,
    w_e18_even,
    w_e18_odd,
    w_odd,
)


def in_p_prime(p):
    """p = 1 mod 8 prime with a^2 + b^2 = p and a + b = +-3 mod 8 (direct scan)."""
    if p % 8 != 1 or not sympy.isprime(p):
        return False
    for a in range(isqrt(p) + 1):
        b = isqrt(p - a * a)
        if a * a + b * b == p:
            return (a + b) % 8 in (3, 5)
    return False


P_PRIME_2000 = [p for p in range(2000) if in_p_prime(p)]
P5_2000 = [p for p in sympy.primerange(5, 2000) if p % 8 == 5]


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def report(number, ok, seconds, limit, note=""):
    status = "PASS" if ok and seconds < limit else "FAIL"
    print(f"criterion {number}: {status} {seconds:.1f}s / {limit}s {note}")


@pytest.mark.criterion(1, "fast path equals group-matrix oracle")
def test_oracle_equivalence():
    with Timer() as t:
        bad = []
        for a in exhaustive01_vectors(0, 1 << 16).tolist():
            if d4x2x2_fast(a) != d4x2x2_oracle(a):
                bad.append(a)
        for a in random_vectors(2024, 0, 10**4, 9).tolist():
            if d4x2x2_fast(a) != d4x2x2_oracle(a):
                bad.append(a)
    report(1, not bad, t.seconds, 60)
    assert not bad, bad[:5]
    assert t.seconds < 60


@pytest.mark.criterion(2, "five basic constructions hit their values")
def test_basic_constructions():
    with Timer() as t:
        rng = range(-50, 51)
        for m in rng:
            assert d4x2x2_oracle(w_odd(m)) == 16 * m + 1
            assert d4x2x2_oracle(w_e16_4m1(m)) == 2**16 * (4 * m + 1)
            assert d4x2x2_oracle(w_e18_odd(m)) == 2**18 * (2 * m + 1)
            assert d4x2x2_oracle(w_e18_even(m)) == 2**18 * (2 * m)
            for n in rng:
                assert d4x2x2_oracle(w_e16_4m1_8n3(m, n)) == 2**16 * (4 * m + 1) * (8 * n + 3)
    report(2, True, t.seconds, 30)
    assert t.seconds < 30


@pytest.mark.criterion(3, "prime-parametrized constructions for p < 2000")
def test_prime_constructions():
    assert P_PRIME_2000[:3] == [17, 73, 89]
    with Timer() as t:
        for p in P_PRIME_2000:
            for m in range(-5, 6):
                assert d4x2x2_oracle(w_B(p, m)) == 2**16 * p * (4 * m - 1), (p, m)
        for p in P5_2000:
            for m in range(-5, 6):
                assert d4x2x2_oracle(w_P5(p, m)) == 2**17 * p * (2 * m + 1), (p, m)
    report(3, True, t.seconds, 30, f"{len(P_PRIME_2000)} + {len(P5_2000)} primes")
    assert t.seconds < 30


@pytest.mark.criterion(4, "mod-16 congruences over all residues")
def test_mod16_congruences():
    with Timer() as t:
        r = check_lemma_3_2()
    report(4, r.passed, t.seconds, 5, f"{r.checked} checks")
    assert r.passed, r.counterexample
    assert r.checked == 131072
    assert t.seconds < 5


@pytest.mark.criterion(5, "2-adic valuation cases on [-8, 8)^4")
def test_valuation_cases():
    with Timer() as t:
        r = check_lemma_4_4(8)
    report(5, r.passed, t.seconds, 60, f"{r.checked} checks")
    assert r.passed, r.counterexample
    assert r.checked == 4 * 16**4
    assert t.seconds < 60


@pytest.mark.criterion(6, "conditional lemmas, >= 100 non-vacuous cases each")
def test_conditional_lemmas():
    with Timer() as t:
        reports = check_lemmas_4_5_to_4_10(4, quota=100, max_bound=32)
    ok = all(r.passed and r.nonvacuous >= 100 for r in reports)
    counts = ", ".join(f"{r.lemma}={r.nonvacuous}" for r in reports)
    report(6, ok, t.seconds, 120, counts)
    assert len(reports) == 6
    for r in reports:
        assert r.passed, (r.lemma, r.counterexample)
        assert r.nonvacuous >= 100, r.lemma
        assert r.details["bound"] <= 32
    assert t.seconds < 120


@pytest.mark.criterion(7, "soundness search, exhaustive {0,1} + 10^6 random")
def test_soundness_search():
    with Timer() as t:
        ex = search_cross_validate("exhaustive01")
        rnd = search_cross_validate("random", 10**6, 3, seed=42)
    ok = ex.violation_count == 0 and rnd.violation_count == 0
    report(7, ok, t.seconds, 600, f"{ex.values_seen + rnd.values_seen} values")
    assert ex.vectors_tested == 1 << 16 and rnd.vectors_tested == 10**6
    assert ex.violations == [] and rnd.violations == []
    assert t.seconds < 600


def _sample_members(count, seed):
    """(value, family) pairs drawn evenly from the seven member families."""
    rng = random.Random(seed)
    p_prime = [p for p in range(17, 20000, 8) if in_p_prime(p)]
    p5 = [p for p in sympy.primerange(5, 20000) if p % 8 == 5]
    odd_bound = 2**24

    pick = rng.randint

    makers = [
        (Family.ODD_16M1, lambda: 16 * pick(-(2**36), 2**36 - 1) + 1),
        (Family.E16_4M1, lambda: 2**16 * (4 * pick(-(2**22), 2**22 - 1) + 1)),
        (Family.E16_8M3, lambda: 2**16 * (8 * pick(-(2**21), 2**21 - 1) + 3)),
        (Family.E16_A, lambda: 2**16 * (8 * pick(-255, 256) - 3) * (8 * pick(-255, 255) + 3)),
        (Family.E16_B, None),
        (Family.E17_P5, None),
        (Family.E18_ANY, lambda: 2**18 * pick(-(2**22), 2**22)),
    ]
    out = []
    for i in range(count):
        family, make = makers[i % len(makers)]
        if family is Family.E16_B:
            p = rng.choice(p_prime)
            h = (odd_bound // p - 1) // 8
            v = 2**16 * p * (8 * pick(-h, h) - 1)
        elif family is Family.E17_P5:
            p = rng.choice(p5)
            h = (odd_bound // 2 // p - 1) // 2
            v = 2**17 * p * (2 * pick(-h, h) + 1)
        else:
            v = make()
        assert abs(v) <= 2**40
        out.append((v, family))
    return out


@pytest.mark.criterion(8, "witness round trip for 10^4 sampled members")
def test_witness_round_trip():
    samples = _sample_members(10**4, 8)
    assert {f for _, f in samples} == {
        Family.ODD_16M1, Family.E16_4M1, Family.E16_8M3, Family.E16_A,
        Family.E16_B, Family.E17_P5, Family.E18_ANY}
    with Timer() as t:
        failures = []
        for v, family in samples:
            w = synthesize(v)
            if not w.verified or d4x2x2_fast(w.coeffs) != v:
                failures.append(v)
                continue
            expected = {family}
            if family is Family.E16_B and in_A(v >> 16) is not None:
                expected.add(Family.E16_A)  # A and B overlap; A is tried first
            if family is Family.E18_ANY and v == 0:
                expected = {Family.ZERO}
            if w.family not in expected:
                failures.append(v)
    report(8, not failures, t.seconds, 300, f"{len(samples)} values")
    assert not failures, failures[:5]
    assert t.seconds < 300


@pytest.mark.criterion(9, "negative controls rejected with specific reasons")
def test_negative_controls():
    cases = [
        (9, "1 mod 16"),
        (2**15 * 3, "valuation"),
        (2**16 * 7, "neither A nor B"),
        (2**17 * 27, "5 mod 8"),
    ]
    reasons = set()
    for v, phrase in cases:
        c = classify_c4c2c2(v)
        assert not c.member
        assert c.family is Family.NON_MEMBER
        assert phrase in c.reason, (v, c.reason)
        reasons.add(c.reason)
    assert len(reasons) == 4
    report(9, True, 0.0, 1)


@pytest.mark.criterion(10, "inclusion chain with one strictness witness per gap")
def test_inclusion_chain():
    with Timer() as t:
        r = check_inclusion_chain(10**5, 2**26, 7)
    gaps = r.details["strictness_witnesses"]
    report(10, r.passed and not r.inconclusive, t.seconds, 120, str(gaps))
    assert r.passed, r.counterexample
    assert len(gaps) == 5 and None not in gaps.values()
    assert not r.inconclusive
    assert t.seconds < 120
