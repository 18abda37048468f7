"""Bounded empirical checks of the congruence and valuation lemmas, plus the
soundness search harness and the inclusion-chain check.

Random streams use SplitMix64 (Steele, Lea & Flood 2014) in counter form: the
k-th draw (k >= 1) for a seed is ``mix(seed + k * 0x9E3779B97F4A7C15 mod 2^64)``,
so any slice of the stream can be regenerated independently.  A draw is mapped
into ``[-B, B]`` as ``x % (2B + 1) - B``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Callable, Sequence

import numpy as np

from .core import bcde, d4, d4_factors_batch, BATCH_ENTRY_LIMIT
from .errors import UsageError
from .numtheory import PrimeClass, classify_prime, factor
from .sets import CHAIN, Classification, classify_c4c2c2, classify_group

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def splitmix64(seed: int, k: int) -> int:
    """The k-th SplitMix64 output for ``seed`` (k starts at 1)."""
    z = (seed + k * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Draws start, start+1, ..., start+count-1 as a uint64 array."""
    k = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def random_vectors(seed: int, first: int, count: int, bound: int) -> np.ndarray:
    """Vectors first..first+count-1 of the seeded stream, entries in [-bound, bound]."""
    raw = splitmix64_block(seed, 16 * first + 1, 16 * count)
    span = np.uint64(2 * bound + 1)
    return ((raw % span).astype(np.int64) - bound).reshape(count, 16)


def exhaustive01_vectors(first: int, count: int) -> np.ndarray:
    idx = np.arange(first, first + count, dtype=np.int64)[:, None]
    return (idx >> np.arange(16, dtype=np.int64)) & 1


@dataclass
class LemmaReport:
    lemma: str
    checked: int
    passed: bool
    counterexample: tuple | None = None
    vacuous: int = 0
    inconclusive: bool = False
    details: dict = field(default_factory=dict)

    @property
    def nonvacuous(self) -> int:
        return self.checked - self.vacuous

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "checked": self.checked,
            "nonvacuous": self.nonvacuous,
            "vacuous": self.vacuous,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "details": self.details,
        }


class _Tally:
    """Accumulates one conditional check; first failure is kept."""

    def __init__(self, lemma: str):
        self.lemma = lemma
        self.checked = 0
        self.vacuous = 0
        self.counterexample = None

    def record(self, case, hypothesis: bool, conclusion: Callable[[], bool] | bool = True):
        self.checked += 1
        if not hypothesis:
            self.vacuous += 1
            return
        ok = conclusion() if callable(conclusion) else conclusion
        if not ok and self.counterexample is None:
            self.counterexample = tuple(case)

    def report(self, **details) -> LemmaReport:
        return LemmaReport(
            self.lemma, self.checked, self.counterexample is None,
            self.counterexample, self.vacuous, details=details,
        )


def _v2(n: int) -> int | None:
    return None if n == 0 else (n & -n).bit_length() - 1


def _exactly(n: int, w: int) -> bool:
    """n in 2^w * (odd integers)."""
    return _v2(n) == w


def _divisible(n: int, w: int) -> bool:
    return n % (1 << w) == 0


def _has_pm3_prime(n: int) -> bool:
    """Some prime = +-3 (mod 8) divides n (every prime divides 0)."""
    return n == 0 or any(p % 8 in (3, 5) for p in factor(n).primes())


def _has_p5_prime(n: int) -> bool:
    return n == 0 or any(p % 8 == 5 for p in factor(n).primes())


def _has_p_prime(n: int) -> bool:
    return any(
        p % 8 == 1 and classify_prime(p) is PrimeClass.P1_PRIME for p in factor(n).primes()
    )


def check_remarks(range_bound: int = 3, *, samples: int = 2000, seed: int = 0,
                  d4_fn: Callable[..., int] = d4) -> LemmaReport:
    """Antisymmetry under cyclic shift, the b/c/d/e parity and sum rules, and
    the mod-2 agreement of the full determinant with each circulant factor."""
    if range_bound < 1:
        raise UsageError("range_bound must be >= 1")
    R = range_bound
    anti = _Tally("R2.2")
    par = _Tally("d4-parity")
    if (2 * R + 1) ** 4 <= 10**6:
        quads = product(range(-R, R + 1), repeat=4)
    else:
        draws = random_vectors(seed, 0, 10**6 // 4, R).reshape(-1, 4).tolist()
        quads = map(tuple, draws)
    for x in quads:
        val = d4_fn(*x)
        anti.record(x, True, val == -d4_fn(x[1], x[2], x[3], x[0]))
        par.record(x, True, (val - sum(x)) % 2 == 0)

    rem = _Tally("R2.4")
    lem = _Tally("L2.5")
    for a in random_vectors(seed + 1, 0, samples, R).tolist():
        t = bcde(a)
        b, c, d, e = t.quads()
        rem.record(a, True, all(
            b[i] % 2 == c[i] % 2 == d[i] % 2 == e[i] % 2
            and b[i] + c[i] + d[i] + e[i] == 4 * a[i]
            for i in range(4)
        ))
        fs = [d4_fn(*q) for q in t.quads()]
        lem.record(a, True, len({f % 2 for f in fs + [prod(fs)]}) == 1)

    parts = [anti, par, rem, lem]
    bad = next((t for t in parts if t.counterexample is not None), None)
    return LemmaReport(
        "R2.2+R2.4+L2.5",
        sum(t.checked for t in parts),
        bad is None,
        None if bad is None else bad.counterexample,
        details={t.lemma: t.checked for t in parts}
        | ({"failed": bad.lemma} if bad else {}),
    )


def check_lemma_3_2(*, d4_fn: Callable[..., int] = d4) -> LemmaReport:
    """Both mod-16 congruences over a full residue system of k, l, m, n."""
    one, two = _Tally("3.2(1)"), _Tally("3.2(2)")
    for k, l, m, n in product(range(16), repeat=4):
        one.record((1, k, l, m, n), True,
                   (d4_fn(2 * k + 1, 2 * l, 2 * m, 2 * n) - (8 * m + 1)) % 16 == 0)
        two.record((2, k, l, m, n), True,
                   (d4_fn(2 * k, 2 * l + 1, 2 * m + 1, 2 * n + 1) - (8 * (k + l + n) - 3)) % 16 == 0)
    cx = one.counterexample or two.counterexample
    return LemmaReport("3.2", one.checked + two.checked, cx is None, cx,
                       details={"3.2(1)": one.checked, "3.2(2)": two.checked})


def _lemma_4_4_case(case: int, k: int, l: int, m: int, n: int, d4_fn) -> bool:
    if case == 1:
        v = d4_fn(2 * k, 2 * l, 2 * m, 2 * n)
        if (k + m - l - n) % 2:
            return _exactly(v, 4)
        return _divisible(v, 8)
    if case == 2:
        v = d4_fn(2 * k + 1, 2 * l + 1, 2 * m + 1, 2 * n + 1)
        if (k + m - l - n) % 2:
            return _exactly(v, 4)
        if (k + m) * (l + n) % 4 == 3:
            return _exactly(v, 7)
        return _divisible(v, 9)
    if case == 3:
        v = d4_fn(2 * k, 2 * l + 1, 2 * m, 2 * n + 1)
        if (k - m) % 2 and (l - n) % 2:
            return _exactly(v, 5)
        if (k - m) % 2 == 0 and (2 * k + 2 * l + 1) * (2 * m + 2 * n + 1) % 8 in (3, 5):
            return _exactly(v, 6)
        return _divisible(v, 7)
    v = d4_fn(2 * k, 2 * l, 2 * m + 1, 2 * n + 1)
    if (2 * k + 2 * m + 1) * (2 * l + 2 * n + 1) % 8 in (3, 5):
        return _exactly(v, 4)
    return _divisible(v, 5)


def check_lemma_4_4(range_bound: int = 8, *, d4_fn: Callable[..., int] = d4) -> LemmaReport:
    """2-adic valuation classes of D4 on the four parity patterns,
    for k, l, m, n in [-range_bound, range_bound)."""
    if range_bound < 2:
        raise UsageError("range_bound must be >= 2")
    tallies = [_Tally(f"4.4({c})") for c in (1, 2, 3, 4)]
    box = range(-range_bound, range_bound)
    for k, l, m, n in product(box, repeat=4):
        for c, t in enumerate(tallies, 1):
            t.record((c, k, l, m, n), True, _lemma_4_4_case(c, k, l, m, n, d4_fn))
    cx = next((t.counterexample for t in tallies if t.counterexample), None)
    return LemmaReport("4.4", sum(t.checked for t in tallies), cx is None, cx,
                       details={t.lemma: t.checked for t in tallies})


def _box_lemmas(R: int, d4_fn) -> list[_Tally]:
    t45a, t45b = _Tally("4.5(1)"), _Tally("4.5(2)")
    t46a, t46b = _Tally("4.6(1)"), _Tally("4.6(2)")
    t47, t410 = _Tally("4.7"), _Tally("4.10")
    for x in product(range(-R, R + 1), repeat=4):
        x0, x1, x2, x3 = x
        s0, s1 = x0 + x2, x1 + x3
        t0, t1 = x0 - x2, x1 - x3
        sos = t0 * t0 + t1 * t1
        pattern = (x0 % 2, x1 % 2, x2 % 2, x3 % 2) == (0, 0, 1, 1)
        ps = s0 * s1 % 8
        same4 = (x0 - x1) % 4 == 0

        h45 = pattern and ps in (3, 5)
        t45a.record(x, h45 and same4, lambda: sos % 16 == 10)
        t45b.record(x, h45 and not same4, lambda: sos % 16 == 2)

        diff = s0 * s0 - s1 * s1
        r0, r1 = s0 % 8, s1 % 8
        if r0 in (3, 5) and r1 in (1, 7):
            t46a.record(x, not _has_pm3_prime(diff), lambda: diff % 64 == 8)
        else:
            t46a.record(x, False)
        if r0 in (1, 7) and r1 in (3, 5):
            t46b.record(x, not _has_pm3_prime(diff), lambda: diff % 64 == 56)
        else:
            t46b.record(x, False)

        h47 = t0 % 8 in (3, 5) and t1 % 8 in (3, 5) and not _has_pm3_prime(sos)
        t47.record(x, h47, lambda: _has_p_prime(sos))

        h410 = pattern and ps in (1, 7) and not same4
        t410.record(x, h410, lambda: _has_p5_prime(d4_fn(*x)))
    return [t45a, t45b, t46a, t46b, t47, t410]


def check_lemmas_4_5_to_4_10(range_bound: int = 4, *, quota: int = 100, max_bound: int = 32,
                             d4_fn: Callable[..., int] = d4) -> list[LemmaReport]:
    """Conditional lemmas over the box [-R, R]^4.

    R starts at ``range_bound`` and doubles (capped at ``max_bound``) until every
    lemma has at least ``quota`` cases whose hypotheses hold.  A lemma still
    short of its quota at the cap is flagged inconclusive.
    """
    if range_bound < 4:
        raise UsageError("range_bound must be >= 4")
    R = min(range_bound, max_bound)
    while True:
        tallies = _box_lemmas(R, d4_fn)
        short = [t for t in tallies if t.checked - t.vacuous < quota]
        if not short or R >= max_bound:
            break
        log.info("raising box bound %d -> %d for %s", R, min(2 * R, max_bound),
                 [t.lemma for t in short])
        R = min(2 * R, max_bound)
    reports = []
    for t in tallies:
        r = t.report(bound=R, quota=quota)
        r.inconclusive = r.nonvacuous < quota
        reports.append(r)
    return reports


@dataclass
class SearchSummary:
    mode: str
    vectors_tested: int
    values_seen: int
    violations: list[tuple[tuple[int, ...], int]]
    violation_count: int = 0

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "vectors_tested": self.vectors_tested,
            "values_seen": self.values_seen,
            "violation_count": self.violation_count,
            "violations": [{"coeffs": list(c), "value": v} for c, v in self.violations],
        }


MAX_STORED_VIOLATIONS = 100


def _search_chunk(vectors: np.ndarray, classify) -> tuple[int, set, list, int]:
    if int(np.abs(vectors).max(initial=0)) <= BATCH_ENTRY_LIMIT:
        rows = d4_factors_batch(vectors).tolist()
    else:
        from .core import d4_factors
        rows = [d4_factors(a) for a in vectors.tolist()]
    seen: dict[int, bool] = {}
    violations = []
    count = 0
    for i, (f0, f1, f2, f3) in enumerate(rows):
        v = f0 * f1 * f2 * f3
        ok = seen.get(v)
        if ok is None:
            ok = seen[v] = classify(v).member
        if not ok:
            count += 1
            if len(violations) < MAX_STORED_VIOLATIONS:
                violations.append((tuple(vectors[i].tolist()), v))
    return len(rows), set(seen), violations, count


def search_cross_validate(mode: str = "random", budget: int = 10**6, entry_bound: int = 3,
                          seed: int = 42, *, threads: int = 1, chunk: int = 1 << 16,
                          classify: Callable[[int], Classification] = classify_c4c2c2
                          ) -> SearchSummary:
    """Evaluate many coefficient vectors on the fast path and require every
    determinant to classify as a member.

    ``exhaustive01`` covers all 2^16 vectors over {0, 1} (``budget`` is ignored);
    ``random`` draws ``budget`` vectors from the seeded stream.  Work is split into
    fixed chunks, so the summary does not depend on ``threads``.
    """
    if budget < 1:
        raise UsageError("budget must be >= 1")
    if mode == "exhaustive01":
        total = 1 << 16
        make = exhaustive01_vectors
    elif mode == "random":
        if entry_bound < 0:
            raise UsageError("entry_bound must be >= 0")
        total = budget
        make = lambda first, count: random_vectors(seed, first, count, entry_bound)  # noqa: E731
    else:
        raise UsageError(f"unknown search mode {mode!r}")

    starts = range(0, total, chunk)

    def run(first):
        return _search_chunk(make(first, min(chunk, total - first)), classify)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]

    values: set = set()
    violations: list = []
    tested = count = 0
    for n, vals, viol, c in parts:
        tested += n
        values |= vals
        count += c
        violations.extend(viol[: MAX_STORED_VIOLATIONS - len(violations)])
    return SearchSummary(mode, tested, len(values), violations, count)


def chain_samples(sample_budget: int, magnitude_bound: int, seed: int) -> list[int]:
    """Seeded values with |v| <= magnitude_bound, stratified by 2-adic valuation
    so the rare high-valuation families are exercised."""
    W = magnitude_bound.bit_length() - 1
    raw = splitmix64_block(seed, 1, 3 * sample_budget).tolist()
    out = [0]
    for i in range(sample_budget - 1):
        x, y, z = raw[3 * i: 3 * i + 3]
        w = x % (W + 1)
        limit = magnitude_bound >> w
        u = 2 * (y % ((limit + 1) // 2)) + 1
        out.append((-1 if z & 1 else 1) * (u << w))
    return out


def _strictness_witness(lower, upper, magnitude_bound: int, odd_limit: int = 255) -> int | None:
    W = magnitude_bound.bit_length() - 1
    for u in range(1, odd_limit + 1, 2):
        for w in range(W + 1):
            for sign in (1, -1):
                v = sign * (u << w)
                if abs(v) > magnitude_bound:
                    continue
                if classify_group(upper, v).member and not classify_group(lower, v).member:
                    return v
    return None


def check_inclusion_chain(sample_budget: int = 10**5, magnitude_bound: int = 1 << 26,
                          seed: int = 7) -> LemmaReport:
    """Membership implications along the chain of order-16 value sets, plus one
    value separating each adjacent pair."""
    if sample_budget < 1 or magnitude_bound < 1:
        raise UsageError("sample_budget and magnitude_bound must be >= 1")
    counterexample = None
    checked = 0
    for v in chain_samples(sample_budget, magnitude_bound, seed):
        member = [classify_group(g, v).member for g in CHAIN]
        for i in range(len(CHAIN) - 1):
            checked += 1
            if member[i] and not member[i + 1] and counterexample is None:
                counterexample = (CHAIN[i].value, CHAIN[i + 1].value, v)
    gaps = {}
    for lo, hi in zip(CHAIN, CHAIN[1:]):
        gaps[f"{lo.value}<{hi.value}"] = _strictness_witness(lo, hi, magnitude_bound)
    return LemmaReport(
        "chain", checked, counterexample is None, counterexample,
        inconclusive=any(v is None for v in gaps.values()),
        details={"samples": sample_budget, "bound": magnitude_bound,
                 "strictness_witnesses": gaps},
    )
