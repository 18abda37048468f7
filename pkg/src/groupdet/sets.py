"""Membership tests for the integer sets A, B, C, D and the order-16 value sets S(G)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

from .errors import UsageError
from .numtheory import PrimeClass, classify_prime, divisor_pairs, factor, two_adic


class Family(str, enum.Enum):
    # S(C4 x C2^2)
    ODD_16M1 = "Odd16m1"
    E16_4M1 = "E16_4m1"
    E16_8M3 = "E16_8m3"
    E16_A = "E16_A"
    E16_B = "E16_B"
    E17_P5 = "E17_P5"
    E18_ANY = "E18_any"
    ZERO = "Zero"
    NON_MEMBER = "NonMember"
    # terms appearing only in the other groups' value sets
    ODD = "Odd"
    ODD_4M1 = "Odd4m1"
    ODD_C = "Odd_C"
    ODD_D = "Odd_D"
    E4_ANY = "E4_any"
    E6_P = "E6_P"
    E6_Q2 = "E6_Q2"
    E7_ANY = "E7_any"
    E10_ODD = "E10_odd"
    E10_ANY = "E10_any"
    E11_P = "E11_P"
    E11_Q2 = "E11_Q2"
    E12_ANY = "E12_any"
    E15_P5 = "E15_P5"
    E16_ANY = "E16_any"
    E24_4M1 = "E24_4m1"
    E24_8M3 = "E24_8m3"
    E24_A = "E24_A"
    E26_ANY = "E26_any"


class GroupTag(str, enum.Enum):
    C4 = "C4"
    C2x2x2x2 = "C2x2x2x2"
    C4xC2xC2 = "C4xC2xC2"
    C4xC4 = "C4xC4"
    C8xC2 = "C8xC2"
    D16 = "D16"
    C16 = "C16"


# S(C2^4) < S(C4 x C2^2) < S(C4^2) < S(C8 x C2) < S(D16) < S(C16)
CHAIN = (
    GroupTag.C2x2x2x2,
    GroupTag.C4xC2xC2,
    GroupTag.C4xC4,
    GroupTag.C8xC2,
    GroupTag.D16,
    GroupTag.C16,
)


@dataclass(frozen=True)
class Classification:
    value: int
    member: bool
    family: Family
    params: dict[str, int] = field(default_factory=dict)
    reason: str = ""
    group: GroupTag = GroupTag.C4xC2xC2

    def as_dict(self) -> dict:
        return {
            "group": self.group.value,
            "value": self.value,
            "member": self.member,
            "family": self.family.value,
            "params": dict(self.params),
            "reason": self.reason,
        }


def _require_odd(u: int, name: str) -> None:
    if u % 2 == 0:
        raise UsageError(f"{name} needs an odd integer, got {u}")


def in_A(u: int) -> tuple[int, int] | None:
    """(k, l) with u = (8k - 3)(8l + 3), or None."""
    _require_odd(u, "in_A")
    if u % 8 != 7:
        return None
    for x, y in divisor_pairs(u):
        if x % 8 == 5 and y % 8 == 3:
            return (x + 3) // 8, (y - 3) // 8
    return None


def in_B(u: int) -> int | None:
    """Smallest prime p in P' dividing u, when u = -1 (mod 8); else None."""
    _require_odd(u, "in_B")
    if u % 8 != 7:
        return None
    for p in factor(u).primes():
        if classify_prime(p) is PrimeClass.P1_PRIME:
            return p
    return None


def in_D(u: int) -> tuple[int, int] | None:
    """(k, l) with u = (8k - 3)(8l - 3) and k = l (mod 2), or None."""
    _require_odd(u, "in_D")
    if u % 16 != 9:
        return None
    for x, y in divisor_pairs(u):
        # 8k - 3 is 5 mod 16 for even k, 13 mod 16 for odd k
        if x % 8 == 5 and y % 8 == 5 and x % 16 == y % 16:
            return (x + 3) // 8, (y + 3) // 8
    return None


def in_C(u: int) -> tuple[int, int, int, int] | None:
    """(k, l, m, n) with u = (8k-3)(8l-3)(8m-3)(8n-3), the last three prime,
    and k + l != m + n (mod 2); or None."""
    _require_odd(u, "in_C")
    if u % 16 != 9:
        return None
    f = factor(u)
    pool = [p for p, e in f.factors if p % 8 == 5 for _ in range(min(e, 3))]
    for trio in sorted(set(combinations(pool, 3))):
        rest = u // (trio[0] * trio[1] * trio[2])
        if rest % 8 != 5:
            continue
        k = (rest + 3) // 8
        for i in range(3):
            l = (trio[i] + 3) // 8
            m, n = ((trio[j] + 3) // 8 for j in range(3) if j != i)
            if (k + l - m - n) % 2:
                return k, l, m, n
    return None


def _odd_prime_factors(u: int) -> tuple[int, ...]:
    return factor(u).primes()


def _p5_factor(u: int) -> int | None:
    return next((p for p in _odd_prime_factors(u) if p % 8 == 5), None)


def _p_prime_or_p5_factor(u: int) -> int | None:
    for p in _odd_prime_factors(u):
        if p % 8 == 5 or (p % 8 == 1 and classify_prime(p) is PrimeClass.P1_PRIME):
            return p
    return None


def _p3_square_factor(u: int) -> int | None:
    f = factor(u)
    return next((p for p, e in f.factors if p % 8 == 3 and e >= 2), None)


def _member(group, v, family, reason, **params) -> Classification:
    return Classification(v, True, family, params, reason, group)


def _reject(group, v, reason) -> Classification:
    return Classification(v, False, Family.NON_MEMBER, {}, reason, group)


def classify_c4c2c2(v: int) -> Classification:
    """Decide v in S(C4 x C2^2)."""
    g = GroupTag.C4xC2xC2
    v = int(v)
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^18 * 0", m=0)
    if v % 2:
        if v % 16 == 1:
            return _member(g, v, Family.ODD_16M1, "odd and = 1 mod 16", m=(v - 1) // 16)
        return _reject(g, v, f"odd values must be = 1 mod 16; {v} = {v % 16} mod 16")
    w, u = two_adic(v)
    if w < 16:
        return _reject(g, v, f"even values lie in 2^16 Z; 2-adic valuation is {w}")
    if w == 16:
        if u % 4 == 1:
            return _member(g, v, Family.E16_4M1, "2^16 * (4m + 1)", m=(u - 1) // 4)
        if u % 8 == 3:
            return _member(g, v, Family.E16_8M3, "2^16 * (8m + 3)", m=(u - 3) // 8)
        kl = in_A(u)
        if kl is not None:
            return _member(g, v, Family.E16_A, "2^16 * (8k - 3)(8l + 3)", k=kl[0], l=kl[1])
        p = in_B(u)
        if p is not None:
            return _member(
                g, v, Family.E16_B, f"2^16 * p(8m - 1) with p = {p} in P'",
                p=p, m=(u // p + 1) // 8,
            )
        return _reject(
            g, v, f"2^16 * {u}: odd part is 7 mod 8 but lies in neither A nor B"
        )
    if w == 17:
        p = _p5_factor(u)
        if p is not None:
            return _member(
                g, v, Family.E17_P5, f"2^17 * p(2m + 1) with p = {p} = 5 mod 8",
                p=p, m=(u // p - 1) // 2,
            )
        return _reject(g, v, f"2^17 * {u}: odd part has no prime factor = 5 mod 8")
    return _member(g, v, Family.E18_ANY, "2^18 * m", m=v >> 18)


def classify_c4(v: int) -> Classification:
    """S(C4) = odd integers together with 2^4 Z."""
    g = GroupTag.C4
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^4 * 0", m=0)
    if v % 2:
        return _member(g, v, Family.ODD, "odd", m=(v - 1) // 2)
    if v % 16 == 0:
        return _member(g, v, Family.E4_ANY, "2^4 * m", m=v // 16)
    return _reject(g, v, f"even values must be divisible by 2^4; 2-adic valuation is {two_adic(v)[0]}")


def _classify_c2_4(v: int) -> Classification:
    g = GroupTag.C2x2x2x2
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^26 * 0", m=0)
    if v % 2:
        if v % 16 == 1:
            return _member(g, v, Family.ODD_16M1, "odd and = 1 mod 16", m=(v - 1) // 16)
        return _reject(g, v, "odd values must be = 1 mod 16")
    w, u = two_adic(v)
    if w == 16 and u % 4 == 1:
        return _member(g, v, Family.E16_4M1, "2^16 * (4m + 1)", m=(u - 1) // 4)
    if w == 24:
        if u % 4 == 1:
            return _member(g, v, Family.E24_4M1, "2^24 * (4m + 1)", m=(u - 1) // 4)
        if u % 8 == 3:
            return _member(g, v, Family.E24_8M3, "2^24 * (8m + 3)", m=(u - 3) // 8)
        kl = in_A(u)
        if kl is not None:
            return _member(g, v, Family.E24_A, "2^24 * (8k - 3)(8l + 3)", k=kl[0], l=kl[1])
        return _reject(g, v, f"2^24 * {u}: odd part is 7 mod 8 but not in A")
    if w >= 26:
        return _member(g, v, Family.E26_ANY, "2^26 * m", m=v >> 26)
    return _reject(g, v, f"no term matches 2-adic valuation {w} with odd part {u}")


def _classify_c4_c4(v: int) -> Classification:
    g = GroupTag.C4xC4
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^16 * 0", m=0)
    if v % 2:
        if v % 16 == 1:
            return _member(g, v, Family.ODD_16M1, "odd and = 1 mod 16", m=(v - 1) // 16)
        c = in_C(v)
        if c is not None:
            k, l, m, n = c
            return _member(g, v, Family.ODD_C, "in C", k=k, l=l, m=m, n=n)
        return _reject(g, v, "odd values must be = 1 mod 16 or lie in C")
    w, u = two_adic(v)
    if w == 15:
        p = _p5_factor(u)
        if p is not None:
            return _member(g, v, Family.E15_P5, f"2^15 * p(2m + 1) with p = {p}", p=p, m=(u // p - 1) // 2)
        return _reject(g, v, f"2^15 * {u}: no prime factor = 5 mod 8")
    if w >= 16:
        return _member(g, v, Family.E16_ANY, "2^16 * m", m=v >> 16)
    return _reject(g, v, f"even values need 2-adic valuation >= 15, got {w}")


def _classify_c8_c2(v: int) -> Classification:
    g = GroupTag.C8xC2
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^12 * 0", m=0)
    if v % 2:
        if v % 16 == 1:
            return _member(g, v, Family.ODD_16M1, "odd and = 1 mod 16", m=(v - 1) // 16)
        kl = in_D(v)
        if kl is not None:
            return _member(g, v, Family.ODD_D, "in D", k=kl[0], l=kl[1])
        return _reject(g, v, "odd values must be = 1 mod 16 or lie in D")
    w, u = two_adic(v)
    if w == 10:
        return _member(g, v, Family.E10_ODD, "2^10 * (2m + 1)", m=(u - 1) // 2)
    if w == 11:
        p = _p_prime_or_p5_factor(u)
        if p is not None:
            return _member(g, v, Family.E11_P, f"2^11 * p(2m + 1) with p = {p}", p=p, m=(u // p - 1) // 2)
        q = _p3_square_factor(u)
        if q is not None:
            return _member(g, v, Family.E11_Q2, f"2^11 * q^2(2m + 1) with q = {q}", q=q, m=(u // (q * q) - 1) // 2)
        return _reject(g, v, f"2^11 * {u}: no factor from P' or P5 and no square of a P3 prime")
    if w >= 12:
        return _member(g, v, Family.E12_ANY, "2^12 * m", m=v >> 12)
    return _reject(g, v, f"even values need 2-adic valuation >= 10, got {w}")


def _classify_d16(v: int) -> Classification:
    g = GroupTag.D16
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^10 * 0", m=0)
    if v % 2:
        if v % 4 == 1:
            return _member(g, v, Family.ODD_4M1, "4m + 1", m=(v - 1) // 4)
        return _reject(g, v, "odd values must be = 1 mod 4")
    if v % (1 << 10) == 0:
        return _member(g, v, Family.E10_ANY, "2^10 * m", m=v >> 10)
    return _reject(g, v, f"even values must be divisible by 2^10")


def _classify_c16(v: int) -> Classification:
    g = GroupTag.C16
    if v == 0:
        return _member(g, v, Family.ZERO, "0 = 2^7 * 0", m=0)
    if v % 2:
        return _member(g, v, Family.ODD, "2m + 1", m=(v - 1) // 2)
    w, u = two_adic(v)
    if w == 6:
        p = _p_prime_or_p5_factor(u)
        if p is not None:
            return _member(g, v, Family.E6_P, f"2^6 * p(2m + 1) with p = {p}", p=p, m=(u // p - 1) // 2)
        q = _p3_square_factor(u)
        if q is not None:
            return _member(g, v, Family.E6_Q2, f"2^6 * q^2(2m + 1) with q = {q}", q=q, m=(u // (q * q) - 1) // 2)
        return _reject(g, v, f"2^6 * {u}: no factor from P' or P5 and no square of a P3 prime")
    if w >= 7:
        return _member(g, v, Family.E7_ANY, "2^7 * m", m=v >> 7)
    return _reject(g, v, f"even values need 2-adic valuation >= 6, got {w}")


_CLASSIFIERS = {
    GroupTag.C4: classify_c4,
    GroupTag.C2x2x2x2: _classify_c2_4,
    GroupTag.C4xC2xC2: classify_c4c2c2,
    GroupTag.C4xC4: _classify_c4_c4,
    GroupTag.C8xC2: _classify_c8_c2,
    GroupTag.D16: _classify_d16,
    GroupTag.C16: _classify_c16,
}


def classify_group(group: GroupTag | str, v: int) -> Classification:
    try:
        tag = GroupTag(group)
    except ValueError:
        raise UsageError(f"unknown group {group!r}") from None
    return _CLASSIFIERS[tag](int(v))
