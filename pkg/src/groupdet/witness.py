"""Explicit coefficient vectors realizing every value in S(C4 x C2^2).

Each builder returns a 16-tuple in index order j = r + 4s + 8t.  ``synthesize``
classifies a target, picks the matching builder, and checks the result
against the matrix oracle before handing it back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import d4x2x2_oracle
from .errors import DomainError, InternalError, NotMemberError
from .numtheory import PrimeClass, classify_prime, is_prime, two_adic, two_squares
from .sets import Classification, Family, classify_c4c2c2, in_A


def w_odd(m: int) -> tuple[int, ...]:
    """Determinant 16m + 1."""
    return (m + 1,) + (m,) * 15


def w_e16_4m1(m: int) -> tuple[int, ...]:
    """Determinant 2^16 (4m + 1)."""
    return (m + 1, m + 1, m + 2) + (m,) * 13


def w_e16_4m1_8n3(m: int, n: int) -> tuple[int, ...]:
    """Determinant 2^16 (4m + 1)(8n + 3)."""
    hi, lo = m + n, m - n
    return (
        (hi + 1,) * 4
        + (lo,) * 4
        + (hi + 1, hi, hi + 1, hi - 1, lo - 1, lo, lo, lo)
    )


def w_e18_odd(m: int) -> tuple[int, ...]:
    """Determinant 2^18 (2m + 1)."""
    return (
        m + 2, m, m + 2, m + 1, m, m, m, m,
        m + 1, m + 1, m, m + 1, m, m, m, m,
    )


def w_e18_even(m: int) -> tuple[int, ...]:
    """Determinant 2^18 (2m), i.e. 2^19 m."""
    return (
        m + 1, m, m + 1, m, m, m - 1, m, m,
        m, m + 1, m, m + 1, m, m - 1, m - 1, m - 1,
    )


def b_params(p: int) -> tuple[int, int]:
    """(k, l) with 2p = (8k - 3)^2 + (8l + 3)^2 for p in P'."""
    if classify_prime(p) is not PrimeClass.P1_PRIME:
        raise DomainError(f"{p} is not in P'")
    a, b = two_squares(p)
    r, s = a // 4, (b - 1) // 4
    if (r - s) % 2 == 0:
        raise InternalError(f"two_squares({p}) = {(a, b)} breaks r != s (mod 2)")
    k, l = (r + s + 1) // 2, (r - s - 1) // 2
    if (8 * k - 3) ** 2 + (8 * l + 3) ** 2 != 2 * p:
        raise InternalError(f"bad (k, l) = {(k, l)} for p = {p}")
    return k, l


def w_B(p: int, m: int) -> tuple[int, ...]:
    """Determinant 2^16 p (4m - 1) for p in P'."""
    k, l = b_params(p)
    return (
        k - m, l - m + 1, -k - m + 1, -l - m,
        k + m, l + m + 1, -k + m + 1, -l + m,
        k - m, l - m + 1, -k - m + 1, -l - m,
        k + m - 1, l + m, -k + m - 1, -l + m,
    )


def p5_params(p: int) -> tuple[int, int]:
    """(k, l) with 2p = (8k + 3)^2 + (8l + 1)^2 for a prime p = 5 (mod 8)."""
    if p % 8 != 5 or not is_prime(p) or p < 0:
        raise DomainError(f"{p} is not a prime = 5 mod 8")
    a, b = two_squares(p)
    # a = 2 (mod 4); negating a flips the parity of r = (a - 2) / 4
    s = (b - 1) // 4
    r = (a - 2) // 4
    if (r - s) % 2:
        r = (-a - 2) // 4
    k, l = (r + s) // 2, (r - s) // 2
    if (8 * k + 3) ** 2 + (8 * l + 1) ** 2 != 2 * p:
        raise InternalError(f"bad (k, l) = {(k, l)} for p = {p}")
    return k, l


def w_P5(p: int, m: int) -> tuple[int, ...]:
    """Determinant 2^17 p (2m + 1) for a prime p = 5 (mod 8)."""
    k, l = p5_params(p)
    head = (m + l + 1, m + k + 1, m - l + 1, m - k)
    return head * 3 + (m + l, m + k, m - l - 1, m - k)


@dataclass(frozen=True)
class Witness:
    target: int
    coeffs: tuple[int, ...]
    family: Family
    verified: bool

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "coeffs": list(self.coeffs),
            "family": self.family.value,
            "verified": self.verified,
        }


def _coeffs_for(c: Classification) -> tuple[int, ...]:
    v, fam, prm = c.value, c.family, c.params
    if fam is Family.ZERO:
        return w_e18_even(0)
    if fam is Family.ODD_16M1:
        return w_odd(prm["m"])
    if fam is Family.E18_ANY:
        q = prm["m"]
        return w_e18_odd((q - 1) // 2) if q % 2 else w_e18_even(q // 2)
    _, u = two_adic(v)
    if fam is Family.E16_4M1:
        return w_e16_4m1(prm["m"])
    if fam is Family.E16_8M3:
        return w_e16_4m1_8n3(0, prm["m"])
    if fam is Family.E16_A:
        k, l = prm["k"], prm["l"]
        # 8k - 3 = 4(2k - 1) + 1
        return w_e16_4m1_8n3(2 * k - 1, l)
    if fam is Family.E16_B:
        p = prm["p"]
        return w_B(p, (u // p + 1) // 4)
    if fam is Family.E17_P5:
        return w_P5(prm["p"], prm["m"])
    raise InternalError(f"no construction for family {fam}")


def synthesize(v: int) -> Witness:
    """A verified coefficient vector whose group determinant is v.

    Raises NotMemberError when v is not in S(C4 x C2^2).
    """
    c = classify_c4c2c2(v)
    if not c.member:
        raise NotMemberError(c)
    coeffs = _coeffs_for(c)
    got = d4x2x2_oracle(coeffs)
    if got != c.value:
        raise InternalError(f"witness for {v} evaluates to {got}")
    return Witness(c.value, coeffs, c.family, True)


def verify_witness(target: int, coeffs, family: Family) -> Witness:
    return Witness(target, tuple(coeffs), family, d4x2x2_oracle(coeffs) == target)


__all__ = [
    "Witness",
    "b_params",
    "in_A",
    "p5_params",
    "synthesize",
    "verify_witness",
    "w_B",
    "w_P5",
    "w_e16_4m1",
    "w_e16_4m1_8n3",
    "w_e18_even",
    "w_e18_odd",
    "w_odd",
]
