"""Primality, factorization, two-squares decomposition and prime classes mod 8."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator

from .errors import UsageError

_SMALL_PRIME_LIMIT = 1 << 12


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(_SMALL_PRIME_LIMIT)

# Miller-Rabin with the first 13 prime bases is exact below this bound
# (Sorenson & Webster, 2015).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXACT_BELOW = 3_317_044_064_679_887_385_961_981


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameter choice (method A)."""
    if isqrt(n) ** 2 == n:
        return False
    D = 5
    while _jacobi(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # binary ladder for U_d, V_d
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = P * U + V, D * U + P * V
            U = (U + n if U % 2 else U) // 2 % n
            V = (V + n if V % 2 else V) // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """True iff |n| is prime.

    Exact (deterministic Miller-Rabin) below 3.3e24; beyond that the strong
    Lucas test is added (Baillie-PSW), which has no known counterexample.
    """
    n = abs(int(n))
    if n < 2:
        return False
    for p in SMALL_PRIMES[:60]:
        if n % p == 0:
            return n == p
    if n < SMALL_PRIMES[59] ** 2:
        return True
    if not all(_strong_probable_prime(n, a) for a in _MR_BASES):
        return False
    return n < _MR_EXACT_BELOW or _strong_lucas_probable_prime(n)


def _brent(n: int) -> int:
    """A nontrivial factor of the odd composite n (Pollard rho, Brent variant)."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


@lru_cache(maxsize=1 << 16)
def _factor_abs(n: int) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _brent(m)
        stack += [f, m // f]
    return tuple(sorted(counts.items()))


def factor(n: int) -> Factorization:
    n = int(n)
    if n == 0:
        return Factorization(0, ())
    return Factorization(1 if n > 0 else -1, _factor_abs(abs(n)))


def two_adic(n: int) -> tuple[int, int]:
    """Split nonzero n as 2^w * u with u odd; returns (w, u)."""
    if n == 0:
        raise UsageError("two_adic(0) is undefined")
    w = (n & -n).bit_length() - 1
    return w, n >> w


def _sqrt_minus_one(p: int) -> int:
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise UsageError(f"{p} has no square root of -1")


def two_squares(p: int) -> tuple[int, int]:
    """Canonical (a, b) with a*a + b*b = p, a even and >= 0, b = 1 (mod 4).

    Requires p prime with p = 1 (mod 4).  Uses the Hermite-Serret /
    Cornacchia descent on a square root of -1 mod p.
    """
    p = int(p)
    if p % 4 != 1 or not is_prime(p) or p < 0:
        raise UsageError(f"two_squares needs a prime p = 1 mod 4, got {p}")
    x, y = p, _sqrt_minus_one(p)
    limit = isqrt(p)
    while y > limit:
        x, y = y, x % y
    a, b = y, isqrt(p - y * y)
    if a % 2:
        a, b = b, a
    if b % 4 != 1:
        b = -b
    assert a * a + b * b == p
    return a, b


class PrimeClass(enum.Enum):
    TWO = "Two"
    P1_PRIME = "P1_prime"
    P1_PLAIN = "P1_plain"
    P3 = "P3"
    P5 = "P5"
    P7 = "P7"


def classify_prime(p: int) -> PrimeClass:
    """Residue class of the prime p mod 8, splitting p = 1 (mod 8) by P' membership.

    For p = 1 (mod 8) with p = a^2 + b^2, p is in P' iff a + b = +-3 (mod 8).
    The even square root is 0 mod 4 there, so the verdict does not depend on
    the signs or order of the representation.
    """
    p = int(p)
    if p < 2 or not is_prime(p):
        raise UsageError(f"{p} is not a positive prime")
    if p == 2:
        return PrimeClass.TWO
    r = p % 8
    if r == 1:
        a, b = two_squares(p)
        return PrimeClass.P1_PRIME if (a + b) % 8 in (3, 5) else PrimeClass.P1_PLAIN
    return {3: PrimeClass.P3, 5: PrimeClass.P5, 7: PrimeClass.P7}[r]


def divisors(n: int) -> list[int]:
    """Positive divisors of |n| in increasing order."""
    if n == 0:
        raise UsageError("0 has infinitely many divisors")
    divs = [1]
    for p, e in factor(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def divisor_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Every ordered (u, v) with u * v == n; positive u first, then negative."""
    n = int(n)
    if n == 0:
        raise UsageError("divisor_pairs(0) is infinite")
    divs = divisors(n)
    for u in divs:
        yield u, n // u
    for u in divs:
        yield -u, n // -u
