"""Small exact-arithmetic helpers: Bernoulli numbers/polynomials, primes,
rational square-root intervals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with the B_1 = -1/2 convention, via the standard recurrence."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli_number(k)
    return -acc / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k)."""
    x = Fraction(x)
    acc = Fraction(0)
    for k in range(n, -1, -1):
        acc += math.comb(n, k) * bernoulli_number(n - k) * x**k
    return acc


def primes_upto(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(range(p * p, bound + 1, p))
    return [p for p in range(bound + 1) if sieve[p]]


def factorint(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in sympy.factorint(int(n)).items()}


def sqrt_interval(D: int, prec: int) -> tuple[Fraction, Fraction]:
    """Rational interval [lo, hi] containing sqrt(D), width <= 1/2^prec."""
    scale = 1 << prec
    s = math.isqrt(D * scale * scale)
    return Fraction(s, scale), Fraction(s + 1, scale)


def sign_of_u_plus_v_sqrtD(u: Fraction, v: Fraction, D: int) -> int:
    """Exact sign of u + v*sqrt(D) for rational u, v and non-square D > 0."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return 1 if v > 0 else -1
    if u > 0 and v > 0:
        return 1
    if u < 0 and v < 0:
        return -1
    # opposite signs: compare u^2 with D v^2
    lhs = u * u
    rhs = D * v * v
    if lhs == rhs:
        return 0  # impossible for non-square D unless u = v = 0
    if v > 0:
        return 1 if rhs > lhs else -1
    return -1 if rhs > lhs else 1
