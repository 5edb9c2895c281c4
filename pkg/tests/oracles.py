"""Independent oracles used by the test suite.

Everything in this module is deliberately written against the package's
implementation strategy: Siegel's finite formula for zeta_F(-1), reduced
indefinite binary quadratic forms for class numbers, the eta-product
q-expansion for Ramanujan tau, and the classical slash transform for
level-raised Eisenstein constant terms over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy
import sympy

from eiscong.numutil import bernoulli_number


def siegel_zeta_minus1(disc: int) -> Fraction:
    """Siegel: zeta_F(-1) = (1/60) sum over t^2 < D, t^2 = D mod 4 of
    sigma_1((D - t^2)/4), for the discriminant D of a real quadratic field."""
    total = 0
    t = 0
    while t * t < disc:
        if (disc - t * t) % 4 == 0:
            s = int(sympy.divisor_sigma((disc - t * t) // 4, 1))
            total += s if t == 0 else 2 * s
        t += 1
    return Fraction(total, 60)


def classical_zeta_value(k: int) -> Fraction:
    """zeta(1-k) = -B_k / k."""
    return -bernoulli_number(k) / k


# --------------------------------------------------------------------------
# class numbers via reduced indefinite binary quadratic forms


def _reduced_forms(disc: int):
    """All reduced primitive indefinite forms (a, b, c) of the discriminant."""
    out = []
    s = isqrt(disc)
    for b in range(1, s + 1):
        if (disc - b * b) % 4 != 0:
            continue
        ac = (b * b - disc) // 4  # = a*c < 0
        for a in range(1, s + b + 1):
            for sign in (1, -1):
                aa = a * sign
                if ac % aa != 0:
                    continue
                c = ac // aa
                # reduced: sqrt(disc) - b < 2|a| < sqrt(disc) + b, exact:
                # (2|a| - b)^2 < disc  and  (2|a| + b)^2 > disc
                t = 2 * abs(aa)
                if (t - b) ** 2 < disc < (t + b) ** 2:
                    if gcd(gcd(abs(aa), b), abs(c)) == 1:
                        out.append((aa, b, c))
    return out


def _rho(form, disc):
    """Reduction/cycle step for indefinite forms."""
    a, b, c = form
    # choose b' = -b mod 2c minimizing per the standard recipe
    cc = c
    s = isqrt(disc)
    # b' congruent to -b mod 2|c|, with sqrt(disc) - 2|c| < b' < sqrt(disc)
    m = 2 * abs(cc)
    b2 = (-b) % m
    # lift b2 into the window (s - m, s]
    while b2 > s:
        b2 -= m
    while b2 <= s - m:
        b2 += m
    c2 = (b2 * b2 - disc) // (4 * cc)
    return (cc, b2, c2)


def form_class_numbers(D: int) -> tuple[int, int]:
    """(h, h_plus) for the real quadratic field Q(sqrt(D)), via form cycles.

    h_plus is the number of rho-cycles of reduced forms; h = h_plus unless
    the negative Pell equation x^2 - disc y^2 = -4 is insoluble, in which
    case h = h_plus / 2.  Solubility is tested by brute force over a range
    comfortably containing the fundamental solutions of the desk fields.
    """
    disc = D if D % 4 == 1 else 4 * D
    forms = set(_reduced_forms(disc))
    cycles = 0
    seen = set()
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while True:
            seen.add(g)
            g = _rho(g, disc)
            if g == f:
                break
    hp = cycles
    negative_pell = any(
        _is_square(disc * y * y - 4) for y in range(1, 4000)
    )
    h = hp if negative_pell else hp // 2
    return h, hp


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


# --------------------------------------------------------------------------
# Ramanujan tau via the eta product


def delta_tau_list(bound: int) -> list[int]:
    """tau(1..bound) from q prod (1-q^n)^24, exactly.

    Computed as ((eta-cube)^8) with the Jacobi sparse expansion, modulo a few
    word-sized primes and CRT-recombined; the tiny range is cross-checked
    against a direct pure-python expansion inside the test suite.
    """
    n_terms = bound  # coefficients of prod(1-q^n)^24 up to q^(bound-1)
    # jacobi: prod (1-q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^(j(j+1)/2)
    jac = []
    j = 0
    while j * (j + 1) // 2 < n_terms:
        jac.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    # primes below 2^31 keep c * acc within int64 during the sparse passes
    primes = [2147483647, 2147483629, 2147483587]
    residues = []
    for p in primes:
        acc = numpy.zeros(n_terms, dtype=numpy.int64)
        acc[0] = 1
        for _ in range(8):
            nxt = numpy.zeros(n_terms, dtype=numpy.int64)
            for (e, c) in jac:
                if e >= n_terms:
                    break
                nxt[e:] = (nxt[e:] + c * acc[: n_terms - e]) % p
            acc = nxt
        residues.append([int(x) % p for x in acc])
    out = []
    M = primes[0] * primes[1] * primes[2]
    inv = [
        pow(M // p, -1, p) for p in primes
    ]
    for i in range(n_terms):
        x = 0
        for r, p, iv in zip((residues[0][i], residues[1][i], residues[2][i]),
                            primes, inv):
            x += r * (M // p) * iv
        x %= M
        if x > M // 2:
            x -= M
        out.append(x)
    # tau(n) = coefficient of q^(n-1) in the eta-24 product
    return out


def delta_tau_small_direct(bound: int) -> list[int]:
    """Pure-python direct expansion of prod (1-q^n)^24 for small bounds."""
    coeffs = [0] * bound
    coeffs[0] = 1
    for n in range(1, bound):
        for _ in range(24):
            # multiply by (1 - q^n)
            for i in range(bound - 1, n - 1, -1):
                coeffs[i] -= coeffs[i - n]
    return coeffs


def sigma_k(k: int, n: int) -> int:
    return int(sympy.divisor_sigma(n, k))


# --------------------------------------------------------------------------
# classical slash-transform constant terms over Q


def classical_constant_term_base(k: int) -> Fraction:
    """Constant term of level-one E_k at every cusp (it is SL2(Z)-invariant)."""
    return classical_zeta_value(k) / 2


def classical_constant_term_raised(k: int, p: int, gamma: int) -> Fraction:
    """Constant term of (E_k(p z))|A at the cusp with lower-left entry gamma.

    For A in SL2(Z) with first column (alpha, gamma)^T the Smith reduction of
    diag(p,1) A gives the constant term (gcd(p, gamma)/p)^k * a0(E_k)."""
    g = gcd(p, gamma)
    return Fraction(g, p) ** k * classical_constant_term_base(k)
