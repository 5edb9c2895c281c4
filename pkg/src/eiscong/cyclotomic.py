"""Exact arithmetic in cyclotomic fields Q(zeta_n), power basis mod Phi_n.

Conductors are normalized to 1 or n != 2 mod 4.  Elements of different
conductors compare and combine by lifting both into the lcm field; a
rational fast path keeps conductor-1 arithmetic at Fraction speed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import sympy

from . import hnf as hnflib


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    x = sympy.symbols("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1 if n > 1 else 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Representation of x^e in the power basis of Q(zeta_n), for e < n."""
    phi = euler_phi(n)
    mod = cyclotomic_coeffs(n)  # monic, length phi+1
    rows = []
    cur = [0] * phi
    cur[0] = 1
    rows.append(tuple(cur))
    for e in range(1, n):
        nxt = [0] + cur[:]  # multiply by x
        if len(nxt) > phi:
            top = nxt[phi]
            nxt = nxt[:phi]
            if top:
                for i in range(phi):
                    nxt[i] -= top * mod[i]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


def _normalize_conductor(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


class CyclotomicNumber:
    """An element of Q(zeta_n) with exact rational coordinates."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if len(self.coeffs) != euler_phi(n):
            raise ValueError(f"expected {euler_phi(n)} coefficients for conductor {n}")

    # -- constructors

    @staticmethod
    def rational(q) -> "CyclotomicNumber":
        return CyclotomicNumber(1, (Fraction(q),))

    @staticmethod
    def zero() -> "CyclotomicNumber":
        return CyclotomicNumber.rational(0)

    @staticmethod
    def one() -> "CyclotomicNumber":
        return CyclotomicNumber.rational(1)

    @staticmethod
    def root_of_unity(n: int, k: int = 1) -> "CyclotomicNumber":
        """e^(2 pi i k / n), stored at the normalized conductor of its order."""
        n = int(n)
        k = int(k) % n
        g = gcd(k, n)
        n //= g
        k //= g
        sign = 1
        while n % 4 == 2:
            # e^(2 pi i k / 2m) = -e^(2 pi i (k - m)/(2m)) for odd k; reduce
            m = n // 2
            if k % 2 == 0:
                k //= 2
                n = m
            else:
                sign = -sign
                k = (k - m) % n
                g = gcd(k, n) or n
                n, k = n // g, k // g
        if n == 1:
            return CyclotomicNumber.rational(sign)
        phi = euler_phi(n)
        if k < phi:
            coeffs = [0] * phi
            coeffs[k] = sign
            return CyclotomicNumber(n, coeffs)
        row = _power_table(n)[k]
        return CyclotomicNumber(n, [sign * c for c in row])

    # -- structure

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        if self.n == 1:
            return True
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.coeffs[0]

    def to_conductor(self, m: int) -> "CyclotomicNumber":
        """Lift into Q(zeta_m); requires n | m."""
        m = _normalize_conductor(m)
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError(f"conductor {self.n} does not divide {m}")
        step = m // self.n
        phi_m = euler_phi(m)
        out = [Fraction(0)] * phi_m
        table = _power_table(m)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(i * step) % m]
            for j, t in enumerate(row):
                if t:
                    out[j] += c * t
        return CyclotomicNumber(m, out)

    def try_descend(self, m: int):
        """Express self in Q(zeta_m) for m | n, or None if it does not lie there."""
        m = _normalize_conductor(m)
        if m == self.n:
            return self
        if self.n % m != 0:
            return None
        basis = [CyclotomicNumber.root_of_unity(m, 0)] if m == 1 else [
            _basis_power(m, i) for i in range(euler_phi(m))
        ]
        lifted = [b.to_conductor(self.n) for b in basis]
        A = [[lifted[j].coeffs[i] for j in range(len(lifted))]
             for i in range(euler_phi(self.n))]
        sol = hnflib.solve_fraction(A, list(self.coeffs))
        if sol is None:
            return None
        return CyclotomicNumber(m, sol)

    def minimal(self) -> "CyclotomicNumber":
        """Canonical copy at the smallest cyclotomic conductor containing it."""
        cur = self
        changed = True
        while changed and cur.n > 1:
            changed = False
            for p in sorted(set(_prime_factors(cur.n))):
                m = _normalize_conductor(cur.n // p)
                if m == cur.n:
                    continue
                down = cur.try_descend(m)
                if down is not None:
                    cur = down
                    changed = True
                    break
        return cur

    # -- arithmetic

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return None, None
        if self.n == other.n:
            return self, other
        m = _normalize_conductor(lcm(self.n, other.n))
        return self.to_conductor(m), other.to_conductor(m)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.n, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return CyclotomicNumber(self.n, tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.n, tuple(c * other for c in self.coeffs))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if a.n == 1:
            return CyclotomicNumber(1, (a.coeffs[0] * b.coeffs[0],))
        phi = euler_phi(a.n)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
        mod = cyclotomic_coeffs(a.n)
        for e in range(2 * phi - 2, phi - 1, -1):
            top = prod[e]
            if top:
                prod[e] = Fraction(0)
                for i in range(phi):
                    prod[e - phi + i] -= top * mod[i]
        return CyclotomicNumber(a.n, prod[:phi])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return CyclotomicNumber(self.n, tuple(c / other for c in self.coeffs))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.rational(other) / self

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic inverse of zero")
        if self.n == 1:
            return CyclotomicNumber(1, (1 / self.coeffs[0],))
        # extended euclid: u * self + v * Phi_n = 1 in Q[x]
        mod = [Fraction(c) for c in cyclotomic_coeffs(self.n)]
        r0, r1 = mod, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            r1 = _poly_trim(r1)
            if len(r1) == 1 and r1[0] != 0:
                inv = [s / r1[0] for s in s1]
                break
            if not any(r1):
                raise ZeroDivisionError("zero divisor in cyclotomic field?")
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        phi = euler_phi(self.n)
        out = [Fraction(0)] * phi
        table = _power_table(self.n)
        for e, c in enumerate(inv):
            if c == 0:
                continue
            if e < phi:
                out[e] += c
            else:
                for j, t in enumerate(table[e]):
                    out[j] += c * t
        return CyclotomicNumber(self.n, out)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.one()
        b = self
        while k:
            if k & 1:
                out = out * b
            b = b * b
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        m = self.minimal()
        return hash((m.n, m.coeffs))

    # -- galois

    def galois(self, a: int) -> "CyclotomicNumber":
        """Image under zeta_n -> zeta_n^a, for a coprime to n."""
        if self.n == 1:
            return self
        if gcd(a, self.n) != 1:
            raise ValueError("galois exponent not coprime to conductor")
        phi = euler_phi(self.n)
        out = [Fraction(0)] * phi
        table = _power_table(self.n)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(i * a) % self.n]
            for j, t in enumerate(row):
                if t:
                    out[j] += c * t
        return CyclotomicNumber(self.n, out)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(self.n - 1) if self.n > 1 else self

    def norm(self) -> Fraction:
        """Absolute norm down to Q (product over Gal(Q(zeta_n)/Q))."""
        if self.n == 1:
            return self.coeffs[0]
        out = CyclotomicNumber.one()
        for a in range(1, self.n):
            if gcd(a, self.n) == 1:
                out = out * self.galois(a)
        return out.rational_value()

    def denominator_lcm(self) -> int:
        out = 1
        for c in self.coeffs:
            out = lcm(out, c.denominator)
        return out

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        return f"Cyc(n={self.n}, {[str(c) for c in self.coeffs]})"


@lru_cache(maxsize=None)
def _basis_power(m: int, i: int) -> CyclotomicNumber:
    coeffs = [0] * euler_phi(m)
    coeffs[i] = 1
    return CyclotomicNumber(m, coeffs)


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_trim(p):
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return list(p)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    a = [Fraction(x) for x in a]
    b = _poly_trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(_poly_trim(r)) - 1 >= db and any(r):
        r = _poly_trim(r)
        dr = len(r) - 1
        if dr < db:
            break
        c = r[-1] / lead
        q[dr - db] += c
        for i in range(db + 1):
            r[dr - db + i] -= c * b[i]
    return _poly_trim(q), _poly_trim(r)
