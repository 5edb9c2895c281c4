"""Finite field towers and polynomial factorization over them.

Fields are built as successive polynomial quotients starting from Z/l.
Elements are coefficient tuples over the base; only what the residue-map
machinery needs is implemented: ring ops, inversion, equality with zero,
and Cantor-Zassenhaus factorization of polynomials over a field.
"""

from __future__ import annotations

import random


class PrimeField:
    """Z/l for prime l."""

    def __init__(self, l: int):
        self.l = l
        self.zero = 0
        self.one = 1 % l

    def order(self) -> int:
        return self.l

    def make(self, n: int):
        return n % self.l

    def add(self, a, b):
        return (a + b) % self.l

    def sub(self, a, b):
        return (a - b) % self.l

    def mul(self, a, b):
        return (a * b) % self.l

    def neg(self, a):
        return (-a) % self.l

    def inv(self, a):
        if a % self.l == 0:
            raise ZeroDivisionError("inverse of 0 in prime field")
        return pow(a, -1, self.l)

    def is_zero(self, a):
        return a % self.l == 0

    def eq(self, a, b):
        return (a - b) % self.l == 0

    def elements_sample(self, rng, count):
        return [rng.randrange(self.l) for _ in range(count)]

    def describe(self) -> str:
        return f"GF({self.l})"


class QuotientField:
    """base[t]/(modulus) for an irreducible monic modulus over ``base``."""

    def __init__(self, base, modulus):
        self.base = base
        self.modulus = tuple(modulus)  # monic, constant term first
        self.deg = len(modulus) - 1
        self.zero = tuple([base.zero] * self.deg)
        one = [base.zero] * self.deg
        one[0] = base.one
        self.one = tuple(one)

    def order(self) -> int:
        return self.base.order() ** self.deg

    def gen(self):
        if self.deg == 1:
            # t is congruent to -modulus[0]
            return (self.base.neg(self.modulus[0]),)
        v = [self.base.zero] * self.deg
        v[1] = self.base.one
        return tuple(v)

    def from_base(self, a):
        v = [self.base.zero] * self.deg
        v[0] = a
        return tuple(v)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        prod = [base.zero] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        for e in range(len(prod) - 1, self.deg - 1, -1):
            top = prod[e]
            if base.is_zero(top):
                continue
            prod[e] = base.zero
            for i in range(self.deg):
                prod[e - self.deg + i] = base.sub(
                    prod[e - self.deg + i], base.mul(top, self.modulus[i]))
        return tuple(prod[: self.deg])

    def pow(self, a, n: int):
        out = self.one
        b = a
        while n:
            if n & 1:
                out = self.mul(out, b)
            b = self.mul(b, b)
            n >>= 1
        return out

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in quotient field")
        return self.pow(a, self.order() - 2)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def elements_sample(self, rng, count):
        return [tuple(self.base.elements_sample(rng, self.deg))
                for _ in range(count)]

    def describe(self) -> str:
        return f"{self.base.describe()}[t]/deg{self.deg}"


# --------------------------------------------------------------------------
# polynomials over a field: lists of field elements, constant term first


def poly_trim(K, p):
    while len(p) > 1 and K.is_zero(p[-1]):
        p = p[:-1]
    return list(p)


def poly_is_zero(K, p):
    return all(K.is_zero(c) for c in p)


def poly_monic(K, p):
    p = poly_trim(K, p)
    lead = p[-1]
    if K.eq(lead, K.one):
        return p
    inv = K.inv(lead)
    return [K.mul(c, inv) for c in p]


def poly_mul(K, a, b):
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if K.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not K.is_zero(y):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
    return out


def poly_divmod(K, a, b):
    b = poly_trim(K, b)
    if poly_is_zero(K, b):
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv_lead = K.inv(b[-1])
    q = [K.zero] * max(1, len(a) - db)
    r = poly_trim(K, a)
    while len(r) - 1 >= db and not poly_is_zero(K, r):
        c = K.mul(r[-1], inv_lead)
        pos = len(r) - 1 - db
        q[pos] = K.add(q[pos], c)
        for i in range(db + 1):
            r[pos + i] = K.sub(r[pos + i], K.mul(c, b[i]))
        r = poly_trim(K, r)
        if len(r) - 1 < db:
            break
    return poly_trim(K, q), poly_trim(K, r)


def poly_mod(K, a, m):
    return poly_divmod(K, a, m)[1]


def poly_gcd(K, a, b):
    a, b = poly_trim(K, a), poly_trim(K, b)
    while not poly_is_zero(K, b):
        a, b = b, poly_mod(K, a, b)
    if poly_is_zero(K, a):
        return [K.zero]
    return poly_monic(K, a)


def poly_powmod(K, a, n: int, m):
    out = [K.one]
    b = poly_mod(K, a, m)
    while n:
        if n & 1:
            out = poly_mod(K, poly_mul(K, out, b), m)
        b = poly_mod(K, poly_mul(K, b, b), m)
        n >>= 1
    return out


def _distinct_degree(K, f):
    """[(product of irreducible factors of degree d, d)] for squarefree monic f."""
    out = []
    q = K.order()
    x = [K.zero, K.one]
    h = x[:]
    cur = f[:]
    d = 0
    while len(cur) - 1 >= 2 * (d + 1):
        d += 1
        h = poly_powmod(K, h, q, cur)
        g = poly_gcd(K, poly_trim(K, _poly_sub(K, h, x)), cur)
        if len(g) > 1:
            out.append((g, d))
            cur, _ = poly_divmod(K, cur, g)
            h = poly_mod(K, h, cur)
    if len(cur) > 1:
        out.append((cur, len(cur) - 1))
    return out


def _poly_sub(K, a, b):
    n = max(len(a), len(b))
    a = list(a) + [K.zero] * (n - len(a))
    b = list(b) + [K.zero] * (n - len(b))
    return [K.sub(x, y) for x, y in zip(a, b)]


def _equal_degree_split(K, f, d, rng):
    """Split a monic squarefree f that is a product of degree-d irreducibles."""
    q = K.order()
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [K.make(c) if isinstance(K, PrimeField) else c
             for c in K.elements_sample(rng, n)]
        a = poly_trim(K, a)
        if len(a) - 1 < 1:
            continue
        g = poly_gcd(K, a, f)
        if len(g) > 1 and len(g) < len(f):
            left, right = g, poly_divmod(K, f, g)[0]
        else:
            if q % 2 == 1:
                b = poly_powmod(K, a, (q**d - 1) // 2, f)
                bm1 = _poly_sub(K, b, [K.one])
                g = poly_gcd(K, bm1, f)
                if len(g) <= 1 or len(g) >= len(f):
                    continue
                left, right = g, poly_divmod(K, f, g)[0]
            else:
                # trace map for characteristic 2
                b = a[:]
                acc = a[:]
                for _ in range(d * _ext_degree_over_f2(K) - 1):
                    b = poly_powmod(K, b, 2, f)
                    acc = poly_trim(K, _poly_add(K, acc, b))
                g = poly_gcd(K, acc, f)
                if len(g) <= 1 or len(g) >= len(f):
                    continue
                left, right = g, poly_divmod(K, f, g)[0]
        return (_equal_degree_split(K, poly_monic(K, left), d, rng)
                + _equal_degree_split(K, poly_monic(K, right), d, rng))


def _poly_add(K, a, b):
    n = max(len(a), len(b))
    a = list(a) + [K.zero] * (n - len(a))
    b = list(b) + [K.zero] * (n - len(b))
    return [K.add(x, y) for x, y in zip(a, b)]


def _ext_degree_over_f2(K):
    d = 1
    base = K
    while isinstance(base, QuotientField):
        d *= base.deg
        base = base.base
    return d


def _squarefree_part_factors(K, f):
    """Split monic f into (squarefree factor, multiplicity) pairs.

    Handles the separable case (sufficient here: cyclotomic and coefficient
    polynomials modulo unramified primes are squarefree).
    """
    deriv = [K.mul(K.make(i) if isinstance(K, PrimeField) else _scalar(K, i), c)
             for i, c in enumerate(f)][1:]
    deriv = poly_trim(K, deriv)
    g = poly_gcd(K, f, deriv)
    if len(g) == 1:
        return [(poly_monic(K, f), 1)]
    raise ValueError("polynomial is not squarefree modulo l")


def _scalar(K, i):
    out = K.zero
    for _ in range(i % _char(K)):
        out = K.add(out, K.one)
    return out


def _char(K):
    base = K
    while isinstance(base, QuotientField):
        base = base.base
    return base.l


def poly_factor(K, f, seed: int = 0):
    """Irreducible monic factors of a squarefree monic f over the field K."""
    f = poly_monic(K, poly_trim(K, f))
    if len(f) - 1 == 0:
        return []
    _squarefree_part_factors(K, f)
    rng = random.Random(seed or 0xE15C)
    out = []
    for block, d in _distinct_degree(K, f):
        out.extend(_equal_degree_split(K, poly_monic(K, block), d, rng))
    out.sort(key=lambda p: tuple(_flatten_key(K, c) for c in p))
    return out


def _flatten_key(K, c):
    if isinstance(K, PrimeField):
        return (c,)
    return tuple(x if not isinstance(x, tuple) else x for x in c)
