"""Ring-of-integers arithmetic for totally real fields of degree 1 and 2.

A field is described by an integral basis with multiplication table.  Elements
carry exact rational coordinates; ideals are Hermite-normal-form lattices with
a single positive integer denominator.  Degree 2 fields use the canonical
basis {1, w} with w = sqrt(D) for D = 2,3 mod 4 and w = (1+sqrt(D))/2 for
D = 1 mod 4.  Higher degrees are accepted with an explicit multiplication
table, but unit-dependent operations (class groups, sign searches) refuse to
run without unit data.
"""

from __future__ import annotations

import itertools
import warnings
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy.ntheory.residue_ntheory import sqrt_mod

from . import hnf as hnflib
from .numutil import factorint, primes_upto, sign_of_u_plus_v_sqrtD, sqrt_interval


class FieldError(ValueError):
    """Structural misuse: mixed parents, bad input shapes, domain violations."""


class CapabilityError(NotImplementedError):
    """Operation requires data (units, embeddings) this degree does not carry."""


class ResourceError(RuntimeError):
    """A configured search ceiling was exceeded."""


# --------------------------------------------------------------------------
# field orders


class FieldOrder:
    """The ring of integers of a totally real field, over a fixed basis."""

    def __init__(self, degree, mult_table, disc, label, quad_D=None):
        self.degree = degree
        self.mult_table = mult_table  # d x d tuple of coordinate tuples (ints)
        self.disc = disc
        self.label = label
        self.quad_D = quad_D  # squarefree D for real quadratic fields
        self._class_data: dict = {}
        if degree > 2:
            warnings.warn(
                "degree > 2 field: only element/ideal arithmetic is supported "
                "without externally supplied unit data",
                stacklevel=3,
            )

    # -- constructors

    @staticmethod
    @lru_cache(maxsize=None)
    def rational() -> "FieldOrder":
        return FieldOrder(1, (((1,),),), 1, "rational")

    @staticmethod
    @lru_cache(maxsize=None)
    def real_quadratic(D: int) -> "FieldOrder":
        if D <= 1:
            raise FieldError("D must be a squarefree integer > 1")
        if any(e > 1 for e in factorint(D).values()):
            raise FieldError(f"D = {D} is not squarefree")
        if D % 4 == 1:
            # w = (1+sqrt D)/2, w^2 = (D-1)/4 + w
            c = (D - 1) // 4
            table = (((1, 0), (0, 1)), ((0, 1), (c, 1)))
            disc = D
        else:
            # w = sqrt D, w^2 = D
            table = (((1, 0), (0, 1)), ((0, 1), (D, 0)))
            disc = 4 * D
        return FieldOrder(2, table, disc, f"rq{D}", quad_D=D)

    @staticmethod
    def from_description(desc: dict) -> "FieldOrder":
        kind = desc.get("kind")
        if kind == "rational":
            return FieldOrder.rational()
        if kind == "real_quadratic":
            return FieldOrder.real_quadratic(int(desc["D"]))
        if "mult_table" in desc:
            d = int(desc["degree"])
            table = tuple(
                tuple(tuple(int(x) for x in vec) for vec in row)
                for row in desc["mult_table"]
            )
            return FieldOrder(d, table, int(desc.get("disc", 0)),
                              desc.get("label", f"deg{d}"))
        raise FieldError(f"unrecognized field description: {desc!r}")

    @staticmethod
    def by_id(fid: str) -> "FieldOrder":
        if fid in ("rational", "q", "Q"):
            return FieldOrder.rational()
        if fid.startswith("rq"):
            return FieldOrder.real_quadratic(int(fid[2:]))
        raise FieldError(f"unknown field id {fid!r}")

    # -- element construction

    def __call__(self, *coords) -> "FieldElement":
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        if len(coords) == 1 and self.degree > 1:
            coords = coords + (0,) * (self.degree - 1)
        if len(coords) != self.degree:
            raise FieldError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    @property
    def zero(self) -> "FieldElement":
        return self(*([0] * self.degree))

    @property
    def one(self) -> "FieldElement":
        return self(*([1] + [0] * (self.degree - 1)))

    def gen(self) -> "FieldElement":
        """Standard generator: 1 over the rationals, w for quadratic fields."""
        if self.degree == 1:
            return self.one
        return self(0, 1)

    def __repr__(self):
        return f"FieldOrder({self.label})"

    def __eq__(self, other):
        return isinstance(other, FieldOrder) and self.label == other.label

    def __hash__(self):
        return hash(("FieldOrder", self.label))

    # -- embeddings (degree <= 2)

    def embedding_values(self, x: "FieldElement"):
        """Each real embedding of x as a triple (u, v, D) meaning u + v*sqrt(D)."""
        if self.degree == 1:
            return [(x.coords[0], Fraction(0), 2)]
        if self.quad_D is None:
            raise CapabilityError("embeddings unavailable without quadratic structure")
        a, b = x.coords
        D = self.quad_D
        if D % 4 == 1:
            return [(a + b / 2, b / 2, D), (a + b / 2, -b / 2, D)]
        return [(a, b, D), (a, -b, D)]

    def embedding_interval(self, x, i, prec):
        """Rational interval around sigma_i(x); width shrinks as prec grows."""
        u, v, D = self.embedding_values(x)[i]
        lo, hi = sqrt_interval(D, prec)
        if v >= 0:
            return u + v * lo, u + v * hi
        return u + v * hi, u + v * lo

    def signs(self, x: "FieldElement") -> tuple[int, ...]:
        """Exact sign vector of nonzero x under the real embeddings."""
        if x.is_zero():
            raise FieldError("sign vector of zero is undefined")
        out = []
        for (u, v, D) in self.embedding_values(x):
            s = sign_of_u_plus_v_sqrtD(u, v, D)
            if s == 0:
                raise FieldError("embedding value vanishes for nonzero element")
            out.append(s)
        return tuple(out)

    def signs_by_refinement(self, x, max_prec: int = 512) -> tuple[int, ...]:
        """Sign vector decided by interval refinement alone (cross-check path)."""
        if x.is_zero():
            raise FieldError("sign vector of zero is undefined")
        out = []
        for i in range(self.degree):
            prec = 4
            while prec <= max_prec:
                lo, hi = self.embedding_interval(x, i, prec)
                if lo > 0:
                    out.append(1)
                    break
                if hi < 0:
                    out.append(-1)
                    break
                prec *= 2
            else:
                raise ResourceError("interval refinement did not separate from zero")
        return tuple(out)

    def is_totally_positive(self, x) -> bool:
        return all(s > 0 for s in self.signs(x))

    # -- distinguished ideals and units

    @property
    def different(self) -> "IdealHNF":
        if self.degree == 1:
            return self.ideal_one()
        # monogenic basis: different = (f'(w)) = (2w - tr(w))
        w = self.gen()
        return IdealHNF.from_generators(self, [w * 2 - self(w.trace())])

    def ideal_one(self) -> "IdealHNF":
        d = self.degree
        return IdealHNF(self, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), 1)

    def ideal_zero(self) -> "IdealHNF":
        return IdealHNF(self, (), 1)

    def principal(self, x) -> "IdealHNF":
        if not isinstance(x, FieldElement):
            x = self(x)
        if x.is_zero():
            return self.ideal_zero()
        return IdealHNF.from_generators(self, [x])

    @property
    def fundamental_unit(self) -> "FieldElement":
        """Fundamental unit > 1 of a real quadratic order (either norm)."""
        if self.degree == 1:
            raise CapabilityError("no fundamental unit over the rationals")
        if self.quad_D is None:
            raise CapabilityError("units unavailable without quadratic structure")
        return _fundamental_unit(self)

    @property
    def totally_positive_unit(self) -> "FieldElement":
        """Totally positive fundamental unit: e0 if N(e0) = 1, else e0^2."""
        e0 = self.fundamental_unit
        return e0 if e0.norm() == 1 else e0 * e0

    def unit_sign_classes(self) -> list["FieldElement"]:
        """Unit representatives realizing every achievable sign pattern."""
        if self.degree == 1:
            return [self.one, -self.one]
        e0 = self.fundamental_unit
        return [self.one, -self.one, e0, -e0]

    # -- cached class data

    def class_data(self, coprime_to: "IdealHNF | None" = None,
                   minkowski_ceiling: int = 4000) -> "ClassData":
        mod = coprime_to if coprime_to is not None else self.ideal_one()
        key = mod.key()
        if key not in self._class_data:
            self._class_data[key] = class_groups(self, mod, minkowski_ceiling)
        return self._class_data[key]


@lru_cache(maxsize=None)
def _fundamental_unit(F: FieldOrder) -> "FieldElement":
    D = F.quad_D
    # Smallest (x + y sqrt D)/2 > 1 with x^2 - D y^2 = +-4; for D != 1 mod 4
    # only even (x, y) give ring elements.  Enumerate y upward; for a fixed y
    # the -4 solution has the smaller x, hence the smaller unit.
    for y in range(1, 2_000_000):
        for sgn in (-1, 1):
            t = D * y * y + 4 * sgn
            if t < 0:
                continue
            x = isqrt(t)
            if x * x != t:
                continue
            if D % 4 == 1:
                if (x - y) % 2 != 0:
                    continue
                return F(Fraction(x - y, 2), y)  # (x - y)/2 + y*w
            if x % 2 or y % 2:
                continue
            return F(x // 2, y // 2)
    raise ResourceError(f"fundamental unit search exceeded ceiling for D={D}")


# --------------------------------------------------------------------------
# elements


class FieldElement:
    """Element of the fraction field of a FieldOrder, in basis coordinates."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent: FieldOrder, coords: tuple[Fraction, ...]):
        self.parent = parent
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if self.parent != other.parent:
                raise FieldError("elements of different field orders")
            return other
        if isinstance(other, (int, Fraction)):
            return self.parent(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.parent, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.parent, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return FieldElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.parent, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.parent.degree
        table = self.parent.mult_table
        out = [Fraction(0)] * d
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                if b == 0:
                    continue
                ab = a * b
                for k, t in enumerate(table[i][j]):
                    if t:
                        out[k] += ab * t
        return FieldElement(self.parent, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.parent, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        d = self.parent.degree
        M = self.mult_matrix()
        b = [Fraction(int(i == 0)) for i in range(d)]
        sol = hnflib.solve_fraction(M, b)
        if sol is None:
            raise ZeroDivisionError("element is a zero divisor")
        return FieldElement(self.parent, tuple(sol))

    def mult_matrix(self):
        """Matrix of multiplication by self; column j is self * e_j."""
        d = self.parent.degree
        cols = []
        for j in range(d):
            ej = tuple(Fraction(int(i == j)) for i in range(d))
            cols.append((self * FieldElement(self.parent, ej)).coords)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def trace(self) -> Fraction:
        M = self.mult_matrix()
        return sum(M[i][i] for i in range(self.parent.degree))

    def norm(self) -> Fraction:
        d = self.parent.degree
        M = self.mult_matrix()
        if d == 1:
            return M[0][0]
        if d == 2:
            return M[0][0] * M[1][1] - M[0][1] * M[1][0]
        return _det_fraction(M)

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial coefficients, highest degree first."""
        d = self.parent.degree
        if d == 1:
            return [Fraction(1), -self.coords[0]]
        if d == 2:
            return [Fraction(1), -self.trace(), self.norm()]
        # Faddeev-LeVerrier
        M = self.mult_matrix()
        cs = [Fraction(1)]
        Ak = [row[:] for row in M]
        for k in range(1, d + 1):
            if k > 1:
                Ak = _matmul(M, Ak)
            ck = -Fraction(sum(Ak[i][i] for i in range(d)), k)
            cs.append(ck)
            for i in range(d):
                Ak[i][i] += ck
        return cs

    def conjugate(self) -> "FieldElement":
        """The nontrivial Galois conjugate (degree 2 only)."""
        if self.parent.degree == 1:
            return self
        if self.parent.degree != 2:
            raise CapabilityError("conjugate implemented for degree <= 2")
        a, b = self.coords
        t = self.parent.gen().trace()
        return FieldElement(self.parent, (a + b * t, -b))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def denominator(self) -> int:
        out = 1
        for c in self.coords:
            out = out * c.denominator // gcd(out, c.denominator)
        return out

    def signs(self) -> tuple[int, ...]:
        return self.parent.signs(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.parent(other)
        return (isinstance(other, FieldElement) and self.parent == other.parent
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.parent.label, self.coords))

    def __repr__(self):
        if self.parent.degree == 1:
            return str(self.coords[0])
        names = ["", "w"] + [f"b{i}" for i in range(2, self.parent.degree)]
        parts = []
        for c, n in zip(self.coords, names):
            if c == 0:
                continue
            parts.append(f"{c}" if not n else f"{c}*{n}")
        return " + ".join(parts) if parts else "0"


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _det_fraction(M):
    A = [row[:] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def element_arith(x: FieldElement, y, op: str):
    """Spec-level dispatcher over element operations."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "norm":
        return x.norm()
    if op == "trace":
        return x.trace()
    if op == "charpoly":
        return x.charpoly()
    raise FieldError(f"unknown element op {op!r}")


def conjugate_signs(x: FieldElement) -> tuple[int, ...]:
    return x.signs()


# --------------------------------------------------------------------------
# ideals


class IdealHNF:
    """Fractional ideal: integer HNF row basis over Z divided by ``den``."""

    __slots__ = ("field", "rows", "den")

    def __init__(self, fieldorder: FieldOrder, rows, den: int = 1):
        self.field = fieldorder
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        den = int(den)
        if den <= 0:
            raise FieldError("denominator must be positive")
        if rows:
            content = 0
            for r in rows:
                for x in r:
                    content = gcd(content, x)
            g = gcd(content, den)
            if g > 1:
                rows = tuple(tuple(x // g for x in r) for r in rows)
                den //= g
        else:
            den = 1
        self.rows = rows
        self.den = den

    # -- constructors

    @staticmethod
    def from_generators(F: FieldOrder, gens, den: int = 1) -> "IdealHNF":
        """O-module generated by the given elements, all divided by den."""
        d = F.degree
        elems = []
        for g in gens:
            if isinstance(g, (int, Fraction)):
                g = F(g)
            if not g.is_zero():
                elems.append(g)
        if not elems:
            return F.ideal_zero()
        inner = 1
        for g in elems:
            q = g.denominator()
            inner = inner * q // gcd(inner, q)
        basis = [F(*[int(i == j) for i in range(d)]) for j in range(d)]
        rows = []
        for g in elems:
            for b in basis:
                prod = g * b
                rows.append([int(c * inner) for c in prod.coords])
        H = hnflib.hnf(rows, d)
        if len(H) < d:
            raise FieldError("generators do not span a full-rank lattice")
        return IdealHNF(F, H, den * inner)

    # -- structure

    def is_zero(self) -> bool:
        return not self.rows

    def is_integral(self) -> bool:
        if self.is_zero():
            return True
        return self.den == 1 or all(x % self.den == 0 for r in self.rows for x in r)

    def integral_rows(self):
        if not self.is_integral():
            raise FieldError("ideal is not integral")
        if self.den == 1:
            return [list(r) for r in self.rows]
        return [[x // self.den for x in r] for r in self.rows]

    def basis_elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, tuple(Fraction(x, self.den) for x in r))
                for r in self.rows]

    def norm(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(hnflib.det_upper(self.rows), self.den ** self.field.degree)

    def key(self):
        return (self.field.label, self.rows, self.den)

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_zero():
            return "Ideal(0)"
        s = f"Ideal{list(map(list, self.rows))}"
        if self.den != 1:
            s += f"/{self.den}"
        return s

    def contains_element(self, x: FieldElement) -> bool:
        if self.is_zero():
            return x.is_zero()
        v = [c * self.den for c in x.coords]
        if any(c.denominator != 1 for c in v):
            return False
        return hnflib.in_row_span([int(c) for c in v], list(self.rows))

    # -- arithmetic

    def _check(self, other):
        if self.field != other.field:
            raise FieldError("ideals over different field orders")

    def __mul__(self, other) -> "IdealHNF":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                return self.field.ideal_zero()
            return IdealHNF(self.field,
                            tuple(tuple(x * abs(f.numerator) for x in r) for r in self.rows),
                            self.den * f.denominator)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return self.field.ideal_zero()
        d = self.field.degree
        rows = []
        for a in self.basis_elements():
            for b in other.basis_elements():
                p = a * b
                rows.append(p)
        inner = 1
        for p in rows:
            q = p.denominator()
            inner = inner * q // gcd(inner, q)
        mat = [[int(c * inner) for c in p.coords] for p in rows]
        H = hnflib.hnf(mat, d)
        return IdealHNF(self.field, H, inner)

    __rmul__ = __mul__

    def __add__(self, other) -> "IdealHNF":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = self.den * other.den // gcd(self.den, other.den)
        rows = [[x * (den // self.den) for x in r] for r in self.rows]
        rows += [[x * (den // other.den) for x in r] for r in other.rows]
        return IdealHNF(self.field, hnflib.hnf(rows, self.field.degree), den)

    def gcd(self, other) -> "IdealHNF":
        return self + other

    def inverse(self) -> "IdealHNF":
        """Inverse fractional ideal {x in F : x * self <= O}."""
        if self.is_zero():
            raise FieldError("the zero ideal is not invertible")
        F = self.field
        d = F.degree
        num = IdealHNF(F, self.rows, 1)  # numerator lattice as integral ideal
        N = int(num.norm())
        conds = []
        for g in num.basis_elements():
            M = g.mult_matrix()
            for i in range(d):
                conds.append([int(M[i][j]) for j in range(d)])
        lat = _congruence_kernel_lattice(conds, N, d)
        out = IdealHNF(F, hnflib.hnf(lat, d), N)
        return out * self.den

    def __pow__(self, n: int) -> "IdealHNF":
        if n == 0:
            return self.field.ideal_one()
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.ideal_one()
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def quotient(self, other) -> "IdealHNF":
        return self * other.inverse()

    def intersect(self, other) -> "IdealHNF":
        # lcm: a*b / gcd(a,b) in a Dedekind domain
        return (self * other).quotient(self + other)

    def divides(self, other) -> bool:
        """self | other, i.e. other is contained in self (fractionals allowed)."""
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        den = self.den * other.den // gcd(self.den, other.den)
        mine = hnflib.hnf([[x * (den // self.den) for x in r] for r in self.rows],
                          self.field.degree)
        return all(
            hnflib.in_row_span([x * (den // other.den) for x in r], mine)
            for r in other.rows
        )

    contains = divides

    def is_coprime(self, other) -> bool:
        return (self + other) == self.field.ideal_one()

    def valuation(self, prime: "IdealHNF") -> int:
        if self.is_zero():
            raise FieldError("valuation of the zero ideal")
        if self.den == 1:
            v = 0
            cur = self
            while prime.divides(cur):
                cur = cur.quotient(prime)
                v += 1
            return v
        num = IdealHNF(self.field, self.rows, 1)
        den_ideal = self.field.principal(self.den)
        return num.valuation(prime) - den_ideal.valuation(prime)

    # -- residue structures

    def residues(self) -> list[FieldElement]:
        """Coset representatives of O modulo this integral ideal."""
        rows = self.integral_rows()
        diag = [rows[i][i] for i in range(self.field.degree)]
        return [self.field(*combo)
                for combo in itertools.product(*[range(m) for m in diag])]

    def reduce_element(self, x: FieldElement) -> FieldElement:
        """Canonical representative of integral x modulo this integral ideal."""
        if not x.is_integral():
            raise FieldError("can only reduce integral elements")
        rows = self.integral_rows()
        red = hnflib.reduce_mod_rows([int(c) for c in x.coords], rows)
        return self.field(*red)

    def smallest_positive_integer(self) -> int:
        """Generator of (self intersect Z) for integral self."""
        rows = self.integral_rows()
        det = hnflib.det_upper(rows)
        best = det
        for q in sorted(_divisors_of(det)):
            v = [q] + [0] * (self.field.degree - 1)
            if hnflib.in_row_span(v, rows):
                return q
        return best


def _divisors_of(n: int) -> list[int]:
    fac = factorint(n)
    out = [1]
    for p, e in fac.items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return out


def _congruence_kernel_lattice(conds, N, d):
    """Lattice {v in Z^d : C v = 0 mod N} for stacked condition rows C."""
    m = len(conds)
    rows = []
    for j in range(d):
        rows.append([conds[i][j] for i in range(m)])  # column j of C
    for k in range(m):
        row = [0] * m
        row[k] = N
        rows.append(row)
    ker = hnflib.kernel_basis(rows, m)
    lat = [u[:d] for u in ker if any(u[:d])]
    for i in range(d):  # N Z^d is always inside; guarantees full rank
        row = [0] * d
        row[i] = N
        lat.append(row)
    return lat


# --------------------------------------------------------------------------
# ideal arithmetic dispatcher and factorization


def ideal_arith(a: IdealHNF, b: IdealHNF, op: str):
    if op == "mul":
        return a * b
    if op == "intersect":
        return a.intersect(b)
    if op == "quotient":
        return a.quotient(b)
    if op == "gcd":
        return a + b
    if op == "is_coprime":
        return a.is_coprime(b)
    if op == "contains":
        return a.contains(b)
    raise FieldError(f"unknown ideal op {op!r}")


def primes_above(F: FieldOrder, p: int) -> list[IdealHNF]:
    """Prime ideals above the rational prime p, deterministically ordered.

    Splitting is read off the minimal polynomial of the standard generator
    modulo p; the basis is a full integral basis so no index obstruction.
    """
    if F.degree == 1:
        return [F.principal(p)]
    if F.quad_D is None:
        raise CapabilityError("factorization needs the quadratic structure")
    w = F.gen()
    t, n = int(w.trace()), int(w.norm())
    # x^2 - t x + n mod p
    disc = (t * t - 4 * n) % p
    if p == 2:
        roots = sorted(r for r in range(2) if (r * r - t * r + n) % 2 == 0)
    else:
        if disc % p == 0:
            roots = [(t * pow(2, -1, p)) % p]
        else:
            s = sqrt_mod(disc, p, all_roots=True)
            if not s:
                roots = []
            else:
                inv2 = pow(2, -1, p)
                roots = sorted({(t + r) * inv2 % p for r in s})
    if not roots:
        return [F.principal(p)]  # inert
    out = [IdealHNF.from_generators(F, [F(p), w - F(r)]) for r in roots]
    if len(out) == 2 and out[0].norm() == out[1].norm():
        out.sort(key=lambda I: I.rows)
    return out


def residue_degree(prime: IdealHNF) -> int:
    nm = int(prime.norm())
    p = min(factorint(nm))
    e = 0
    while nm > 1:
        nm //= p
        e += 1
    return e


def factor_ideal(a: IdealHNF) -> list[tuple[IdealHNF, int]]:
    """Prime factorization of a nonzero integral ideal, ordered by (p, index)."""
    if a.is_zero():
        raise FieldError("cannot factor the zero ideal")
    if not a.is_integral():
        raise FieldError("factor_ideal expects an integral ideal")
    F = a.field
    out = []
    for p in sorted(factorint(int(a.norm()))):
        for P in primes_above(F, p):
            e = a.valuation(P)
            if e != 0:
                out.append((P, e))
    return out


def enumerate_integral_ideals(F: FieldOrder, bound: int) -> list[IdealHNF]:
    """All nonzero integral ideals of norm <= bound."""
    prs = []
    for p in primes_upto(bound):
        for P in primes_above(F, p):
            if P.norm() <= bound:
                prs.append(P)
    out = [F.ideal_one()]
    for P in prs:
        nP = int(P.norm())
        extended = list(out)
        for I in out:
            cur = I
            n = int(cur.norm()) * nP
            while n <= bound:
                cur = cur * P
                extended.append(cur)
                n *= nP
        out = extended
    return sorted(out, key=lambda I: (I.norm(), I.rows))


# --------------------------------------------------------------------------
# principality, class groups


def _generator_search_bound(F: FieldOrder, I: IdealHNF) -> int:
    """Integer bound B with: if I = (g), some unit multiple of g has all
    |embeddings| <= B.  Uses |N(g)| = N(I) and the fundamental unit."""
    N = int(I.norm())
    if F.degree == 1:
        return N
    e0 = F.fundamental_unit
    hi = max(abs(F.embedding_interval(e0, i, 8)[1]) for i in range(2))
    # any generator can be unit-adjusted so both |sigma_i| <= sqrt(N)*e0
    b = isqrt(N) + 1
    return int(b * (hi + 1)) + 1


def principal_generator(I: IdealHNF):
    """A generator of I if principal, else None.  Sign pattern unconstrained.

    Searches lattice points of I inside the embedding box |sigma_i| <= B; if
    I is principal, some unit multiple of a generator lands in the box.
    """
    if I.is_zero():
        return I.field.zero
    F = I.field
    if I.den != 1:
        g = principal_generator(IdealHNF(F, I.rows, 1))
        return None if g is None else g / I.den
    if F.degree == 1:
        return F(int(I.rows[0][0]))
    if F.degree > 2:
        raise CapabilityError("principality testing implemented for degree <= 2")
    B = _generator_search_bound(F, I)
    targetN = I.norm()
    # lattice points are (x, y) = s*r0 + t*r1 with rows r0 = (a, b), r1 = (0, c)
    (a, b), (_, c) = I.rows
    w = F.gen()
    w1lo, w1hi = F.embedding_interval(w, 0, 8)
    w2lo, w2hi = F.embedding_interval(w, 1, 8)
    spread = w1lo - w2hi  # sigma1(w) - sigma2(w) > 0
    ymax = int(2 * B / spread) + 2
    wabs = max(abs(w1lo), abs(w1hi), abs(w2lo), abs(w2hi))
    xmax = int(B + ymax * wabs) + 2
    smax = xmax // a + 1
    for s in range(-smax, smax + 1):
        x = s * a
        y0 = s * b
        # y = y0 + t*c within [-ymax, ymax]
        t_lo = -((ymax + y0) // c) - 1
        t_hi = (ymax - y0) // c + 1
        for t in range(t_lo, t_hi + 1):
            y = y0 + t * c
            if abs(y) > ymax or (x == 0 and y == 0):
                continue
            g = F(x, y)
            if abs(g.norm()) == targetN and F.principal(g) == I:
                return g
    return None


def totally_positive_generator(a: IdealHNF):
    """Totally positive generator of the fractional ideal a, or None."""
    if a.is_zero():
        raise FieldError("zero ideal has no generator")
    F = a.field
    g = principal_generator(IdealHNF(F, a.rows, 1))
    if g is None:
        return None
    g = g / a.den
    for u in F.unit_sign_classes():
        cand = g * u
        if F.is_totally_positive(cand):
            return cand
    return None


class ClassData:
    """Wide and narrow class groups with representatives coprime to a modulus."""

    def __init__(self, F, modulus, wide_reps, wide_invariants,
                 narrow_reps, narrow_invariants):
        self.field = F
        self.modulus = modulus
        self.wide_reps = wide_reps
        self.wide_invariants = wide_invariants
        self.narrow_reps = narrow_reps
        self.narrow_invariants = narrow_invariants

    @property
    def h(self) -> int:
        return len(self.wide_reps)

    @property
    def h_plus(self) -> int:
        return len(self.narrow_reps)

    def _scaled_integral(self, I: IdealHNF) -> IdealHNF:
        # multiply by a positive rational to clear denominators: harmless for
        # both wide and narrow class (positive rationals are totally positive)
        return IdealHNF(I.field, I.rows, 1)

    def is_principal(self, I: IdealHNF) -> bool:
        return principal_generator(self._scaled_integral(I)) is not None

    def is_narrowly_principal(self, I: IdealHNF) -> bool:
        return totally_positive_generator(self._scaled_integral(I)) is not None

    def wide_index(self, I: IdealHNF) -> int:
        for i, rep in enumerate(self.wide_reps):
            if self.is_principal(I * rep.inverse()):
                return i
        raise FieldError("ideal matches no wide class representative")

    def narrow_index(self, I: IdealHNF) -> int:
        for i, rep in enumerate(self.narrow_reps):
            if self.is_narrowly_principal(I * rep.inverse()):
                return i
        raise FieldError("ideal matches no narrow class representative")


def _minkowski_bound(F: FieldOrder) -> int:
    if F.degree == 1:
        return 1
    # totally real quadratic: (2!/2^2) * sqrt(disc) = sqrt(disc)/2
    return isqrt(F.disc) // 2 + 1


def class_groups(F: FieldOrder, coprime_to: IdealHNF, minkowski_ceiling: int = 4000) -> ClassData:
    """Brute-force class and narrow class groups with coprime representatives."""
    if F.degree > 2:
        raise CapabilityError("class groups implemented for degree <= 2 only")
    mb = _minkowski_bound(F)
    if mb > minkowski_ceiling:
        raise ResourceError(f"Minkowski bound {mb} exceeds ceiling {minkowski_ceiling}")
    if F.degree == 1:
        one = F.ideal_one()
        return ClassData(F, coprime_to, [one], [], [one], [])

    ideals = enumerate_integral_ideals(F, mb)
    # partition into wide classes
    wide_classes: list[list[IdealHNF]] = []
    for I in ideals:
        placed = False
        for cls in wide_classes:
            if principal_generator(_clear_den(I * cls[0].inverse())) is not None:
                cls.append(I)
                placed = True
                break
        if not placed:
            wide_classes.append([I])
    # narrow refinement
    narrow_classes: list[list[IdealHNF]] = []
    for I in ideals:
        placed = False
        for cls in narrow_classes:
            if totally_positive_generator(_clear_den(I * cls[0].inverse())) is not None:
                cls.append(I)
                placed = True
                break
        if not placed:
            narrow_classes.append([I])

    wide_reps = [_coprime_representative(F, cls[0], coprime_to, wide=True)
                 for cls in wide_classes]
    narrow_reps = [_coprime_representative(F, cls[0], coprime_to, wide=False)
                   for cls in narrow_classes]
    wide_inv = _group_invariants(F, wide_reps, wide=True)
    narrow_inv = _group_invariants(F, narrow_reps, wide=False)
    data = ClassData(F, coprime_to, wide_reps, wide_inv, narrow_reps, narrow_inv)
    return data


def _clear_den(I: IdealHNF) -> IdealHNF:
    return IdealHNF(I.field, I.rows, 1)


def _coprime_representative(F, I, modulus, wide: bool):
    """Smallest-norm integral ideal coprime to modulus in the class of I;
    ties broken by lexicographic HNF."""
    test = principal_generator if wide else totally_positive_generator
    bound = 1
    while bound <= 1_000:
        for J in enumerate_integral_ideals(F, bound):
            if not J.is_coprime(modulus):
                continue
            if test(_clear_den(J * I.inverse())) is not None:
                return J
        bound = bound * 2 + 1
    raise ResourceError("no coprime class representative found below bound 1000")


def _group_invariants(F, reps, wide: bool) -> list[int]:
    from .abelian import FiniteAbelianGroup

    test = principal_generator if wide else totally_positive_generator
    keys = list(range(len(reps)))

    def index_of(I: IdealHNF) -> int:
        for i, rep in enumerate(reps):
            if test(_clear_den(I * rep.inverse())) is not None:
                return i
        raise FieldError("class not matched")

    identity = index_of(F.ideal_one())

    def mul(i, j):
        return index_of(reps[i] * reps[j])

    G = FiniteAbelianGroup(keys, mul, identity)
    return [d for d in G.invariants if d > 1]


# --------------------------------------------------------------------------
# cusp data


class CuspDatum:
    """Matrix data for a cusp [alpha : gamma] of the lambda-component.

    Stores the scaled representative with alpha*O = n1 * c_i and
    gamma*O = n2 * d * t_lambda * c_i, n1 + n2 = O, together with the second
    column (beta, delta) solving alpha*delta - beta*gamma = 1.
    """

    def __init__(self, field, lam, class_index, alpha, gamma, beta, delta, n1, n2,
                 t_lambda, c_i):
        self.field = field
        self.lam = lam
        self.class_index = class_index
        self.alpha = alpha
        self.gamma = gamma
        self.beta = beta
        self.delta = delta
        self.n1 = n1
        self.n2 = n2
        self.t_lambda = t_lambda
        self.c_i = c_i

    def det(self) -> FieldElement:
        return self.alpha * self.delta - self.beta * self.gamma

    def p_split(self, p: IdealHNF):
        """(g, p', n2') with g = gcd(p, n2), p = p'g, n2 = n2'g."""
        g = p + self.n2
        return g, p.quotient(g), self.n2.quotient(g)

    def __repr__(self):
        return (f"CuspDatum(lam={self.lam}, i={self.class_index}, "
                f"alpha={self.alpha}, gamma={self.gamma})")


def two_ideal_crt(n1: IdealHNF, n2: IdealHNF):
    """Elements (x, y), x in n1, y in n2, with x + y = 1, for coprime n1, n2."""
    F = n1.field
    d = F.degree
    den = n1.den * n2.den // gcd(n1.den, n2.den)
    rows = [[x * (den // n1.den) for x in r] for r in n1.rows]
    rows += [[x * (den // n2.den) for x in r] for r in n2.rows]
    H, U = hnflib.hnf_with_transform(rows, d)
    # solve w H = den * e_0 by back substitution
    target = [den] + [0] * (d - 1)
    w = [0] * len(H)
    bb = list(target)
    for i, hrow in enumerate(H):
        pc = next(k for k, v in enumerate(hrow) if v != 0)
        if bb[pc] % hrow[pc] != 0:
            raise FieldError("ideals are not coprime")
        w[i] = bb[pc] // hrow[pc]
        for k in range(d):
            bb[k] -= w[i] * hrow[k]
    if any(bb):
        raise FieldError("ideals are not coprime")
    combo = [0] * len(rows)
    for i, wi in enumerate(w):
        if wi:
            for k in range(len(rows)):
                combo[k] += wi * U[i][k]
    k1 = len(n1.rows)
    x = F.zero
    for c, b in zip(combo[:k1], n1.basis_elements()):
        x = x + b * c
    y = F.zero
    for c, b in zip(combo[k1:], n2.basis_elements()):
        y = y + b * c
    if not (x + y == F.one):
        raise FieldError("internal CRT failure")
    return x, y


def construct_cusp_matrix(alpha: FieldElement, gamma: FieldElement, lam: int,
                          level: IdealHNF, class_data: ClassData) -> CuspDatum:
    """Cusp matrix datum for the cusp [alpha : gamma], narrow class index lam.

    alpha, gamma integral with alpha*O + gamma*O = O.  The representative is
    rescaled so the standard ideal factorizations hold, then (beta, delta) is
    found by a two-ideal CRT solve of alpha*delta - beta*gamma = 1.
    """
    F = alpha.parent
    if gamma.is_zero():
        raise FieldError("gamma = 0 is the distinguished infinity cusp")
    if not (alpha.is_integral() and gamma.is_integral()):
        raise FieldError("cusp coordinates must be integral")
    aI = F.principal(alpha)
    gI = F.principal(gamma)
    if not (aI + gI) == F.ideal_one():
        raise FieldError("cusp coordinates must generate coprime ideals")
    t_lam = class_data.narrow_reps[lam]
    dt = F.different * t_lam
    j = aI + gI * dt.inverse()
    i = class_data.wide_index(j)
    c_i = class_data.wide_reps[i]
    c = _fractional_generator(c_i * j.inverse())
    alpha2 = c * alpha
    gamma2 = c * gamma
    a2I = F.principal(alpha2)
    g2I = F.principal(gamma2)
    n1 = a2I * c_i.inverse() if not a2I.is_zero() else F.ideal_zero()
    n2 = g2I * (dt * c_i).inverse()
    if not n1.is_integral() or not n2.is_integral():
        raise FieldError("scaled cusp ideals are not integral")
    if alpha2.is_zero():
        # n1 = (0): delta free in c_i^{-1}, beta = -1/gamma2
        beta = -F.one / gamma2
        delta = F.zero
    else:
        x, y = two_ideal_crt(n1, n2)
        delta = x / alpha2
        beta = -(y / gamma2)
    datum = CuspDatum(F, lam, i, alpha2, gamma2, beta, delta, n1, n2, t_lam, c_i)
    if not (datum.det() == F.one):
        raise FieldError("cusp matrix determinant is not 1")
    return datum


def _fractional_generator(I: IdealHNF):
    g = principal_generator(IdealHNF(I.field, I.rows, 1))
    if g is None:
        raise FieldError("expected a principal ideal")
    return g / I.den
