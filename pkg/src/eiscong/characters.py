"""Narrow ray class groups and their characters, in exact cyclotomic arithmetic.

The ray class group mod m (all real places in the modulus) is realized as an
extension of the narrow class group by U_m = ((O/m)^x x {+-1}^d) / image(O^x),
with the multiplication twisted by a cocycle of totally positive generators.
Discrete logs of ideals go through: narrow class index, totally positive
generator, residue mod m.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from fractions import Fraction
from math import gcd, lcm

from . import hnf as hnflib
from .abelian import FiniteAbelianGroup
from .cyclotomic import CyclotomicNumber
from .fields import (CapabilityError, FieldElement, FieldError, FieldOrder,
                     IdealHNF, factor_ideal, principal_generator,
                     totally_positive_generator, two_ideal_crt)


def _any_generator(I: IdealHNF) -> FieldElement:
    """A generator of a principal fractional ideal, any sign pattern."""
    g = principal_generator(IdealHNF(I.field, I.rows, 1))
    if g is None:
        raise FieldError("expected a principal ideal in class bookkeeping")
    return g / I.den


def ideal_digest(I: IdealHNF) -> str:
    payload = json.dumps({"rows": [list(r) for r in I.rows], "den": I.den},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def residue_of_ratio(g: FieldElement, n: int, modulus: IdealHNF,
                     mod_factors) -> FieldElement:
    """Canonical residue of g/n modulo the integral ideal ``modulus``.

    Requires v_p(g) = v_p(n) at every prime p | modulus (the ratio is a unit
    there); handles n not invertible mod the modulus by solving the local
    congruences s*n = g mod p^(e+w) and CRT-combining.
    """
    F = g.parent
    if not mod_factors:
        return modulus.reduce_element(F.zero) if modulus == F.ideal_one() \
            else modulus.reduce_element(g)
    if n == 1:
        return modulus.reduce_element(g)
    d = F.degree
    sols = []
    for P, e in mod_factors:
        w = F.principal(n).valuation(P)
        M = P ** (e + w)
        rows = M.integral_rows()
        # solve s*n - g in M: unknowns are the coords of s and lattice coords
        A = [[0] * (d + d) for _ in range(d)]
        for i in range(d):
            A[i][i] = n
            for j in range(d):
                A[i][d + j] = -rows[j][i]
        b = [int(c) for c in g.coords]
        z = hnflib.solve_integer(A, b)
        if z is None:
            raise FieldError("ratio residue: local congruence unsolvable")
        sols.append((F(*z[:d]), P ** e))
    s, M = sols[0]
    for s2, M2 in sols[1:]:
        x, y = two_ideal_crt(M, M2)
        # x + y = 1 with x in M, y in M2: keeps s mod M, moves to s2 mod M2
        s = s * y + s2 * x
        M = M * M2
    return modulus.reduce_element(s)


class RayClassGroup:
    """Narrow ray class group of modulus m (finite part) over F."""

    def __init__(self, F: FieldOrder, modulus: IdealHNF):
        if modulus.is_zero() or not modulus.is_integral():
            raise FieldError("modulus must be a nonzero integral ideal")
        self.field = F
        self.modulus = IdealHNF(F, modulus.integral_rows(), 1)
        self.mod_factors = factor_ideal(self.modulus) if self.modulus != F.ideal_one() else []
        self.class_data = F.class_data(coprime_to=self.modulus)
        self._build()

    # -- residue plumbing

    def _residue_key(self, x: FieldElement):
        return self.modulus.reduce_element(x).coords

    def _residues_coprime(self):
        out = []
        for r in self.modulus.residues():
            if self.field.principal(r).is_coprime(self.modulus) if not r.is_zero() else False:
                out.append(self._residue_key(r))
        if self.modulus == self.field.ideal_one():
            out = [self._residue_key(self.field.zero)]
        return sorted(set(out))

    def _build(self):
        F = self.field
        d = F.degree
        one_mod = self.modulus == F.ideal_one()
        residues = self._residues_coprime()
        signs = list(itertools.product((1, -1), repeat=d))

        def rmul(r1, r2):
            prod = FieldElement(F, tuple(Fraction(c) for c in r1)) * \
                FieldElement(F, tuple(Fraction(c) for c in r2))
            return self._residue_key(prod)

        self._rmul_cache: dict = {}

        def rmul_cached(r1, r2):
            k = (r1, r2)
            v = self._rmul_cache.get(k)
            if v is None:
                v = rmul(r1, r2)
                self._rmul_cache[k] = v
            return v

        self._rmul = rmul_cached

        # image of the global units in (O/m)^x x {+-}^d
        unit_gens = [-F.one] if d == 1 else [-F.one, F.fundamental_unit]
        S = {(self._residue_key(F.one), tuple([1] * d))}
        frontier = list(S)
        gen_pairs = []
        for u in unit_gens:
            # reduce a unit mod m: units are integral and coprime to m
            gen_pairs.append((self._residue_key(u), F.signs(u)))
        changed = True
        while changed:
            changed = False
            for (r, s) in list(S):
                for (gr, gs) in gen_pairs:
                    cand = (rmul_cached(r, gr), tuple(a * b for a, b in zip(s, gs)))
                    if cand not in S:
                        S.add(cand)
                        changed = True
        self._unit_image = S

        def canon(pair):
            best = None
            for (ur, us) in S:
                cand = (rmul_cached(pair[0], ur), tuple(a * b for a, b in zip(pair[1], us)))
                if best is None or cand < best:
                    best = cand
            return best

        # canonical coset keys for the U_m part
        coset_of: dict = {}
        cosets = []
        for r in residues:
            for s in signs:
                pair = (r, s)
                c = canon(pair)
                coset_of[pair] = c
        cosets = sorted(set(coset_of.values()))
        self._coset_of = coset_of
        self._canon = canon

        # cocycle for the extension 1 -> U_m -> Cl_m^+ -> Cl -> 1 over the
        # wide class group; generators carry their actual sign vectors
        cd = self.class_data
        h = cd.h
        jmul = [[0] * h for _ in range(h)]
        ucoc = [[None] * h for _ in range(h)]
        for j1 in range(h):
            for j2 in range(h):
                prod = cd.wide_reps[j1] * cd.wide_reps[j2]
                j3 = cd.wide_index(prod)
                jmul[j1][j2] = j3
                c = _any_generator(prod * cd.wide_reps[j3].inverse())
                ucoc[j1][j2] = self._coset_key_of_element(c)

        def mul(e1, e2):
            (j1, u1), (j2, u2) = e1, e2
            j3 = jmul[j1][j2]
            u = canon((rmul_cached(u1[0], u2[0]),
                       tuple(a * b for a, b in zip(u1[1], u2[1]))))
            uc = ucoc[j1][j2]
            u = canon((rmul_cached(u[0], uc[0]),
                       tuple(a * b for a, b in zip(u[1], uc[1]))))
            return (j3, u)

        elements = [(j, c) for j in range(h) for c in cosets]
        identity = (cd.wide_index(F.ideal_one()),
                    canon((self._residue_key(F.one), tuple([1] * d))))
        self.group = FiniteAbelianGroup(elements, mul, identity)
        self._mul = mul
        self._identity = identity
        self._dlog_cache: dict = {}

    def _coset_key_of_element(self, a: FieldElement):
        """Coset key of Delta(a) = (a mod m, sgn a) for a coprime to m."""
        F = self.field
        n = a.denominator()
        g = a * n
        r = residue_of_ratio(g, n, self.modulus, self.mod_factors)
        return self._canon((self._residue_key(r), F.signs(a)))

    # -- public surface

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def invariants(self):
        return list(self.group.invariants)

    def ideal_class(self, I: IdealHNF):
        """Group element key of an ideal coprime to the modulus."""
        key = I.key()
        if key in self._dlog_cache:
            return self._dlog_cache[key]
        F = self.field
        if I.is_zero():
            raise FieldError("zero ideal has no ray class")
        for P, _e in self.mod_factors:
            if I.valuation(P) != 0:
                raise FieldError("ideal shares a factor with the modulus")
        cd = self.class_data
        j = cd.wide_index(I)
        a = _any_generator(I * cd.wide_reps[j].inverse())
        elem = (j, self._coset_key_of_element(a))
        self._dlog_cache[key] = elem
        return elem

    def dlog(self, I: IdealHNF):
        return self.group.dlog(self.ideal_class(I))

    def sign_flip_element(self, place: int):
        """Group element of a principal (a), a = 1 mod m, negative at one place."""
        F = self.field
        flip = tuple(-1 if i == place else 1 for i in range(F.degree))
        j = self.class_data.wide_index(F.ideal_one())
        u = self._canon((self._residue_key(F.one), flip))
        return (j, u)

    def residue_element(self, r: FieldElement):
        """Group element of a principal (a), a = r mod m, totally positive."""
        j = self.class_data.wide_index(self.field.ideal_one())
        u = self._canon((self._residue_key(r), tuple([1] * self.field.degree)))
        return (j, u)

    def label(self) -> str:
        return f"F:{self.field.label}/m:{ideal_digest(self.modulus)}"


_group_cache: dict = {}


def ray_class_group(F: FieldOrder, m: IdealHNF) -> RayClassGroup:
    key = (F.label, m.key())
    G = _group_cache.get(key)
    if G is None:
        G = RayClassGroup(F, m)
        _group_cache[key] = G
    return G


class RayClassCharacter:
    """Character of a RayClassGroup, with signature and cached conductor."""

    def __init__(self, G: RayClassGroup, exponents):
        self.group = G
        self.exponents = tuple(int(e) % d for e, d in zip(exponents, G.group.invariants))
        self._conductor = None
        self._signature = None

    # -- values

    def value_on_element(self, elem) -> CyclotomicNumber:
        G = self.group.group
        E = G.exponent
        v = G.dlog(elem)
        acc = 0
        for e, x, d in zip(self.exponents, v, G.invariants):
            acc = (acc + e * x * (E // d)) % E
        return CyclotomicNumber.root_of_unity(E, acc)

    def __call__(self, I: IdealHNF) -> CyclotomicNumber:
        return self.value(I)

    def value(self, I: IdealHNF) -> CyclotomicNumber:
        """Character value; exactly 0 on ideals sharing a factor with m."""
        if I.is_zero():
            raise FieldError("character at the zero ideal is handled by callers")
        for P, _e in self.group.mod_factors:
            if I.valuation(P) != 0:
                return CyclotomicNumber.zero()
        return self.value_on_element(self.group.ideal_class(I))

    @property
    def order(self) -> int:
        G = self.group.group
        o = 1
        for e, d in zip(self.exponents, G.invariants):
            o = lcm(o, d // gcd(e, d))
        return o

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    @property
    def signature(self) -> tuple[int, ...]:
        """r in {0,1}^d with chi((a)) = sgn(a)^r for a = 1 mod m."""
        if self._signature is None:
            out = []
            for i in range(self.group.field.degree):
                val = self.value_on_element(self.group.sign_flip_element(i))
                out.append(0 if val == 1 else 1)
            self._signature = tuple(out)
        return self._signature

    # -- algebra on characters

    def _mul_exponents(self, other: "RayClassCharacter"):
        if self.group is not other.group:
            raise FieldError("characters on different groups; lift to a common modulus")
        return tuple((a + b) % d for a, b, d in
                     zip(self.exponents, other.exponents, self.group.group.invariants))

    def __mul__(self, other):
        return RayClassCharacter(self.group, self._mul_exponents(other))

    def inverse(self) -> "RayClassCharacter":
        return RayClassCharacter(
            self.group,
            tuple((-e) % d for e, d in zip(self.exponents, self.group.group.invariants)),
        )

    def galois_twist(self, a: int) -> "RayClassCharacter":
        """sigma_a composed with chi: values raised to the a-th power."""
        return RayClassCharacter(
            self.group,
            tuple((e * a) % d for e, d in zip(self.exponents, self.group.group.invariants)),
        )

    # -- conductor

    def conductor(self):
        """(finite conductor ideal, signature).  Cached."""
        if self._conductor is None:
            self._conductor = (self._finite_conductor(), self.signature)
        return self._conductor

    def _finite_conductor(self) -> IdealHNF:
        G = self.group
        F = G.field
        divisors = _ideal_divisors(G.modulus, G.mod_factors)
        divisors.sort(key=lambda I: (I.norm(), I.rows))
        for m0 in divisors:
            if self._factors_through(m0):
                return m0
        return G.modulus

    def _factors_through(self, m0: IdealHNF) -> bool:
        G = self.group
        for r in G._residues_coprime():
            x = G.field(*r)
            if m0.contains_element(x - G.field.one):
                if not (self.value_on_element(G.residue_element(x)) == 1):
                    return False
        return True

    def is_primitive(self) -> bool:
        return self.conductor()[0] == self.group.modulus

    def label(self) -> str:
        idx = _character_index(self)
        return f"{self.group.label()}/idx:{idx}"

    def __repr__(self):
        return f"RayClassCharacter({self.group.label()}, exps={self.exponents})"


def _ideal_divisors(m: IdealHNF, factors) -> list[IdealHNF]:
    out = [m.field.ideal_one()]
    for P, e in factors:
        out = [I * P**i for I in out for i in range(e + 1)]
    return out


def characters_of(G: RayClassGroup) -> list[RayClassCharacter]:
    """All characters, deterministically ordered by exponent tuple."""
    ranges = [range(d) for d in G.group.invariants]
    return [RayClassCharacter(G, exps) for exps in itertools.product(*ranges)]


def _character_index(chi: RayClassCharacter) -> int:
    ranges = [range(d) for d in chi.group.group.invariants]
    for i, exps in enumerate(itertools.product(*ranges)):
        if tuple(exps) == chi.exponents:
            return i
    raise FieldError("character not enumerable?")


def trivial_character(F: FieldOrder) -> RayClassCharacter:
    G = ray_class_group(F, F.ideal_one())
    return RayClassCharacter(G, tuple(0 for _ in G.group.invariants))


def evaluate(chi: RayClassCharacter, a: IdealHNF) -> CyclotomicNumber:
    return chi.value(a)


def conductor(chi: RayClassCharacter):
    return chi.conductor()


def _root_exponent(value: CyclotomicNumber, order: int) -> int:
    for e in range(order):
        if value == CyclotomicNumber.root_of_unity(order, e):
            return e
    raise FieldError("value is not a root of unity of the expected order")


def _element_representative(G: RayClassGroup, elem, avoid: IdealHNF):
    """An integral ideal in the given ray class, coprime to ``avoid``."""
    from .fields import enumerate_integral_ideals

    bound = 4
    while bound <= 4096:
        for I in enumerate_integral_ideals(G.field, bound):
            if not I.is_coprime(avoid) or not I.is_coprime(G.modulus):
                continue
            if G.ideal_class(I) == elem:
                return I
        bound *= 2
    raise FieldError("no coprime representative found for ray class element")


def induce_character(chi: RayClassCharacter, G_target: RayClassGroup) -> RayClassCharacter:
    """The character of G_target agreeing with chi on ideals coprime to both
    moduli.  Valid when chi factors through G_target (lift to a multiple of
    the modulus, or descent to a modulus divisible by the conductor)."""
    avoid = chi.group.modulus * G_target.modulus
    exps = []
    for gen, d in zip(G_target.group.generators, G_target.group.invariants):
        I = _element_representative(G_target, gen, avoid)
        exps.append(_root_exponent(chi.value(I), d))
    out = RayClassCharacter(G_target, tuple(exps))
    # spot-check agreement on a few small coprime primes
    from .fields import enumerate_integral_ideals

    checked = 0
    for I in enumerate_integral_ideals(G_target.field, 40):
        if checked >= 6:
            break
        if I.norm() == 1 or not I.is_coprime(avoid):
            continue
        if not (out.value(I) == chi.value(I)):
            raise FieldError("character does not factor through the target modulus")
        checked += 1
    return out


def primitivize(chi: RayClassCharacter) -> RayClassCharacter:
    """The primitive character (on its conductor) inducing chi."""
    f, _sig = chi.conductor()
    if f == chi.group.modulus:
        return chi
    G_f = ray_class_group(chi.group.field, f)
    return induce_character(chi, G_f)


def product_character(chi1: RayClassCharacter, chi2: RayClassCharacter,
                      G_target: RayClassGroup) -> RayClassCharacter:
    """chi1 * chi2 bundled as a character of G_target (moduli must divide)."""
    a = induce_character(chi1, G_target)
    b = induce_character(chi2, G_target)
    return a * b


def numerical_character(phi: RayClassCharacter, alpha: FieldElement) -> CyclotomicNumber:
    """phi_r(alpha) = phi(alpha O) * sgn(alpha)^r; 0 off the coprime locus."""
    F = phi.group.field
    if alpha.is_zero():
        raise FieldError("numerical character at zero")
    I = F.principal(alpha)
    val = phi.value(I)
    if val.is_zero():
        return val
    r = phi.signature
    s = alpha.signs()
    sgn = 1
    for ri, si in zip(r, s):
        if ri == 1 and si < 0:
            sgn = -sgn
    return val * sgn


def sign_power(x: FieldElement, r: tuple[int, ...]) -> int:
    """sgn(x)^r for nonzero x; callers handle the x = 0 conventions."""
    s = x.signs()
    out = 1
    for ri, si in zip(r, s):
        if ri == 1 and si < 0:
            out = -out
    return out


def lattice_coset_reps(L1: IdealHNF, L2: IdealHNF) -> list[FieldElement]:
    """Representatives of L1/L2 for fractional lattices L2 <= L1."""
    F = L1.field
    d = F.degree
    den = L1.den * L2.den // gcd(L1.den, L2.den)
    B1 = [[x * (den // L1.den) for x in r] for r in L1.rows]
    B2 = [[x * (den // L2.den) for x in r] for r in L2.rows]
    # express B2 rows in terms of B1 rows: solve over Z row by row
    M = []
    inv = hnflib.mat_inv_fraction(B1)
    for row in B2:
        coords = [sum(Fraction(row[k]) * inv[k][j] for k in range(d)) for j in range(d)]
        if any(c.denominator != 1 for c in coords):
            raise FieldError("L2 is not a sublattice of L1")
        M.append([int(c) for c in coords])
    H = hnflib.hnf(M, d)
    diag = [H[i][i] for i in range(d)]
    reps = []
    for combo in itertools.product(*[range(m) for m in diag]):
        v = [Fraction(0)] * d
        for c, b1 in zip(combo, B1):
            for j in range(d):
                v[j] += Fraction(c * b1[j], den)
        reps.append(F(*v))
    return reps


def gauss_sum(psi: RayClassCharacter, flag_imprimitive: bool = True) -> CyclotomicNumber:
    """tau(psi) = sum over x in (bd)^-1 / d^-1 of sgn(x)^r psi(x b d) e(Tr x).

    Computed literally from the defining sum; primitive psi is the intended
    use and imprimitive input is allowed but carries no correction.
    """
    G = psi.group
    F = G.field
    b = G.modulus
    diff = F.different
    L1 = (b * diff).inverse()
    L2 = diff.inverse()
    r = psi.signature
    total = CyclotomicNumber.zero()
    bd = b * diff
    for x in lattice_coset_reps(L1, L2):
        if x.is_zero():
            # zero-ideal term: well defined only at the trivial modulus, by
            # the classical mod-1 convention (value 1 for the trivial psi)
            if b == F.ideal_one():
                if not psi.is_trivial():
                    raise FieldError(
                        "Gauss sum of a nontrivial modulus-one character is undefined")
                if all(ri == 0 for ri in r):
                    total = total + CyclotomicNumber.one()
            continue
        ideal = F.principal(x) * bd
        val = psi.value(ideal)
        if val.is_zero():
            continue
        sp = sign_power(x, r)
        tr = Fraction(x.trace())
        frac = tr - int(tr)
        if frac < 0:
            frac += 1
        e = CyclotomicNumber.root_of_unity(frac.denominator, frac.numerator)
        total = total + val * e * sp
    return total
