"""Hecke L-values L(chi, 1-k) at non-positive integers, exactly.

Degree 1 goes through generalized Bernoulli numbers.  Degree 2 uses a
Shintani decomposition with the single half-open cone spanned by 1 and the
totally positive fundamental unit e (ray through 1 included, ray through e
excluded); congruence conditions mod m are handled by summing the cone over
the unit translates e^-j, j < ord(e mod m).

The value computed is that of the L-series of the character as given on its
modulus: sum over integral ideals coprime to m of chi(a) N(a)^-s.  For an
imprimitive character this removes the Euler factors at the modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .characters import RayClassCharacter, RayClassGroup, numerical_character
from .cyclotomic import CyclotomicNumber
from .fields import (CapabilityError, FieldElement, FieldError, IdealHNF,
                     enumerate_integral_ideals, two_ideal_crt)
from .numutil import bernoulli_poly


@dataclass(frozen=True)
class LValue:
    character_label: str
    k: int
    value: CyclotomicNumber
    method: str


def hecke_l_value(chi: RayClassCharacter, k: int) -> LValue:
    """L(chi, 1-k) for integer k >= 1, as an element of Q(chi)."""
    if k < 1:
        raise FieldError("hecke_l_value requires k >= 1")
    F = chi.group.field
    if F.degree == 1:
        val = _l_value_bernoulli_d1(chi, k)
        tag = "bernoulli-d1"
    elif F.degree == 2:
        val = _l_value_shintani_d2(chi, k)
        tag = "shintani-d2"
    else:
        raise CapabilityError("L-values implemented for degree <= 2")
    return LValue(chi.label(), k, val, tag)


# --------------------------------------------------------------------------
# degree 1: generalized Bernoulli numbers


def _l_value_bernoulli_d1(chi: RayClassCharacter, k: int) -> CyclotomicNumber:
    F = chi.group.field
    f = int(chi.group.modulus.norm())
    # B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f), via the numerical
    # character (which is exactly the attached classical Dirichlet character)
    acc = CyclotomicNumber.zero()
    for a in range(1, f + 1):
        if f > 1:
            alpha = F(a)
            val = numerical_character(chi, alpha)
            if val.is_zero():
                continue
        else:
            val = CyclotomicNumber.one()
        acc = acc + val * bernoulli_poly(k, Fraction(a, f))
    bkchi = acc * Fraction(f) ** (k - 1)
    return bkchi * Fraction(-1, k)


# --------------------------------------------------------------------------
# degree 2: Shintani cone sums


_cone_coeff_cache: dict = {}
_partial_zeta_cache: dict = {}
_class_reps_cache: dict = {}


def _cone_coeffs(F, k: int, v1: FieldElement, v2: FieldElement):
    """c_{n,m} = [u^{k-1}] (s1(v1) u + s2(v1))^(n-1) (s1(v2) u + s2(v2))^(m-1).

    Cone generator linear forms under the first-embedding identification:
    s1 of an element is the element itself, s2 its conjugate.
    """
    key = (F.label, k, v1.coords, v2.coords)
    if key in _cone_coeff_cache:
        return _cone_coeff_cache[key]
    deg = k  # series truncated at u^(k-1): k coefficients
    one = F.one

    def series_pow(p0: FieldElement, p1: FieldElement, exp: int):
        """(p0 + p1 u)^exp as a u-series of length deg; exp >= -1."""
        if exp == -1:
            inv = p0.inverse()
            ratio = -(p1 * inv)
            out = [inv]
            for _ in range(deg - 1):
                out.append(out[-1] * ratio)
            return out
        out = [one] + [F.zero] * (deg - 1)
        for _ in range(exp):
            nxt = [F.zero] * deg
            for i in range(deg):
                if not out[i].is_zero():
                    nxt[i] = nxt[i] + out[i] * p0
                    if i + 1 < deg:
                        nxt[i + 1] = nxt[i + 1] + out[i] * p1
            out = nxt
        return out

    apow = {n: series_pow(v1.conjugate(), v1, n - 1) for n in range(0, 2 * k + 1)}
    bpow = {m: series_pow(v2.conjugate(), v2, m - 1) for m in range(0, 2 * k + 1)}
    out = {}
    for n in range(0, 2 * k + 1):
        m = 2 * k - n
        sa, sb = apow[n], bpow[m]
        acc = F.zero
        for i in range(deg):
            j = (deg - 1) - i
            if not sa[i].is_zero() and not sb[j].is_zero():
                acc = acc + sa[i] * sb[j]
        out[(n, m)] = acc
    _cone_coeff_cache[key] = out
    return out


def _q_coordinates(F, z: FieldElement, v1: FieldElement, v2: FieldElement):
    """(q1, q2) rational with z = q1 v1 + q2 v2, for a rational v1."""
    a, b = z.coords
    a1 = v1.coords[0]  # v1 is a positive rational multiple of 1
    e0, e1 = v2.coords
    q2 = Fraction(b) / e1
    q1 = (Fraction(a) - q2 * e0) / a1
    return q1, q2


def _element_multiplier(L: IdealHNF, x: FieldElement) -> int:
    """Smallest n > 0 with n*x in the integral lattice L."""
    from .fields import _divisors_of
    from .hnf import det_upper

    det = det_upper(L.integral_rows())
    for n in sorted(_divisors_of(det)):
        if L.contains_element(x * n):
            return n
    raise FieldError("det multiple not in lattice?")


def _cone_lattice_points(F, L: IdealHNF, shift: FieldElement, v1, v2):
    """Points of shift + L inside {q1 v1 + q2 v2 : 0 < qi <= 1}."""
    rows = L.integral_rows()
    (A, B), (_, C) = rows
    s_q1, s_q2 = _q_coordinates(F, shift, v1, v2)
    r1_q = _q_coordinates(F, F(A, B), v1, v2)
    r2_q = _q_coordinates(F, F(0, C), v1, v2)
    # q(shift + a r1 + b r2) in (0,1]^2; enumerate integer (a, b) in the box
    # determined by pulling the parallelogram corners back through
    # a r1_q + b r2_q = v
    det = r1_q[0] * r2_q[1] - r1_q[1] * r2_q[0]
    corners = []
    for t1 in (Fraction(0), Fraction(1)):
        for t2 in (Fraction(0), Fraction(1)):
            v1, v2 = t1 - s_q1, t2 - s_q2
            a = (v1 * r2_q[1] - v2 * r2_q[0]) / det
            b = (-v1 * r1_q[1] + v2 * r1_q[0]) / det
            corners.append((a, b))
    amin = min(c[0] for c in corners)
    amax = max(c[0] for c in corners)
    bmin = min(c[1] for c in corners)
    bmax = max(c[1] for c in corners)
    out = []
    for a in range(int(amin) - 1, int(amax) + 2):
        for b in range(int(bmin) - 1, int(bmax) + 2):
            q1 = s_q1 + a * r1_q[0] + b * r2_q[0]
            q2 = s_q2 + a * r1_q[1] + b * r2_q[1]
            if 0 < q1 <= 1 and 0 < q2 <= 1:
                out.append((q1, q2))
    return out


def _cone_sum_2d(F, k: int, L: IdealHNF, shift: FieldElement) -> Fraction:
    """Shintani value at s = 1-k of the open-cone part of the sum over
    (shift + L) in the fundamental domain of <eps>.

    The cone generators are (a*1, b*eps) with a, b minimal so both lie in L,
    making the half-open cell decomposition of the open cone L-compatible.
    """
    eps = F.totally_positive_unit
    a_mult = _element_multiplier(L, F.one)
    b_mult = _element_multiplier(L, eps)
    v1 = F.one * a_mult
    v2 = eps * b_mult
    coeffs = _cone_coeffs(F, k, v1, v2)
    gamma = F.zero
    for (q1, q2) in _cone_lattice_points(F, L, shift, v1, v2):
        for n in range(0, 2 * k + 1):
            m = 2 * k - n
            c = coeffs[(n, m)]
            if c.is_zero():
                continue
            w = bernoulli_poly(n, 1 - q1) * bernoulli_poly(m, 1 - q2)
            if w:
                gamma = gamma + c * (w / (factorial(n) * factorial(m)))
    tr = gamma.trace()
    return Fraction(factorial(k - 1)) ** 2 * tr / 2


def _ray_sum_1d(F, k: int, L: IdealHNF, shift: FieldElement) -> Fraction:
    """Contribution of the half-open boundary ray through 1."""
    rows = L.integral_rows()
    (A, B), (_, C) = rows
    s0, s1 = (int(c) for c in shift.coords)
    # need a*B + b*C = -s1; then the ray points are c = s0 + a*A, positive
    from math import gcd as _gcd

    g = _gcd(B, C)
    if s1 % g != 0:
        return Fraction(0)
    # particular a0: solve B a = -s1 mod C
    Bg, Cg, sg = B // g, C // g, -s1 // g
    a0 = (sg * pow(Bg, -1, Cg)) % Cg if Cg > 1 else 0
    step = A * Cg  # c-progression step as a runs over a0 + Cg Z
    c0 = s0 + a0 * A
    # positive members of c0 + step*Z: reduce to hurwitz fractional shift
    if step < 0:
        step = -step
        # reindex the progression in the other direction
    y0 = Fraction(c0, step)
    yhat = y0 - (y0.numerator // y0.denominator)  # in [0,1)
    if yhat == 0:
        yhat = Fraction(1)
    # sum over c = step*(yhat + n), n >= 0 of c^(2k-2) continued:
    return -Fraction(step) ** (2 * k - 2) * bernoulli_poly(2 * k - 1, yhat) / (2 * k - 1)


def _unit_order_mod(G: RayClassGroup) -> int:
    F = G.field
    if G.modulus == F.ideal_one():
        return 1
    eps = F.totally_positive_unit
    red_one = G.modulus.reduce_element(F.one)
    cur = eps
    t = 1
    while not (G.modulus.reduce_element(cur) == red_one):
        cur = cur * eps
        t += 1
        if t > 10_000:
            raise FieldError("unit order search ran away")
    return t


def _class_representatives(G: RayClassGroup) -> dict:
    key = G.label()
    if key in _class_reps_cache:
        return _class_reps_cache[key]
    needed = set(G.group.elements)
    reps = {}
    bound = 4
    while needed:
        for I in enumerate_integral_ideals(G.field, bound):
            if not I.is_coprime(G.modulus):
                continue
            e = G.ideal_class(I)
            if e in needed:
                reps[e] = I
                needed.discard(e)
                if not needed:
                    break
        bound *= 2
        if bound > 4096:
            raise FieldError("could not reach every ray class by norm 4096")
    _class_reps_cache[key] = reps
    return reps


def partial_zeta(G: RayClassGroup, elem, k: int) -> Fraction:
    """zeta(1-k, class) = sum over integral ideals in the ray class."""
    key = (G.label(), elem, k)
    if key in _partial_zeta_cache:
        return _partial_zeta_cache[key]
    F = G.field
    reps = _class_representatives(G)
    # representative of the inverse class, via elem^(E-1)
    E = G.group.exponent
    inv_elem = _group_power(G, elem, E - 1)
    a = reps[inv_elem]
    # x0 in a with x0 = 1 mod m
    if G.modulus == F.ideal_one():
        x0 = F.zero
    else:
        x0, _y = two_ideal_crt(a, G.modulus)
    L = a * G.modulus
    t = _unit_order_mod(G)
    eps_inv = F.totally_positive_unit.inverse()
    total = Fraction(0)
    shift = x0
    for _j in range(t):
        total += _cone_sum_2d(F, k, L, shift)
        total += _ray_sum_1d(F, k, L, shift)
        shift = shift * eps_inv
    Na = int(a.norm())
    val = total * Fraction(Na, Na**k)
    _partial_zeta_cache[key] = val
    return val


def _group_power(G: RayClassGroup, elem, n: int):
    out = G.group.identity
    b = elem
    while n:
        if n & 1:
            out = G.group.mul(out, b)
        b = G.group.mul(b, b)
        n >>= 1
    return out


def _l_value_shintani_d2(chi: RayClassCharacter, k: int) -> CyclotomicNumber:
    G = chi.group
    acc = CyclotomicNumber.zero()
    for elem in G.group.elements:
        z = partial_zeta(G, elem, k)
        if z:
            acc = acc + chi.value_on_element(elem) * z
    return acc
