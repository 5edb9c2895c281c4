"""Hilbert Eisenstein series as coefficient machines.

Ideal-indexed Fourier coefficients c(n) = sum over divisors n1 | n of
eta(n/n1) psi(n1) N(n1)^(k-1), Hecke and level-raise operators on coefficient
tables, the one-prime stabilizations E^delta, and exact constant terms at the
infinity component and at arbitrary finite cusps.

Constant terms at finite cusps follow the closed formulas for the base series
and its level raise by a prime p; the stabilized series E^delta is the linear
combination E - delta E^(p) and its cusp values are computed exactly as that
combination, which reproduces the published closed forms including their
vanishing branches.  Conventions recorded here:

* all 2^g / Gamma(k)^g exponents are read as the field degree d;
* the zero ideal inside a character argument (alpha = 0 cusps) evaluates to 1
  for the trivial character of modulus one, to 0 for any character of
  nontrivial modulus, and is rejected for nontrivial class characters;
* sgn(0)^r is 1 for r = 0 and 0 otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .characters import (RayClassCharacter, gauss_sum, induce_character,
                         primitivize, product_character, ray_class_group,
                         sign_power)
from .cyclotomic import CyclotomicNumber
from .fields import (ClassData, CuspDatum, FieldError, FieldOrder, IdealHNF,
                     construct_cusp_matrix, enumerate_integral_ideals,
                     factor_ideal, principal_generator)
from .lvalues import hecke_l_value

TWO_POWER_CONVENTION = "d"  # every 2^g, Gamma(k)^g exponent is the degree


class TableRangeError(KeyError):
    """Coefficient lookup beyond the guaranteed bound of a table."""

    def __init__(self, needed_norm):
        super().__init__(f"coefficient table too shallow; need norm {needed_norm}")
        self.needed_norm = needed_norm


class EisensteinSeries:
    """E_k(eta, psi): weight k >= 1, level m = (mod eta)(mod psi)."""

    def __init__(self, eta: RayClassCharacter, psi: RayClassCharacter, k: int):
        if k < 1:
            raise FieldError("weight must be a positive integer")
        F = eta.group.field
        if F != psi.group.field:
            raise FieldError("characters over different fields")
        self.field = F
        self.eta = eta
        self.psi = psi
        self.k = k
        self.level = eta.group.modulus * psi.group.modulus
        q, r = eta.signature, psi.signature
        if any((qi + ri - k) % 2 for qi, ri in zip(q, r)):
            raise FieldError(
                "signature parity violated: q + r must equal k mod 2 at every place")
        self._check_unit_condition()
        self.phi = product_character(eta, psi, ray_class_group(F, self.level))
        ce, _ = eta.conductor()
        cp, _ = psi.conductor()
        self.is_newform = (eta.is_primitive() and psi.is_primitive()
                           and ce * cp == self.level)
        self._prime_cache: dict = {}

    def _check_unit_condition(self):
        # phi_r(u) = sgn(u)^k for units u, checked on the sign generators
        F = self.field
        q, r = self.eta.signature, self.psi.signature
        k = self.k
        for u in F.unit_sign_classes():
            s = u.signs()
            lhs = 1
            for qi, ri, si in zip(q, r, s):
                if (qi + ri) % 2 == 1 and si < 0:
                    lhs = -lhs
            rhs = 1
            for si in s:
                if k % 2 == 1 and si < 0:
                    rhs = -rhs
            if lhs != rhs:
                raise FieldError("unit condition fails: the Eisenstein space is trivial")

    # -- coefficients

    def _prime_data(self, P: IdealHNF):
        key = P.key()
        if key not in self._prime_cache:
            self._prime_cache[key] = (
                self.eta.value(P),
                self.psi.value(P),
                Fraction(int(P.norm())) ** (self.k - 1),
            )
        return self._prime_cache[key]

    def coefficient(self, n: IdealHNF) -> CyclotomicNumber:
        """c(n) = sum_{n1 | n} eta(n/n1) psi(n1) N(n1)^(k-1), exactly."""
        if n.is_zero():
            raise FieldError("coefficient at the zero ideal")
        fac = factor_ideal(n)
        etas, psis = [], []
        for P, e in fac:
            ev, pv, nk = self._prime_data(P)
            etas.append([ev**j for j in range(e + 1)])
            psis.append([CyclotomicNumber.one()]
                        + [(pv**j) * nk**j for j in range(1, e + 1)])
        total = CyclotomicNumber.zero()
        exps = [range(e + 1) for _P, e in fac]
        for combo in itertools.product(*exps):
            term = CyclotomicNumber.one()
            dead = False
            for i, f in enumerate(combo):
                e = fac[i][1]
                a = etas[i][e - f]
                b = psis[i][f]
                if a.is_zero() or b.is_zero():
                    dead = True
                    break
                term = term * a * b
            if not dead:
                total = total + term
        return total

    def coefficient_table(self, bound: int) -> "CoefficientTable":
        entries = {}
        for I in enumerate_integral_ideals(self.field, bound):
            entries[I] = self.coefficient(I)
        return CoefficientTable(self.describe(), bound, entries)

    def describe(self) -> str:
        return (f"E_{self.k}({self.eta.label()}, {self.psi.label()})")

    # -- constant terms at the infinity cusp

    def constant_term_infty(self, lam: int, class_data: ClassData | None = None
                            ) -> CyclotomicNumber:
        """c_lambda(0): the normalized constant term of the lambda component."""
        F = self.field
        cd = class_data if class_data is not None else F.class_data(coprime_to=self.level)
        t_lam = cd.narrow_reps[lam]
        two_d = Fraction(1, 2**F.degree)
        a_mod = self.eta.group.modulus
        b_mod = self.psi.group.modulus
        Gm = ray_class_group(F, self.level)
        if self.k >= 2:
            if a_mod != F.ideal_one():
                return CyclotomicNumber.zero()
            chi = product_character(self.eta.inverse(), self.psi, Gm)
            L = hecke_l_value(chi, self.k).value
            return self.eta.inverse().value(t_lam) * L * two_d
        # k = 1: both branches
        total = CyclotomicNumber.zero()
        if a_mod == F.ideal_one():
            chi = product_character(self.eta.inverse(), self.psi, Gm)
            total = total + self.eta.inverse().value(t_lam) * hecke_l_value(chi, 1).value
        if b_mod == F.ideal_one():
            chi = product_character(self.psi.inverse(), self.eta, Gm)
            total = total + self.psi.inverse().value(t_lam) * hecke_l_value(chi, 1).value
        return total * two_d


def eis_coefficient(E: EisensteinSeries, n: IdealHNF) -> CyclotomicNumber:
    return E.coefficient(n)


def eis_constant_term_infty(E: EisensteinSeries, lam: int,
                            class_data=None) -> CyclotomicNumber:
    return E.constant_term_infty(lam, class_data)


# --------------------------------------------------------------------------
# coefficient tables and Hecke machinery


@dataclass(frozen=True)
class CoefficientTable:
    series_id: str
    bound: int
    entries: dict

    def value(self, n: IdealHNF) -> CyclotomicNumber:
        try:
            return self.entries[n]
        except KeyError:
            raise TableRangeError(int(n.norm())) from None

    def __iter__(self):
        return iter(sorted(self.entries, key=lambda I: (I.norm(), I.rows)))


def hecke_apply(n: IdealHNF, table: CoefficientTable, phi: RayClassCharacter,
                k: int) -> CoefficientTable:
    """c(m, T(n) f) = sum over a containing m+n of phi(a) N(a)^(k-1) c(m n a^-2).

    Out-of-range lookups raise TableRangeError rather than defaulting to 0.
    """
    F = n.field
    Nn = int(n.norm())
    out_bound = table.bound // Nn
    entries = {}
    for m in enumerate_integral_ideals(F, out_bound):
        g = m + n
        divisors = [F.ideal_one()]
        for P, e in factor_ideal(g) if g != F.ideal_one() else []:
            divisors = [D * P**i for D in divisors for i in range(e + 1)]
        acc = CyclotomicNumber.zero()
        for a in divisors:
            val = phi.value(a) if a != F.ideal_one() else CyclotomicNumber.one()
            if val.is_zero():
                continue
            idx = (m * n).quotient(a * a)
            acc = acc + val * Fraction(int(a.norm())) ** (k - 1) * table.value(idx)
        entries[m] = acc
    return CoefficientTable(f"T({n.norm()}) {table.series_id}", out_bound, entries)


def level_raise(table: CoefficientTable, r: IdealHNF) -> CoefficientTable:
    """c(n, f^(r)) = c(n r^-1, f), zero when r does not divide n."""
    if r.is_zero() or not r.is_integral():
        raise FieldError("level raise requires a nonzero integral ideal")
    F = r.field
    entries = {}
    for m in enumerate_integral_ideals(F, table.bound):
        if r.divides(m):
            entries[m] = table.value(m.quotient(r))
        else:
            entries[m] = CyclotomicNumber.zero()
    return CoefficientTable(f"{table.series_id}^({r.norm()})", table.bound, entries)


class StabilizedSeries:
    """E^delta = E - delta E^(p), for delta one of eta(p), psi(p) N(p)^(k-1)."""

    def __init__(self, E: EisensteinSeries, p: IdealHNF, which: str):
        if which not in ("eta", "psi"):
            raise FieldError("which must be 'eta' or 'psi'")
        fac = factor_ideal(p)
        if len(fac) != 1 or fac[0][1] != 1:
            raise FieldError("stabilization requires a prime ideal")
        if not p.is_coprime(E.level):
            raise FieldError("stabilizing prime must not divide the level")
        self.base = E
        self.p = p
        self.which = which
        etap = E.eta.value(p)
        psipnk = E.psi.value(p) * Fraction(int(p.norm())) ** (E.k - 1)
        self.delta = etap if which == "eta" else psipnk
        self.epsilon = etap + psipnk - self.delta
        self.level = E.level * p

    def coefficient(self, n: IdealHNF) -> CyclotomicNumber:
        c = self.base.coefficient(n)
        if self.p.divides(n):
            c = c - self.delta * self.base.coefficient(n.quotient(self.p))
        return c

    def coefficient_table(self, bound: int) -> CoefficientTable:
        entries = {}
        for I in enumerate_integral_ideals(self.base.field, bound):
            entries[I] = self.coefficient(I)
        tag = "eta" if self.which == "eta" else "psi"
        return CoefficientTable(
            f"{self.base.describe()}^delta[{tag}]({self.p.norm()})", bound, entries)


def stabilize(E: EisensteinSeries, p: IdealHNF, which: str) -> StabilizedSeries:
    return StabilizedSeries(E, p, which)


# --------------------------------------------------------------------------
# constant terms at finite cusps


def _char_value_with_zero_convention(chi: RayClassCharacter, I: IdealHNF,
                                     numerator_is_zero: bool) -> CyclotomicNumber:
    """Character value extended to the alpha = 0 degenerate argument."""
    F = chi.group.field
    if numerator_is_zero:
        if chi.group.modulus != F.ideal_one():
            return CyclotomicNumber.zero()
        if chi.is_trivial():
            return CyclotomicNumber.one()
        raise FieldError(
            "zero-ideal value of a nontrivial class character is undefined "
            "(alpha = 0 cusp with a nontrivial modulus-one character)")
    return chi.value(I)


def _sign_power_with_zero(x, r, is_zero: bool) -> int:
    if is_zero:
        if all(ri == 0 for ri in r):
            return 1
        return 0
    return sign_power(x, r)


def _check_representative_conditions(E: EisensteinSeries, cusp: CuspDatum,
                                     extra: IdealHNF | None):
    F = E.field
    dtc = F.different * cusp.t_lambda * cusp.c_i
    if not dtc.is_integral():
        raise FieldError(f"representative product {dtc!r} is not integral")
    if not dtc.is_coprime(E.level):
        raise FieldError(
            f"representative product {dtc!r} is not coprime to the level; "
            "choose class representatives away from the level")
    if extra is not None and not dtc.is_coprime(extra):
        raise FieldError(
            f"representative product {dtc!r} is not coprime to the auxiliary prime")


def _cusp_prefactor(E: EisensteinSeries, cusp: CuspDatum, sign_convention: str):
    """Common factor: 2^-d tau(eta psi^-1)/tau(psi^-1) sgn(-gamma)^q sgn(alpha)^r."""
    F = E.field
    chi = primitivize(product_character(
        E.eta, E.psi.inverse(), ray_class_group(F, E.level)))
    tau_top = gauss_sum(chi)
    tau_bot = gauss_sum(E.psi.inverse())
    if tau_bot.is_zero():
        raise FieldError("tau(psi^-1) vanishes; cusp formula inapplicable")
    q, r = E.eta.signature, E.psi.signature
    gamma_arg = -cusp.gamma if sign_convention == "theorem" else cusp.gamma
    sq = sign_power(gamma_arg, q)
    alpha_zero = cusp.alpha.is_zero()
    sr = _sign_power_with_zero(cusp.alpha, r, alpha_zero)
    two_d = Fraction(1, 2**F.degree)
    return (tau_top / tau_bot) * (sq * sr) * two_d, chi


def constant_term_base(E: EisensteinSeries, cusp: CuspDatum,
                       sign_convention: str = "theorem") -> CyclotomicNumber:
    """Constant term of (E_k(eta,psi)|A) at the lambda component of the cusp."""
    F = E.field
    if E.k < 2:
        raise FieldError("cusp constant-term formulas require k >= 2")
    if cusp.gamma.is_zero():
        raise FieldError("gamma = 0 is the distinguished infinity cusp; "
                         "use the infinity constant term")
    if not (E.eta.is_primitive() and E.psi.is_primitive()):
        raise FieldError("cusp constant-term formulas require primitive characters")
    _check_representative_conditions(E, cusp, None)
    b = E.psi.group.modulus
    if not b.divides(cusp.n2):
        return CyclotomicNumber.zero()
    pref, chi = _cusp_prefactor(E, cusp, sign_convention)
    if pref.is_zero():
        return pref
    f_cond = chi.group.modulus  # conductor of eta psi^-1 after primitivization
    k = E.k
    ratio = (Fraction(int((b * cusp.c_i).norm()), int(f_cond.norm()))) ** k
    eta_arg = F.principal(cusp.gamma) * (b * F.different * cusp.t_lambda * cusp.c_i).inverse()
    eta_val = E.eta.value(eta_arg)
    if eta_val.is_zero():
        return eta_val
    psi_val = _char_value_with_zero_convention(
        E.psi.inverse(),
        F.principal(cusp.alpha) * cusp.c_i.inverse() if not cusp.alpha.is_zero() else F.ideal_zero(),
        cusp.alpha.is_zero(),
    )
    if psi_val.is_zero():
        return psi_val
    Gm = ray_class_group(F, E.level)
    L = hecke_l_value(primitivize(
        product_character(E.eta.inverse(), E.psi, Gm)), k).value
    euler = CyclotomicNumber.one()
    for P, _e in (factor_ideal(E.level) if E.level != F.ideal_one() else []):
        if P.divides(f_cond):
            continue
        euler = euler * (CyclotomicNumber.one()
                         - chi.value(P) * Fraction(1, int(P.norm()) ** k))
    return pref * ratio * eta_val * psi_val * L * euler


def constant_term_raised(E: EisensteinSeries, cusp: CuspDatum, p: IdealHNF,
                         sign_convention: str = "theorem") -> CyclotomicNumber:
    """Constant term of (E^(p)|A), the level raise by a prime p not dividing m."""
    F = E.field
    if E.k < 2:
        raise FieldError("cusp constant-term formulas require k >= 2")
    if cusp.gamma.is_zero():
        raise FieldError("gamma = 0 is the distinguished infinity cusp")
    if not E.is_newform:
        raise FieldError("the level-raised constant term formula assumes a newform")
    if not E.eta.group.modulus.is_coprime(E.psi.group.modulus):
        raise FieldError("the level-raised formula assumes coprime moduli")
    if not p.is_coprime(E.level):
        raise FieldError("auxiliary prime divides the level")
    _check_representative_conditions(E, cusp, p)
    g, p_prime, n2_prime = cusp.p_split(p)
    b = E.psi.group.modulus
    if not b.divides(n2_prime):
        return CyclotomicNumber.zero()
    pref, chi = _cusp_prefactor(E, cusp, sign_convention)
    if pref.is_zero():
        return pref
    k = E.k
    a_mod = E.eta.group.modulus
    ratio = Fraction(int(cusp.c_i.norm()), int((a_mod * p_prime).norm())) ** k
    eta_arg = F.principal(cusp.gamma) * \
        (g * b * F.different * cusp.t_lambda * cusp.c_i).inverse()
    eta_val = E.eta.value(eta_arg)
    if eta_val.is_zero():
        return eta_val
    alpha_zero = cusp.alpha.is_zero()
    psi_val = _char_value_with_zero_convention(
        E.psi.inverse(),
        (F.principal(cusp.alpha) * p_prime * cusp.c_i.inverse())
        if not alpha_zero else F.ideal_zero(),
        alpha_zero,
    )
    if psi_val.is_zero():
        return psi_val
    Gm = ray_class_group(F, E.level)
    L = hecke_l_value(primitivize(
        product_character(E.eta.inverse(), E.psi, Gm)), k).value
    return pref * ratio * eta_val * psi_val * L


def constant_term_at_cusp(series, cusp: CuspDatum, p: IdealHNF | None = None,
                          sign_convention: str = "theorem") -> CyclotomicNumber:
    """Dispatch over base series, raised series, and stabilizations.

    ``series`` is an EisensteinSeries (base), a tuple ("raised", E) with p
    supplied, or a StabilizedSeries.  Stabilized values are the exact linear
    combination value(E) - delta * value(E^(p)).
    """
    if isinstance(series, EisensteinSeries):
        return constant_term_base(series, cusp, sign_convention)
    if isinstance(series, tuple) and series[0] == "raised":
        if p is None:
            raise FieldError("raised series needs the auxiliary prime")
        return constant_term_raised(series[1], cusp, p, sign_convention)
    if isinstance(series, StabilizedSeries):
        base = constant_term_base(series.base, cusp, sign_convention)
        raised = constant_term_raised(series.base, cusp, series.p, sign_convention)
        return base - series.delta * raised
    raise FieldError(f"unknown series kind {series!r}")


# --------------------------------------------------------------------------
# cusp enumeration for sweeps


def enumerate_cusp_data(F: FieldOrder, level: IdealHNF, lam: int,
                        class_data: ClassData, extra_n2=()) -> list[CuspDatum]:
    """Cusp data covering every divisor shape n2 | level (plus extras).

    For each target n2 a representative cusp [alpha : gamma] is constructed
    with gamma generating n2 * different * t_lambda (principal for the desk
    fields) and alpha running over 0, 1, and a unit twist.
    """
    out = []
    t_lam = class_data.narrow_reps[lam]
    divisors = [F.ideal_one()]
    if level != F.ideal_one():
        for P, e in factor_ideal(level):
            divisors = [D * P**i for D in divisors for i in range(e + 1)]
    divisors.extend(extra_n2)
    for n2 in divisors:
        target = n2 * F.different * t_lam
        gamma = principal_generator(IdealHNF(F, target.rows, 1))
        if gamma is None:
            continue
        gamma = gamma / target.den
        if not gamma.is_integral():
            continue
        alphas = [F.one, -F.one]
        if F.degree == 2:
            alphas.append(F.fundamental_unit)
        if n2 == F.ideal_one():
            alphas.append(F.zero)
        for alpha in alphas:
            if not alpha.is_zero():
                if not (F.principal(alpha) + F.principal(gamma)) == F.ideal_one():
                    continue
            try:
                out.append(construct_cusp_matrix(alpha, gamma, lam, level, class_data))
            except FieldError:
                continue
    return out
