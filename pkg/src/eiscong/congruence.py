"""Executable congruence-prime search and verification.

Candidate moduli come from the numerator of the absolute norm of
X = L(eta^-1 psi, 1-k) (eta(p) - psi(p) N(p)^k); each candidate is tested
through the residue maps above l in Z[eta, psi], then filtered by the side
conditions (l > k+1, unramified in O, degree condition, and the newform
divisibility).  Verification compares ingested eigenform data against the
Eisenstein eigenvalues through every prime of the compositum above l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .characters import (RayClassCharacter, primitivize, product_character,
                         ray_class_group)
from .cyclotomic import CyclotomicNumber, cyclotomic_coeffs, euler_phi
from .eisenstein import EisensteinSeries
from .fields import FieldError, IdealHNF, factor_ideal, primes_above
from .gf import PrimeField, QuotientField, poly_factor
from .lvalues import hecke_l_value
from .numutil import factorint, primes_upto


class ValuationError(ValueError):
    """An element was not l-integral where a residue was required."""


class IncompleteDataError(RuntimeError):
    def __init__(self, missing):
        super().__init__(f"eigenvalues missing for primes: {missing}")
        self.missing = missing


# --------------------------------------------------------------------------
# residue maps above l on Z[zeta_n]


class ResidueMapAboveL:
    """Reduction Z[zeta_n] -> F_{l^e} given by one factor of Phi_n mod l."""

    def __init__(self, l: int, n: int, factor_coeffs: tuple[int, ...], index: int):
        self.l = l
        self.n = n
        self.factor = tuple(c % l for c in factor_coeffs)
        self.index = index
        if n == 1:
            self.codomain = PrimeField(l)
        else:
            self.codomain = QuotientField(PrimeField(l), self.factor)

    @property
    def residue_degree(self) -> int:
        return 1 if self.n == 1 else len(self.factor) - 1

    def __repr__(self):
        return f"ResidueMap(l={self.l}, n={self.n}, idx={self.index})"

    def reduce_fraction(self, q: Fraction):
        if q.denominator % self.l == 0:
            raise ValuationError(f"{q} has {self.l} in its denominator")
        return (q.numerator * pow(q.denominator, -1, self.l)) % self.l

    def _fit_conductor(self, x: CyclotomicNumber) -> CyclotomicNumber:
        if x.n == self.n:
            return x
        if self.n % x.n == 0:
            return x.to_conductor(self.n)
        from math import lcm

        big = lcm(self.n, x.n)
        if big % 4 == 2:
            big //= 2
        down = x.to_conductor(big).try_descend(self.n)
        if down is None:
            raise FieldError("element does not lie in the residue map's field")
        return down

    def __call__(self, x: CyclotomicNumber):
        """Image of an l-integral element of Q(zeta_n)."""
        x = self._fit_conductor(x)
        K = self.codomain
        if self.n == 1:
            return self.reduce_fraction(x.coeffs[0])
        zeta = K.gen()
        out = K.zero
        power = K.one
        for c in x.coeffs:
            if c != 0:
                out = K.add(out, K.mul(K.from_base(self.reduce_fraction(c)), power))
            power = K.mul(power, zeta)
        return out

    def is_zero_image(self, x: CyclotomicNumber) -> bool:
        return self.codomain.is_zero(self(x))


def residue_maps_above(l: int, n: int) -> list[ResidueMapAboveL]:
    """One map per irreducible factor of Phi_n mod l; requires l unramified
    in Q(zeta_n), i.e. l does not divide n."""
    if not sympy.isprime(l):
        raise FieldError(f"{l} is not prime")
    if n > 1 and n % l == 0:
        raise FieldError(f"l = {l} divides the conductor {n}: ramified case rejected")
    if n == 1:
        return [ResidueMapAboveL(l, 1, (0, 1), 0)]
    K = PrimeField(l)
    phi_coeffs = [c % l for c in cyclotomic_coeffs(n)]
    factors = poly_factor(K, phi_coeffs)
    return [ResidueMapAboveL(l, n, tuple(f), i) for i, f in enumerate(factors)]


# --------------------------------------------------------------------------
# reports


@dataclass
class CandidateFlags:
    l: int
    map_index: int
    ord_positive: bool
    l_gt_k_plus_1: bool
    unramified: bool
    degree_ok: bool
    l_integral: bool
    supported: bool = True
    note: str = ""

    @property
    def theorem_applicable(self) -> bool:
        return (self.ord_positive and self.l_gt_k_plus_1 and self.unramified
                and self.degree_ok and self.l_integral and self.supported)


@dataclass
class NewformFlags:
    l: int
    map_index: int
    divides_factor_high: bool   # Lambda' | eta(p) - psi(p) N(p)^k
    divides_factor_low: bool    # Lambda' | eta(p) - psi(p) N(p)^(k-2)
    condition2: bool
    case: str                   # "A", "B", "AB" or ""
    taylor_zero: bool | None


@dataclass
class CongruenceReport:
    field_label: str
    eta_label: str
    psi_label: str
    k: int
    p_label: str
    hypotheses: dict
    within_theorem: bool
    l_value: CyclotomicNumber | None
    euler_factor: CyclotomicNumber | None
    x_value: CyclotomicNumber | None
    value_conductor: int
    candidates: list = field(default_factory=list)
    newform: list = field(default_factory=list)
    conventions: dict = field(default_factory=dict)

    def candidate_primes(self) -> list[int]:
        return sorted({c.l for c in self.candidates if c.theorem_applicable})

    def newform_possible(self, l: int) -> bool:
        flags = [nf for nf in self.newform if nf.l == l]
        return any(nf.condition2 for nf in flags)


# --------------------------------------------------------------------------
# theorem predicates


def _value_field_conductor(eta: RayClassCharacter, psi: RayClassCharacter) -> int:
    from math import lcm

    n = lcm(eta.order, psi.order)
    if n % 4 == 2:
        n //= 2
    return max(n, 1)


def _norm_of(x: CyclotomicNumber) -> Fraction:
    return x.minimal().norm()


def search_congruence_primes(eta: RayClassCharacter, psi: RayClassCharacter,
                             k: int, p: IdealHNF) -> CongruenceReport:
    """Theorem predicate: find all candidate congruence primes for
    (eta, psi, k, p) and flag each per the side conditions."""
    F = eta.group.field
    E = EisensteinSeries(eta, psi, k)  # enforces parity and unit conditions
    m = E.level
    fac_p = factor_ideal(p)
    p_is_prime = len(fac_p) == 1 and fac_p[0][1] == 1
    m_squarefree = all(e == 1 for _P, e in
                       (factor_ideal(m) if m != F.ideal_one() else []))
    hyp = {
        "k_gt_2": k > 2,
        "m_squarefree": m_squarefree,
        "p_prime": p_is_prime,
        "p_coprime_to_m": p.is_coprime(m),
        "newform": E.is_newform,
    }
    within = all(hyp.values())

    Gm = ray_class_group(F, m)
    chi = primitivize(product_character(eta.inverse(), psi, Gm))
    L = hecke_l_value(chi, k).value
    Np = int(p.norm())
    euler = eta.value(p) - psi.value(p) * Fraction(Np) ** k
    X = L * euler
    n_val = _value_field_conductor(eta, psi)
    Xm = X.minimal()
    if n_val % Xm.n != 0:
        from math import lcm

        n_val = lcm(n_val, Xm.n)
        if n_val % 4 == 2:
            n_val //= 2
    try:
        plabel = prime_label(F, p)
    except FieldError:
        plabel = f"norm{int(p.norm())}"
    report = CongruenceReport(
        field_label=F.label,
        eta_label=eta.label(),
        psi_label=psi.label(),
        k=k,
        p_label=plabel,
        hypotheses=hyp,
        within_theorem=within,
        l_value=L,
        euler_factor=euler,
        x_value=X,
        value_conductor=n_val,
        conventions={
            "two_power": "2^-d (degree), per the stated reading of 2^g",
            "degree_condition": "l unramified in O gives [F(zeta_l):F] = l-1, "
                                "so the condition is l >= 5",
            "lambda_ring": "Z[eta, psi] (primes of the cyclotomic value field)",
        },
    )
    if X.is_zero():
        return report

    nrm = _norm_of(X)
    den_lcm = Xm.denominator_lcm()
    candidates = sorted(factorint(abs(nrm.numerator)))
    for l in candidates:
        l_int = den_lcm % l != 0
        flags_common = {
            "l_gt_k_plus_1": l > k + 1,
            "unramified": F.disc % l != 0,
            "degree_ok": l >= 5,
            "l_integral": l_int,
        }
        if n_val > 1 and n_val % l == 0:
            report.candidates.append(CandidateFlags(
                l=l, map_index=-1, ord_positive=False, supported=False,
                note="l ramifies in the value field; not supported", **flags_common))
            continue
        if not l_int:
            report.candidates.append(CandidateFlags(
                l=l, map_index=-1, ord_positive=False,
                note="l-adically non-integral L-ratio", **flags_common))
            continue
        scaled = Xm * den_lcm  # den_lcm is an l-unit here
        for rm in residue_maps_above(l, n_val):
            ordpos = rm.is_zero_image(scaled)
            cf = CandidateFlags(l=l, map_index=rm.index, ord_positive=ordpos,
                                **flags_common)
            report.candidates.append(cf)
            if ordpos:
                report.newform.append(newform_criterion(eta, psi, k, p, rm))
    return report


def newform_criterion(eta: RayClassCharacter, psi: RayClassCharacter, k: int,
                      p: IdealHNF, rm: ResidueMapAboveL) -> NewformFlags:
    """Theorem 5.2 condition (2) flags under one residue map, with the
    level-raising diagnostic quantity."""
    Np = int(p.norm())
    ev, pv = eta.value(p), psi.value(p)
    f_high = ev - pv * Fraction(Np) ** k
    f_low = ev - pv * Fraction(Np) ** (k - 2)
    high0 = rm.is_zero_image(f_high)
    low0 = rm.is_zero_image(f_low)
    case = {(True, True): "AB", (True, False): "A",
            (False, True): "B", (False, False): ""}[(high0, low0)]
    taylor = None
    if high0 or low0:
        c = ev + pv * Fraction(Np) ** (k - 1)
        phi_p = ev * pv
        t = c * c - phi_p * (Fraction(Np) ** (k - 2)) * Fraction(Np + 1) ** 2
        taylor = rm.is_zero_image(t)
    return NewformFlags(l=rm.l, map_index=rm.index,
                        divides_factor_high=high0, divides_factor_low=low0,
                        condition2=high0 or low0, case=case, taylor_zero=taylor)


# --------------------------------------------------------------------------
# verification against eigenform data


@dataclass
class LambdaVerdict:
    zeta_factor_index: int
    theta_factor_index: int
    residue_field_order: int
    passed: bool
    counterexample: tuple | None  # (prime label, lhs repr, rhs repr)
    checked: int


@dataclass
class VerificationReport:
    l: int
    bound: int
    checked_primes: list
    lambdas: list
    notes: list


def _eis_rhs(eta, psi, k, q: IdealHNF) -> CyclotomicNumber:
    return eta.value(q) + psi.value(q) * Fraction(int(q.norm())) ** (k - 1)


def verify_congruence(E: EisensteinSeries, p: IdealHNF, data, l: int,
                      bound: int) -> VerificationReport:
    """Check c(q, f) = eta(q) + psi(q) N(q)^(k-1) mod every Lambda above l in
    the compositum of the coefficient field and Q(eta, psi)."""
    F = E.field
    notes = []
    if data.weight != E.k:
        notes.append(f"weight mismatch: data k={data.weight} vs series k={E.k}")
    level = E.level * p
    if data.level_norm != int(level.norm()):
        notes.append(f"level norm mismatch: data {data.level_norm} vs {int(level.norm())}")
    if data.field_label != F.label:
        raise FieldError("eigenform data is for a different field")

    # primes q with N(q) <= bound, q coprime to m p l
    targets = []
    for q0 in primes_upto(bound):
        for Q in primes_above(F, q0):
            if int(Q.norm()) > bound:
                continue
            if not Q.is_coprime(level):
                continue
            if q0 == l:
                continue
            targets.append(Q)
    targets.sort(key=lambda I: (I.norm(), I.rows))
    missing = [prime_label(F, Q) for Q in targets
               if prime_label(F, Q) not in data.eigenvalues]
    if missing:
        raise IncompleteDataError(missing)

    n_val = _value_field_conductor(E.eta, E.psi)
    if n_val % l == 0 and n_val > 1:
        raise FieldError("l ramifies in the character value field")
    h = data.coefficient_poly  # monic, constant term first
    report = VerificationReport(l=l, bound=bound,
                                checked_primes=[prime_label(F, Q) for Q in targets],
                                lambdas=[], notes=notes)
    for rm in residue_maps_above(l, n_val):
        Kz = rm.codomain
        hbar = [_promote_scalar(Kz, _reduce_frac(c, l)) for c in h]
        for uidx, u in enumerate(poly_factor(Kz, hbar)):
            Klam = QuotientField(Kz, u)
            theta = Klam.gen()
            passed = True
            witness = None
            for Q in targets:
                lab = prime_label(F, Q)
                lhs = Klam.zero
                power = Klam.one
                for c in data.eigenvalues[lab]:
                    cv = _promote_scalar(Klam, _reduce_frac(c, l))
                    lhs = Klam.add(lhs, Klam.mul(cv, power))
                    power = Klam.mul(power, theta)
                rhs = Klam.from_base(rm(_eis_rhs(E.eta, E.psi, E.k, Q)))
                if not Klam.eq(lhs, rhs):
                    passed = False
                    witness = (lab, repr(lhs), repr(rhs))
                    break
            report.lambdas.append(LambdaVerdict(
                zeta_factor_index=rm.index, theta_factor_index=uidx,
                residue_field_order=Klam.order(),
                passed=passed, counterexample=witness, checked=len(targets)))
    return report


def _reduce_frac(c, l: int) -> int:
    c = Fraction(c)
    if c.denominator % l == 0:
        raise ValuationError(f"{c} is not {l}-integral")
    return (c.numerator * pow(c.denominator, -1, l)) % l


def _promote_scalar(K, val: int):
    if isinstance(K, PrimeField):
        return val % K.l
    return K.from_base(_promote_scalar(K.base, val))


def prime_label(F, Q: IdealHNF) -> str:
    """Label '<p>.<index>' in the deterministic primes_above ordering."""
    nm = int(Q.norm())
    p = min(factorint(nm))
    for i, P in enumerate(primes_above(F, p)):
        if P == Q:
            return f"{p}.{i + 1}"
    raise FieldError("prime not found above its characteristic")


def prime_by_label(F, label: str) -> IdealHNF:
    if "." in label:
        ps, idx = label.split(".")
        plist = primes_above(F, int(ps))
        i = int(idx) - 1
        if i < 0 or i >= len(plist):
            raise FieldError(f"no prime with label {label}")
        return plist[i]
    return primes_above(F, int(label))[0]
