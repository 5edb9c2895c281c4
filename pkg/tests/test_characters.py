import random
from fractions import Fraction

import pytest

from eiscong.characters import (characters_of, conductor, evaluate, gauss_sum,
                                induce_character, lattice_coset_reps,
                                numerical_character, primitivize,
                                ray_class_group, sign_power,
                                trivial_character)
from eiscong.cyclotomic import CyclotomicNumber as C
from eiscong.fields import (FieldError, enumerate_integral_ideals,
                            primes_above)


def test_trivial_group_has_trivial_character(Q):
    G = ray_class_group(Q, Q.ideal_one())
    assert G.order == 1
    chars = characters_of(G)
    assert len(chars) == 1
    assert chars[0].signature == (0,)
    assert chars[0].value(Q.principal(7)) == 1


def test_group_mod5_over_Q(Q):
    G = ray_class_group(Q, Q.principal(5))
    assert G.order == 4
    chars = characters_of(G)
    assert len(chars) == 4
    leg = next(c for c in chars if c.order == 2)
    assert leg.signature == (0,)
    assert leg.value(Q.principal(2)) == -1
    assert leg.value(Q.principal(10)).is_zero()
    assert leg.value(Q.principal(4)) == 1


def test_group_trivial_modulus_rq5(F5):
    G = ray_class_group(F5, F5.ideal_one())
    assert G.order == 1


def test_odd_character_mod4(Q):
    G = ray_class_group(Q, Q.principal(4))
    chars = characters_of(G)
    odd = next(c for c in chars if c.order == 2)
    assert odd.signature == (1,)
    assert odd.is_primitive()
    assert numerical_character(odd, Q(-1)) == -1
    assert numerical_character(odd, Q(3)) == -1
    assert numerical_character(odd, Q(1)) == 1


def test_numerical_character_trivial(Q):
    triv = trivial_character(Q)
    assert numerical_character(triv, Q(-1)) == 1


def test_legendre_numerical(Q):
    G = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G) if c.order == 2)
    assert numerical_character(leg, Q(3)) == -1
    assert numerical_character(leg, Q(10)).is_zero()


def test_conductor_examples(Q):
    G5 = ray_class_group(Q, Q.principal(5))
    triv5 = next(c for c in characters_of(G5) if c.order == 1)
    assert conductor(triv5)[0] == Q.ideal_one()
    leg = next(c for c in characters_of(G5) if c.order == 2)
    assert conductor(leg)[0] == Q.principal(5)
    assert leg.is_primitive()
    # order-4 character mod 25 lifted from mod 5 has conductor (5)
    G25 = ray_class_group(Q, Q.principal(25))
    lifted = [c for c in characters_of(G25) if c.order == 4
              and conductor(c)[0] == Q.principal(5)]
    assert lifted, "expected order-4 characters mod 25 of conductor 5"
    for c in lifted:
        assert not c.is_primitive()


def test_lift_then_conductor_idempotent(Q):
    G5 = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G5) if c.order == 2)
    G25 = ray_class_group(Q, Q.principal(25))
    lifted = induce_character(leg, G25)
    assert conductor(lifted)[0] == Q.principal(5)
    back = primitivize(lifted)
    assert back.group is G5 or back.group.modulus == Q.principal(5)
    for p in (2, 3, 7, 11):
        assert back.value(Q.principal(p)) == leg.value(Q.principal(p))


def test_multiplicativity_random_pairs(Q, F5):
    rng = random.Random(11)
    for F in (Q, F5):
        moduli = [I for I in enumerate_integral_ideals(F, 20)
                  if I.norm() > 1][:4]
        for m in moduli:
            G = ray_class_group(F, m)
            ideals = [I for I in enumerate_integral_ideals(F, 40)
                      if I.is_coprime(m) and I.norm() > 1]
            for chi in characters_of(G):
                for _ in range(25):
                    a, b = rng.choice(ideals), rng.choice(ideals)
                    assert chi.value(a * b) == chi.value(a) * chi.value(b)
                cond, _sig = chi.conductor()
                assert cond.divides(m)


def test_orthogonality(Q, F5):
    for F, mnorm in ((Q, 5), (Q, 12), (F5, 4)):
        m = F.principal(mnorm) if F.degree == 1 else F.principal(2)
        G = ray_class_group(F, m)
        for I in enumerate_integral_ideals(F, 30):
            if not I.is_coprime(m):
                continue
            total = C.zero()
            for chi in characters_of(G):
                total = total + chi.value(I)
            expected = G.order if G.ideal_class(I) == G.group.identity else 0
            assert total == expected


def test_gauss_sum_trivial(Q, F5):
    assert gauss_sum(trivial_character(Q)) == 1
    assert gauss_sum(trivial_character(F5)) == 1


def test_gauss_sum_legendre5(Q):
    G = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G) if c.order == 2)
    z = C.root_of_unity(5)
    tau = gauss_sum(leg)
    assert tau == z - z**2 - z**3 + z**4
    assert (tau * tau).minimal() == 5


def test_gauss_identity_small_sweep(Q, F5):
    # tau(psi) tau(psi^-1) = sgn(-1)^r N(b) for primitive psi
    for F, bound in ((Q, 12), (F5, 11)):
        for m in enumerate_integral_ideals(F, bound):
            if m.norm() <= 1:
                continue
            G = ray_class_group(F, m)
            for psi in characters_of(G):
                if not psi.is_primitive():
                    continue
                tau1 = gauss_sum(psi)
                tau2 = gauss_sum(psi.inverse())
                r = psi.signature
                sgn = (-1) ** sum(r)
                assert tau1 * tau2 == C.rational(sgn * m.norm()), \
                    f"failed for {F.label} modulus norm {m.norm()}"


def test_gauss_sum_independent_of_coset_representatives(Q):
    # recompute the defining sum over shifted representatives
    G = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G) if c.order == 2)
    F = Q
    b = G.modulus
    diff = F.different
    L1 = (b * diff).inverse()
    L2 = diff.inverse()
    reps = lattice_coset_reps(L1, L2)
    shift = L2.basis_elements()[0] * 3  # lattice translation
    total = C.zero()
    bd = b * diff
    for x0 in reps:
        x = x0 + shift if not x0.is_zero() else x0 + shift
        ideal = F.principal(x) * bd
        val = leg.value(ideal) if not x.is_zero() else C.zero()
        if val.is_zero():
            continue
        tr = Fraction(x.trace())
        frac = tr - int(tr)
        if frac < 0:
            frac += 1
        total = total + val * C.root_of_unity(frac.denominator, frac.numerator) \
            * sign_power(x, leg.signature)
    assert total == gauss_sum(leg)


def test_character_rejects_zero_ideal(Q):
    triv = trivial_character(Q)
    with pytest.raises(FieldError):
        triv.value(Q.ideal_zero())
