import random
from fractions import Fraction

import pytest

from eiscong.characters import (characters_of, product_character,
                                ray_class_group, trivial_character)
from eiscong.cyclotomic import CyclotomicNumber as C
from eiscong.eisenstein import (EisensteinSeries, TableRangeError,
                                constant_term_at_cusp, constant_term_base,
                                constant_term_raised, eis_coefficient,
                                eis_constant_term_infty, enumerate_cusp_data,
                                hecke_apply, level_raise, stabilize)
from eiscong.fields import (FieldError, FieldOrder, construct_cusp_matrix,
                            enumerate_integral_ideals, factor_ideal,
                            primes_above)

from oracles import (classical_constant_term_base,
                     classical_constant_term_raised, sigma_k)


@pytest.fixture(scope="module")
def E12(Q):
    triv = trivial_character(Q)
    return EisensteinSeries(triv, triv, 12)


def test_coefficients_sigma11(Q, E12):
    for n in (1, 2, 6, 10, 36, 97):
        assert eis_coefficient(E12, Q.principal(n)) == sigma_k(11, n)
    assert eis_coefficient(E12, Q.principal(6)) == 362976252


def test_coefficient_unit_ideal(Q, F5, E12):
    assert eis_coefficient(E12, Q.ideal_one()) == 1
    t5 = trivial_character(F5)
    E2 = EisensteinSeries(t5, t5, 2)
    assert eis_coefficient(E2, F5.ideal_one()) == 1
    assert eis_coefficient(E2, F5.principal(2)) == 5


def test_parity_constructor_enforced(Q):
    G = ray_class_group(Q, Q.principal(4))
    odd = next(c for c in characters_of(G) if c.signature == (1,))
    triv = trivial_character(Q)
    with pytest.raises(FieldError):
        EisensteinSeries(triv, odd, 12)  # q + r = 1, k even: parity violated
    E = EisensteinSeries(triv, odd, 13)  # odd weight matches
    assert E.level == Q.principal(4)


def test_multiplicativity_coprime(Q, F5):
    rng = random.Random(3)
    t = trivial_character(Q)
    E = EisensteinSeries(t, t, 4)
    ideals = enumerate_integral_ideals(Q, 60)
    for _ in range(30):
        a, b = rng.choice(ideals), rng.choice(ideals)
        if not a.is_coprime(b):
            continue
        assert E.coefficient(a * b) == E.coefficient(a) * E.coefficient(b)
    t5 = trivial_character(F5)
    E5 = EisensteinSeries(t5, t5, 2)
    ideals5 = enumerate_integral_ideals(F5, 40)
    for _ in range(20):
        a, b = rng.choice(ideals5), rng.choice(ideals5)
        if not a.is_coprime(b):
            continue
        assert E5.coefficient(a * b) == E5.coefficient(a) * E5.coefficient(b)


def test_euler_three_term_recursion(Q, F5):
    for F, k in ((Q, 4), (F5, 2)):
        t = trivial_character(F)
        E = EisensteinSeries(t, t, k)
        phi = E.phi
        for p in (2, 3):
            for P in primes_above(F, p):
                if int(P.norm()) ** 3 > 4000:
                    continue
                NP = Fraction(int(P.norm()))
                for j in (1, 2):
                    lhs = E.coefficient(P ** (j + 1))
                    rhs = E.coefficient(P) * E.coefficient(P**j) \
                        - phi.value(P) * NP ** (k - 1) * E.coefficient(P ** (j - 1))
                    assert lhs == rhs


def test_hecke_identity_operator(Q, E12):
    table = E12.coefficient_table(24)
    t_one = hecke_apply(Q.ideal_one(), table, E12.phi, 12)
    for I in t_one:
        assert t_one.value(I) == table.value(I)


def test_hecke_t2_scales_by_2049(Q, E12):
    table = E12.coefficient_table(24)
    t2 = hecke_apply(Q.principal(2), table, E12.phi, 12)
    for I in t2:
        assert t2.value(I) == table.value(I) * 2049


def test_hecke_out_of_range_is_error(Q, E12):
    table = E12.coefficient_table(10)
    t2 = hecke_apply(Q.principal(2), table, E12.phi, 12)
    with pytest.raises(TableRangeError):
        t2.value(Q.principal(6))  # 6 > 10/2


def test_level_raise_examples(Q, E12):
    table = E12.coefficient_table(20)
    raised = level_raise(table, Q.principal(2))
    assert raised.value(Q.principal(2)) == 1
    assert raised.value(Q.principal(3)).is_zero()
    assert raised.value(Q.principal(4)) == 2049
    # identity and composition
    same = level_raise(table, Q.ideal_one())
    for I in same:
        assert same.value(I) == table.value(I)
    twice = level_raise(level_raise(table, Q.principal(2)), Q.principal(2))
    direct = level_raise(table, Q.principal(4))
    for I in twice:
        assert twice.value(I) == direct.value(I)


def test_stabilize_examples(Q, E12):
    p2 = Q.principal(2)
    S = stabilize(E12, p2, "eta")
    assert S.delta == 1
    assert S.epsilon == 2048
    assert S.coefficient(p2) == 2048
    assert S.coefficient(Q.principal(3)) == E12.coefficient(Q.principal(3))
    Spsi = stabilize(E12, p2, "psi")
    assert Spsi.delta == 2048 and Spsi.epsilon == 1
    assert S.delta + S.epsilon == E12.coefficient(p2)
    with pytest.raises(FieldError):
        stabilize(E12, Q.principal(6), "eta")


def test_stabilized_is_tp_eigenform_at_p(Q, E12):
    # T_p eigenvalue at p equals epsilon, through the Hecke operator at level mp
    p2 = Q.principal(2)
    S = stabilize(E12, p2, "eta")
    table = S.coefficient_table(40)
    phi_mp = product_character(E12.eta, E12.psi,
                               ray_class_group(Q, E12.level * p2))
    tp = hecke_apply(p2, table, phi_mp, 12)
    for I in tp:
        assert tp.value(I) == S.coefficient(I) * S.epsilon


def test_infty_constant_term_examples(Q, F5, E12):
    assert eis_constant_term_infty(E12, 0) == Fraction(691, 65520)
    t5 = trivial_character(F5)
    E2 = EisensteinSeries(t5, t5, 2)
    assert eis_constant_term_infty(E2, 0) == Fraction(1, 120)
    # eta of nontrivial modulus kills the k >= 2 constant term
    G5 = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G5) if c.order == 2)
    Ochar = trivial_character(Q)
    E = EisensteinSeries(leg, leg, 4)
    assert eis_constant_term_infty(E, 0).is_zero()


def test_level_one_cusp_values_match_infty(Q, E12):
    cd = Q.class_data()
    for alpha, gamma in [(0, 1), (1, 1), (1, 2), (2, 3), (-1, 5)]:
        datum = construct_cusp_matrix(Q(alpha), Q(gamma), 0, Q.ideal_one(), cd)
        assert constant_term_base(E12, datum) == Fraction(691, 65520), \
            f"cusp [{alpha}:{gamma}]"


@pytest.mark.parametrize("p", [2, 3])
def test_raised_matches_classical_slash_oracle(Q, E12, p):
    cd = Q.class_data(coprime_to=Q.principal(p))
    pI = Q.principal(p)
    from math import gcd
    for alpha, gamma in [(0, 1), (1, 1), (1, p), (1, 2 * p), (3, p * p),
                         (2, p * p)]:
        if gcd(alpha, gamma) != 1:
            continue
        datum = construct_cusp_matrix(Q(alpha), Q(gamma), 0, pI, cd)
        got = constant_term_raised(E12, datum, pI)
        want = classical_constant_term_raised(12, p, gamma)
        assert got == want, f"cusp [{alpha}:{gamma}], p={p}"
        assert constant_term_base(E12, datum) == classical_constant_term_base(12)


def test_stabilized_linearity_and_vanishing(Q, E12):
    p2 = Q.principal(2)
    cd = Q.class_data(coprime_to=p2)
    S_eta = stabilize(E12, p2, "eta")
    S_psi = stabilize(E12, p2, "psi")
    for alpha, gamma in [(0, 1), (1, 1), (1, 2), (1, 4), (3, 2)]:
        datum = construct_cusp_matrix(Q(alpha), Q(gamma), 0, p2, cd)
        base = constant_term_base(E12, datum)
        raised = constant_term_raised(E12, datum, p2)
        for S in (S_eta, S_psi):
            val = constant_term_at_cusp(S, datum)
            assert val == base - S.delta * raised
        # cor:E vanishing branch: delta = eta(p) and p | n2 gives exactly 0
        if p2.divides(datum.n2):
            assert constant_term_at_cusp(S_eta, datum).is_zero()


def test_cusp_rejections(Q, E12):
    cd = Q.class_data()
    datum = construct_cusp_matrix(Q(0), Q(1), 0, Q.ideal_one(), cd)
    t = trivial_character(Q)
    G4 = ray_class_group(Q, Q.principal(4))
    odd4 = next(c for c in characters_of(G4) if c.signature == (1,))
    E1 = EisensteinSeries(t, odd4, 1)  # parity-valid weight-1 series
    with pytest.raises(FieldError):
        constant_term_base(E1, datum)  # k = 1 rejected at cusps
    with pytest.raises(FieldError):
        construct_cusp_matrix(Q(1), Q(0), 0, Q.ideal_one(), cd)
    # imprimitive psi rejected by the cusp formulas
    G25 = ray_class_group(Q, Q.principal(25))
    from eiscong.characters import induce_character
    G5 = ray_class_group(Q, Q.principal(5))
    leg = next(c for c in characters_of(G5) if c.order == 2)
    lifted = induce_character(leg, G25)
    E_bad = EisensteinSeries(lifted, lifted, 4)
    cd25 = Q.class_data(coprime_to=Q.principal(25))
    datum2 = construct_cusp_matrix(Q(1), Q(1), 0, Q.principal(25), cd25)
    with pytest.raises(FieldError):
        constant_term_base(E_bad, datum2)


def test_sign_convention_toggle(Q):
    # theorem writes sgn(-gamma)^q, the proof sgn(gamma)^q; they differ by
    # exactly (-1)^sum(q)
    G5 = ray_class_group(Q, Q.principal(5))
    odd = next(c for c in characters_of(G5) if c.order == 4)
    E = EisensteinSeries(odd, odd, 4)  # q + r = (1)+(1) = k mod 2
    p3 = Q.principal(3)
    cd = Q.class_data(coprime_to=E.level * p3)
    datum = construct_cusp_matrix(Q(1), Q(5), 0, E.level, cd)
    thm = constant_term_base(E, datum, sign_convention="theorem")
    prf = constant_term_base(E, datum, sign_convention="proof")
    q = odd.signature
    assert thm == prf * ((-1) ** sum(q))


def test_enumerate_cusp_data_covers_divisors(Q):
    level = Q.principal(6)
    cd = Q.class_data(coprime_to=level)
    data = enumerate_cusp_data(Q, level, 0, cd)
    norms = sorted({int(d.n2.norm()) for d in data})
    assert norms == [1, 2, 3, 6]
