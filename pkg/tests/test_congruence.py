import random
from fractions import Fraction

import pytest

from eiscong.characters import characters_of, ray_class_group, trivial_character
from eiscong.congruence import (IncompleteDataError, ValuationError,
                                newform_criterion, prime_by_label, prime_label,
                                residue_maps_above, search_congruence_primes,
                                verify_congruence)
from eiscong.cyclotomic import CyclotomicNumber as C
from eiscong.eigenforms import EigenformData
from eiscong.eisenstein import EisensteinSeries
from eiscong.fields import FieldError, FieldOrder, primes_above
from eiscong.numutil import factorint, primes_upto

from oracles import delta_tau_list, sigma_k


def test_residue_maps_examples():
    maps = residue_maps_above(5, 1)
    assert len(maps) == 1
    assert maps[0].reduce_fraction(Fraction(7, 3)) == (7 * pow(3, -1, 5)) % 5
    maps54 = residue_maps_above(5, 4)
    assert len(maps54) == 2 and all(m.residue_degree == 1 for m in maps54)
    maps74 = residue_maps_above(7, 4)
    assert len(maps74) == 1 and maps74[0].residue_degree == 2
    with pytest.raises(FieldError):
        residue_maps_above(5, 10)  # 5 | 10: ramified
    with pytest.raises(ValuationError):
        maps[0].reduce_fraction(Fraction(1, 5))


def test_residue_map_is_ring_hom():
    rng = random.Random(2)
    for (l, n) in ((5, 4), (7, 4), (11, 8), (13, 3)):
        for rm in residue_maps_above(l, n):
            K = rm.codomain
            from eiscong.cyclotomic import euler_phi
            phi = euler_phi(n)
            for _ in range(6):
                a = C(n, [rng.randint(-9, 9) for _ in range(phi)])
                b = C(n, [rng.randint(-9, 9) for _ in range(phi)])
                assert K.eq(rm(a + b), K.add(rm(a), rm(b)))
                assert K.eq(rm(a * b), K.mul(rm(a), rm(b)))


def test_partition_property():
    # l-integral X maps to 0 under some map above l iff l divides the norm numerator
    rng = random.Random(9)
    n = 5
    from eiscong.cyclotomic import euler_phi
    phi = euler_phi(n)
    for _ in range(12):
        x = C(n, [rng.randint(-6, 6) for _ in range(phi)])
        if x.is_zero():
            continue
        nrm = x.norm()
        for l in (7, 11, 13, 19):
            hits = any(rm.is_zero_image(x) for rm in residue_maps_above(l, n))
            divides = nrm.numerator % l == 0
            assert hits == divides, (x, l, nrm)


def test_search_headline(Q):
    triv = trivial_character(Q)
    rep = search_congruence_primes(triv, triv, 12, Q.principal(2))
    assert rep.within_theorem
    assert rep.x_value == Fraction(-691, 8)
    assert rep.candidate_primes() == [691]
    assert rep.newform_possible(691) is False
    nf = [f for f in rep.newform if f.l == 691]
    assert nf and not nf[0].condition2 and nf[0].case == ""


def test_search_rq5_example(F5):
    triv = trivial_character(F5)
    p2 = F5.principal(2)
    rep = search_congruence_primes(triv, triv, 4, p2)
    # X = zeta_F(-3) (1 - N(p)^4) = (1/60)(1 - 256) = -17/4
    assert rep.x_value == Fraction(-255, 60)
    assert rep.candidate_primes() == [17]
    assert rep.within_theorem


def test_search_hypothesis_degradation(Q):
    triv = trivial_character(Q)
    rep = search_congruence_primes(triv, triv, 2, Q.principal(3))
    assert not rep.within_theorem
    assert rep.hypotheses["k_gt_2"] is False


def test_search_galois_stability(Q):
    # applying sigma to (eta, psi) never changes the set of candidate l's
    G5 = ray_class_group(Q, Q.principal(5))
    chi = next(c for c in characters_of(G5) if c.order == 4)
    psi = trivial_character(Q)
    rep1 = search_congruence_primes(chi, psi, 5, Q.principal(2))
    rep3 = search_congruence_primes(chi.galois_twist(3), psi, 5, Q.principal(2))
    ls1 = sorted({c.l for c in rep1.candidates})
    ls3 = sorted({c.l for c in rep3.candidates})
    assert ls1 == ls3


def test_newform_synthetic_cases(Q):
    # whenever Lambda' divides one of the two factors, the Taylor level-raise
    # quantity is 0 under Lambda'
    triv = trivial_character(Q)
    checked_a = checked_b = 0
    for p in (2, 3, 5):
        for k in (4, 6, 8, 12):
            f_high = 1 - Fraction(p) ** k
            f_low = 1 - Fraction(p) ** (k - 2)
            for l in set(factorint(abs(f_high.numerator))) | \
                    set(factorint(abs(f_low.numerator))):
                if l in (2, p):
                    continue
                rm = residue_maps_above(l, 1)[0]
                flags = newform_criterion(triv, triv, k, Q.principal(p), rm)
                if flags.divides_factor_high:
                    checked_a += 1
                    assert flags.taylor_zero is True
                if flags.divides_factor_low:
                    checked_b += 1
                    assert flags.taylor_zero is True
    assert checked_a > 0 and checked_b > 0


def _delta_fixture(Q, bound):
    taus = delta_tau_list(bound)
    eigen = {}
    for p in primes_upto(bound):
        eigen[f"{p}.1"] = [Fraction(taus[p - 1])]
    return EigenformData(
        field_label="rational", level_norm=2, weight=12,
        character_label="trivial",
        coefficient_poly=[Fraction(0), Fraction(1)],
        eigenvalues=eigen, provenance="internal eta-product oracle")


def test_verify_congruence_691_small(Q):
    triv = trivial_character(Q)
    E = EisensteinSeries(triv, triv, 12)
    data = _delta_fixture(Q, 200)
    rep = verify_congruence(E, Q.principal(2), data, 691, 200)
    assert rep.lambdas and all(lv.passed for lv in rep.lambdas)
    # spot values from the spec: tau(2) = -24 = 667, sigma11(2) = 2049 = 667
    assert (-24) % 691 == 2049 % 691 == 667
    assert sigma_k(11, 3) == 252 + 256 * 691


def test_verify_congruence_l5_fails_with_witness(Q):
    triv = trivial_character(Q)
    E = EisensteinSeries(triv, triv, 12)
    data = _delta_fixture(Q, 100)
    rep = verify_congruence(E, Q.principal(2), data, 5, 100)
    assert any(not lv.passed for lv in rep.lambdas)
    witness = next(lv.counterexample for lv in rep.lambdas if not lv.passed)
    # q = 2 divides the level m*p, so the first checked (and failing) prime
    # is 3: tau(3) = 252 = 2, sigma11(3) = 3 mod 5.  The q = 2 arithmetic the
    # spec quotes still holds, just outside the theorem's prime range:
    assert (-24) % 5 == 1 and 2049 % 5 == 4
    assert witness[0] == "3.1"


def test_verify_monotone_in_bound(Q):
    triv = trivial_character(Q)
    E = EisensteinSeries(triv, triv, 12)
    data = _delta_fixture(Q, 300)
    big = verify_congruence(E, Q.principal(2), data, 691, 300)
    small = verify_congruence(E, Q.principal(2), data, 691, 60)
    assert all(lv.passed for lv in big.lambdas)
    assert all(lv.passed for lv in small.lambdas)


def test_verify_incomplete_data(Q):
    triv = trivial_character(Q)
    E = EisensteinSeries(triv, triv, 12)
    data = _delta_fixture(Q, 50)
    del data.eigenvalues["43.1"]
    with pytest.raises(IncompleteDataError) as exc:
        verify_congruence(E, Q.principal(2), data, 691, 50)
    assert "43.1" in exc.value.missing


def test_prime_labels(Q, F5):
    assert prime_label(Q, Q.principal(7)) == "7.1"
    p11a, p11b = primes_above(F5, 11)
    assert prime_label(F5, p11a) == "11.1"
    assert prime_label(F5, p11b) == "11.2"
    assert prime_by_label(F5, "11.2") == p11b
    with pytest.raises(FieldError):
        prime_by_label(F5, "11.3")


def test_modpcuspform_linkage_headline(Q):
    # search flags 691 for (Q, triv, triv, 12, p=2); the E^delta constant
    # terms at level-2p cusps must then die under the 691 residue map
    from eiscong.eisenstein import (constant_term_at_cusp,
                                    enumerate_cusp_data, stabilize)
    triv = trivial_character(Q)
    E = EisensteinSeries(triv, triv, 12)
    p2 = Q.principal(2)
    S = stabilize(E, p2, "eta")
    rm = residue_maps_above(691, 1)[0]
    cd = Q.class_data(coprime_to=p2)
    data = enumerate_cusp_data(Q, p2, 0, cd)
    assert data
    for datum in data:
        val = constant_term_at_cusp(S, datum)
        scaled = val * val.denominator_lcm()
        if val.is_zero():
            continue
        # denominator is 691-free here, so the scaling is a unit
        assert val.denominator_lcm() % 691 != 0
        assert rm.is_zero_image(scaled)
