import random
from fractions import Fraction

import pytest

from oracles import leibniz_derivation_dim, leibniz_expansion
from sseqtools.aq import (CoefficientModule, DegreewiseAlgebra, Generator,
                          GradedCommutativePresentation,
                          algebra_hom_parametrization, aq_one, derivations,
                          free_presentation, genus_lift_report,
                          mul_monomials, occurrence_coefficients,
                          trivial_coefficients_on_target)
from sseqtools.errors import InputError

Q = GradedCommutativePresentation([], [])
MQ = trivial_coefficients_on_target(Q, 0)


def dualnumbers():
    return GradedCommutativePresentation(
        [Generator("x", 2)], [{(2,): Fraction(1)}])


def test_presentation_validation():
    with pytest.raises(InputError):
        GradedCommutativePresentation(
            [Generator("x", 2)], [{(1,): Fraction(1), (2,): Fraction(1)}])
    with pytest.raises(InputError):
        GradedCommutativePresentation([Generator("e", 3)], [{(2,): Fraction(1)}])
    with pytest.raises(InputError):
        DegreewiseAlgebra(free_presentation([("u", 0)]))


def test_koszul_products():
    pres = GradedCommutativePresentation(
        [Generator("e", 3), Generator("f", 5), Generator("x", 2)], [])
    gens = pres.generators
    # odd squares vanish
    assert mul_monomials(gens, (1, 0, 0), (1, 0, 0)) is None
    # graded commutativity: f e = - e f
    sign, m = mul_monomials(gens, (0, 1, 0), (1, 0, 0))
    assert (sign, m) == (-1, (1, 1, 0))
    sign, m = mul_monomials(gens, (1, 0, 0), (0, 1, 0))
    assert (sign, m) == (1, (1, 1, 0))
    # even generators are central
    sign, m = mul_monomials(gens, (0, 0, 1), (1, 1, 0))
    assert sign == 1 and m == (1, 1, 1)


def test_universal_derivation_kills_odd_squares():
    # d(e e) = 0 by the Koszul sign, tested through the literal recursion
    pres = GradedCommutativePresentation([Generator("e", 3)], [])
    assert leibniz_expansion(pres, [0, 0], 0) == {}
    # and through the occurrence formula on an even square: d(x^2) = 2x dx
    even = free_presentation([("x", 2)])
    coeff = occurrence_coefficients(even, (2,), 0, 0)
    assert coeff == {(1,): Fraction(2)}


def test_derivations_examples():
    assert derivations(free_presentation([("x", 2)]), MQ, 6) == {-2: 1}
    assert derivations(dualnumbers(), MQ, 6) == {-2: 1}
    assert derivations(Q, MQ, 6) == {}


def test_derivations_match_leibniz_solver():
    rng = random.Random(6)
    presentations = [
        dualnumbers(),
        free_presentation([("x", 2), ("y", 4)]),
        GradedCommutativePresentation(
            [Generator("x", 2), Generator("y", 2)], [{(1, 1): Fraction(1)}]),
        GradedCommutativePresentation(
            [Generator("e", 3), Generator("x", 4)],
            [{(1, 0): Fraction(0), (0, 2): Fraction(1)}]),
        GradedCommutativePresentation(
            [Generator("e", 3), Generator("f", 5), Generator("x", 2)],
            [{(1, 1, 0): Fraction(1)}, {(0, 0, 3): Fraction(2)}]),
    ]
    targets = [
        MQ,
        trivial_coefficients_on_target(Q, 2),
        CoefficientModule(free_presentation([("u", 2)]), {}, 0),
    ]
    for pres in presentations:
        for M in targets:
            ders = derivations(pres, M, 12)
            for d in range(-12, 13):
                assert ders.get(d, 0) == leibniz_derivation_dim(pres, M, d), (pres, d)


def test_derivations_through_nonzero_map():
    # source Q[x_4]/(x^2), target Q[u_2]/(u^4), f(x) = u^2: the constraint
    # 2 f(x) D(x) = 0 bites exactly when u^2 D(x) survives in the target
    src = GradedCommutativePresentation(
        [Generator("x", 4)], [{(2,): Fraction(1)}])
    R = GradedCommutativePresentation(
        [Generator("u", 2)], [{(4,): Fraction(1)}])
    M = CoefficientModule(R, {"x": {(2,): Fraction(1)}}, 0)
    ders = derivations(src, M, 8)
    for d in range(-8, 9):
        assert ders.get(d, 0) == leibniz_derivation_dim(src, M, d)
    # D(x) = u dies (2 u^3 != 0 in R), D(x) = u^2 survives (2 u^4 = 0)
    assert ders.get(-2, 0) == 0
    assert ders.get(0, 0) == 1


def test_bind_rejects_maps_that_keep_relations_alive():
    # f(x) = u does not kill x^2 in the free target, so the module
    # structure is ill defined and binding must fail
    R = free_presentation([("u", 2)])
    with pytest.raises(InputError):
        CoefficientModule(R, {"x": {(1,): Fraction(1)}}, 0).bind(dualnumbers())


def test_aq_one_examples():
    assert aq_one(free_presentation([("x", 2)]), MQ, 8) == {}
    assert aq_one(dualnumbers(), MQ, 8) == {-4: 1}
    xy = GradedCommutativePresentation(
        [Generator("x", 2), Generator("y", 2)], [{(1, 1): Fraction(1)}])
    assert aq_one(xy, MQ, 8) == {-4: 1}


def test_aq_one_free_vanishes_for_many_coefficients():
    rng = random.Random(31)
    frees = [free_presentation([("a", 2)]),
             free_presentation([("a", 2), ("b", 3), ("c", 4), ("d", 7)]),
             free_presentation([("x4", 4), ("x8", 8)])]
    targets = [MQ, trivial_coefficients_on_target(Q, 3),
               CoefficientModule(free_presentation([("u", 2), ("v", 5)]), {}, 1)]
    for pres in frees:
        for M in targets:
            assert aq_one(pres, M, 16) == {}


def test_aq_one_presentation_independence():
    base = dualnumbers()
    redundant = GradedCommutativePresentation(
        [Generator("x", 2)], [{(2,): Fraction(1)}, {(3,): Fraction(2)}])
    b1 = aq_one(base, MQ, 12)
    b2 = aq_one(redundant, MQ, 12)
    guard = redundant.max_relation_degree()
    for d in range(-12, 12 - guard + 1):
        assert b1.get(d, 0) == b2.get(d, 0)
    d1 = derivations(base, MQ, 10)
    d2 = derivations(redundant, MQ, 10)
    assert d1 == d2


def test_aq_one_bound_validation():
    with pytest.raises(InputError):
        aq_one(dualnumbers(), MQ, 2)


def test_hom_parametrization_examples():
    assert algebra_hom_parametrization(
        free_presentation([("a", 4), ("b", 8)]), Q, 10) == [
            ("a", 4, 0), ("b", 8, 0)]
    ysq = GradedCommutativePresentation(
        [Generator("y", 4)], [{(2,): Fraction(1)}])
    assert algebra_hom_parametrization(
        free_presentation([("x", 4)]), ysq, 10) == [("x", 4, 1)]
    assert algebra_hom_parametrization(Q, ysq, 10) == []
    with pytest.raises(InputError):
        algebra_hom_parametrization(dualnumbers(), Q, 10)


def test_genus_report_unique_lift():
    src = free_presentation([("x4", 4), ("x8", 8), ("x12", 12)])
    rep = genus_lift_report(src, Q, {"x4": {}, "x8": {}, "x12": {}}, 12)
    assert not rep.vacuous
    assert rep.exists and rep.unique_up_to_homotopy and rep.homotopy_classes_match
    assert set(rep.obstruction_groups.values()) == {"0"}
    assert len(rep.obstruction_groups) == 13


def test_genus_report_vacuous_branch():
    flagged = GradedCommutativePresentation([], [], pi0="Z/2")
    rep = genus_lift_report(flagged, Q, {}, 8)
    assert rep.vacuous and not rep.exists


def test_genus_report_trivial_source():
    rep = genus_lift_report(Q, Q, {}, 4)
    assert rep.exists and rep.unique_up_to_homotopy


def test_genus_report_rejects_non_free():
    with pytest.raises(InputError):
        genus_lift_report(dualnumbers(), Q, {"x": {}}, 6)


def test_genus_report_nonzero_assignment():
    src = free_presentation([("x4", 4)])
    tgt = free_presentation([("y4", 4)])
    rep = genus_lift_report(src, tgt, {"x4": {(1,): Fraction(3, 2)}}, 8)
    assert rep.exists and rep.generator_images[0]["terms"] == 1
