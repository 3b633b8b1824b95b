"""Obstruction classes, lifting, the curvilinear probe, and annihilation.

Class values are frozen from hand computation on the two-line fixtures and
cross-checked against the exhaustive lift search wherever the field is finite.
"""

import random
from fractions import Fraction

import pytest

from mcpair.artin import (ArtinAlgebra, SmallExtension, curvilinear,
                          power_series_quotient, trivial_algebra,
                          two_variable_extension)
from mcpair.build import morphism_from_labels
from mcpair.dgla import DglaMorphism, DiagramMorphism
from mcpair.fields import GF, QQ
from mcpair.fixtures import (abelian_pair, f2_abelian_pair, f2_identity_pair,
                             f2_pair, gauge_line_pair, zero_pair)
from mcpair.mc import (GaugePair, McTriple, TensoredPair, enumerate_mc_triples,
                       gauge_act_pair, mc_triple_valid, orbit_partition)
from mcpair.obstructions import (annihilation_check, curvilinear_probe,
                                 lift_exists_bruteforce, lift_mc_triple,
                                 obstruction_class)
from mcpair.obstructions import verify_functor_iso

F3 = GF(3)
F5 = GF(5)
HALF = Fraction(1, 2)


def triple(x=(), y=(), p=()):
    return McTriple(tuple(x), tuple(y), tuple(p))


# --- the class itself -----------------------------------------------------------

def test_two_line_class_frozen_value():
    # lifting c·e⊗x one order up leaves the defect ½c²[e,e]⊗x²
    pd = f2_pair(QQ)
    ext = curvilinear(QQ, 2)
    for c in (1, 2, -3):
        cls = obstruction_class(triple(x=(Fraction(c),)), ext, pd)
        assert cls.kernel_labels == ("x^2",)
        assert cls.representatives[0] == (HALF * c * c, 0)
        assert cls.coordinates == ((HALF * c * c, 0),)
        assert not cls.is_zero()
    zero_cls = obstruction_class(triple(x=(Fraction(0),)), ext, pd)
    assert zero_cls.is_zero()
    assert zero_cls.coordinates == ((0, 0),)
    assert obstruction_class(triple(x=(Fraction(1),)), ext, pd) != zero_cls


def test_class_zero_iff_bruteforce_lift_exists():
    pd = f2_pair(F5)
    ext = curvilinear(F5, 2)
    for c in range(5):
        xi = triple(x=(F5.from_int(c),))
        cls = obstruction_class(xi, ext, pd)
        assert cls.is_zero() == lift_exists_bruteforce(xi, ext, pd)
        assert cls.is_zero() == (c == 0)
        assert (lift_mc_triple(xi, ext, pd) is not None) == (c == 0)


def test_class_vs_bruteforce_with_gauge_directions():
    pd = gauge_line_pair(F5)
    ext = curvilinear(F5, 2)
    ctx_a = TensoredPair(pd, ext.A)
    triples = enumerate_mc_triples(pd, ext.A, ctx=ctx_a)
    assert len(triples) == 25  # both degree-1 coefficients free at first order
    for xi in triples:
        cls = obstruction_class(xi, ext, pd, ctx_a=ctx_a)
        assert cls.is_zero() == lift_exists_bruteforce(xi, ext, pd, ctx_a=ctx_a)
        assert cls.is_zero() == (xi.x[0] == 0)


def test_abelian_pair_never_obstructed():
    pd = abelian_pair(F5)
    ext = curvilinear(F5, 2)
    ctx_a = TensoredPair(pd, ext.A)
    triples = enumerate_mc_triples(pd, ext.A, ctx=ctx_a)
    assert len(triples) == 25
    for xi in triples:
        assert obstruction_class(xi, ext, pd, ctx_a=ctx_a).is_zero()
        assert lift_exists_bruteforce(xi, ext, pd, ctx_a=ctx_a)
        lifted = lift_mc_triple(xi, ext, pd, ctx_a=ctx_a)
        assert lifted is not None
        # the corrected lift really projects back to xi
        assert tuple(ext.project(lifted.x)) == xi.x
        assert tuple(ext.project(lifted.p)) == xi.p


def test_two_variable_extension_carries_no_obstruction():
    # x² = 0 already in the bigger algebra, so the quadratic defect is gone
    pd = f2_pair(F5)
    ext = two_variable_extension(F5)
    xi = triple(x=(F5.from_int(3),))
    assert obstruction_class(xi, ext, pd).is_zero()
    lifted = lift_mc_triple(xi, ext, pd)
    assert lifted is not None
    assert lifted.x == (3, 0)


def test_multi_generator_kernel_components():
    B = ArtinAlgebra(F5, ["x", "y"], {}, name="k[x,y]/(x,y)^2")
    ext = SmallExtension(B, trivial_algebra(F5), {}, ["x", "y"], name="double")
    pd = f2_pair(F5)
    cls = obstruction_class(triple(), ext, pd)
    assert cls.kernel_labels == ("x", "y")
    assert cls.coordinates == ((0, 0), (0, 0))
    assert cls.is_zero()
    lifted = lift_mc_triple(triple(), ext, pd)
    assert lifted == triple(x=(0, 0))


def test_class_independent_of_lift_choice():
    rng = random.Random(7)
    pd = f2_pair(F5)
    ext = curvilinear(F5, 2)
    ctx_a, ctx_b = TensoredPair(pd, ext.A), TensoredPair(pd, ext.B)
    xi = triple(x=(F5.from_int(2),))
    base = obstruction_class(xi, ext, pd, ctx_a=ctx_a, ctx_b=ctx_b)
    for _ in range(200):
        assert obstruction_class(xi, ext, pd, rng=rng, ctx_a=ctx_a, ctx_b=ctx_b) == base

    pda = abelian_pair(QQ)
    exta = curvilinear(QQ, 2)
    ctx_a, ctx_b = TensoredPair(pda, exta.A), TensoredPair(pda, exta.B)
    xia = triple(x=(Fraction(2),), y=(Fraction(-1),), p=(Fraction(3),))
    assert mc_triple_valid(xia, pda, exta.A, ctx=ctx_a).ok
    base = obstruction_class(xia, exta, pda, ctx_a=ctx_a, ctx_b=ctx_b)
    assert base.is_zero()
    for _ in range(200):
        assert obstruction_class(xia, exta, pda, rng=rng, ctx_a=ctx_a, ctx_b=ctx_b) == base
        lifted = lift_mc_triple(xia, exta, pda, rng=rng, ctx_a=ctx_a, ctx_b=ctx_b)
        assert lifted is not None  # validity is asserted inside


def test_class_constant_on_gauge_orbits():
    pd = gauge_line_pair(F5)
    ext = curvilinear(F5, 2)
    ctx_a = TensoredPair(pd, ext.A)
    orbits = orbit_partition(pd, ext.A, ctx=ctx_a)
    assert sorted(len(o) for o in orbits) == [5, 5, 5, 5, 5]
    for orbit in orbits:
        classes = {obstruction_class(xi, ext, pd, ctx_a=ctx_a) for xi in orbit}
        assert len(classes) == 1

    # and directly through the action
    xi = triple(x=(F5.from_int(2), F5.from_int(1)))
    base = obstruction_class(xi, ext, pd, ctx_a=ctx_a)
    for alpha in range(5):
        moved = gauge_act_pair(GaugePair((F5.from_int(alpha),), ()), xi, pd, ext.A, ctx=ctx_a)
        assert moved.x == (2, (1 - alpha) % 5)
        assert obstruction_class(moved, ext, pd, ctx_a=ctx_a) == base
    assert base != obstruction_class(triple(x=(0, 0)), ext, pd, ctx_a=ctx_a)


def test_non_mc_input_rejected():
    pd = f2_identity_pair(QQ)
    ext = curvilinear(QQ, 2)
    # h is injective and p lives in degree 0 = 0, so x must vanish; x = e⊗t is not MC
    with pytest.raises(ValueError, match="not Maurer-Cartan over the base"):
        obstruction_class(triple(x=(Fraction(1),)), ext, pd)


def test_bruteforce_guards():
    pd = f2_pair(F5)
    ext = curvilinear(F5, 2)
    with pytest.raises(ValueError, match="search-space bound exceeded"):
        lift_exists_bruteforce(triple(x=(F5.from_int(1),)), ext, pd, bound=3)
    pdq = f2_pair(QQ)
    with pytest.raises(ValueError, match="finite field"):
        lift_exists_bruteforce(triple(x=(Fraction(1),)), curvilinear(QQ, 2), pdq)


# --- the curvilinear tower ------------------------------------------------------

def test_probe_reports_first_obstruction_at_order_two():
    pd = f2_pair(QQ)
    res = curvilinear_probe(triple(x=(Fraction(1),)), pd, depth=4)
    assert res.first_obstructed == 2
    assert res.verdicts == (False,)
    assert not res.unobstructed
    assert res.describe() == "first obstruction at order 2"
    assert res.obstructing_class.representatives[0] == (HALF, 0)
    # randomized corrections cannot change the verdict
    res2 = curvilinear_probe(triple(x=(Fraction(1),)), pd, depth=4,
                             rng=random.Random(11))
    assert res2.first_obstructed == 2


def test_probe_unobstructed_fixtures_to_depth_eight():
    pd = abelian_pair(QQ)
    res = curvilinear_probe(triple(x=(Fraction(1),), y=(Fraction(1),), p=(Fraction(0),)),
                            pd, depth=8)
    assert res.unobstructed
    assert res.verdicts == (True,) * 7
    assert res.describe() == "unobstructed to depth 8"

    # drop [e,e] = f and the quadratic defect disappears
    flat = f2_abelian_pair(QQ)
    res = curvilinear_probe(triple(x=(Fraction(1),)), flat, depth=8,
                            rng=random.Random(3))
    assert res.unobstructed


def test_probe_guards():
    pd = f2_pair(QQ)
    with pytest.raises(ValueError, match="capped at 8"):
        curvilinear_probe(triple(x=(Fraction(1),)), pd, depth=9)
    with pytest.raises(ValueError, match="one-variable square-zero"):
        curvilinear_probe(triple(x=(Fraction(1), Fraction(0))), pd, depth=3)
    # over F₃ the stage k[x]/(x³) → k[x]/(x⁴) needs 1/3
    with pytest.raises(ValueError, match="characteristic too small"):
        curvilinear_probe(triple(x=(F3.from_int(1),), y=(F3.from_int(1),), p=(F3.zero,)),
                          abelian_pair(F3), depth=4)


# --- functor comparison ---------------------------------------------------------

def _identity_diagram(pd):
    return DiagramMorphism(pd, pd, DglaMorphism.identity(pd.L),
                           DglaMorphism.identity(pd.N), DglaMorphism.identity(pd.M),
                           name="id")


def test_functor_iso_identity_and_scaling():
    pd = f2_pair(F3)
    algebras = [power_series_quotient(F3, 2), power_series_quotient(F3, 3)]
    report = verify_functor_iso(_identity_diagram(pd), algebras)
    assert report.ok
    assert [c.name for c in report.checks] == [
        "cone map is a quasi-isomorphism",
        "orbit bijection over k[t]/(t^2)",
        "orbit bijection over k[t]/(t^3)",
    ]

    # rescaling e by 2 (and f by 4) is an automorphism of the source line
    pd2 = f2_pair(F3)
    scale = DiagramMorphism(
        pd, pd2,
        morphism_from_labels(pd.L, pd2.L, {"e": {"e": 2}, "f": {"f": 4}}, name="scale"),
        DglaMorphism.zero(pd.N, pd2.N, name="0"),
        morphism_from_labels(pd.M, pd2.M, {"e_M": {"e_M": 1}, "f_M": {"f_M": 1}},
                             name="id"),
        name="rescale",
    )
    assert verify_functor_iso(scale, algebras).ok


def test_functor_iso_negative_control():
    pd = f2_pair(F3)
    crush = DiagramMorphism(pd, pd, DglaMorphism.zero(pd.L, pd.L),
                            DglaMorphism.zero(pd.N, pd.N),
                            DglaMorphism.zero(pd.M, pd.M), name="crush")
    report = verify_functor_iso(crush, [power_series_quotient(F3, 2)])
    assert not report.ok
    qi = report.check("cone map is a quasi-isomorphism")
    assert not qi.ok
    orbit = report.check("orbit bijection over k[t]/(t^2)")
    assert not orbit.ok
    assert "not injective" in orbit.witness


def test_functor_iso_enumeration_guard():
    pd = f2_pair(GF(101))
    with pytest.raises(ValueError, match="enumeration bound exceeded"):
        verify_functor_iso(_identity_diagram(pd),
                           [power_series_quotient(GF(101), 4)], bound=1000)


# --- annihilation through a smooth target ---------------------------------------

def test_annihilation_into_abelian_target():
    pd = f2_pair(F5)
    flat = f2_abelian_pair(F5)
    dm = DiagramMorphism(
        pd, flat,
        morphism_from_labels(pd.L, flat.L, {"e": {"e": 1}}, name="flatten"),
        DglaMorphism.zero(pd.N, flat.N, name="0"),
        morphism_from_labels(pd.M, flat.M, {"e_M": {"e_M": 1}, "f_M": {"f_M": 1}},
                             name="id"),
        name="flatten",
    )
    ext = curvilinear(F5, 2)
    corpus = [(triple(x=(F5.from_int(c),)), ext) for c in range(5)]
    report = annihilation_check(dm, corpus)
    assert report.ok
    assert report.smoothness == "abelian target"
    assert len(report.entries) == 5
    # a genuinely nonzero class still dies in the target
    assert report.entries[1].coordinates == (3, 0)  # ½ = 3 in F₅
    assert report.entries[1].image == (0, 0)
    assert any("abelian target" in line for line in report.lines())


def test_annihilation_exhaustive_smoothness_route():
    pd = f2_identity_pair(F5)
    ext = curvilinear(F5, 2)
    report = annihilation_check(_identity_diagram(pd), [(triple(x=(F5.zero,)), ext)])
    assert report.ok
    assert report.smoothness.startswith("exhaustive")


def test_annihilation_abelian_comparison_route():
    pd = f2_identity_pair(QQ)
    ext = curvilinear(QQ, 2)
    zp = zero_pair(QQ)
    via = DiagramMorphism(zp, pd, DglaMorphism.zero(zp.L, pd.L),
                          DglaMorphism.zero(zp.N, pd.N),
                          DglaMorphism.zero(zp.M, pd.M), name="base-point")
    report = annihilation_check(_identity_diagram(pd),
                                [(triple(x=(Fraction(0),)), ext)], smooth_via=via)
    assert report.ok
    assert "abelian comparison" in report.smoothness


def test_annihilation_rejects_uncertified_target():
    pd = f2_pair(QQ)
    ext = curvilinear(QQ, 2)
    with pytest.raises(ValueError, match="target not certified smooth"):
        annihilation_check(_identity_diagram(pd), [(triple(x=(Fraction(0),)), ext)])

    # a comparison from a non-abelian pair certifies nothing
    pdi = f2_identity_pair(QQ)
    bad_src = f2_pair(QQ)
    bad_via = DiagramMorphism(bad_src, pdi, DglaMorphism.zero(bad_src.L, pdi.L),
                              DglaMorphism.zero(bad_src.N, pdi.N),
                              DglaMorphism.zero(bad_src.M, pdi.M), name="bad")
    with pytest.raises(ValueError, match="not abelian"):
        annihilation_check(_identity_diagram(pdi), [(triple(x=(Fraction(0),)), ext)],
                           smooth_via=bad_via)
