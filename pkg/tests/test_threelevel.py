"""End-to-end behavior of the geometric three-level fixture: a nonabelian
operator pair mapped by contraction into the map DGLA of its model, with a
genuinely obstructed deformation problem whose classes die in the target.

The headline numbers (cone cohomology, the (0,1) obstruction class, the
pairing values 0 and 1) were derived by hand from the structure constants
d(c) = e, {e,e} = w, {c,e} = 2·m2, d(m2) = w/2 before being frozen here.
"""

import pytest

from mcpair.artin import curvilinear, power_series_quotient
from mcpair.complexes import (is_quasi_isomorphism, pair_cone,
                              reduce_injective_pair)
from mcpair.dgla import validate_dgla
from mcpair.fields import GF, QQ
from mcpair.fixtures import (f2_pair, graph_corpus, graph_fixture,
                             graph_scaling_diagram, zero_endomorphism_diagram)
from mcpair.homdgla import (abelian_comparison, build_three_level_diagram,
                            semiregularity_pairing)
from mcpair.mc import (McTriple, TensoredPair, enumerate_mc_triples,
                       mc_triple_valid, orbit_partition)
from mcpair.obstructions import (annihilation_check, obstruction_class,
                                 verify_functor_iso)

F3 = GF(3)

_CACHE: dict = {}


def _graph(field=QQ):
    key = getattr(field, "p", 0)
    if key not in _CACHE:
        _CACHE[key] = graph_fixture(field)
    return _CACHE[key]


# --- assembly --------------------------------------------------------------------

def test_fixture_dimensions():
    g = _graph()
    tld = g.diagram
    assert {d: tld.source.L.dim(d) for d in tld.source.L.degrees} == {1: 1, 2: 1}
    assert tld.source.N.space.total_dim == 0
    assert {d: tld.source.M.dim(d) for d in tld.source.M.degrees} == {0: 1, 1: 3, 2: 1}
    assert {d: tld.target.L.dim(d) for d in tld.target.L.degrees} == {
        -2: 1, -1: 8, 0: 24, 1: 31, 2: 17, 3: 3}
    assert {d: tld.target.N.dim(d) for d in tld.target.N.degrees} == {
        -2: 2, -1: 11, 0: 20, 1: 14, 2: 3}


def test_source_is_a_valid_nonabelian_pair():
    g = _graph()
    src = g.diagram.source
    assert validate_dgla(src.M).ok
    from mcpair.fields import vec_is_zero
    assert not vec_is_zero(QQ, src.M.bracket_mono((1, 1), (1, 1)))  # {e,e} = w ≠ 0
    cone = pair_cone(src)
    assert [cone.complex.cohomology_dim(d) for d in range(4)] == [0, 1, 2, 0]


def test_target_cone_h2():
    g = _graph()
    cone = pair_cone(g.diagram.target)
    assert cone.complex.cohomology_dim(2) == 3


def test_ideal_precondition_is_enforced():
    g = _graph()
    # m1 maps 1⊗g into 1⊗b, which survives the restriction to the graph
    with pytest.raises(ValueError, match="does not preserve the ideal"):
        build_three_level_diagram(g.config, g.action,
                                  {1: [(QQ.one, QQ.zero, QQ.zero)]}, {})


def test_annihilation_precondition_is_enforced():
    g = _graph()
    with pytest.raises(ValueError, match="does not annihilate"):
        build_three_level_diagram(g.config, g.action, {},
                                  {1: [(QQ.one, QQ.zero, QQ.zero)]})


def test_char_two_is_rejected():
    with pytest.raises(ValueError, match="needs 1/2"):
        graph_fixture(GF(2))


# --- obstruction classes ------------------------------------------------------------

def test_corpus_first_entry_is_obstructed():
    g = _graph()
    corpus = graph_corpus(QQ)
    xi, ext = corpus[0]
    assert mc_triple_valid(xi, g.pair, ext.A).ok
    cls = obstruction_class(xi, ext, g.pair)
    assert not cls.is_zero()
    assert cls.kernel_labels == ("x^2",)
    assert cls.coordinates == ((QQ.zero, QQ.one),)


def test_corpus_remaining_entries_unobstructed():
    g = _graph()
    for xi, ext in graph_corpus(QQ)[1:]:
        assert obstruction_class(xi, ext, g.pair).is_zero()


def test_annihilation_theorem_on_the_graph_fixture():
    g = _graph()
    tld = g.diagram
    rep = annihilation_check(tld.morphism, graph_corpus(QQ),
                             smooth_via=abelian_comparison(tld))
    assert rep.ok
    assert rep.smoothness == "abelian comparison ∂A-killing inclusion"
    assert len(rep.entries) == 4
    nonzero = [e for e in rep.entries if any(c != QQ.zero for c in e.coordinates)]
    assert len(nonzero) == 1      # the theorem is not vacuous here
    assert all(all(c == QQ.zero for c in e.image) for e in rep.entries)


def test_comparison_pair_is_abelian_and_quasi_isomorphic():
    g = _graph()
    cmp_ = abelian_comparison(g.diagram)
    from mcpair.dgla import is_abelian
    assert is_abelian(cmp_.source.L)
    assert is_abelian(cmp_.source.N)
    assert is_abelian(cmp_.source.M)
    from mcpair.complexes import induced_cone_map
    assert bool(is_quasi_isomorphism(induced_cone_map(cmp_)))


def test_annihilation_requires_certified_smoothness():
    g = _graph()
    # no route offered over the rationals: not abelian, no comparison
    with pytest.raises(ValueError, match="not certified smooth"):
        annihilation_check(g.diagram.morphism, graph_corpus(QQ))


# --- semiregularity pairing ----------------------------------------------------------

def test_pairing_kills_the_obstruction_class():
    g = _graph()
    xi, ext = graph_corpus(QQ)[0]
    cls = obstruction_class(xi, ext, g.diagram.source)
    assert semiregularity_pairing(g.diagram, cls, g.omega) == (QQ.zero,)


def test_pairing_is_nonzero_on_a_non_obstruction_class():
    g = _graph()
    cone = pair_cone(g.diagram.source)
    rep = cone.embed(2, m=(QQ.one, QQ.zero, QQ.zero))   # the class of m1
    assert semiregularity_pairing(g.diagram, rep, g.omega) == QQ.one


def test_pairing_matches_on_an_equivalent_representative():
    g = _graph()
    from fractions import Fraction
    cone = pair_cone(g.diagram.source)
    rep = cone.embed(2, l=(Fraction(1, 2),), m=(QQ.zero, QQ.zero, QQ.one))
    assert semiregularity_pairing(g.diagram, rep, g.omega) == QQ.zero


def test_pairing_rejects_inadmissible_omega():
    g = _graph()
    cone = pair_cone(g.diagram.source)
    rep = cone.embed(2, m=(QQ.one, QQ.zero, QQ.zero))
    with pytest.raises(ValueError, match="ω outside the required subspace"):
        semiregularity_pairing(g.diagram, rep, g.config.model.element("1⊗b"))


def test_pairing_rejects_non_closed_representative():
    g = _graph()
    cone = pair_cone(g.diagram.source)
    with pytest.raises(ValueError, match="not closed"):
        semiregularity_pairing(g.diagram, cone.embed(2, l=(QQ.one,)), g.omega)


def test_pairing_requires_a_trace():
    g = _graph()
    bare = build_three_level_diagram(
        g.config, g.action,
        {1: [(QQ.zero, QQ.one, QQ.zero)], 2: [(QQ.one,)]}, {}, name="bare")
    cone = pair_cone(bare.source)
    with pytest.raises(ValueError, match="no trace functional"):
        semiregularity_pairing(bare, cone.embed(2, m=(QQ.one, QQ.zero, QQ.zero)),
                               g.omega)


# --- the comparison of deformation functors -------------------------------------------

def test_orbit_sets_over_small_algebras():
    g = _graph(F3)
    for n in (2, 3):
        art = power_series_quotient(F3, n)
        ctx = TensoredPair(g.pair, art)
        triples = list(enumerate_mc_triples(g.pair, art, ctx=ctx))
        orbits = orbit_partition(g.pair, art, ctx=ctx)
        assert len(triples) == 3
        assert sorted(len(o) for o in orbits) == [1, 1, 1]


def test_functor_iso_for_scaling_morphisms():
    g = _graph(F3)
    algebras = [power_series_quotient(F3, 2), power_series_quotient(F3, 3)]
    for lam in (F3.one, F3.from_int(2)):
        rep = verify_functor_iso(graph_scaling_diagram(g, lam), algebras)
        assert rep.ok, rep.failures()
        assert len(rep.checks) == 3


def test_functor_iso_negative_control():
    pd = f2_pair(F3)
    rep = verify_functor_iso(zero_endomorphism_diagram(pd),
                             [power_series_quotient(F3, 2)])
    assert not rep.ok
    qi = rep.check("cone map is a quasi-isomorphism")
    assert not qi.ok and "H^1" in qi.witness
    orb = rep.check("orbit bijection over k[t]/(t^2)")
    assert not orb.ok
    assert "not injective on orbits: 3 source orbits, 1 distinct images" == orb.witness


def test_reduction_witness_is_quasi_isomorphism():
    g = _graph(F3)
    red = reduce_injective_pair(g.pair)
    assert bool(is_quasi_isomorphism(red.witness))


def test_scaling_diagram_preserves_mc_solutions():
    from mcpair.mc import tensor_morphism
    g = _graph(F3)
    dm = graph_scaling_diagram(g, F3.from_int(2))
    for xi, e in graph_corpus(F3):
        src_ctx = TensoredPair(dm.source, e.A)
        tgt_ctx = TensoredPair(dm.target, e.A)
        img = McTriple(
            tensor_morphism(dm.on_L, src_ctx.L, tgt_ctx.L).apply(1, xi.x),
            xi.y,
            tensor_morphism(dm.on_M, src_ctx.M, tgt_ctx.M).apply(0, xi.p))
        assert mc_triple_valid(img, dm.target, e.A, ctx=tgt_ctx).ok
