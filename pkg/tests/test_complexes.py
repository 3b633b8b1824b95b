"""Complexes, cones, quotients, quasi-isomorphism certificates."""

from types import SimpleNamespace

import pytest

from mcpair.build import chain_map_from_labels, complex_from_labels
from mcpair.complexes import (
    ChainMap,
    CochainComplex,
    GradedVectorSpace,
    QuotientComplex,
    induced_cone_map,
    is_quasi_isomorphism,
    mapping_cone,
    pair_cone,
    reduce_injective_pair,
)
from mcpair.fields import GF, QQ, Matrix


def test_cohomology_zero_differential():
    c = complex_from_labels(QQ, {1: ["a", "b"]})
    assert c.cohomology_dim(1) == 2
    assert c.cohomology(1) == [(QQ.one, QQ.zero), (QQ.zero, QQ.one)]


def test_cohomology_isomorphism_differential():
    c = complex_from_labels(QQ, {1: ["a"], 2: ["b"]}, {"a": {"b": 1}})
    assert c.cohomology_dim(1) == 0
    assert c.cohomology_dim(2) == 0


def test_cohomology_outside_support_is_zero():
    c = complex_from_labels(QQ, {0: ["a"]})
    assert c.cohomology(5) == []
    assert c.cohomology_dim(-3) == 0


def test_cohomology_dims_by_rank_nullity():
    c = complex_from_labels(
        QQ,
        {0: ["u1", "u2"], 1: ["v1", "v2"], 2: ["w"]},
        {"u1": {"v1": 1}, "v2": {"w": 1}},
    )
    # ker d0 = <u2>, ker d1 = <v1> = im d0, w = im(v2)
    assert [c.cohomology_dim(i) for i in range(3)] == [1, 0, 0]
    assert c.euler_characteristic() == 1


def test_d_squared_enforced():
    space = GradedVectorSpace({0: ["a"], 1: ["b"], 2: ["c"]})
    d = {0: Matrix(QQ, [(QQ.one,)]), 1: Matrix(QQ, [(QQ.one,)])}
    with pytest.raises(ValueError, match="d∘d"):
        CochainComplex(QQ, space, d)


def test_mapping_cone_zero_map_is_block_diagonal():
    src = complex_from_labels(QQ, {0: ["a"], 1: ["a2"]}, {"a": {"a2": 1}})
    tgt = complex_from_labels(QQ, {0: ["b"], 1: ["b2"]}, {"b": {"b2": 1}})
    cone = mapping_cone(ChainMap.zero(src, tgt))
    assert cone.space.labels(0) == ("A:a",)
    assert cone.space.labels(1) == ("A:a2", "B:b")
    assert cone.space.labels(2) == ("B:b2",)
    # source block unchanged, target block negated, no mixing
    assert cone.differential(0).column(0) == (QQ.one, QQ.zero)
    assert cone.differential(1).rows == ((QQ.zero, -QQ.one),)
    for i in range(-1, 4):
        assert cone.cohomology_dim(i) == src.cohomology_dim(i) + tgt.cohomology_dim(i - 1)


def test_mapping_cone_of_identity_is_acyclic():
    c = complex_from_labels(QQ, {0: ["a"], 1: ["b"]})
    cone = mapping_cone(ChainMap.identity(c))
    for i in range(-1, 4):
        assert cone.cohomology_dim(i) == 0


def test_mapping_cone_of_injection_computes_cokernel_shifted():
    src = complex_from_labels(QQ, {0: ["a"]})
    tgt = complex_from_labels(QQ, {0: ["b1", "b2"]})
    f = chain_map_from_labels(src, tgt, {"a": {"b1": 1}})
    cone = mapping_cone(f)
    coker = QuotientComplex(tgt, {0: [f.block(0).column(0)]})
    # cone^i = src^i ⊕ tgt^{i−1} puts the cokernel one degree up
    for i in range(0, 3):
        assert cone.cohomology_dim(i) == coker.complex.cohomology_dim(i - 1)
    assert cone.cohomology_dim(1) == 1


def _simple_pair():
    L = complex_from_labels(QQ, {0: ["l0"], 1: ["l1"]}, {"l0": {"l1": 1}})
    N = complex_from_labels(QQ, {0: ["n0"]})
    M = complex_from_labels(QQ, {0: ["m0"], 1: ["m1"], 2: ["m2"]}, {"m0": {"m1": 1}})
    h = chain_map_from_labels(L, M, {"l0": {"m0": 1}, "l1": {"m1": 1}})
    g = ChainMap.zero(N, M)
    return SimpleNamespace(L=L, N=N, M=M, h=h, g=g)


def test_pair_cone_zero_diagram():
    z = complex_from_labels(QQ, {})
    zm = ChainMap.zero(z, z)
    pc = pair_cone(SimpleNamespace(L=z, N=z, M=z, h=zm, g=zm))
    assert pc.complex.space.total_dim == 0


def test_pair_cone_one_dimensional_identity_maps():
    L = complex_from_labels(QQ, {1: ["l"]})
    N = complex_from_labels(QQ, {1: ["n"]})
    M = complex_from_labels(QQ, {1: ["m"]})
    h = chain_map_from_labels(L, M, {"l": {"m": 1}})
    g = chain_map_from_labels(N, M, {"n": {"m": 1}})
    pc = pair_cone(SimpleNamespace(L=L, N=N, M=M, h=h, g=g))
    assert pc.dim(1) == 2 and pc.dim(2) == 1
    # D(l,n) = h(l) − g(n) = l − n, kernel is the diagonal
    assert pc.complex.cohomology_dim(1) == 1
    assert pc.complex.cohomology_dim(2) == 0
    rep = pc.complex.cohomology(1)[0]
    assert rep[0] == rep[1]


def test_pair_cone_euler_characteristic_identity():
    pd = _simple_pair()
    pc = pair_cone(pd)
    chi = pd.L.euler_characteristic() + pd.N.euler_characteristic() - pd.M.euler_characteristic()
    assert pc.euler_characteristic() == chi


def test_pair_cone_embed_split_roundtrip():
    pd = _simple_pair()
    pc = pair_cone(pd)
    v = pc.embed(1, l=(QQ.from_int(2),), m=(QQ.from_int(3),))
    l, n, m = pc.split(1, v)
    assert l == (QQ.from_int(2),)
    assert n == ()
    assert m == (QQ.from_int(3),)


def test_induced_cone_map_identity_diagram():
    pd = _simple_pair()
    dm = SimpleNamespace(
        source=pd,
        target=pd,
        on_L=ChainMap.identity(pd.L),
        on_N=ChainMap.identity(pd.N),
        on_M=ChainMap.identity(pd.M),
    )
    cm = induced_cone_map(dm)
    for i in cm.source.degree_range():
        assert cm.block(i) == Matrix.identity(QQ, cm.source.dim(i))


def test_induced_cone_map_zero_diagram():
    pd = _simple_pair()
    dm = SimpleNamespace(
        source=pd,
        target=pd,
        on_L=ChainMap.zero(pd.L, pd.L),
        on_N=ChainMap.zero(pd.N, pd.N),
        on_M=ChainMap.zero(pd.M, pd.M),
    )
    cm = induced_cone_map(dm)
    assert all(m.is_zero() for m in cm.blocks.values())


def test_induced_cone_map_rejects_noncommuting_square():
    pd = _simple_pair()
    bad_on_L = ChainMap(pd.L, pd.L, {0: Matrix(QQ, [(QQ.from_int(2),)])}, check=False)
    dm = SimpleNamespace(
        source=pd,
        target=pd,
        on_L=bad_on_L,
        on_N=ChainMap.identity(pd.N),
        on_M=ChainMap.identity(pd.M),
    )
    with pytest.raises(ValueError, match="does not commute"):
        induced_cone_map(dm)


def test_induced_cone_map_respects_composition():
    pd = _simple_pair()

    def scaling(c: int):
        k = QQ.from_int(c)
        return SimpleNamespace(
            source=pd,
            target=pd,
            on_L=ChainMap(pd.L, pd.L, {i: Matrix.identity(QQ, pd.L.dim(i)).scale(k)
                                       for i in pd.L.space.degrees}, check=False),
            on_N=ChainMap(pd.N, pd.N, {i: Matrix.identity(QQ, pd.N.dim(i)).scale(k)
                                       for i in pd.N.space.degrees}, check=False),
            on_M=ChainMap(pd.M, pd.M, {i: Matrix.identity(QQ, pd.M.dim(i)).scale(k)
                                       for i in pd.M.space.degrees}, check=False),
        )

    m2, m3, m6 = induced_cone_map(scaling(2)), induced_cone_map(scaling(3)), induced_cone_map(scaling(6))
    for i in m6.source.degree_range():
        assert m6.block(i) == m3.block(i) @ m2.block(i)


def test_is_quasi_isomorphism_trivials():
    c = complex_from_labels(GF(5), {0: ["a"], 1: ["b"]})
    assert is_quasi_isomorphism(ChainMap.identity(c)).ok
    cert = is_quasi_isomorphism(ChainMap.zero(c, c))
    assert not cert.ok
    assert not cert
    bad = [dc for dc in cert.degrees if not dc.bijective]
    assert bad and all(dc.rank == 0 for dc in bad)


def test_quotient_complex_projection():
    M = complex_from_labels(QQ, {0: ["m0"], 1: ["m1a", "m1b"]}, {"m0": {"m1a": 1}})
    q = QuotientComplex(M, {1: [(QQ.one, QQ.zero)]})
    assert q.space.labels(1) == ("m1b'",)
    assert q.project(1, (QQ.one, QQ.zero)) == (QQ.zero,)
    assert q.project(1, (QQ.zero, QQ.one)) == (QQ.one,)
    # induced differential is zero since d(m0) died in the quotient
    assert q.complex.differential(0).is_zero()


def test_reduce_injective_pair_with_zero_L():
    z = complex_from_labels(QQ, {})
    N = complex_from_labels(QQ, {0: ["n0"], 1: ["n1"]}, {"n0": {"n1": 1}})
    M = complex_from_labels(QQ, {0: ["m0"], 1: ["m1"]}, {"m0": {"m1": 1}})
    h = ChainMap.zero(z, M)
    g = chain_map_from_labels(N, M, {"n0": {"m0": 1}, "n1": {"m1": 1}})
    pd = SimpleNamespace(L=z, N=N, M=M, h=h, g=g)
    red = reduce_injective_pair(pd)
    assert is_quasi_isomorphism(red.witness).ok
    pc = pair_cone(pd)
    for i in pc.complex.degree_range():
        assert red.cone.dim(i) == pc.dim(i)
    # witness is the identity on N and −1 on the (relabeled) M part
    b1 = red.witness.block(1)
    assert b1.rows[0] == (QQ.one, QQ.zero)
    assert b1.rows[1] == (QQ.zero, -QQ.one)


def test_reduce_injective_pair_with_L_equal_M():
    M = complex_from_labels(QQ, {0: ["m0"]})
    L = complex_from_labels(QQ, {0: ["l0"]})
    N = complex_from_labels(QQ, {0: ["n0"]})
    h = chain_map_from_labels(L, M, {"l0": {"m0": 1}})
    g = chain_map_from_labels(N, M, {"n0": {"m0": 1}})
    pd = SimpleNamespace(L=L, N=N, M=M, h=h, g=g)
    red = reduce_injective_pair(pd)
    # M/L = 0, so the reduced cone is N itself
    for i in (-1, 0, 1):
        assert red.cone.dim(i) == N.dim(i)
        assert red.cone.cohomology_dim(i) == N.cohomology_dim(i)
    assert is_quasi_isomorphism(red.witness).ok


def test_reduce_injective_pair_rejects_noninjective_h():
    L = complex_from_labels(QQ, {0: ["l0"]})
    M = complex_from_labels(QQ, {0: ["m0"]})
    N = complex_from_labels(QQ, {})
    pd = SimpleNamespace(L=L, N=N, M=M, h=ChainMap.zero(L, M), g=ChainMap.zero(N, M))
    with pytest.raises(ValueError, match="not injective"):
        reduce_injective_pair(pd)


def test_cohomology_space_coordinates():
    c = complex_from_labels(QQ, {0: ["a", "b"]})
    h = c.cohomology_space(0)
    assert h.dim == 2
    assert h.coords_of((QQ.from_int(2), QQ.from_int(3))) == (QQ.from_int(2), QQ.from_int(3))
    assert h.is_zero_class((QQ.zero, QQ.zero))

    c2 = complex_from_labels(QQ, {0: ["a"], 1: ["b"]}, {"a": {"b": 1}})
    with pytest.raises(ValueError, match="not a cocycle"):
        c2.cohomology_space(0).coords_of((QQ.one,))
    # b is a coboundary, so its class is zero
    assert c2.cohomology_space(1).is_zero_class((QQ.one,))


def test_euler_characteristic_with_negative_degrees():
    c = complex_from_labels(QQ, {-1: ["x"], 0: ["y"]})
    assert c.euler_characteristic() == 0


def test_chain_map_commutation_enforced():
    src = complex_from_labels(QQ, {0: ["a"], 1: ["b"]}, {"a": {"b": 1}})
    tgt = complex_from_labels(QQ, {0: ["c"], 1: ["d"]}, {"c": {"d": 1}})
    # a ↦ c but b ↦ 0, so the square at degree 0 cannot close
    with pytest.raises(ValueError, match="commute"):
        chain_map_from_labels(src, tgt, {"a": {"c": 1}})
