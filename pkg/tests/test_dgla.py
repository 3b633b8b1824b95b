"""DGLA axioms, mutants, morphisms, tensoring, sub and quotient structures."""

import pytest

from mcpair.artin import power_series_quotient, trivial_algebra
from mcpair.build import dgla_from_labels, morphism_from_labels
from mcpair.dgla import (
    Dgla,
    DglaMorphism,
    PairDiagram,
    is_abelian,
    quotient_dgla,
    sub_dgla,
    tensor_with_ideal,
    validate_dgla,
    zero_dgla,
)
from mcpair.fields import GF, QQ
from mcpair.fixtures import (
    abelian_line_dgla,
    all_mutants,
    f2_dgla,
    f2_identity_pair,
    f2_pair,
    heisenberg_dgla,
    weight_action_dgla,
)

CHECK_NAMES = (
    "well-formed",
    "d squared zero",
    "graded antisymmetry",
    "graded Leibniz",
    "graded Jacobi",
)


def test_abelian_dgla_passes_all_checks():
    g = dgla_from_labels(QQ, {0: ["a", "b"], 1: ["c"]}, name="abelian")
    rep = validate_dgla(g)
    assert rep.ok
    assert tuple(c.name for c in rep.checks) == CHECK_NAMES


def test_f2_passes():
    for field in (QQ, GF(5)):
        rep = validate_dgla(f2_dgla(field))
        assert rep.ok, rep.lines()


def test_corpus_dglas_pass():
    for g in (abelian_line_dgla(QQ), heisenberg_dgla(QQ), weight_action_dgla(QQ), zero_dgla(QQ)):
        rep = validate_dgla(g)
        assert rep.ok, (g.name, rep.lines())


def test_each_mutant_fails_exactly_its_check():
    for target, mutant in all_mutants(QQ).items():
        rep = validate_dgla(mutant)
        failed = [c.name for c in rep.failures()]
        assert failed == [target], (mutant.name, failed)


def test_mutant_witnesses():
    reps = {name: validate_dgla(m) for name, m in all_mutants(QQ).items()}
    assert "degree-2 component" in reps["well-formed"].check("well-formed").witness
    assert reps["d squared zero"].check("d squared zero").witness == "d(d(u)) != 0"
    assert reps["graded antisymmetry"].check("graded antisymmetry").witness == "(e,f)"
    assert reps["graded Leibniz"].check("graded Leibniz").witness == "(u,e)"
    assert reps["graded Jacobi"].check("graded Jacobi").witness == "(u,v,w)"


def test_is_abelian():
    assert is_abelian(dgla_from_labels(QQ, {0: ["a"]}, name="point"))
    assert is_abelian(abelian_line_dgla(QQ))
    assert not is_abelian(f2_dgla(QQ))


def test_bracket_antisymmetry_derivation():
    g = weight_action_dgla(QQ)
    # [e,u] derived from stored [u,e] = e with sign −(−1)^{0·1} = −1
    v = g.bracket(1, g.basis_vector((1, 0)), 0, g.basis_vector((0, 0)))
    assert v == (QQ.from_int(-1),)


def test_tensor_with_trivial_ideal_is_zero():
    t = tensor_with_ideal(f2_dgla(QQ), trivial_algebra(QQ))
    assert t.space.total_dim == 0
    assert validate_dgla(t).ok


def test_tensor_f2_with_dual_numbers():
    a = power_series_quotient(QQ, 2)
    t = tensor_with_ideal(f2_dgla(QQ), a)
    assert t.space.labels(1) == ("e.t",)
    assert t.space.labels(2) == ("f.t",)
    # t·t = 0, so [e⊗t, e⊗t] = f⊗t² dies
    et = t.basis_vector((1, 0))
    assert t.bracket(1, et, 1, et) == (QQ.zero,)
    assert is_abelian(t)
    assert validate_dgla(t).ok


def test_tensor_f2_with_cubic_truncation():
    a = power_series_quotient(QQ, 3)
    t = tensor_with_ideal(f2_dgla(QQ), a)
    assert t.space.labels(1) == ("e.t", "e.t^2")
    et = t.basis_vector((1, 0))
    br = t.bracket(1, et, 1, et)
    # [e⊗t, e⊗t] = f⊗t² survives
    assert br == (QQ.zero, QQ.one)
    et2 = t.basis_vector((1, 1))
    assert t.bracket(1, et, 1, et2) == (QQ.zero, QQ.zero)
    assert not is_abelian(t)
    assert validate_dgla(t).ok


def test_tensor_differential_acts_on_first_factor():
    a = power_series_quotient(QQ, 3)
    g = abelian_line_dgla(QQ)
    t = tensor_with_ideal(g, a)
    # d(a⊗t) = b⊗t, d(a⊗t²) = b⊗t²
    assert t.d_apply(0, t.basis_vector((0, 0))) == (QQ.one, QQ.zero)
    assert t.d_apply(0, t.basis_vector((0, 1))) == (QQ.zero, QQ.one)
    assert validate_dgla(t).ok


def test_tensor_rejects_field_mismatch():
    with pytest.raises(ValueError, match="field"):
        tensor_with_ideal(f2_dgla(QQ), power_series_quotient(GF(5), 2))


def test_morphism_preserves_bracket_enforced():
    src = f2_dgla(QQ)
    tgt = dgla_from_labels(QQ, {1: ["e2"], 2: ["f2"]}, name="abelian-target")
    with pytest.raises(ValueError, match="bracket"):
        morphism_from_labels(src, tgt, {"e": {"e2": 1}, "f": {"f2": 1}})


def test_morphism_identity_and_compose():
    g = f2_dgla(QQ)
    ident = DglaMorphism.identity(g)
    twice = ident.compose(ident)
    for deg in g.degrees:
        assert twice.block(deg) == ident.block(deg)


def test_sub_dgla_of_heisenberg():
    h = heisenberg_dgla(QQ)
    vecs = {0: [(QQ.zero, QQ.one, QQ.zero), (QQ.zero, QQ.zero, QQ.one)]}
    sub, incl = sub_dgla(h, vecs, prefix="s")
    assert sub.dim(0) == 2
    assert is_abelian(sub)
    assert validate_dgla(sub).ok
    # inclusion followed by nothing: images span the chosen vectors
    assert incl.apply(0, sub.basis_vector((0, 0))) == (QQ.zero, QQ.one, QQ.zero)


def test_sub_dgla_rejects_unclosed_span():
    h = heisenberg_dgla(QQ)
    vecs = {0: [(QQ.one, QQ.zero, QQ.zero), (QQ.zero, QQ.one, QQ.zero)]}
    with pytest.raises(ValueError, match="not closed"):
        sub_dgla(h, vecs, prefix="s")


def test_quotient_dgla_by_center():
    h = heisenberg_dgla(QQ)
    q, proj = quotient_dgla(h, {0: [(QQ.zero, QQ.zero, QQ.one)]})
    assert q.dim(0) == 2
    assert is_abelian(q)
    assert validate_dgla(q).ok
    assert proj.apply(0, h.basis_vector((0, 2))) == (QQ.zero, QQ.zero)


def test_quotient_dgla_rejects_non_ideal():
    h = heisenberg_dgla(QQ)
    with pytest.raises(ValueError, match="not an ideal"):
        quotient_dgla(h, {0: [(QQ.zero, QQ.one, QQ.zero)]})


def test_pair_diagram_allows_negative_degrees_in_M():
    # deformation data only reads degrees 0..2; a tail below 0 rides along
    M = dgla_from_labels(QQ, {-1: ["m"], 1: ["x"]}, name="tail")
    z = zero_dgla(QQ)
    pd = PairDiagram(z, z, M, DglaMorphism.zero(z, M), DglaMorphism.zero(z, M))
    assert pd.M.dim(-1) == 1 and pd.M.dim(0) == 0


def test_f2_pair_assembles():
    pd = f2_pair(GF(5))
    assert pd.L.dim(1) == 1 and pd.M.dim(2) == 1
    assert pd.N.space.total_dim == 0


def test_diagram_morphism_commutation_matches_cone_map():
    from types import SimpleNamespace

    from mcpair.complexes import induced_cone_map
    from mcpair.dgla import DiagramMorphism
    from mcpair.fields import Matrix

    pd = f2_identity_pair(QQ)
    ident = DiagramMorphism(
        pd, pd,
        on_L=DglaMorphism.identity(pd.L),
        on_N=DglaMorphism.identity(pd.N),
        on_M=DglaMorphism.identity(pd.M),
    )
    cm = induced_cone_map(ident)
    for i in cm.source.degree_range():
        assert cm.block(i) == Matrix.identity(QQ, cm.source.dim(i))

    # scaling L alone cannot commute with an injective h
    two = QQ.from_int(2)
    bad_on_L = DglaMorphism(
        pd.L, pd.L,
        {1: Matrix(QQ, [(two,)]), 2: Matrix(QQ, [(two,)])},
        check=False,
    )
    with pytest.raises(ValueError, match="commute"):
        DiagramMorphism(pd, pd, bad_on_L, DglaMorphism.identity(pd.N),
                        DglaMorphism.identity(pd.M))
    with pytest.raises(ValueError, match="commute"):
        induced_cone_map(SimpleNamespace(
            source=pd, target=pd,
            on_L=bad_on_L, on_N=DglaMorphism.identity(pd.N),
            on_M=DglaMorphism.identity(pd.M),
        ))


def test_dgla_complex_view_checks_d_squared():
    g = dgla_from_labels(
        QQ, {0: ["u"], 1: ["e"], 2: ["f"]},
        d={"u": {"e": 1}, "e": {"f": 1}},
        name="bad-d",
    )
    with pytest.raises(ValueError, match="d∘d"):
        _ = g.complex
