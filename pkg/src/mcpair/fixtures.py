"""Shipped fixture instances.

Everything here is finite, exact, and field-parametrized.  The mutants are
deliberately broken inputs, each violating exactly one validation check, for
exercising the validators; they are not valid algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .artin import SmallExtension, curvilinear, two_variable_extension
from .bicomplex import (
    BigradedAlgebra,
    GraphRestriction,
    ModelConfiguration,
    TensorModel,
    bigraded_from_labels,
    operator_from_labels,
    point_model,
    tensor_model,
)
from .build import dgla_from_labels, morphism_from_labels
from .dgla import Dgla, DglaMorphism, DiagramMorphism, PairDiagram, zero_dgla
from .fields import Field, Matrix, as_scalar
from .homdgla import (
    ContractionAction,
    ThreeLevelDiagram,
    build_three_level_diagram,
    operator_dgla,
)
from .mc import McTriple


def f2_dgla(field: Field) -> Dgla:
    """Two-line algebra: degree 1 span{e}, degree 2 span{f}, d = 0, [e,e] = f."""
    return dgla_from_labels(
        field,
        {1: ["e"], 2: ["f"]},
        brackets={("e", "e"): {"f": 1}},
        name="f2",
    )


def f2_pair(field: Field) -> PairDiagram:
    """The pair with L the two-line algebra, N = 0, and M an abelian copy.

    h = 0 and g = 0; the cone then has H² spanned by the classes of f and of
    the degree-1 generator of M.
    """
    L = f2_dgla(field)
    N = zero_dgla(field)
    M = dgla_from_labels(field, {1: ["e_M"], 2: ["f_M"]}, name="f2-target")
    h = DglaMorphism.zero(L, M, name="h")
    g = DglaMorphism.zero(N, M, name="g")
    return PairDiagram(L, N, M, h, g, name="f2-pair")


def mutant_ill_graded(field: Field) -> Dgla:
    """[e,f] lands in degree 2 instead of 3; only well-formedness breaks."""
    return dgla_from_labels(
        field,
        {1: ["e"], 2: ["f"]},
        brackets={("e", "e"): {"f": 1}, ("e", "f"): {"f": 1}},
        name="mutant-ill-graded",
    )


def mutant_d_squared(field: Field) -> Dgla:
    """d(u) = e, d(e) = f makes d∘d ≠ 0.

    The bracket is left zero: any nonzero bracket meeting the image of d
    would drag the Leibniz check down with it.
    """
    return dgla_from_labels(
        field,
        {0: ["u"], 1: ["e"], 2: ["f"]},
        d={"u": {"e": 1}, "e": {"f": 1}},
        name="mutant-d-squared",
    )


def mutant_antisymmetry(field: Field) -> Dgla:
    """Both orientations of [e,f] set to +w; even-degree pair needs a sign."""
    return dgla_from_labels(
        field,
        {1: ["e"], 2: ["f"], 3: ["w"]},
        brackets={("e", "f"): {"w": 1}, ("f", "e"): {"w": 1}},
        name="mutant-antisymmetry",
    )


def mutant_leibniz(field: Field) -> Dgla:
    """d(e) = f with [u,e] = e, [u,f] = 0: d[u,e] = f but [u,de] = 0."""
    return dgla_from_labels(
        field,
        {0: ["u"], 1: ["e"], 2: ["f"]},
        d={"e": {"f": 1}},
        brackets={("u", "e"): {"e": 1}},
        name="mutant-leibniz",
    )


def mutant_jacobi(field: Field) -> Dgla:
    """Degree-0 triple with [v,w] = u + v breaking the Jacobi identity."""
    return dgla_from_labels(
        field,
        {0: ["u", "v", "w"]},
        brackets={
            ("u", "v"): {"w": 1},
            ("u", "w"): {"v": 1},
            ("v", "w"): {"u": 1, "v": 1},
        },
        name="mutant-jacobi",
    )


def all_mutants(field: Field) -> dict[str, Dgla]:
    """The five broken inputs keyed by the check each one violates."""
    return {
        "well-formed": mutant_ill_graded(field),
        "d squared zero": mutant_d_squared(field),
        "graded antisymmetry": mutant_antisymmetry(field),
        "graded Leibniz": mutant_leibniz(field),
        "graded Jacobi": mutant_jacobi(field),
    }


def abelian_line_dgla(field: Field) -> Dgla:
    """Abelian two-term complex a → b as a DGLA."""
    return dgla_from_labels(
        field,
        {0: ["a"], 1: ["b"]},
        d={"a": {"b": 1}},
        name="abelian-line",
    )


def heisenberg_dgla(field: Field) -> Dgla:
    """Degree-0 Heisenberg Lie algebra: [u,v] = w central."""
    return dgla_from_labels(
        field,
        {0: ["u", "v", "w"]},
        brackets={("u", "v"): {"w": 1}},
        name="heisenberg",
    )


def weight_action_dgla(field: Field) -> Dgla:
    """[u,e] = e: a degree-0 element scaling a degree-1 element."""
    return dgla_from_labels(
        field,
        {0: ["u"], 1: ["e"]},
        brackets={("u", "e"): {"e": 1}},
        name="weight-action",
    )


def f2_identity_pair(field: Field) -> PairDiagram:
    """L = F2-style source, M an isomorphic copy via h, N = 0.

    h is an isomorphism, so this pair is reducible.
    """
    L = f2_dgla(field)
    N = zero_dgla(field)
    M = dgla_from_labels(
        field,
        {1: ["e_M"], 2: ["f_M"]},
        brackets={("e_M", "e_M"): {"f_M": 1}},
        name="f2-copy",
    )
    h = morphism_from_labels(L, M, {"e": {"e_M": 1}, "f": {"f_M": 1}}, name="h")
    g = DglaMorphism.zero(N, M, name="g")
    return PairDiagram(L, N, M, h, g, name="f2-identity-pair")


def mixed_weight_dgla(field: Field) -> Dgla:
    """Heisenberg in degree 0 acting on a degree-1 line: [u,v] = w, [u,e] = e."""
    return dgla_from_labels(
        field,
        {0: ["u", "v", "w"], 1: ["e"]},
        brackets={("u", "v"): {"w": 1}, ("u", "e"): {"e": 1}},
        name="mixed-weight",
    )


def strictly_upper_dgla(field: Field, n: int) -> Dgla:
    """Strictly upper-triangular n×n matrices as a degree-0 Lie algebra.

    Basis E(i,j) for i < j, labels "E{i+1}{j+1}"; bracket is the commutator.
    Nilpotent: words of length ≥ n vanish.
    """
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    labels = {0: [f"E{i + 1}{j + 1}" for i, j in positions]}
    brackets = {}
    for a, (i, j) in enumerate(positions):
        for b, (k, l) in enumerate(positions[a + 1:], start=a + 1):
            entry: dict[str, int] = {}
            if j == k:
                entry[f"E{i + 1}{l + 1}"] = entry.get(f"E{i + 1}{l + 1}", 0) + 1
            if l == i:
                entry[f"E{k + 1}{j + 1}"] = entry.get(f"E{k + 1}{j + 1}", 0) - 1
            entry = {lab: c for lab, c in entry.items() if c}
            if entry:
                brackets[(labels[0][a], labels[0][b])] = entry
    return dgla_from_labels(field, labels, brackets=brackets, name=f"upper-{n}")


def one_line_pair(field: Field) -> PairDiagram:
    """L = N = M = a single abelian line in degree 1, with h = g = id."""
    L = dgla_from_labels(field, {1: ["l"]}, name="line-L")
    N = dgla_from_labels(field, {1: ["n"]}, name="line-N")
    M = dgla_from_labels(field, {1: ["m"]}, name="line-M")
    h = morphism_from_labels(L, M, {"l": {"m": 1}}, name="h")
    g = morphism_from_labels(N, M, {"n": {"m": 1}}, name="g")
    return PairDiagram(L, N, M, h, g, name="one-line-pair")


def abelian_pair(field: Field) -> PairDiagram:
    """Three copies of the abelian two-term complex 0 → 1 with identity maps.

    Small enough to enumerate exhaustively over a prime field, but with
    nontrivial gauge directions in every slot.
    """
    L = dgla_from_labels(field, {0: ["l0"], 1: ["l1"]}, d={"l0": {"l1": 1}}, name="ab-L")
    N = dgla_from_labels(field, {0: ["n0"], 1: ["n1"]}, d={"n0": {"n1": 1}}, name="ab-N")
    M = dgla_from_labels(field, {0: ["m0"], 1: ["m1"]}, d={"m0": {"m1": 1}}, name="ab-M")
    h = morphism_from_labels(L, M, {"l0": {"m0": 1}, "l1": {"m1": 1}}, name="h")
    g = morphism_from_labels(N, M, {"n0": {"m0": 1}, "n1": {"m1": 1}}, name="g")
    return PairDiagram(L, N, M, h, g, name="abelian-pair")


def weighted_f2_dgla(field: Field) -> Dgla:
    """F2 with a degree-0 scaling element: [u,e] = e, [u,f] = 2f, [e,e] = f."""
    return dgla_from_labels(
        field,
        {0: ["u"], 1: ["e"], 2: ["f"]},
        brackets={("e", "e"): {"f": 1}, ("u", "e"): {"e": 1}, ("u", "f"): {"f": 2}},
        name="weighted-f2",
    )


def gauge_line_dgla(field: Field) -> Dgla:
    """F2 plus a gauge direction: d(u) = e1 translates the e1-coordinate.

    Degree 1 is span{e, e1} with [e,e] = f the only bracket, so Maurer-Cartan
    solutions carry a free e1-coefficient that the exponential of u·m shifts.
    """
    return dgla_from_labels(
        field,
        {0: ["u"], 1: ["e", "e1"], 2: ["f"]},
        d={"u": {"e1": 1}},
        brackets={("e", "e"): {"f": 1}},
        name="gauge-line",
    )


def gauge_line_pair(field: Field) -> PairDiagram:
    """gauge_line_dgla as L with N = M = 0: one obstructed direction, one gauge orbit direction."""
    L = gauge_line_dgla(field)
    N = zero_dgla(field, name="0-N")
    M = zero_dgla(field, name="0-M")
    return PairDiagram(L, N, M, DglaMorphism.zero(L, M, name="h"),
                       DglaMorphism.zero(N, M, name="g"), name="gauge-line-pair")


def f2_abelian_pair(field: Field) -> PairDiagram:
    """The f2 pair with the bracket deleted; every slot abelian, so deformations are unobstructed."""
    L = dgla_from_labels(field, {1: ["e"], 2: ["f"]}, name="f2-flat")
    N = zero_dgla(field, name="0-N")
    M = dgla_from_labels(field, {1: ["e_M"], 2: ["f_M"]}, name="f2-target")
    h = DglaMorphism.zero(L, M, name="h")
    g = DglaMorphism.zero(N, M, name="g")
    return PairDiagram(L, N, M, h, g, name="f2-abelian-pair")


def zero_pair(field: Field) -> PairDiagram:
    """All three algebras zero; the initial object among pair diagrams."""
    L = zero_dgla(field, name="0-L")
    N = zero_dgla(field, name="0-N")
    M = zero_dgla(field, name="0-M")
    return PairDiagram(L, N, M, DglaMorphism.zero(L, M, name="h"),
                       DglaMorphism.zero(N, M, name="g"), name="zero-pair")


# -- bidifferential models ----------------------------------------------------


def odd_line_model(field: Field) -> BigradedAlgebra:
    """k[x̄]/(x̄²) with x̄ in bidegree (0,1); zero differentials."""
    return bigraded_from_labels(
        field, {"1": (0, 0), "xb": (0, 1)}, unit="1", name="odd-line"
    )


def del_line_model(field: Field) -> BigradedAlgebra:
    """k[u]/(u²) with u on the ∂ side, bidegree (1,0); zero differentials."""
    return bigraded_from_labels(
        field, {"1": (0, 0), "u": (1, 0)}, unit="1", name="del-line"
    )


def exterior_surface_model(field: Field) -> BigradedAlgebra:
    """Λ[u, v̄] with u in (1,0) and v̄ in (0,1); zero differentials."""
    return bigraded_from_labels(
        field,
        {"1": (0, 0), "u": (1, 0), "vb": (0, 1), "uvb": (1, 1)},
        products={("u", "vb"): {"uvb": 1}},
        unit="1",
        name="exterior-surface",
    )


def square_model(field: Field) -> BigradedAlgebra:
    """One full ∂∂̄-square over a degree-(0,0) generator a.

    ∂a = da, ∂̄a = ab, and the corner dd = ∂∂̄a; every product of non-unit
    elements is zero.  The ∂∂̄-criterion holds: dd spans both sides.
    """
    return bigraded_from_labels(
        field,
        {"1": (0, 0), "a": (0, 0), "da": (1, 0), "ab": (0, 1), "dd": (1, 1)},
        del_map={"a": {"da": 1}, "ab": {"dd": 1}},
        delbar_map={"a": {"ab": 1}, "da": {"dd": -1}},
        unit="1",
        name="square",
    )


def dot_model(field: Field) -> BigradedAlgebra:
    """A lone ∂̄-arrow b → db; a valid model on which the ∂∂̄-criterion
    fails, with witness db (∂̄-exact and ∂-closed, but ∂∂̄ = 0)."""
    return bigraded_from_labels(
        field,
        {"1": (0, 0), "b": (0, 0), "db": (0, 1)},
        delbar_map={"b": {"db": 1}},
        unit="1",
        name="dot",
    )


def no_deldelbar_model(field: Field) -> BigradedAlgebra:
    """Two arrows into one corner from different sides: z = ∂y = ∂̄x.

    z is closed for both differentials and lies in im ∂ + im ∂̄, yet
    ∂∂̄ = 0, so the ∂∂̄-criterion fails with witness exactly z.
    """
    return bigraded_from_labels(
        field,
        {"1": (0, 0), "x": (1, 0), "y": (0, 1), "z": (1, 1)},
        del_map={"y": {"z": 1}},
        delbar_map={"x": {"z": 1}},
        unit="1",
        name="no-deldelbar",
    )


def decorated_square_model(field: Field) -> BigradedAlgebra:
    """The square decorated with a bi-closed generator g in (1,0) and a
    ∂-closed dot b in (0,1); all products of non-unit elements vanish.

    g and b give contraction operators room to act without leaving the
    algebra, while the square keeps the ∂∂̄-criterion nontrivial.
    """
    return bigraded_from_labels(
        field,
        {
            "1": (0, 0),
            "a": (0, 0),
            "g": (1, 0),
            "da": (1, 0),
            "ab": (0, 1),
            "b": (0, 1),
            "dd": (1, 1),
        },
        del_map={"a": {"da": 1}, "ab": {"dd": 1}},
        delbar_map={"a": {"ab": 1}, "da": {"dd": -1}},
        unit="1",
        name="decorated-square",
    )


def product_surface_model(field: Field) -> TensorModel:
    """odd-line ⊗ square: the smallest product model with a ∂∂̄-square."""
    return tensor_model(
        odd_line_model(field), square_model(field), name="product-surface"
    )


def graph_product_model(field: Field) -> TensorModel:
    """odd-line ⊗ decorated-square: the ambient model of the graph fixture."""
    return tensor_model(
        odd_line_model(field), decorated_square_model(field), name="graph-product"
    )


def bicomplex_fixtures(field: Field) -> dict:
    """All shipped models, including the two ∂∂̄-criterion failures."""
    return {
        "point": point_model(field),
        "odd-line": odd_line_model(field),
        "del-line": del_line_model(field),
        "exterior-surface": exterior_surface_model(field),
        "square": square_model(field),
        "dot": dot_model(field),
        "no-deldelbar": no_deldelbar_model(field),
        "decorated-square": decorated_square_model(field),
        "product-surface": product_surface_model(field),
        "graph-product": graph_product_model(field),
    }


# -- configured models --------------------------------------------------------


def _unit_restriction(t: TensorModel, name: str = "constant-graph") -> GraphRestriction:
    """ρ = id ⊗ augmentation: restriction to the graph of the constant map."""
    x, y = t.factor_x, t.factor_y
    by_label = {}
    for la in x.labels:
        for lb in y.labels:
            by_label[t.pair_label(la, lb)] = (
                x.element(la) if lb == y.unit else x.zero_vector()
            )
    rho = Matrix.from_columns(
        t.field, [by_label[lab] for lab in t.labels], nrows=x.dim
    )
    return GraphRestriction(t, rho, name=name)


def _configuration_of(gr: GraphRestriction, name: str) -> ModelConfiguration:
    t = gr.tensor
    x, y = t.factor_x, t.factor_y
    return ModelConfiguration(
        t,
        gr.graph_ideal(),
        [t.p_star(x.element(lab)) for lab in x.labels],
        [t.q_star(y.element(lab)) for lab in y.labels],
        name=name,
    )


def exterior_surface_config(field: Field) -> ModelConfiguration:
    """del-line ⊗ odd-line with the constant graph; everything acyclic."""
    t = tensor_model(del_line_model(field), odd_line_model(field),
                     name="exterior-product")
    return _configuration_of(_unit_restriction(t), "constant-graph")


def product_surface_config(field: Field) -> ModelConfiguration:
    """The product surface with the constant graph as ideal."""
    return _configuration_of(
        _unit_restriction(product_surface_model(field)), "constant-graph"
    )


def graph_restriction(field: Field) -> GraphRestriction:
    """Restriction of the graph product onto its left line.

    The underlying map sends b to x̄ and kills a, g and the square corners:
    the graph of the one isomorphism the decorated square admits onto the
    odd line.
    """
    t = graph_product_model(field)
    x = t.factor_x
    cols = {lab: x.zero_vector() for lab in t.labels}
    cols[t.pair_label("1", "1")] = x.element("1")
    cols[t.pair_label("xb", "1")] = x.element("xb")
    cols[t.pair_label("1", "b")] = x.element("xb")
    rho = Matrix.from_columns(field, [cols[lab] for lab in t.labels], nrows=x.dim)
    return GraphRestriction(t, rho, name="b-graph")


def graph_config(field: Field) -> ModelConfiguration:
    return _configuration_of(graph_restriction(field), "b-graph")


def configured_fixtures(field: Field) -> dict:
    return {
        "graph": graph_config(field),
        "product-surface": product_surface_config(field),
        "exterior": exterior_surface_config(field),
    }


# -- contraction actions ------------------------------------------------------


def derivation_action(field: Field) -> ContractionAction:
    """Contraction by c: da ↦ a on the square; closes on {c, d(c)}."""
    sq = square_model(field)
    c = operator_from_labels(sq, {"da": {"a": 1}})
    return operator_dgla(sq, {0: [c]}, name="square-contraction")


def graph_operators(t: TensorModel) -> dict:
    """The five contraction operators generating the graph fixture's action.

    Each is a bidegree-(−1, j) derivation of the graph product model; the
    derivation law on x̄⊗y = (x̄⊗1)·(1⊗y) pins down every entry below from
    the values on 1⊗y alone.
    """
    c = operator_from_labels(
        t, {"1⊗g": {"1⊗a": -1}, "1⊗dd": {"xb⊗a": 1}, "xb⊗g": {"xb⊗a": 1}}
    )
    e = operator_from_labels(
        t,
        {
            "1⊗g": {"1⊗ab": 1},
            "1⊗da": {"xb⊗a": 1},
            "1⊗dd": {"xb⊗ab": 1},
            "xb⊗g": {"xb⊗ab": 1},
        },
    )
    m1 = operator_from_labels(t, {"1⊗g": {"1⊗b": 1}, "xb⊗g": {"xb⊗b": 1}})
    m2 = operator_from_labels(t, {"1⊗g": {"xb⊗a": 1}})
    w = operator_from_labels(t, {"1⊗g": {"xb⊗ab": 2}})
    return {"c": c, "e": e, "m1": m1, "m2": m2, "w": w}


@dataclass
class GraphFixture:
    """The graph fixture bundle: restriction, configuration, action, diagram.

    The contraction DGLA has basis c in degree 0, (m1, e, m2) in degree 1
    and w in degree 2, with d(c) = e, d(m2) = w/2, {e,e} = w, {c,e} = 2m2
    and all other brackets zero.  L = span{e, w} preserves the graph ideal,
    N = 0, the trace is x̄* ∘ ρ and ω = 1⊗g is the harmonic probe.
    """

    restriction: GraphRestriction
    config: ModelConfiguration
    action: ContractionAction
    operators: dict
    diagram: ThreeLevelDiagram
    omega: tuple
    trace: tuple

    @property
    def model(self) -> TensorModel:
        return self.restriction.tensor

    @property
    def pair(self) -> PairDiagram:
        return self.diagram.source


def graph_fixture(field: Field) -> GraphFixture:
    """Assemble the graph fixture over one field of characteristic ≠ 2.

    The single interesting Maurer-Cartan direction is e: its self-bracket w
    is a coboundary in the ambient contraction DGLA (of m2, which preserves
    the ideal but lies outside L), so obstruction classes of the pair die
    under contraction while the m1-line of H² stays alive and pairs
    nontrivially against ω.
    """
    if field.characteristic == 2:
        raise ValueError("the graph fixture needs 1/2")
    gr = graph_restriction(field)
    t = gr.tensor
    config = _configuration_of(gr, "b-graph")
    ops = graph_operators(t)
    action = operator_dgla(
        t,
        {0: [ops["c"]], 1: [ops["m1"], ops["e"], ops["m2"]], 2: [ops["w"]]},
        name="graph-contraction",
    )
    f = field
    l_vectors = {1: [(f.zero, f.one, f.zero)], 2: [(f.one,)]}
    tr = [f.zero] * t.dim
    tr[t.index["xb⊗1"]] = f.one
    tr[t.index["1⊗b"]] = f.one
    omega = t.element("1⊗g")
    tld = build_three_level_diagram(
        config,
        action,
        l_vectors,
        {},
        name="graph",
        trace=tuple(tr),
        harmonic=(omega,),
    )
    return GraphFixture(gr, config, action, ops, tld, omega, tuple(tr))


def graph_corpus(field: Field) -> list:
    """Maurer-Cartan triples of the graph pair with the extensions probing them.

    The nonzero triples are (e⊗ε, 0, c⊗ε) for a square-zero ε; only the
    first entry (ε = x lifted against x² ≠ 0) is obstructed.
    """
    f = field
    z, o = f.zero, f.one
    return [
        (McTriple((o,), (), (o,)), curvilinear(f, 2)),
        (McTriple((z,), (), (z,)), curvilinear(f, 2)),
        (McTriple((z, o), (), (z, o)), curvilinear(f, 3)),
        (McTriple((o,), (), (o,)), two_variable_extension(f)),
    ]


def graph_scaling_diagram(fx: GraphFixture, lam) -> DiagramMorphism:
    """The pair automorphism scaling c, e, m1 by λ and m2, w by λ²."""
    src = fx.diagram.source
    f = src.M.field
    lam = as_scalar(f, lam)
    lam2 = f.mul(lam, lam)
    on_M = morphism_from_labels(
        src.M,
        src.M,
        {
            "m0#0": {"m0#0": lam},
            "m1#0": {"m1#0": lam},
            "m1#1": {"m1#1": lam},
            "m1#2": {"m1#2": lam2},
            "m2#0": {"m2#0": lam2},
        },
        name=f"scale by {f.format(lam)}",
    )
    on_L = morphism_from_labels(
        src.L,
        src.L,
        {"l1#0": {"l1#0": lam}, "l2#0": {"l2#0": lam2}},
        name="scale L",
    )
    on_N = DglaMorphism.zero(src.N, src.N, name="scale N")
    return DiagramMorphism(src, src, on_L, on_N, on_M,
                           name=f"graph scaling {f.format(lam)}")


def zero_endomorphism_diagram(pd: PairDiagram) -> DiagramMorphism:
    """Crush a pair onto zero; a DGLA morphism, but never a quasi-isomorphism
    unless the cone is acyclic, and never injective on orbit sets with more
    than one orbit."""
    return DiagramMorphism(
        pd,
        pd,
        DglaMorphism.zero(pd.L, pd.L, name="0"),
        DglaMorphism.zero(pd.N, pd.N, name="0"),
        DglaMorphism.zero(pd.M, pd.M, name="0"),
        name="crush",
    )
