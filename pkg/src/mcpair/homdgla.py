"""Hom-space DGLAs over a bidifferential model, and contraction actions.

For a model A with differentials ∂, ∂̄ write V = ker ∂ (a ∂̄-complex graded
by total degree) and W = A/∂A (∂̄ descends).  The connecting map
∂̂: W → V, [a] ↦ ∂a, has degree +1 and anticommutes with ∂̄.  Graded maps
V → W of map degree i−1, placed in degree i, form a DGLA under

    δ(f)   = −∂̄∘f − (−1)^{|f|} f∘∂̄
    {f, g} = f∘∂̂∘g − (−1)^{|f||g|} g∘∂̂∘f

with |·| the shifted (DGLA) degree.  δ is a derivation of the associative
product f∘∂̂∘g because ∂̂ anticommutes with both differentials, so the
bracket satisfies graded antisymmetry, Leibniz and Jacobi on the nose.

Bidegree (−1, j) derivations of A act on this picture by contraction:
a ↦ (v ↦ [a(v)]).  Such operators form their own DGLA under −[∂̄, ·] and the
derived bracket [[a, ∂], b], and contraction is a DGLA morphism.  Combining
both sides over a configured product model yields a two-level diagram of
pair diagrams whose induced cone map kills obstruction classes, plus a trace
pairing on degree-2 cone classes against suitable forms ω.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .bicomplex import BigradedAlgebra, ModelConfiguration
from .complexes import CochainComplex, GradedVectorSpace, QuotientComplex, pair_cone
from .dgla import Dgla, DglaMorphism, PairDiagram, DiagramMorphism, sub_dgla
from .fields import (
    Matrix,
    Subspace,
    Vector,
    coordinates,
    kernel_basis,
    vec_is_zero,
)

ElementaryKey = tuple[int, int, int, int]   # (v-degree, v-index, w-degree, w-index)


class DerivedHomDgla:
    """The DGLA of graded maps ker ∂ → A/∂A with the ∂̂-derived bracket.

    Carries the kernel complex V, the quotient complex W, the connecting
    blocks ∂̂, and the DGLA itself on the elementary-map basis
    "v{t}#{i}→{w-label}".  Degree i holds the maps of map degree i−1.
    """

    def __init__(self, model: BigradedAlgebra, v_basis, v_complex, w, dhat,
                 elementary, dgla: Dgla):
        self.model = model
        self.v_basis = v_basis          # total degree → V basis in degree coords
        self.v_complex = v_complex
        self.w = w                      # QuotientComplex of (A, ∂̄) by ∂A
        self.dhat = dhat                # w-degree → Matrix into V one higher
        self.elementary = elementary    # DGLA degree → list[ElementaryKey]
        self.dgla = dgla
        self._position = {
            key: (deg, pos)
            for deg, keys in elementary.items()
            for pos, key in enumerate(keys)
        }

    @property
    def field(self):
        return self.model.field

    def v_dim(self, t: int) -> int:
        return len(self.v_basis.get(t, ()))

    def w_dim(self, s: int) -> int:
        return len(self.w.reps.get(s, ()))

    def v_coordinates(self, t: int, component: Sequence) -> Vector:
        c = coordinates(self.field, self.v_basis.get(t, []), component)
        if c is None:
            raise ValueError(f"vector in total degree {t} is not ∂-closed")
        return c

    def hom_blocks(self, degree: int, coords: Sequence) -> dict[int, Matrix]:
        """Unpack a DGLA element into per-degree matrices V^t → W^{t+degree−1}."""
        f = self.field
        keys = self.elementary.get(degree, [])
        blocks: dict[int, list[list]] = {}
        for t in self.v_basis:
            s = t + degree - 1
            if self.v_dim(t) and self.w_dim(s):
                blocks[t] = [[f.zero] * self.v_dim(t) for _ in range(self.w_dim(s))]
        for c, (t, iv, s, iw) in zip(coords, keys):
            if not f.is_zero(c):
                blocks[t][iw][iv] = c
        return {
            t: Matrix(f, [tuple(r) for r in rows], self.v_dim(t))
            for t, rows in blocks.items()
        }

    def apply(self, degree: int, coords: Sequence, t: int, v: Sequence) -> Vector:
        """Value of the DGLA element on a V^t vector, in W coordinates."""
        f = self.field
        s = t + degree - 1
        out = [f.zero] * self.w_dim(s)
        for c, (tk, iv, sk, iw) in zip(coords, self.elementary.get(degree, [])):
            if tk == t and not f.is_zero(c) and not f.is_zero(v[iv]):
                out[iw] = f.add(out[iw], f.mul(c, v[iv]))
        return tuple(out)

    def contraction_of(self, op: Matrix, degree: int) -> Vector:
        """Coordinates of v ↦ [op(v)] for a bidegree (−1, degree) operator."""
        f = self.field
        m = self.model
        values: dict[ElementaryKey, object] = {}
        for t, basis in self.v_basis.items():
            s = t + degree - 1
            if not self.w_dim(s):
                continue
            for iv, v in enumerate(basis):
                image = op.apply(m.embed_from_degree(v, t))
                cls = self.w.project(s, m.restrict_to_degree(image, s))
                for iw, c in enumerate(cls):
                    if not f.is_zero(c):
                        values[(t, iv, s, iw)] = c
        out = [f.zero] * self.dgla.dim(degree)
        for key, c in values.items():
            deg, pos = self._position[key]
            if deg != degree:
                raise ValueError("operator is not homogeneous of the stated degree")
            out[pos] = c
        return tuple(out)

    def nonnegative(self) -> "DerivedHomDgla":
        """The sub-DGLA in degrees ≥ 0 (closed: degrees add, d raises)."""
        keep = {i: keys for i, keys in self.elementary.items() if i >= 0}
        labels = {i: list(self.dgla.space.labels(i)) for i in keep}
        space = GradedVectorSpace(labels)
        d = {i: self.dgla.differential(i) for i in labels if space.dim(i + 1)}
        table = {
            (ka, kb): ent
            for (ka, kb), ent in self.dgla._table.items()
            if ka[0] >= 0 and kb[0] >= 0
        }
        dgla = Dgla(self.field, space, d, table=table, name=f"{self.dgla.name}≥0")
        return DerivedHomDgla(
            self.model, self.v_basis, self.v_complex, self.w, self.dhat,
            keep, dgla,
        )


def build_derived_hom_dgla(model: BigradedAlgebra, name: Optional[str] = None) -> DerivedHomDgla:
    """Assemble the Hom-space DGLA of a model (∂ = 0 gives an abelian one,
    ∂̄ = 0 gives δ = 0)."""
    f = model.field
    total = model.total_complex()
    degrees = model.total_degrees()

    v_basis: dict[int, list[Vector]] = {}
    for t in degrees:
        if not model.component_indices(t):
            continue
        basis = kernel_basis(model.del_block(t))
        if basis:
            v_basis[t] = basis

    v_labels = {t: [f"v{t}#{i}" for i in range(len(b))] for t, b in v_basis.items()}
    v_diff = {}
    for t, basis in v_basis.items():
        nxt = v_basis.get(t + 1, [])
        cols = []
        for v in basis:
            image = model.delbar_block(t).apply(v)
            if vec_is_zero(f, image):
                cols.append((f.zero,) * len(nxt))
                continue
            c = coordinates(f, nxt, image)
            if c is None:
                raise ValueError("∂̄ does not preserve ker ∂; the model is inconsistent")
            cols.append(c)
        if len(nxt):
            v_diff[t] = Matrix.from_columns(f, cols, nrows=len(nxt))
    v_complex = CochainComplex(f, GradedVectorSpace(v_labels), v_diff)

    boundary = {
        t: [
            c
            for c in model.del_block(t - 1).columns()
            if not vec_is_zero(f, c)
        ]
        for t in degrees
        if model.component_indices(t - 1)
    }
    w = QuotientComplex(total, boundary)

    dhat: dict[int, Matrix] = {}
    for s in degrees:
        reps = w.reps.get(s, [])
        up = v_basis.get(s + 1, [])
        if not reps or not up:
            continue
        cols = []
        for r in reps:
            image = model.del_apply(model.embed_from_degree(r, s))
            comp = model.restrict_to_degree(image, s + 1)
            c = coordinates(f, up, comp)
            if c is None:
                raise ValueError("∂ image escapes ker ∂; the model is inconsistent")
            cols.append(c)
        m = Matrix.from_columns(f, cols, nrows=len(up))
        if not m.is_zero():
            dhat[s] = m

    elementary: dict[int, list[ElementaryKey]] = {}
    labels: dict[int, list[str]] = {}
    w_labels = {s: list(w.space.labels(s)) for s in w.space.degrees}
    lo = min((t for t in v_basis), default=0)
    hi = max((t for t in v_basis), default=0)
    slo = min((s for s in w_labels), default=0)
    shi = max((s for s in w_labels), default=0)
    for i in range(slo - hi + 1, shi - lo + 2):
        keys: list[ElementaryKey] = []
        labs: list[str] = []
        for t in sorted(v_basis):
            s = t + i - 1
            if s not in w_labels:
                continue
            for iv in range(len(v_basis[t])):
                for iw in range(len(w_labels[s])):
                    keys.append((t, iv, s, iw))
                    labs.append(f"{v_labels[t][iv]}→{w_labels[s][iw]}")
        if keys:
            elementary[i] = keys
            labels[i] = labs
    space = GradedVectorSpace(labels)
    position = {
        key: (deg, pos)
        for deg, keys in elementary.items()
        for pos, key in enumerate(keys)
    }

    # pairing[(s, iw)][iv] = coefficient of v{s+1}#{iv} in ∂̂ of rep iw at s
    pairing: dict[tuple[int, int], dict[int, object]] = {}
    for s, m in dhat.items():
        for iw in range(m.ncols):
            col = m.column(iw)
            ent = {iv: c for iv, c in enumerate(col) if not f.is_zero(c)}
            if ent:
                pairing[(s, iw)] = ent

    d_blocks: dict[int, Matrix] = {}
    for i, keys in elementary.items():
        up = elementary.get(i + 1)
        if not up:
            continue
        sign = f.one if i % 2 == 0 else f.neg(f.one)
        cols = []
        for (t, iv, s, iw) in keys:
            col = [f.zero] * len(up)
            dw = w.complex.differential(s)
            for u in range(dw.nrows):
                c = dw.rows[u][iw]
                if not f.is_zero(c):
                    deg, pos = position[(t, iv, s + 1, u)]
                    col[pos] = f.neg(c)
            dv = v_complex.differential(t - 1)
            for vp in range(dv.ncols):
                c = dv.rows[iv][vp] if dv.nrows else f.zero
                if not f.is_zero(c):
                    deg, pos = position[(t - 1, vp, s, iw)]
                    col[pos] = f.sub(col[pos], f.mul(sign, c))
            cols.append(tuple(col))
        m = Matrix.from_columns(f, cols, nrows=len(up))
        if not m.is_zero():
            d_blocks[i] = m

    table: dict[tuple, dict] = {}
    for i, keys_a in elementary.items():
        for j, keys_b in elementary.items():
            if (i + j) not in elementary:
                continue
            sign = f.one if (i * j) % 2 == 0 else f.neg(f.one)
            for pa, (t, iv, s, iw) in enumerate(keys_a):
                for pb, (tp, ivp, sp, iwp) in enumerate(keys_b):
                    ent: dict = {}
                    if t == sp + 1:
                        c1 = pairing.get((sp, iwp), {}).get(iv)
                        if c1 is not None:
                            key = position[(tp, ivp, s, iw)]
                            ent[key] = f.add(ent.get(key, f.zero), c1)
                    if tp == s + 1:
                        c2 = pairing.get((s, iw), {}).get(ivp)
                        if c2 is not None:
                            key = position[(t, iv, sp, iwp)]
                            ent[key] = f.sub(
                                ent.get(key, f.zero), f.mul(sign, c2)
                            )
                    ent = {k: c for k, c in ent.items() if not f.is_zero(c)}
                    if ent:
                        table[((i, pa), (j, pb))] = ent

    dgla = Dgla(f, space, d_blocks, table=table, name=name or f"maps({model.name})")
    return DerivedHomDgla(model, v_basis, v_complex, w, dhat, elementary, dgla)


# -- operators acting on a model ---------------------------------------------


def check_operator_bidegree(model: BigradedAlgebra, op: Matrix, degree: int):
    """Require op(A^{p,q}) ⊂ A^{p−1, q+degree}."""
    f = model.field
    for j, lab in enumerate(model.labels):
        p, q = model.bidegree[lab]
        for i in range(model.dim):
            if f.is_zero(op.rows[i][j]):
                continue
            if model.bidegree[model.labels[i]] != (p - 1, q + degree):
                raise ValueError(
                    f"bidegree contract violated: {lab} of bidegree {(p, q)} is "
                    f"sent into {model.bidegree[model.labels[i]]}, expected "
                    f"{(p - 1, q + degree)}"
                )


def check_derivation(model: BigradedAlgebra, op: Matrix, op_degree: int):
    """Graded Leibniz rule for an operator of total degree op_degree."""
    f = model.field
    for la in model.labels:
        ea = model.element(la)
        sign = f.one
        if (model.total_degree(la) * op_degree) % 2 != 0:
            sign = f.neg(f.one)
        for lb in model.labels:
            eb = model.element(lb)
            lhs = op.apply(model.mul(ea, eb))
            rhs = tuple(
                f.add(x, f.mul(sign, y))
                for x, y in zip(model.mul(op.apply(ea), eb),
                                model.mul(ea, op.apply(eb)))
            )
            if lhs != rhs:
                raise ValueError(f"operator is not a derivation on ({la}, {lb})")


def graded_commutator(f, a: Matrix, dega: int, b: Matrix, degb: int) -> Matrix:
    first = a @ b
    second = b @ a
    if (dega * degb) % 2 == 0:
        return first - second
    return first + second


def operator_d(model: BigradedAlgebra, op: Matrix, degree: int) -> Matrix:
    """−[∂̄, op] for an operator of DGLA degree `degree` (total degree −1)."""
    f = model.field
    return -graded_commutator(f, model.delbar_matrix, 1, op, degree - 1)


def operator_bracket(model: BigradedAlgebra, a: Matrix, dega: int,
                     b: Matrix, degb: int) -> Matrix:
    """Derived bracket [[a, ∂], b] in operator degrees (DGLA degrees given)."""
    f = model.field
    inner = graded_commutator(f, a, dega - 1, model.del_matrix, 1)
    return graded_commutator(f, inner, dega, b, degb - 1)


class ContractionAction:
    """A DGLA whose basis elements act on a model as (−1, j)-derivations."""

    def __init__(self, dgla: Dgla, model: BigradedAlgebra,
                 operators: Mapping[str, Matrix], name: str = "action"):
        self.dgla = dgla
        self.model = model
        self.name = name
        self.operators = dict(operators)
        for deg in dgla.degrees:
            for lab in dgla.space.labels(deg):
                op = self.operators.get(lab)
                if op is None:
                    raise ValueError(f"no operator assigned to {lab!r}")
                if op.nrows != model.dim or op.ncols != model.dim:
                    raise ValueError(f"operator for {lab!r} has the wrong shape")
                check_operator_bidegree(model, op, deg)
                check_derivation(model, op, deg - 1)

    def operator_of(self, degree: int, coords: Sequence) -> Matrix:
        f = self.model.field
        out = Matrix.zero(f, self.model.dim, self.model.dim)
        for lab, c in zip(self.dgla.space.labels(degree), coords):
            if not f.is_zero(c):
                out = out + self.operators[lab].scale(c)
        return out


def operator_dgla(model: BigradedAlgebra,
                  generators: Mapping[int, Sequence[Matrix]],
                  prefix: str = "m", name: str = "operators") -> ContractionAction:
    """Close (−1, j)-derivations under −[∂̄, ·] and the derived bracket.

    The closure must consist of pairwise graded-commuting operators (in their
    total degrees); that is what makes the derived bracket antisymmetric and
    Jacobi in the shifted degrees, and it is asserted here.
    """
    f = model.field
    n2 = model.dim * model.dim

    def flat(m: Matrix) -> Vector:
        return tuple(c for row in m.rows for c in row)

    spans: dict[int, Subspace] = {}
    mats: dict[int, list[Matrix]] = {}

    def insert(deg: int, m: Matrix) -> bool:
        if m.is_zero():
            return False
        check_operator_bidegree(model, m, deg)
        check_derivation(model, m, deg - 1)
        span = spans.setdefault(deg, Subspace(f, n2))
        if span.insert(flat(m)):
            mats.setdefault(deg, []).append(m)
            return True
        return False

    for deg, ops in generators.items():
        for op in ops:
            insert(deg, op)
    grew = True
    while grew:
        grew = False
        snapshot = [(deg, m) for deg, ms in mats.items() for m in ms]
        for deg, m in snapshot:
            if insert(deg + 1, operator_d(model, m, deg)):
                grew = True
        for dega, ma in snapshot:
            for degb, mb in snapshot:
                if insert(dega + degb, operator_bracket(model, ma, dega, mb, degb)):
                    grew = True

    flat_ops = [(deg, m) for deg, ms in sorted(mats.items()) for m in ms]
    for x, (dega, ma) in enumerate(flat_ops):
        for degb, mb in flat_ops[x:]:
            if not graded_commutator(f, ma, dega - 1, mb, degb - 1).is_zero():
                raise ValueError(
                    f"operators do not pairwise graded-commute in degrees "
                    f"({dega}, {degb}); the derived bracket is not a DGLA bracket here"
                )

    labels = {deg: [f"{prefix}{deg}#{i}" for i in range(len(ms))]
              for deg, ms in sorted(mats.items())}
    space = GradedVectorSpace(labels)

    def coords_of(deg: int, m: Matrix) -> Vector:
        if m.is_zero():
            return (f.zero,) * space.dim(deg)
        span = spans.get(deg)
        if span is None or not span.contains(flat(m)):
            raise ValueError(f"operator family is not closed in degree {deg}")
        c = coordinates(f, [flat(x) for x in mats[deg]], flat(m))
        assert c is not None
        return c

    d_blocks = {}
    for deg, ms in mats.items():
        if not space.dim(deg + 1):
            continue
        cols = [coords_of(deg + 1, operator_d(model, m, deg)) for m in ms]
        mat = Matrix.from_columns(f, cols, nrows=space.dim(deg + 1))
        if not mat.is_zero():
            d_blocks[deg] = mat
    table = {}
    for dega, msa in mats.items():
        for degb, msb in mats.items():
            if not space.dim(dega + degb):
                continue
            for i, ma in enumerate(msa):
                for j, mb in enumerate(msb):
                    br = operator_bracket(model, ma, dega, mb, degb)
                    if br.is_zero():
                        continue
                    c = coords_of(dega + degb, br)
                    ent = {(dega + degb, k): x for k, x in enumerate(c)
                           if not f.is_zero(x)}
                    if ent:
                        table[((dega, i), (degb, j))] = ent

    dgla = Dgla(f, space, d_blocks, table=table, name=name)
    operators = {
        lab: mats[deg][i]
        for deg, labs in labels.items()
        for i, lab in enumerate(labs)
    }
    return ContractionAction(dgla, model, operators, name=name)


def operator_coordinates(action: ContractionAction, degree: int, op: Matrix) -> Vector:
    """Coordinates of an operator in the action's basis at one degree."""
    f = action.dgla.field
    labs = action.dgla.space.labels(degree)
    if not labs:
        raise ValueError(f"action {action.name} has no degree-{degree} operators")
    cols = [
        tuple(c for row in action.operators[lab].rows for c in row) for lab in labs
    ]
    goal = tuple(c for row in op.rows for c in row)
    coords = coordinates(f, cols, goal)
    if coords is None:
        raise ValueError(
            f"operator is outside the degree-{degree} span of {action.name}"
        )
    return coords


def contraction_morphism(action: ContractionAction, hom: DerivedHomDgla) -> DglaMorphism:
    """The DGLA morphism a ↦ (v ↦ [a(v)]); d- and bracket-compatibility are
    verified exhaustively on basis pairs at construction."""
    if action.model is not hom.model:
        raise ValueError("action and Hom DGLA live over different models")
    f = action.model.field
    blocks = {}
    for deg in action.dgla.degrees:
        cols = [
            hom.contraction_of(action.operators[lab], deg)
            for lab in action.dgla.space.labels(deg)
        ]
        blocks[deg] = Matrix.from_columns(f, cols, nrows=hom.dgla.dim(deg))
    return DglaMorphism(action.dgla, hom.dgla, blocks, name="contraction", check=True)


# -- map subspaces cut out by source/target conditions ------------------------


def maps_sending(hom: DerivedHomDgla,
                 sources: Mapping[int, Sequence[Sequence]],
                 targets: Optional[Mapping[int, Sequence[Sequence]]] = None,
                 ) -> dict[int, list[Vector]]:
    """Per-degree bases of {f | f(source vectors) ⊂ span(targets)}.

    Sources are V-coordinate vectors per total degree; targets are
    W-coordinate spanning vectors per total degree (absent degree = zero).
    """
    f = hom.field
    out: dict[int, list[Vector]] = {}
    target_spans: dict[int, Subspace] = {}
    for s, vecs in (targets or {}).items():
        target_spans[s] = Subspace(f, hom.w_dim(s), vecs)
    for i in hom.dgla.degrees:
        keys = hom.elementary.get(i, [])
        if not keys:
            continue
        rows: list[Vector] = []
        for t, vecs in sources.items():
            s = t + i - 1
            ws = hom.w_dim(s)
            if not ws or hom.v_dim(t) == 0:
                continue
            span = target_spans.get(s)
            if span is not None and span.dim == ws:
                continue
            reduced = []
            for iw in range(ws):
                e = [f.zero] * ws
                e[iw] = f.one
                reduced.append(span.reduce(e) if span is not None else tuple(e))
            for u in vecs:
                for c in range(ws):
                    row = []
                    for (tk, iv, sk, iw) in keys:
                        if tk == t:
                            row.append(f.mul(u[iv], reduced[iw][c]))
                        else:
                            row.append(f.zero)
                    rows.append(tuple(row))
        if not rows:
            out[i] = [
                tuple(f.one if k == j else f.zero for k in range(len(keys)))
                for j in range(len(keys))
            ]
            continue
        m = Matrix(f, rows, len(keys))
        out[i] = kernel_basis(m)
    return {i: vecs for i, vecs in out.items() if vecs}


def _component_coords(hom: DerivedHomDgla, vectors: Sequence[Sequence]
                      ) -> dict[int, list[Vector]]:
    """Homogeneous components of ambient vectors, in V coordinates."""
    model = hom.model
    f = model.field
    out: dict[int, list[Vector]] = {}
    for v in vectors:
        for t in model.total_degrees():
            comp = model.restrict_to_degree(v, t)
            if vec_is_zero(f, comp) or not hom.v_dim(t):
                continue
            out.setdefault(t, []).append(hom.v_coordinates(t, comp))
    return out


def _component_classes(hom: DerivedHomDgla, vectors: Sequence[Sequence]
                       ) -> dict[int, list[Vector]]:
    """Homogeneous components of ambient vectors, as W classes."""
    model = hom.model
    f = model.field
    out: dict[int, list[Vector]] = {}
    for v in vectors:
        for t in model.total_degrees():
            comp = model.restrict_to_degree(v, t)
            if vec_is_zero(f, comp) or not hom.w_dim(t):
                continue
            out.setdefault(t, []).append(hom.w.project(t, comp))
    return out


# -- three-level diagrams -----------------------------------------------------


@dataclass
class ThreeLevelDiagram:
    """A geometric pair of operator DGLAs mapped by contraction into the
    corresponding pair of map DGLAs over a configured model."""

    config: ModelConfiguration
    action: ContractionAction
    hom: DerivedHomDgla
    source: PairDiagram
    target: PairDiagram
    morphism: DiagramMorphism
    trace: Optional[Vector] = None
    harmonic: tuple = ()


def build_three_level_diagram(config: ModelConfiguration,
                              action: ContractionAction,
                              l_vectors: Mapping[int, Sequence[Sequence]],
                              n_vectors: Mapping[int, Sequence[Sequence]],
                              name: str = "three-level",
                              trace: Optional[Sequence] = None,
                              harmonic: Sequence[Sequence] = (),
                              ) -> ThreeLevelDiagram:
    """Assemble both pair diagrams and the contraction between them.

    The sub-DGLA spanned by l_vectors must preserve the configured ideal and
    the one spanned by n_vectors must annihilate the designated right-factor
    subalgebra; violations raise with the offending operator and element.
    """
    model = config.model
    if action.model is not model:
        raise ValueError("action does not act on the configured model")
    f = model.field

    L, hL = sub_dgla(action.dgla, l_vectors, "l", name="L")
    N, gN = sub_dgla(action.dgla, n_vectors, "n", name="N")
    for sub, incl, kind in ((L, hL, "ideal"), (N, gN, "subalgebra")):
        for deg in sub.degrees:
            for pos, lab in enumerate(sub.space.labels(deg)):
                op = action.operator_of(deg, incl.block(deg).column(pos))
                if kind == "ideal":
                    for w_vec in config.ideal.basis():
                        image = op.apply(w_vec)
                        if not vec_is_zero(f, image) and not config.ideal.contains(image):
                            raise ValueError(
                                f"precondition violated: contraction by {lab} does "
                                f"not preserve the ideal on {model.format_element(w_vec)}"
                            )
                else:
                    for w_vec in config.q_sub.basis():
                        if not vec_is_zero(f, op.apply(w_vec)):
                            raise ValueError(
                                f"precondition violated: contraction by {lab} does "
                                f"not annihilate {model.format_element(w_vec)}"
                            )
    source = PairDiagram(L, N, action.dgla, hL, gN, name=f"{name} source")

    # the full map DGLA, negative degrees included: the comparison with the
    # ∂A-killing sub-pair is a degreewise quasi-isomorphism only without
    # truncation, and the extra degrees cost nothing downstream
    hom = build_derived_hom_dgla(model)
    k_sources = _component_coords(hom, config.ideal_intersect_kernel())
    k_targets = _component_classes(hom, config.ideal.basis())
    k_vectors = maps_sending(hom, k_sources, k_targets)
    K, hK = sub_dgla(hom.dgla, k_vectors, "k", name="K")

    j_sources = _component_coords(hom, config.kernel_intersect_q())
    j_vectors = maps_sending(hom, j_sources, None)
    J, gJ = sub_dgla(hom.dgla, j_vectors, "j", name="J")
    target = PairDiagram(K, J, hom.dgla, hK, gJ, name=f"{name} target")

    on_M = contraction_morphism(action, hom)
    on_L = _corestrict(L, on_M.compose(hL), K, hK, "ideal-preserving maps")
    on_N = _corestrict(N, on_M.compose(gN), J, gJ, "annihilating maps")
    morphism = DiagramMorphism(source, target, on_L, on_N, on_M, name="contraction")
    return ThreeLevelDiagram(config, action, hom, source, target, morphism,
                             trace=tuple(trace) if trace is not None else None,
                             harmonic=tuple(tuple(h) for h in harmonic))


def _corestrict(source_dgla: Dgla, composite: DglaMorphism, sub: Dgla,
                incl: DglaMorphism, into: str) -> DglaMorphism:
    """Factor a morphism through a sub-DGLA inclusion."""
    f = source_dgla.field
    blocks = {}
    for deg in source_dgla.degrees:
        cols = []
        for pos in range(source_dgla.dim(deg)):
            v = composite.block(deg).column(pos)
            c = coordinates(f, incl.block(deg).columns(), v) if sub.dim(deg) else None
            if c is None and not vec_is_zero(f, v):
                raise ValueError(
                    f"contraction image does not land in the {into}"
                )
            cols.append(c if c is not None else (f.zero,) * sub.dim(deg))
        blocks[deg] = Matrix.from_columns(f, cols, nrows=sub.dim(deg))
    return DglaMorphism(source_dgla, sub, blocks, name=f"into {sub.name}", check=False)


def abelian_comparison(tld: ThreeLevelDiagram) -> DiagramMorphism:
    """Inclusion of the maps killing ∂A, an abelian sub-pair of the target.

    Suitable as a smoothness certificate when its induced cone map is a
    quasi-isomorphism, which the annihilation check verifies.
    """
    hom = tld.hom
    model = tld.config.model
    f = model.field
    boundary: dict[int, list[Vector]] = {}
    for t in model.total_degrees():
        if not hom.v_dim(t):
            continue
        vecs = []
        for c in model.del_block(t - 1).columns() if model.component_indices(t - 1) else []:
            if not vec_is_zero(f, c):
                vecs.append(hom.v_coordinates(t, c))
        if vecs:
            boundary[t] = vecs
    h_prime = maps_sending(hom, boundary, None)
    H = tld.target.M
    Hp, inclH = sub_dgla(H, h_prime, "h'", name="H'")
    Kp, inclK = _sub_through(tld.target.L, tld.target.h, Hp, inclH, "k'", "K'")
    Jp, inclJ = _sub_through(tld.target.N, tld.target.g, Hp, inclH, "j'", "J'")
    hp = _corestrict(Kp, tld.target.h.compose(inclK), Hp, inclH, "∂A-killing maps")
    gp = _corestrict(Jp, tld.target.g.compose(inclJ), Hp, inclH, "∂A-killing maps")
    pair = PairDiagram(Kp, Jp, Hp, hp, gp, name="∂A-killing sub-pair")
    return DiagramMorphism(pair, tld.target, inclK, inclJ, inclH,
                           name="∂A-killing inclusion")


def _sub_through(parent: Dgla, into_h: DglaMorphism, Hp: Dgla,
                 inclH: DglaMorphism, prefix: str, name: str):
    """Sub-DGLA of `parent` whose image under into_h lies in the subspace
    spanned by inclH's columns."""
    f = parent.field
    vectors: dict[int, list[Vector]] = {}
    for deg in parent.degrees:
        n = parent.dim(deg)
        if n == 0:
            continue
        sub_cols = inclH.block(deg).columns() if Hp.dim(deg) else []
        parent_cols = [into_h.block(deg).column(i) for i in range(n)]
        ambient = into_h.target.dim(deg)
        stacked = Matrix.from_columns(
            f, parent_cols + [tuple(f.neg(c) for c in col) for col in sub_cols],
            nrows=ambient,
        )
        found = []
        for k in kernel_basis(stacked):
            coeff = k[:n]
            if not vec_is_zero(f, coeff):
                found.append(coeff)
        if found:
            vectors[deg] = found
    return sub_dgla(parent, vectors, prefix, name=name)


# -- the trace pairing on degree-2 cone classes -------------------------------


def semiregularity_pairing(tld: ThreeLevelDiagram, cls, omega: Sequence,
                           trace: Optional[Sequence] = None):
    """Pair a degree-2 class of the source pair cone against a form ω.

    ω must lie in the ideal, in ker ∂ ∩ ker ∂̄, and in the designated
    right-factor subalgebra; the value is trace(a(ω)) for the operator a
    given by the M-component of the representative.  Independence of the
    representative is asserted for this ω on every degree-1 cone basis vector.
    """
    config, action = tld.config, tld.action
    model = config.model
    f = model.field
    tr = tuple(trace) if trace is not None else tld.trace
    if tr is None:
        raise ValueError("no trace functional supplied")
    if (not config.ideal.contains(omega)
            or not vec_is_zero(f, model.del_apply(omega))
            or not vec_is_zero(f, model.delbar_apply(omega))
            or not config.q_sub.contains(omega)):
        raise ValueError("ω outside the required subspace")

    cone = pair_cone(tld.source)

    def value_of(vec: Sequence):
        _, _, m_part = cone.split(2, vec)
        op = action.operator_of(1, m_part)
        image = op.apply(omega)
        out = f.zero
        for c, x in zip(tr, image):
            out = f.add(out, f.mul(c, x))
        return out

    d1 = cone.complex.differential(1)
    for j in range(d1.ncols):
        if not f.is_zero(value_of(d1.column(j))):
            raise ValueError(
                "pairing is not representative-independent for this ω"
            )

    def check_closed(vec: Sequence):
        if not vec_is_zero(f, cone.complex.differential(2).apply(vec)):
            raise ValueError("class representative is not closed")

    if hasattr(cls, "representatives"):
        values = []
        for rep in cls.representatives:
            check_closed(rep)
            values.append(value_of(rep))
        return tuple(values)
    check_closed(cls)
    return value_of(cls)
