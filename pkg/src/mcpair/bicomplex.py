"""Finite bidifferential graded-commutative algebras.

A model is a finite-dimensional bigraded commutative algebra carrying two
anticommuting square-zero differentials ∂ (bidegree (1,0)) and ∂̄ (bidegree
(0,1)).  Products and differentials are stored as exact structure constants;
all five algebra axioms are checked by validate_bicomplex with witnesses.

The module also provides product models with designated factor images, the
∂∂̄-criterion (ker ∂ ∩ ker ∂̄ ∩ (im ∂ + im ∂̄) = im ∂∂̄), acyclicity of
∂̄-stable subspaces, configurations (ideal, factor subalgebras, quotient) and
the pullback/contraction compatibility check on a product model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .complexes import DEGREE_WINDOW, CochainComplex, GradedVectorSpace
from .fields import (
    Field,
    Matrix,
    Subspace,
    Vector,
    as_scalar,
    coordinates,
    kernel_basis,
    quotient_representatives,
    vec_is_zero,
)
from .report import ReportBuilder, ValidationReport

Bidegree = tuple[int, int]


class BigradedAlgebra:
    """Basis labels with bidegrees, a commutative product, and ∂, ∂̄.

    Construction enforces shapes only (bidegree bookkeeping); the algebra
    axioms are the business of validate_bicomplex, so deliberately broken
    tables can be represented and then caught.  Product entries are stored
    for the orientations given; a missing orientation is derived by graded
    commutativity of the total degree.
    """

    def __init__(
        self,
        field: Field,
        labels: Mapping[str, Bidegree],
        products: Optional[Mapping[tuple[str, str], Mapping[str, object]]] = None,
        del_map: Optional[Mapping[str, Mapping[str, object]]] = None,
        delbar_map: Optional[Mapping[str, Mapping[str, object]]] = None,
        unit: Optional[str] = None,
        name: str = "model",
    ):
        self.field = field
        self.name = name
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis label")
        self.bidegree = {lab: (int(p), int(q)) for lab, (p, q) in labels.items()}
        for lab, (p, q) in self.bidegree.items():
            if not (DEGREE_WINDOW[0] <= p + q <= DEGREE_WINDOW[1]):
                raise ValueError(
                    f"total degree {p + q} of {lab!r} outside supported window {DEGREE_WINDOW}"
                )
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.dim = len(self.labels)
        if unit is not None and unit not in self.index:
            raise ValueError(f"unit label {unit!r} is not a basis label")
        self.unit = unit

        table: dict[tuple[int, int], dict[int, object]] = {}
        for (la, lb), val in (products or {}).items():
            ia, ib = self._need(la), self._need(lb)
            pa, pb = self.bidegree[la], self.bidegree[lb]
            want = (pa[0] + pb[0], pa[1] + pb[1])
            ent = {}
            for lc, c in val.items():
                ic = self._need(lc)
                if self.bidegree[lc] != want:
                    raise ValueError(
                        f"product {la}·{lb} has a component {lc} of bidegree "
                        f"{self.bidegree[lc]}, expected {want}"
                    )
                cc = as_scalar(field, c)
                if not field.is_zero(cc):
                    ent[ic] = cc
            table[(ia, ib)] = ent
        self._products = table

        self.del_matrix = self._differential_matrix(del_map or {}, (1, 0), "∂")
        self.delbar_matrix = self._differential_matrix(delbar_map or {}, (0, 1), "∂̄")
        self._total: Optional[CochainComplex] = None

    def _need(self, lab: str) -> int:
        try:
            return self.index[lab]
        except KeyError:
            raise KeyError(f"unknown basis label {lab!r}") from None

    def _differential_matrix(self, entries, shift: Bidegree, symbol: str) -> Matrix:
        f = self.field
        rows = [[f.zero] * self.dim for _ in range(self.dim)]
        for src, targets in entries.items():
            j = self._need(src)
            p, q = self.bidegree[src]
            want = (p + shift[0], q + shift[1])
            for dst, c in targets.items():
                i = self._need(dst)
                if self.bidegree[dst] != want:
                    raise ValueError(
                        f"{symbol}({src}) has a component {dst} of bidegree "
                        f"{self.bidegree[dst]}, expected {want}"
                    )
                rows[i][j] = as_scalar(f, c)
        return Matrix(f, [tuple(r) for r in rows], self.dim)

    # -- degrees ------------------------------------------------------------

    def total_degree(self, lab: str) -> int:
        p, q = self.bidegree[lab]
        return p + q

    def bidegrees(self) -> tuple[Bidegree, ...]:
        return tuple(sorted(set(self.bidegree.values())))

    def total_degrees(self) -> tuple[int, ...]:
        return tuple(sorted({p + q for p, q in self.bidegree.values()}))

    def component_indices(self, key) -> list[int]:
        """Global indices of the (p,q) component, or of a total degree."""
        if isinstance(key, tuple):
            return [i for i, lab in enumerate(self.labels) if self.bidegree[lab] == key]
        return [i for i, lab in enumerate(self.labels) if self.total_degree(lab) == key]

    # -- elements -----------------------------------------------------------

    def zero_vector(self) -> Vector:
        return (self.field.zero,) * self.dim

    def element(self, lab: str) -> Vector:
        i = self._need(lab)
        return tuple(
            self.field.one if j == i else self.field.zero for j in range(self.dim)
        )

    def combine(self, terms: Mapping[str, object]) -> Vector:
        f = self.field
        out = [f.zero] * self.dim
        for lab, c in terms.items():
            out[self._need(lab)] = f.add(out[self._need(lab)], as_scalar(f, c))
        return tuple(out)

    def format_element(self, v: Sequence) -> str:
        f = self.field
        parts = [
            f"{f.format(c)}·{self.labels[i]}"
            for i, c in enumerate(v)
            if not f.is_zero(c)
        ]
        return " + ".join(parts) if parts else "0"

    # -- structure ----------------------------------------------------------

    def product_entry(self, ia: int, ib: int) -> Mapping[int, object]:
        """Structure constants of basis(ia)·basis(ib), derived if needed."""
        ent = self._products.get((ia, ib))
        if ent is not None:
            return ent
        opp = self._products.get((ib, ia))
        if opp is not None:
            f = self.field
            ta = self.total_degree(self.labels[ia])
            tb = self.total_degree(self.labels[ib])
            if (ta * tb) % 2 == 0:
                return opp
            return {k: f.neg(c) for k, c in opp.items()}
        return {}

    def mul(self, va: Sequence, vb: Sequence) -> Vector:
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(va):
            if f.is_zero(a):
                continue
            for j, b in enumerate(vb):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in self.product_entry(i, j).items():
                    out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def del_apply(self, v: Sequence) -> Vector:
        return self.del_matrix.apply(v)

    def delbar_apply(self, v: Sequence) -> Vector:
        return self.delbar_matrix.apply(v)

    def one(self) -> Vector:
        if self.unit is None:
            raise ValueError(f"model {self.name} has no designated unit")
        return self.element(self.unit)

    # -- views --------------------------------------------------------------

    def total_space(self) -> GradedVectorSpace:
        by_degree: dict[int, list[str]] = {}
        for lab in self.labels:
            by_degree.setdefault(self.total_degree(lab), []).append(lab)
        return GradedVectorSpace(by_degree)

    def delbar_block(self, t: int) -> Matrix:
        """∂̄ restricted to total degree t → t+1, in component coordinates."""
        return self._block(self.delbar_matrix, t)

    def del_block(self, t: int) -> Matrix:
        return self._block(self.del_matrix, t)

    def _block(self, m: Matrix, t: int) -> Matrix:
        src = self.component_indices(t)
        dst = self.component_indices(t + 1)
        return Matrix(
            self.field, [tuple(m.rows[i][j] for j in src) for i in dst], len(src)
        )

    def total_complex(self) -> CochainComplex:
        """(A, ∂̄) graded by total degree.  Requires ∂̄∘∂̄ = 0."""
        if self._total is None:
            space = self.total_space()
            d = {t: self.delbar_block(t) for t in self.total_degrees()}
            self._total = CochainComplex(self.field, space, d)
        return self._total

    def restrict_to_degree(self, v: Sequence, t: int) -> Vector:
        return tuple(v[i] for i in self.component_indices(t))

    def embed_from_degree(self, comp: Sequence, t: int) -> Vector:
        f = self.field
        out = [f.zero] * self.dim
        for pos, i in enumerate(self.component_indices(t)):
            out[i] = comp[pos]
        return tuple(out)

    def __repr__(self):
        return f"BigradedAlgebra({self.name}, dim {self.dim})"


def validate_bicomplex(a: BigradedAlgebra) -> ValidationReport:
    """Five checks: ∂² = 0, ∂̄² = 0, anticommutation, Leibniz, commutativity."""
    f = a.field
    rb = ReportBuilder(f"bicomplex {a.name}")

    def first_bad(m: Matrix) -> Optional[str]:
        for j in range(m.ncols):
            if not vec_is_zero(f, m.column(j)):
                return a.labels[j]
        return None

    bad = first_bad(a.del_matrix @ a.del_matrix)
    rb.add("∂ squared zero", bad is None, bad and f"∂(∂({bad})) ≠ 0")

    bad = first_bad(a.delbar_matrix @ a.delbar_matrix)
    rb.add("∂̄ squared zero", bad is None, bad and f"∂̄(∂̄({bad})) ≠ 0")

    anti = a.del_matrix @ a.delbar_matrix + a.delbar_matrix @ a.del_matrix
    bad = first_bad(anti)
    rb.add("differentials anticommute", bad is None, bad and f"(∂∂̄ + ∂̄∂)({bad}) ≠ 0")

    ok, wit = True, None
    for symbol, m in (("∂", a.del_matrix), ("∂̄", a.delbar_matrix)):
        if not ok:
            break
        for la in a.labels:
            if not ok:
                break
            ea = a.element(la)
            da = m.apply(ea)
            sign = f.one if a.total_degree(la) % 2 == 0 else f.neg(f.one)
            for lb in a.labels:
                eb = a.element(lb)
                lhs = m.apply(a.mul(ea, eb))
                rhs = tuple(
                    f.add(x, f.mul(sign, y))
                    for x, y in zip(a.mul(da, eb), a.mul(ea, m.apply(eb)))
                )
                if lhs != rhs:
                    ok, wit = False, f"{symbol}({la}·{lb}) breaks the Leibniz rule"
                    break
    rb.add("graded Leibniz", ok, wit)

    ok, wit = True, None
    for (ia, ib), ent in a._products.items():
        opp = a._products.get((ib, ia))
        if opp is None:
            continue
        la, lb = a.labels[ia], a.labels[ib]
        even = (a.total_degree(la) * a.total_degree(lb)) % 2 == 0
        for k in set(ent) | set(opp):
            lc = ent.get(k, f.zero)
            rc = opp.get(k, f.zero)
            s = f.sub(lc, rc) if even else f.add(lc, rc)
            if not f.is_zero(s):
                ok, wit = False, f"({la},{lb})"
                break
        if not ok:
            break
    rb.add("graded commutativity", ok, wit)
    return rb.build()


def bigraded_from_labels(
    field: Field,
    labels: Mapping[str, Bidegree],
    products: Optional[Mapping[tuple[str, str], Mapping[str, object]]] = None,
    del_map: Optional[Mapping[str, Mapping[str, object]]] = None,
    delbar_map: Optional[Mapping[str, Mapping[str, object]]] = None,
    unit: Optional[str] = None,
    name: str = "model",
) -> BigradedAlgebra:
    """Symmetrized constructor: completes unit products and opposite
    orientations so fixtures only write each product once."""
    prods: dict[tuple[str, str], Mapping[str, object]] = dict(products or {})
    if unit is not None:
        for lab in labels:
            prods.setdefault((unit, lab), {lab: 1})
            if lab != unit:
                prods.setdefault((lab, unit), {lab: 1})
    given = list(prods)
    for la, lb in given:
        if (lb, la) in prods:
            continue
        ta = sum(labels[la])
        tb = sum(labels[lb])
        if (ta * tb) % 2 == 0:
            prods[(lb, la)] = dict(prods[(la, lb)])
        else:
            prods[(lb, la)] = {
                lc: field.neg(as_scalar(field, c))
                for lc, c in prods[(la, lb)].items()
            }
    return BigradedAlgebra(field, labels, prods, del_map, delbar_map, unit, name)


def point_model(field: Field) -> BigradedAlgebra:
    """The one-dimensional model k in bidegree (0,0), zero differentials."""
    return BigradedAlgebra(
        field, {"1": (0, 0)}, {("1", "1"): {"1": 1}}, unit="1", name="k"
    )


class TensorModel(BigradedAlgebra):
    """Product model x ⊗ y with the factor images designated.

    Basis labels are "a⊗b"; bidegrees add; differentials extend by the
    graded Leibniz rule and the product carries the Koszul sign
    (a⊗b)·(a'⊗b') = (−1)^{|b||a'|} (aa')⊗(bb').
    """

    factor_x: BigradedAlgebra
    factor_y: BigradedAlgebra

    def pair_label(self, la: str, lb: str) -> str:
        return f"{la}⊗{lb}"

    @property
    def p_labels(self) -> tuple[str, ...]:
        u = self.factor_y.unit
        return tuple(self.pair_label(a, u) for a in self.factor_x.labels)

    @property
    def q_labels(self) -> tuple[str, ...]:
        u = self.factor_x.unit
        return tuple(self.pair_label(u, b) for b in self.factor_y.labels)

    def p_star(self, v: Sequence) -> Vector:
        """Image of an x-element under a ↦ a⊗1."""
        f = self.field
        out = [f.zero] * self.dim
        for i, lab in enumerate(self.factor_x.labels):
            out[self.index[self.pair_label(lab, self.factor_y.unit)]] = v[i]
        return tuple(out)

    def q_star(self, v: Sequence) -> Vector:
        f = self.field
        out = [f.zero] * self.dim
        for j, lab in enumerate(self.factor_y.labels):
            out[self.index[self.pair_label(self.factor_x.unit, lab)]] = v[j]
        return tuple(out)

    def lift_left(self, op: Matrix) -> Matrix:
        """Extend an operator on the x factor to op⊗id on the product."""
        f = self.field
        x, y = self.factor_x, self.factor_y
        rows = [[f.zero] * self.dim for _ in range(self.dim)]
        for j, (la, lb) in enumerate(self._pairs):
            ja = x.index[la]
            for ia in range(x.dim):
                c = op.rows[ia][ja]
                if f.is_zero(c):
                    continue
                rows[self.index[self.pair_label(x.labels[ia], lb)]][j] = c
        return Matrix(f, [tuple(r) for r in rows], self.dim)

    def lift_right(self, op: Matrix, op_degree: int) -> Matrix:
        """Extend an operator on the y factor to id⊗op with the Koszul sign
        (−1)^{|a|·op_degree} on a⊗b."""
        f = self.field
        x, y = self.factor_x, self.factor_y
        rows = [[f.zero] * self.dim for _ in range(self.dim)]
        for j, (la, lb) in enumerate(self._pairs):
            jb = y.index[lb]
            sign = f.one
            if (x.total_degree(la) * op_degree) % 2 != 0:
                sign = f.neg(f.one)
            for ib in range(y.dim):
                c = op.rows[ib][jb]
                if f.is_zero(c):
                    continue
                rows[self.index[self.pair_label(la, y.labels[ib])]][j] = f.mul(sign, c)
        return Matrix(f, [tuple(r) for r in rows], self.dim)


def tensor_model(x: BigradedAlgebra, y: BigradedAlgebra, name: Optional[str] = None) -> TensorModel:
    """Product model with basis a⊗b and Leibniz-extended differentials."""
    if x.field is not y.field:
        raise ValueError("field mismatch between tensor factors")
    if x.unit is None or y.unit is None:
        raise ValueError("tensor factors must be unital")
    f = x.field
    pairs = [(la, lb) for la in x.labels for lb in y.labels]
    labels = {
        f"{la}⊗{lb}": (
            x.bidegree[la][0] + y.bidegree[lb][0],
            x.bidegree[la][1] + y.bidegree[lb][1],
        )
        for la, lb in pairs
    }

    def koszul(t1: int, t2: int):
        return f.one if (t1 * t2) % 2 == 0 else f.neg(f.one)

    products: dict[tuple[str, str], dict[str, object]] = {}
    for la, lb in pairs:
        for lc, ld in pairs:
            ent: dict[str, object] = {}
            sign = koszul(y.total_degree(lb), x.total_degree(lc))
            for ia, ca in x.product_entry(x.index[la], x.index[lc]).items():
                for ib, cb in y.product_entry(y.index[lb], y.index[ld]).items():
                    lab = f"{x.labels[ia]}⊗{y.labels[ib]}"
                    c = f.mul(sign, f.mul(ca, cb))
                    prev = ent.get(lab, f.zero)
                    ent[lab] = f.add(prev, c)
            ent = {k: c for k, c in ent.items() if not f.is_zero(c)}
            if ent:
                products[(f"{la}⊗{lb}", f"{lc}⊗{ld}")] = ent

    def leibniz(m_x: Matrix, m_y: Matrix) -> dict[str, dict[str, object]]:
        out: dict[str, dict[str, object]] = {}
        for la, lb in pairs:
            ent: dict[str, object] = {}
            ja = x.index[la]
            for ia in range(x.dim):
                c = m_x.rows[ia][ja]
                if not f.is_zero(c):
                    ent[f"{x.labels[ia]}⊗{lb}"] = c
            sign = koszul(x.total_degree(la), 1)
            jb = y.index[lb]
            for ib in range(y.dim):
                c = m_y.rows[ib][jb]
                if not f.is_zero(c):
                    lab = f"{la}⊗{y.labels[ib]}"
                    prev = ent.get(lab, f.zero)
                    ent[lab] = f.add(prev, f.mul(sign, c))
            ent = {k: c for k, c in ent.items() if not f.is_zero(c)}
            if ent:
                out[f"{la}⊗{lb}"] = ent
        return out

    t = TensorModel(
        f,
        labels,
        products,
        leibniz(x.del_matrix, y.del_matrix),
        leibniz(x.delbar_matrix, y.delbar_matrix),
        unit=f"{x.unit}⊗{y.unit}",
        name=name or f"{x.name}×{y.name}",
    )
    t.factor_x = x
    t.factor_y = y
    t._pairs = pairs
    return t


# -- the ∂∂̄ criterion ------------------------------------------------------


@dataclass(frozen=True)
class DelDelbarCertificate:
    ok: bool
    bidegree: Optional[Bidegree] = None
    witness: Optional[str] = None

    def __bool__(self):
        return self.ok


def intersect_spans(field: Field, dim: int, first: Sequence[Sequence],
                    second: Sequence[Sequence]) -> list[Vector]:
    """Basis of span(first) ∩ span(second)."""
    a = [tuple(v) for v in first]
    b = [tuple(v) for v in second]
    if not a or not b:
        return []
    cols = [list(v) for v in a] + [[field.neg(c) for c in v] for v in b]
    m = Matrix.from_columns(field, cols, nrows=dim)
    out = Subspace(field, dim)
    result = []
    for k in kernel_basis(m):
        v = [field.zero] * dim
        for i, va in enumerate(a):
            if field.is_zero(k[i]):
                continue
            for r in range(dim):
                v[r] = field.add(v[r], field.mul(k[i], va[r]))
        if out.insert(v):
            result.append(tuple(v))
    return result


def del_delbar_predicate(a: BigradedAlgebra) -> DelDelbarCertificate:
    """Exactness test ker ∂ ∩ ker ∂̄ ∩ (im ∂ + im ∂̄) = im ∂∂̄, per bidegree."""
    f = a.field
    for pq in a.bidegrees():
        p, q = pq
        here = a.component_indices(pq)
        if not here:
            continue

        def comp(m: Matrix, source: Bidegree) -> list[Vector]:
            src = a.component_indices(source)
            return [
                tuple(m.rows[i][j] for i in here) for j in src
            ]

        dd = a.del_matrix @ a.delbar_matrix
        closed = kernel_basis(
            Matrix(
                f,
                [tuple(a.del_matrix.rows[i][j] for j in here)
                 for i in a.component_indices((p + 1, q))]
                + [tuple(a.delbar_matrix.rows[i][j] for j in here)
                   for i in a.component_indices((p, q + 1))],
                len(here),
            )
        )
        exact = comp(a.del_matrix, (p - 1, q)) + comp(a.delbar_matrix, (p, q - 1))
        lhs = intersect_spans(f, len(here), closed, exact)
        rhs = Subspace(f, len(here), comp(dd, (p - 1, q - 1)))
        for v in lhs:
            if not rhs.contains(v):
                full = [f.zero] * a.dim
                for pos, i in enumerate(here):
                    full[i] = v[pos]
                return DelDelbarCertificate(False, pq, a.format_element(full))
    return DelDelbarCertificate(True)


# -- ∂̄-acyclicity of designated subspaces -----------------------------------


def graded_span(a: BigradedAlgebra, vectors: Iterable[Sequence]) -> dict[int, Subspace]:
    """Per-total-degree spans of the homogeneous components of the vectors."""
    spans: dict[int, Subspace] = {}
    for v in vectors:
        for t in a.total_degrees():
            comp = [a.field.zero] * a.dim
            nonzero = False
            for i in a.component_indices(t):
                comp[i] = v[i]
                nonzero = nonzero or not a.field.is_zero(v[i])
            if nonzero:
                spans.setdefault(t, Subspace(a.field, a.dim)).insert(comp)
    return spans


def subcomplex_acyclic(a: BigradedAlgebra, vectors: Iterable[Sequence]) -> bool:
    """True iff the ∂̄-stable span of the vectors has zero ∂̄-cohomology.

    Raises if the span is not closed under ∂̄.
    """
    f = a.field
    spans = graded_span(a, vectors)
    for t, span in sorted(spans.items()):
        nxt = spans.get(t + 1)
        for v in span.basis():
            image = a.delbar_apply(v)
            if vec_is_zero(f, image):
                continue
            if nxt is None or not nxt.contains(image):
                raise ValueError(
                    f"subspace is not closed under ∂̄: ∂̄({a.format_element(v)}) leaves the span"
                )
    for t, span in sorted(spans.items()):
        basis = span.basis()
        m = Matrix.from_columns(
            f, [a.delbar_apply(v) for v in basis], nrows=a.dim
        )
        cycles = len(kernel_basis(m)) if basis else 0
        prev = spans.get(t - 1)
        boundaries = 0
        if prev is not None:
            pm = Matrix.from_columns(
                f, [a.delbar_apply(v) for v in prev.basis()], nrows=a.dim
            )
            boundaries = pm.rank()
        if cycles != boundaries:
            return False
    return True


def del_image(a: BigradedAlgebra) -> list[Vector]:
    """Spanning set of ∂A."""
    return [
        a.del_matrix.column(j)
        for j in range(a.dim)
        if not vec_is_zero(a.field, a.del_matrix.column(j))
    ]


def del_kernel(a: BigradedAlgebra) -> list[Vector]:
    """Basis of ker ∂, assembled from the homogeneous pieces."""
    out = []
    for t in a.total_degrees():
        for k in kernel_basis(a.del_block(t)):
            out.append(a.embed_from_degree(k, t))
    return out


def subspace_vectors(a: BigradedAlgebra, labels: Iterable[str]) -> list[Vector]:
    return [a.element(lab) for lab in labels]


def operator_from_labels(
    a: BigradedAlgebra, entries: Mapping[str, Mapping[str, object]]
) -> Matrix:
    """Square matrix on the model from "source label -> {target: coeff}" rows."""
    f = a.field
    rows = [[f.zero] * a.dim for _ in range(a.dim)]
    for src, targets in entries.items():
        j = a.index[src]
        for dst, c in targets.items():
            rows[a.index[dst]][j] = as_scalar(f, c)
    return Matrix(f, tuple(tuple(r) for r in rows), a.dim)


# -- configurations: ideal, factor subalgebras, quotient ---------------------


class ModelConfiguration:
    """An ambient model with a graph ideal, factor subalgebras and quotient.

    The ideal must be stable under multiplication by the whole algebra and
    under both differentials; the designated subalgebras must be closed under
    product and both differentials.  Violations raise with a witness.
    """

    def __init__(
        self,
        model: BigradedAlgebra,
        ideal: Iterable[Sequence],
        p_subalgebra: Iterable[Sequence],
        q_subalgebra: Iterable[Sequence],
        name: str = "configuration",
    ):
        self.model = model
        self.name = name
        f = model.field
        self.ideal = self._span(ideal)
        self.p_sub = self._span(p_subalgebra)
        self.q_sub = self._span(q_subalgebra)

        for v in self.ideal.basis():
            for m, symbol in ((model.del_matrix, "∂"), (model.delbar_matrix, "∂̄")):
                image = m.apply(v)
                if not vec_is_zero(f, image) and not self.ideal.contains(image):
                    raise ValueError(
                        f"ideal is not closed under {symbol}: "
                        f"{symbol}({model.format_element(v)}) leaves it"
                    )
            for lab in model.labels:
                prod = model.mul(model.element(lab), v)
                if not vec_is_zero(f, prod) and not self.ideal.contains(prod):
                    raise ValueError(
                        f"not an ideal: {lab}·({model.format_element(v)}) leaves the span"
                    )
        for title, sub in (("p*", self.p_sub), ("q*", self.q_sub)):
            basis = sub.basis()
            for v in basis:
                for m, symbol in ((model.del_matrix, "∂"), (model.delbar_matrix, "∂̄")):
                    image = m.apply(v)
                    if not vec_is_zero(f, image) and not sub.contains(image):
                        raise ValueError(
                            f"subalgebra {title} is not closed under {symbol}"
                        )
            for u in basis:
                for v in basis:
                    prod = model.mul(u, v)
                    if not vec_is_zero(f, prod) and not sub.contains(prod):
                        raise ValueError(
                            f"subalgebra {title} is not closed under the product: "
                            f"({model.format_element(u)})·({model.format_element(v)})"
                        )

        for title, span in (("ideal", self.ideal), ("subalgebra p*", self.p_sub),
                            ("subalgebra q*", self.q_sub)):
            for v in span.basis():
                for t in model.total_degrees():
                    comp = [f.zero] * model.dim
                    for i in model.component_indices(t):
                        comp[i] = v[i]
                    if not vec_is_zero(f, comp) and not span.contains(comp):
                        raise ValueError(
                            f"{title} is not graded: a homogeneous component of "
                            f"{model.format_element(v)} leaves the span"
                        )

        self.quotient_reps = quotient_representatives(f, self.ideal.basis(), model.dim)

    def _span(self, vectors: Iterable[Sequence]) -> Subspace:
        span = Subspace(self.model.field, self.model.dim)
        for v in vectors:
            span.insert(v)
        return span

    def ideal_intersect_kernel(self) -> list[Vector]:
        """Basis of I ∩ ker ∂ in ambient coordinates."""
        return intersect_spans(
            self.model.field, self.model.dim, self.ideal.basis(), del_kernel(self.model)
        )

    def kernel_intersect_q(self) -> list[Vector]:
        """Basis of ker ∂ ∩ q*-subalgebra in ambient coordinates."""
        return intersect_spans(
            self.model.field, self.model.dim, self.q_sub.basis(), del_kernel(self.model)
        )

    def project(self, v: Sequence) -> Vector:
        """Coordinates of v + ideal in the representative basis."""
        f = self.model.field
        basis = self.ideal.basis() + self.quotient_reps
        full = coordinates(f, basis, v)
        if full is None:
            raise ValueError("vector outside the ambient model")
        return tuple(full[self.ideal.dim:])

    def quotient_model(self, suffix: str = "'") -> BigradedAlgebra:
        """The quotient algebra A/I with echelon representatives as basis."""
        f = self.model.field
        labels = {}
        names = []
        for rep in self.quotient_reps:
            lead = next(i for i, c in enumerate(rep) if not f.is_zero(c))
            lab = self.model.labels[lead] + suffix
            names.append(lab)
            labels[lab] = self.model.bidegree[self.model.labels[lead]]
        products = {}
        for i, u in enumerate(self.quotient_reps):
            for j, v in enumerate(self.quotient_reps):
                c = self.project(self.model.mul(u, v))
                ent = {names[k]: x for k, x in enumerate(c) if not f.is_zero(x)}
                if ent:
                    products[(names[i], names[j])] = ent

        def push(m: Matrix):
            out = {}
            for i, u in enumerate(self.quotient_reps):
                c = self.project(m.apply(u))
                ent = {names[k]: x for k, x in enumerate(c) if not f.is_zero(x)}
                if ent:
                    out[names[i]] = ent
            return out

        unit = None
        if self.model.unit is not None:
            unit_coords = self.project(self.model.one())
            lead = [k for k, c in enumerate(unit_coords) if not f.is_zero(c)]
            if len(lead) == 1 and f.is_zero(f.sub(unit_coords[lead[0]], f.one)):
                unit = names[lead[0]]
        return BigradedAlgebra(
            f, labels, products, push(self.model.del_matrix),
            push(self.model.delbar_matrix), unit=unit,
            name=f"{self.model.name}/{self.name}",
        )

    def ideal_intersect(self, vectors: Sequence[Sequence]) -> list[Vector]:
        return intersect_spans(
            self.model.field, self.model.dim, self.ideal.basis(), list(vectors)
        )


# -- pullback versus contraction on a product model --------------------------


class GraphRestriction:
    """A product model together with restriction to a graph, ρ: A_Z → A_X.

    ρ must be an algebra map commuting with both differentials and splitting
    the left-factor inclusion (ρ∘p* = id).
    """

    def __init__(self, tensor: TensorModel, rho: Matrix, name: str = "graph"):
        self.tensor = tensor
        self.target = tensor.factor_x
        self.rho = rho
        self.name = name
        x, f = self.target, tensor.field
        if rho.nrows != x.dim or rho.ncols != tensor.dim:
            raise ValueError("restriction matrix has the wrong shape")
        for j, lab in enumerate(tensor.labels):
            for m_big, m_small, symbol in (
                (tensor.del_matrix, x.del_matrix, "∂"),
                (tensor.delbar_matrix, x.delbar_matrix, "∂̄"),
            ):
                lhs = rho.apply(m_big.column(j))
                rhs = m_small.apply(rho.column(j))
                if lhs != rhs:
                    raise ValueError(f"restriction does not commute with {symbol} on {lab}")
        for i, la in enumerate(tensor.labels):
            va = rho.column(i)
            for j, lb in enumerate(tensor.labels):
                prod = tensor.mul(tensor.element(la), tensor.element(lb))
                lhs = rho.apply(prod)
                rhs = x.mul(va, rho.column(j))
                if lhs != rhs:
                    raise ValueError(
                        f"restriction is not an algebra map on ({la},{lb})"
                    )
        for i, lab in enumerate(x.labels):
            if rho.apply(tensor.p_star(x.element(lab))) != x.element(lab):
                raise ValueError("restriction does not split the left-factor inclusion")

    def pullback(self) -> Matrix:
        """f* = ρ∘q*: A_Y → A_X."""
        t, f = self.tensor, self.tensor.field
        y = t.factor_y
        cols = [self.rho.apply(t.q_star(y.element(lab))) for lab in y.labels]
        return Matrix.from_columns(f, cols, nrows=self.target.dim)

    def graph_ideal(self) -> list[Vector]:
        """Basis of ker ρ."""
        return kernel_basis(self.rho)

    def descend(self, op: Matrix) -> Matrix:
        """Push a ker ρ-stable operator on the product down along ρ."""
        f = self.tensor.field
        ker = Subspace(f, self.tensor.dim, self.graph_ideal())
        for v in ker.basis():
            image = op.apply(v)
            if not vec_is_zero(f, image) and not ker.contains(image):
                raise ValueError(
                    "hypothesis violated: the supplied lift does not stabilize the graph ideal"
                )
        x = self.target
        # solve ρ∘op = η∘ρ on a spanning set: use p* sections (ρ∘p* = id)
        cols = [
            self.rho.apply(op.apply(self.tensor.p_star(x.element(lab))))
            for lab in x.labels
        ]
        return Matrix.from_columns(f, cols, nrows=x.dim)


def verify_pullback_contraction(
    gr: GraphRestriction, chi: Matrix, eta_lift: Matrix, omega: Sequence
) -> bool:
    """Check f*(χ⌟ω) = η⌟f*ω on a product model.

    χ acts on the right factor; eta_lift is an operator on the product model
    that stabilizes the graph ideal, so it descends to η on the left factor.
    The hypothesis — χ and η agree through the restriction — is verified on
    the whole right factor before the conclusion is evaluated on ω.
    """
    t = gr.tensor
    f = t.field
    y = t.factor_y
    if chi.nrows != y.dim or chi.ncols != y.dim:
        raise ValueError("χ must be an operator on the right factor")
    op_degree = _operator_total_degree(y, chi)
    c_chi = t.lift_right(chi, op_degree)
    eta = gr.descend(eta_lift)

    q_cols = [t.q_star(y.element(lab)) for lab in y.labels]
    for j, lab in enumerate(y.labels):
        lhs = gr.rho.apply(c_chi.apply(q_cols[j]))
        rhs = gr.rho.apply(eta_lift.apply(q_cols[j]))
        if lhs != rhs:
            raise ValueError(
                f"hypothesis violated: the two contractions disagree on {lab} "
                f"after restriction to the graph"
            )

    f_star = gr.pullback()
    lhs = f_star.apply(chi.apply(omega))
    rhs = eta.apply(f_star.apply(omega))
    return lhs == rhs


def _operator_total_degree(a: BigradedAlgebra, op: Matrix) -> int:
    """Common total-degree shift of a homogeneous operator (0 for zero)."""
    f = a.field
    shift = None
    for j, lab in enumerate(a.labels):
        for i in range(a.dim):
            if f.is_zero(op.rows[i][j]):
                continue
            s = a.total_degree(a.labels[i]) - a.total_degree(lab)
            if shift is None:
                shift = s
            elif shift != s:
                raise ValueError("operator is not homogeneous for the total degree")
    return 0 if shift is None else shift
