"""Local Artinian coefficient algebras and small extensions.

An algebra is given by a monomial basis of its maximal ideal and the
multiplication table on those monomials; the unit is implicit (A = k ⊕ m).
Everything downstream only ever multiplies ideal elements, so the table is
all we store.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .fields import Field, Matrix, Subspace, Vector, as_scalar, kernel_basis, solve, vec_is_zero
from .report import ReportBuilder, ValidationReport

SparseVec = Mapping[int, object]


class ArtinAlgebra:
    """k ⊕ m_A with m_A given by monomials and an explicit product table."""

    def __init__(
        self,
        field: Field,
        monomials: Sequence[str],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        name: Optional[str] = None,
    ):
        self.field = field
        self.monomials = tuple(monomials)
        if len(set(self.monomials)) != len(self.monomials):
            raise ValueError("duplicate monomial labels")
        self.name = name or f"artin({','.join(self.monomials)})"
        index = {m: i for i, m in enumerate(self.monomials)}
        self._index = index
        n = len(self.monomials)
        table: dict[tuple[int, int], dict[int, object]] = {}
        for (a, b), val in products.items():
            ia, ib = index[a], index[b]
            sparse = {index[m]: as_scalar(field, c) for m, c in val.items()}
            sparse = {k: v for k, v in sparse.items() if not field.is_zero(v)}
            key = (min(ia, ib), max(ia, ib))
            if key in table and table[key] != sparse:
                raise ValueError(f"conflicting product entries for {a}*{b}")
            table[key] = sparse
        self._table = table
        self._check_associative()
        self._levels, self.nilpotency = self._filtration()

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def monomial_index(self, label: str) -> int:
        return self._index[label]

    def mult_mono(self, i: int, j: int) -> dict[int, object]:
        return self._table.get((min(i, j), max(i, j)), {})

    def multiply(self, u: Sequence, v: Sequence) -> Vector:
        """Product of two m_A elements in monomial coordinates."""
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            for j, b in enumerate(v):
                if f.is_zero(b):
                    continue
                for k, c in self.mult_mono(i, j).items():
                    out[k] = f.add(out[k], f.mul(f.mul(a, b), c))
        return tuple(out)

    def _check_associative(self):
        f = self.field
        n = self.dim
        basis = [tuple(f.one if k == i else f.zero for k in range(n)) for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.multiply(self.multiply(basis[i], basis[j]), basis[k])
                    right = self.multiply(basis[i], self.multiply(basis[j], basis[k]))
                    if left != right:
                        raise ValueError(
                            f"product not associative on ({self.monomials[i]},"
                            f"{self.monomials[j]},{self.monomials[k]})"
                        )

    def _filtration(self):
        """Power filtration m ⊇ m² ⊇ …; must reach zero (nilpotency)."""
        f = self.field
        n = self.dim
        basis = [tuple(f.one if k == i else f.zero for k in range(n)) for i in range(n)]
        spans = [Subspace(f, n, basis)]
        while spans[-1].dim > 0:
            prev = spans[-1]
            nxt = Subspace(f, n)
            for v in prev.basis():
                for b in basis:
                    nxt.insert(self.multiply(b, v))
            if nxt.dim == prev.dim:
                raise ValueError("maximal ideal is not nilpotent")
            spans.append(nxt)
        levels = []
        for i in range(n):
            lvl = max(k + 1 for k, s in enumerate(spans) if s.contains(basis[i]))
            levels.append(lvl)
        return tuple(levels), len(spans)

    def power_span(self, k: int) -> Subspace:
        """Span of m_A^k in monomial coordinates."""
        f = self.field
        n = self.dim
        if k <= 1:
            basis = [tuple(f.one if t == i else f.zero for t in range(n)) for i in range(n)]
            return Subspace(f, n, basis)
        prev = self.power_span(k - 1)
        out = Subspace(f, n)
        basis = [tuple(f.one if t == i else f.zero for t in range(n)) for i in range(n)]
        for v in prev.basis():
            for b in basis:
                out.insert(self.multiply(b, v))
        return out

    def monomial_level(self, i: int) -> int:
        """Largest k with the i-th monomial inside m_A^k."""
        return self._levels[i]

    def __repr__(self):
        return self.name


def nilpotency_index(a: ArtinAlgebra) -> int:
    """Least N with every N-fold product of ideal elements zero."""
    return a.nilpotency


class SmallExtension:
    """Surjection B → A of Artinian algebras with kernel J killed by m_B."""

    def __init__(
        self,
        B: ArtinAlgebra,
        A: ArtinAlgebra,
        projection: Mapping[str, Mapping[str, object]],
        kernel_labels: Sequence[str],
        name: Optional[str] = None,
    ):
        if B.field is not A.field:
            raise ValueError("field mismatch")
        self.B = B
        self.A = A
        self.name = name or f"{B.name} -> {A.name}"
        f = B.field
        cols = []
        for mono in B.monomials:
            img = projection.get(mono, {})
            col = [f.zero] * A.dim
            for lab, c in img.items():
                col[A.monomial_index(lab)] = as_scalar(f, c)
            cols.append(tuple(col))
        self.projection = Matrix.from_columns(f, cols, nrows=A.dim)
        self.kernel_labels = tuple(kernel_labels)
        self.kernel_basis = []
        for lab in kernel_labels:
            v = [f.zero] * B.dim
            v[B.monomial_index(lab)] = f.one
            self.kernel_basis.append(tuple(v))
        self._section = self._build_section()

    def _build_section(self) -> Matrix:
        # deterministic linear section: first echelon solution per A-monomial
        f = self.B.field
        cols = []
        for i in range(self.A.dim):
            target = tuple(f.one if k == i else f.zero for k in range(self.A.dim))
            sol = solve(self.projection, target)
            if sol is None:
                raise ValueError(f"projection not surjective onto {self.A.monomials[i]}")
            cols.append(sol[0])
        return Matrix.from_columns(f, cols, nrows=self.B.dim)

    @property
    def section(self) -> Matrix:
        """Linear section s: m_A → m_B with p∘s = id."""
        return self._section

    def project(self, v: Sequence) -> Vector:
        return self.projection.apply(v)

    def lift(self, v: Sequence) -> Vector:
        return self._section.apply(v)

    def __repr__(self):
        return self.name


def validate_small_extension(e: SmallExtension) -> ValidationReport:
    rb = ReportBuilder(f"small extension {e.name}")
    f = e.B.field

    rank = e.projection.rank()
    rb.add("projection surjective", rank == e.A.dim, f"rank {rank} < {e.A.dim}")

    ker = kernel_basis(e.projection)
    span_j = Subspace(f, e.B.dim, e.kernel_basis)
    ker_span = Subspace(f, e.B.dim, ker)
    same = span_j.dim == ker_span.dim and all(ker_span.contains(v) for v in span_j.basis())
    rb.add(
        "kernel equals span(J)",
        same,
        f"dim ker = {ker_span.dim}, dim span(J) = {span_j.dim}",
    )

    # algebra map on the ideal: p(uv) = p(u)p(v) for monomials
    mult_ok, mult_wit = True, None
    for i in range(e.B.dim):
        if not mult_ok:
            break
        for j in range(e.B.dim):
            u = tuple(f.one if k == i else f.zero for k in range(e.B.dim))
            v = tuple(f.one if k == j else f.zero for k in range(e.B.dim))
            left = e.project(e.B.multiply(u, v))
            right = e.A.multiply(e.project(u), e.project(v))
            if left != right:
                mult_ok, mult_wit = False, f"({e.B.monomials[i]},{e.B.monomials[j]})"
                break
    rb.add("projection multiplicative", mult_ok, mult_wit)

    ann_ok, ann_wit = True, None
    for i in range(e.B.dim):
        if not ann_ok:
            break
        u = tuple(f.one if k == i else f.zero for k in range(e.B.dim))
        for w in e.kernel_basis:
            prod = e.B.multiply(u, w)
            if not vec_is_zero(f, prod):
                lab = e.kernel_labels[e.kernel_basis.index(w)]
                ann_ok, ann_wit = False, f"{e.B.monomials[i]}*{lab} != 0"
                break
    rb.add("m_B annihilates J", ann_ok, ann_wit)
    return rb.build()


def trivial_algebra(field: Field) -> ArtinAlgebra:
    """A = k, zero maximal ideal."""
    return ArtinAlgebra(field, [], {}, name="k")


def power_series_quotient(field: Field, order: int, variable: str = "t") -> ArtinAlgebra:
    """k[t]/(t^order): monomials t, …, t^{order−1}."""
    if order < 1:
        raise ValueError("order must be at least 1")
    labels = [variable if k == 1 else f"{variable}^{k}" for k in range(1, order)]
    products = {}
    for i in range(1, order):
        for j in range(i, order):
            if i + j < order:
                products[(labels[i - 1], labels[j - 1])] = {labels[i + j - 1]: 1}
    return ArtinAlgebra(field, labels, products, name=f"k[{variable}]/({variable}^{order})")


def curvilinear(field: Field, n: int) -> SmallExtension:
    """The stage k[x]/(x^{n+1}) → k[x]/(x^n) with kernel (x^n)."""
    if n < 1:
        raise ValueError("curvilinear stage needs n ≥ 1")
    B = power_series_quotient(field, n + 1, "x")
    A = power_series_quotient(field, n, "x")
    proj = {m: {m: 1} for m in A.monomials}
    top = B.monomials[-1]
    return SmallExtension(B, A, proj, [top], name=f"curvilinear({n})")


def two_variable_extension(field: Field) -> SmallExtension:
    """k[x,y]/(x², xy, y²) → k[x]/(x²) with kernel (y)."""
    B = ArtinAlgebra(field, ["x", "y"], {}, name="k[x,y]/(x^2,xy,y^2)")
    A = power_series_quotient(field, 2, "x")
    return SmallExtension(B, A, {"x": {"x": 1}}, ["y"], name="two-variable")
