"""Differential graded Lie algebras by structure constants.

Basis elements are addressed by (degree, index).  Bracket tables are stored
for the pairs that were given explicitly; the opposite orientation is derived
by graded antisymmetry unless it too was given (so deliberately inconsistent
tables can be represented and then caught by validate_dgla).
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .artin import ArtinAlgebra
from .complexes import ChainMap, CochainComplex, GradedVectorSpace
from .fields import Field, Matrix, Subspace, Vector, as_scalar, coordinates, vec_is_zero
from .report import ReportBuilder, ValidationReport

Key = tuple[int, int]          # (degree, basis index)
SparseElt = dict[Key, object]  # raw element, possibly spread over degrees


class Dgla:
    """Graded space + degree +1 differential + bracket structure constants.

    Construction performs no axiom checking beyond shape resolution; run
    validate_dgla for the axioms.
    """

    def __init__(
        self,
        field: Field,
        space: GradedVectorSpace,
        d: Mapping[int, Matrix],
        brackets: Optional[Mapping[tuple[str, str], Mapping[str, object]]] = None,
        table: Optional[Mapping[tuple[Key, Key], Mapping[Key, object]]] = None,
        name: str = "dgla",
    ):
        self.field = field
        self.space = space
        self.name = name
        self._label_key = {}
        for deg in space.degrees:
            for i, lab in enumerate(space.labels(deg)):
                self._label_key[lab] = (deg, i)
        dd = {}
        for deg, m in d.items():
            if m.nrows != space.dim(deg + 1) or m.ncols != space.dim(deg):
                raise ValueError(f"differential block at degree {deg} has wrong shape")
            if not m.is_zero():
                dd[deg] = m
        self.d = dd
        resolved: dict[tuple[Key, Key], SparseElt] = {}
        if brackets:
            for (la, lb), val in brackets.items():
                ka, kb = self.key_of(la), self.key_of(lb)
                ent = {}
                for lc, c in val.items():
                    cc = as_scalar(field, c)
                    if not field.is_zero(cc):
                        ent[self.key_of(lc)] = cc
                resolved[(ka, kb)] = ent
        if table:
            for (ka, kb), val in table.items():
                ent = {k: as_scalar(field, c) for k, c in val.items()}
                resolved[(ka, kb)] = {k: c for k, c in ent.items() if not field.is_zero(c)}
        self._table = resolved
        self._complex: Optional[CochainComplex] = None

    def key_of(self, label: str) -> Key:
        try:
            return self._label_key[label]
        except KeyError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def label(self, key: Key) -> str:
        return self.space.labels(key[0])[key[1]]

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    @property
    def degrees(self):
        return self.space.degrees

    @property
    def complex(self) -> CochainComplex:
        if self._complex is None:
            self._complex = CochainComplex(self.field, self.space, self.d)
        return self._complex

    def differential(self, degree: int) -> Matrix:
        m = self.d.get(degree)
        if m is None:
            return Matrix.zero(self.field, self.space.dim(degree + 1), self.space.dim(degree))
        return m

    def d_apply(self, degree: int, v: Sequence) -> Vector:
        return self.differential(degree).apply(v)

    def raw_entry(self, ka: Key, kb: Key) -> SparseElt:
        """Structure constants for [basis(ka), basis(kb)], derived if needed."""
        ent = self._table.get((ka, kb))
        if ent is not None:
            return ent
        opp = self._table.get((kb, ka))
        if opp is not None:
            f = self.field
            sign = -1 if (ka[0] * kb[0]) % 2 == 0 else 1
            # [a,b] = −(−1)^{|a||b|}[b,a]
            if sign == 1:
                return opp
            return {k: f.neg(c) for k, c in opp.items()}
        return {}

    def stored_pairs(self):
        return self._table.items()

    def bracket_mono(self, ka: Key, kb: Key) -> Vector:
        """[basis(ka), basis(kb)] as a vector in degree |a|+|b| (ill-graded parts dropped)."""
        f = self.field
        target = ka[0] + kb[0]
        out = [f.zero] * self.space.dim(target)
        for (dc, k), c in self.raw_entry(ka, kb).items():
            if dc == target:
                out[k] = f.add(out[k], c)
        return tuple(out)

    def bracket(self, dega: int, va: Sequence, degb: int, vb: Sequence) -> Vector:
        """Bilinear extension of the structure constants."""
        f = self.field
        target = dega + degb
        out = [f.zero] * self.space.dim(target)
        for i, a in enumerate(va):
            if f.is_zero(a):
                continue
            for j, b in enumerate(vb):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for (dc, k), c in self.raw_entry((dega, i), (degb, j)).items():
                    if dc == target:
                        out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def basis_keys(self):
        for deg in self.space.degrees:
            for i in range(self.space.dim(deg)):
                yield (deg, i)

    def basis_vector(self, key: Key) -> Vector:
        f = self.field
        n = self.space.dim(key[0])
        return tuple(f.one if t == key[1] else f.zero for t in range(n))

    def format_element(self, degree: int, v: Sequence) -> str:
        f = self.field
        parts = [
            f"{f.format(c)}·{self.space.labels(degree)[i]}"
            for i, c in enumerate(v)
            if not f.is_zero(c)
        ]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Dgla({self.name})"


def abelian_dgla(field: Field, space: GradedVectorSpace, d: Mapping[int, Matrix],
                 name: str = "abelian") -> Dgla:
    return Dgla(field, space, d, name=name)


def zero_dgla(field: Field, name: str = "0") -> Dgla:
    return Dgla(field, GradedVectorSpace({}), {}, name=name)


def is_abelian(d: Dgla) -> bool:
    """True iff every structure constant of the bracket vanishes."""
    return all(not ent for _, ent in d.stored_pairs())


def _projected_table(g: Dgla) -> dict[tuple[Key, Key], list[tuple[Key, object]]]:
    """Both orientations of every stored bracket, restricted to the graded part."""
    f = g.field
    stored = dict(g.stored_pairs())
    proj: dict[tuple[Key, Key], list[tuple[Key, object]]] = {}
    for (ka, kb), ent in stored.items():
        t = ka[0] + kb[0]
        graded = [(k, c) for k, c in ent.items() if k[0] == t]
        if graded:
            proj[(ka, kb)] = graded
    for (ka, kb), ent in stored.items():
        opp = (kb, ka)
        if opp in stored:
            continue
        t = ka[0] + kb[0]
        sign_even = (ka[0] * kb[0]) % 2 == 0
        graded = [(k, f.neg(c) if sign_even else c) for k, c in ent.items() if k[0] == t]
        if graded:
            proj[opp] = graded
    return proj


def _sparse_bracket(f: Field, proj, ka: Key, elt: list[tuple[Key, object]],
                    out: dict, sign=None):
    """Accumulate sign·[basis(ka), Σ c·basis(kc)] into out."""
    for kc, c in elt:
        ent = proj.get((ka, kc))
        if not ent:
            continue
        cc = c if sign is None else f.mul(sign, c)
        for kd, e in ent:
            v = f.add(out.get(kd, f.zero), f.mul(cc, e))
            if f.is_zero(v):
                out.pop(kd, None)
            else:
                out[kd] = v


def validate_dgla(candidate: Dgla) -> ValidationReport:
    """Five checks: well-formedness plus the four graded Lie axioms.

    Failures carry a witness naming the basis elements on which the axiom
    breaks.  Cost scales with the number of interacting basis pairs, not with
    the cube of the dimension.
    """
    g = candidate
    f = g.field
    rb = ReportBuilder(f"dgla {g.name}")

    ok, wit = True, None
    for (ka, kb), ent in g.stored_pairs():
        for (dc, k), _ in ent.items():
            if dc != ka[0] + kb[0]:
                ok = False
                wit = (
                    f"[{g.label(ka)},{g.label(kb)}] has a degree-{dc} component, "
                    f"expected degree {ka[0] + kb[0]}"
                )
                break
        if not ok:
            break
    rb.add("well-formed", ok, wit)

    ok, wit = True, None
    for deg in g.space.degrees:
        comp = g.differential(deg + 1) @ g.differential(deg)
        if not comp.is_zero():
            col = next(j for j in range(comp.ncols) if not vec_is_zero(f, comp.column(j)))
            ok, wit = False, f"d(d({g.space.labels(deg)[col]})) != 0"
            break
    rb.add("d squared zero", ok, wit)

    keys = list(g.basis_keys())
    stored = dict(g.stored_pairs())
    ok, wit = True, None
    seen_pairs = set()
    for (ka, kb) in stored:
        for pair in ((ka, kb), (kb, ka)):
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            pa, pb = pair
            left = g.raw_entry(pa, pb)
            right = g.raw_entry(pb, pa)
            if not left and not right:
                continue
            sign_even = (pa[0] * pb[0]) % 2 == 0
            # [a,b] + (−1)^{|a||b|}[b,a] = 0, componentwise on the raw entries
            bad = False
            for key in set(left) | set(right):
                lc = left.get(key, f.zero)
                rc = right.get(key, f.zero)
                s = f.add(lc, rc) if sign_even else f.sub(lc, rc)
                if not f.is_zero(s):
                    bad = True
                    break
            if bad:
                ok, wit = False, f"({g.label(pa)},{g.label(pb)})"
                break
        if not ok:
            break
    rb.add("graded antisymmetry", ok, wit)

    proj = _projected_table(g)
    # sparse differential columns keyed by basis element
    d_col: dict[Key, list[tuple[Key, object]]] = {}
    for deg, m in g.d.items():
        for j in range(m.ncols):
            col = [((deg + 1, r), m.rows[r][j]) for r in range(m.nrows)
                   if not f.is_zero(m.rows[r][j])]
            if col:
                d_col[(deg, j)] = col

    ok, wit = True, None
    neg_one = f.neg(f.one)
    for ka in keys:
        if not ok:
            break
        da = d_col.get(ka, ())
        sign = f.one if ka[0] % 2 == 0 else neg_one
        for kb in keys:
            ent = proj.get((ka, kb), ())
            db = d_col.get(kb, ())
            if not ent and not da and not db:
                continue
            # d[a,b] − [da,b] − (−1)^{|a|}[a,db] accumulated sparsely
            acc: dict = {}
            for kc, c in ent:
                for kd, e in d_col.get(kc, ()):
                    v = f.add(acc.get(kd, f.zero), f.mul(c, e))
                    if f.is_zero(v):
                        acc.pop(kd, None)
                    else:
                        acc[kd] = v
            for kc, c in da:
                entc = proj.get((kc, kb))
                if not entc:
                    continue
                for kd, e in entc:
                    v = f.sub(acc.get(kd, f.zero), f.mul(c, e))
                    if f.is_zero(v):
                        acc.pop(kd, None)
                    else:
                        acc[kd] = v
            _sparse_bracket(f, proj, ka, [(kc, f.neg(f.mul(sign, c))) for kc, c in db], acc)
            if acc:
                ok, wit = False, f"({g.label(ka)},{g.label(kb)})"
                break
    rb.add("graded Leibniz", ok, wit)

    # Jacobi can only fail on triples where some inner bracket is nonzero
    pair_list = sorted(proj)
    ok, wit = True, None

    def jacobi_holds(ka: Key, kb: Key, kc: Key) -> bool:
        # [a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]] must vanish
        acc: dict = {}
        bc = proj.get((kb, kc))
        if bc:
            _sparse_bracket(f, proj, ka, bc, acc)
        ab = proj.get((ka, kb))
        if ab:
            for k, c in ab:
                entc = proj.get((k, kc))
                if not entc:
                    continue
                for kd, e in entc:
                    v = f.sub(acc.get(kd, f.zero), f.mul(c, e))
                    if f.is_zero(v):
                        acc.pop(kd, None)
                    else:
                        acc[kd] = v
        ac = proj.get((ka, kc))
        if ac:
            s = f.one if (ka[0] * kb[0]) % 2 == 0 else neg_one
            _sparse_bracket(f, proj, kb, [(k, f.neg(f.mul(s, c))) for k, c in ac], acc)
        return not acc

    for (kx, ky) in pair_list:
        if not ok:
            break
        for kz in keys:
            for triple in ((kx, ky, kz), (kz, kx, ky), (kx, kz, ky)):
                if not jacobi_holds(*triple):
                    ka, kb, kc = triple
                    ok, wit = False, f"({g.label(ka)},{g.label(kb)},{g.label(kc)})"
                    break
            if not ok:
                break
    rb.add("graded Jacobi", ok, wit)
    return rb.build()


class DglaMorphism:
    """Degreewise linear map commuting with d and preserving brackets."""

    def __init__(self, source: Dgla, target: Dgla, blocks: Mapping[int, Matrix],
                 name: str = "morphism", check: bool = True):
        if source.field is not target.field:
            raise ValueError("field mismatch")
        self.source = source
        self.target = target
        self.name = name
        cleaned = {}
        for deg, m in blocks.items():
            if m.nrows != target.dim(deg) or m.ncols != source.dim(deg):
                raise ValueError(f"morphism block at degree {deg} has wrong shape")
            if not m.is_zero():
                cleaned[deg] = m
        self.blocks = cleaned
        if check:
            self._check()
        self._chain_map: Optional[ChainMap] = None

    def _check(self):
        f = self.source.field
        degs = set(self.source.degrees) | set(self.target.degrees)
        for deg in degs:
            left = self.target.differential(deg) @ self.block(deg)
            right = self.block(deg + 1) @ self.source.differential(deg)
            if left != right:
                raise ValueError(f"{self.name} does not commute with d at degree {deg}")
        keys = list(self.source.basis_keys())
        for ka in keys:
            fa = self.apply(ka[0], self.source.basis_vector(ka))
            for kb in keys:
                fb = self.apply(kb[0], self.source.basis_vector(kb))
                lhs = self.apply(ka[0] + kb[0], self.source.bracket_mono(ka, kb))
                rhs = self.target.bracket(ka[0], fa, kb[0], fb)
                if lhs != rhs:
                    raise ValueError(
                        f"{self.name} does not preserve the bracket on "
                        f"({self.source.label(ka)},{self.source.label(kb)})"
                    )

    def block(self, degree: int) -> Matrix:
        m = self.blocks.get(degree)
        if m is None:
            return Matrix.zero(self.source.field, self.target.dim(degree), self.source.dim(degree))
        return m

    def apply(self, degree: int, v: Sequence) -> Vector:
        return self.block(degree).apply(v)

    @property
    def chain_map(self) -> ChainMap:
        if self._chain_map is None:
            self._chain_map = ChainMap(self.source.complex, self.target.complex, self.blocks, check=False)
        return self._chain_map

    def compose(self, first: "DglaMorphism") -> "DglaMorphism":
        degs = set(first.blocks) | set(self.blocks)
        return DglaMorphism(
            first.source,
            self.target,
            {d: self.block(d) @ first.block(d) for d in degs},
            name=f"{self.name}∘{first.name}",
            check=False,
        )

    @classmethod
    def zero(cls, source: Dgla, target: Dgla, name: str = "0") -> "DglaMorphism":
        return cls(source, target, {}, name=name, check=False)

    @classmethod
    def identity(cls, g: Dgla) -> "DglaMorphism":
        return cls(
            g, g,
            {deg: Matrix.identity(g.field, g.dim(deg)) for deg in g.degrees},
            name="id", check=False,
        )


class PairDiagram:
    """Two DGLA morphisms h: L → M and g: N → M with shared target."""

    def __init__(self, L: Dgla, N: Dgla, M: Dgla, h: DglaMorphism, g: DglaMorphism,
                 name: str = "pair"):
        if h.source is not L or h.target is not M:
            raise ValueError("h must map L to M")
        if g.source is not N or g.target is not M:
            raise ValueError("g must map N to M")
        if not all(x.field is L.field for x in (N, M)):
            raise ValueError("field mismatch")
        # deformation data lives in degrees 0..2; components in negative
        # degrees are legal and ride along inertly (the functor never reads
        # them, but cone cohomology does, e.g. for map-DGLA targets)
        self.L, self.N, self.M = L, N, M
        self.h, self.g = h, g
        self.name = name
        self.field = L.field

    def __repr__(self):
        return f"PairDiagram({self.name})"


class DiagramMorphism:
    """Maps on_L, on_N, on_M between two pair diagrams, squares commuting."""

    def __init__(self, source: PairDiagram, target: PairDiagram,
                 on_L: DglaMorphism, on_N: DglaMorphism, on_M: DglaMorphism,
                 name: str = "diagram-morphism"):
        self.source = source
        self.target = target
        self.on_L, self.on_N, self.on_M = on_L, on_N, on_M
        self.name = name
        degs = set(source.L.degrees) | set(target.L.degrees)
        for deg in degs:
            if target.h.block(deg) @ on_L.block(deg) != on_M.block(deg) @ source.h.block(deg):
                raise ValueError(f"{name}: h-square does not commute at degree {deg}")
        degs = set(source.N.degrees) | set(target.N.degrees)
        for deg in degs:
            if target.g.block(deg) @ on_N.block(deg) != on_M.block(deg) @ source.g.block(deg):
                raise ValueError(f"{name}: g-square does not commute at degree {deg}")

    def __repr__(self):
        return f"DiagramMorphism({self.name})"


def sub_dgla(parent: Dgla, vectors: Mapping[int, Sequence[Sequence]], prefix: str,
             name: Optional[str] = None) -> tuple[Dgla, DglaMorphism]:
    """Sub-DGLA spanned by the given vectors, with its inclusion.

    Raises if the span is not closed under d and the bracket.
    """
    f = parent.field
    spans = {}
    for deg in parent.degrees:
        vecs = list(vectors.get(deg, ()))
        span = Subspace(f, parent.dim(deg), vecs)
        if span.dim:
            spans[deg] = span
    labels = {deg: [f"{prefix}{deg}#{i}" for i in range(span.dim)] for deg, span in spans.items()}
    space = GradedVectorSpace(labels)

    def coords(deg: int, v: Sequence) -> Vector:
        span = spans.get(deg)
        if span is None or not span.contains(v):
            raise ValueError(f"sub-DGLA {prefix!r} not closed in degree {deg}")
        c = coordinates(f, span.basis(), v)
        assert c is not None
        return c

    d = {}
    for deg, span in spans.items():
        cols = []
        for b in span.basis():
            image = parent.d_apply(deg, b)
            if vec_is_zero(f, image):
                cols.append((f.zero,) * space.dim(deg + 1))
            else:
                cols.append(coords(deg + 1, image))
        d[deg] = Matrix.from_columns(f, cols, nrows=space.dim(deg + 1))
    table = {}
    for dega, sa in spans.items():
        for degb, sb in spans.items():
            for i, va in enumerate(sa.basis()):
                for j, vb in enumerate(sb.basis()):
                    br = parent.bracket(dega, va, degb, vb)
                    if vec_is_zero(f, br):
                        continue
                    c = coords(dega + degb, br)
                    table[((dega, i), (degb, j))] = {
                        (dega + degb, k): x for k, x in enumerate(c) if not f.is_zero(x)
                    }
    sub = Dgla(f, space, d, table=table, name=name or f"{parent.name}.{prefix}")
    incl = DglaMorphism(
        sub, parent,
        {deg: Matrix.from_columns(f, list(span.basis()), nrows=parent.dim(deg))
         for deg, span in spans.items()},
        name=f"incl {prefix}", check=False,
    )
    return sub, incl


def quotient_dgla(parent: Dgla, ideal: Mapping[int, Sequence[Sequence]], suffix: str = "'",
                  name: Optional[str] = None) -> tuple[Dgla, DglaMorphism]:
    """Quotient by a graded ideal, with the projection morphism."""
    from .complexes import QuotientComplex

    f = parent.field
    spans = {deg: Subspace(f, parent.dim(deg), list(ideal.get(deg, ()))) for deg in parent.degrees}
    for dega in parent.degrees:
        for degb, span in spans.items():
            if span.dim == 0 or parent.dim(dega + degb) == 0:
                continue
            target = spans.get(dega + degb)
            for i in range(parent.dim(dega)):
                va = parent.basis_vector((dega, i))
                for v in span.basis():
                    br = parent.bracket(dega, va, degb, v)
                    if not vec_is_zero(f, br):
                        if target is None or not target.contains(br):
                            raise ValueError(
                                f"not an ideal: [{parent.label((dega, i))}, ·] leaves the span "
                                f"in degree {dega + degb}"
                            )
    quot = QuotientComplex(parent.complex, {deg: span.basis() for deg, span in spans.items()},
                           label_suffix=suffix)
    table = {}
    for dega in quot.space.degrees:
        for degb in quot.space.degrees:
            for i, ra in enumerate(quot.reps[dega]):
                for j, rb in enumerate(quot.reps[degb]):
                    br = parent.bracket(dega, ra, degb, rb)
                    if vec_is_zero(f, br):
                        continue
                    c = quot.project(dega + degb, br)
                    ent = {(dega + degb, k): x for k, x in enumerate(c) if not f.is_zero(x)}
                    if ent:
                        table[((dega, i), (degb, j))] = ent
    q = Dgla(f, quot.space, quot.complex.d, table=table, name=name or f"{parent.name}/{suffix}")
    proj = DglaMorphism(parent, q, quot.pi.blocks, name="projection", check=False)
    return q, proj


class TensoredDgla(Dgla):
    """L ⊗ m_A for an Artinian coefficient algebra; nilpotent bracket."""

    base: Dgla
    artin: ArtinAlgebra

    def index(self, degree: int, base_index: int, mono_index: int) -> int:
        return base_index * self.artin.dim + mono_index

    def split_index(self, degree: int, idx: int) -> tuple[int, int]:
        return divmod(idx, self.artin.dim)

    def monomial_level_of(self, idx: int) -> int:
        return self.artin.monomial_level(idx % self.artin.dim)


def tensor_with_ideal(d: Dgla, a: ArtinAlgebra) -> TensoredDgla:
    """The nilpotent DGLA L ⊗ m_A with d(l⊗μ) = dl⊗μ, [l⊗μ, l'⊗μ'] = [l,l']⊗μμ'."""
    if d.field is not a.field:
        raise ValueError("field mismatch")
    f = d.field
    na = a.dim
    labels = {}
    for deg in d.degrees:
        labs = []
        for lab in d.space.labels(deg):
            labs.extend(f"{lab}.{m}" for m in a.monomials)
        if labs:
            labels[deg] = labs
    space = GradedVectorSpace(labels)
    diff = {}
    for deg in d.degrees:
        block = d.differential(deg)
        if block.is_zero():
            continue
        rows = []
        for r in range(block.nrows):
            for mj in range(na):
                row = [f.zero] * (block.ncols * na)
                for c in range(block.ncols):
                    if not f.is_zero(block.rows[r][c]):
                        row[c * na + mj] = block.rows[r][c]
                rows.append(tuple(row))
        if rows:
            diff[deg] = Matrix(f, rows, space.dim(deg))
    table = {}
    for (ka, kb), ent in list(d.stored_pairs()):
        if not ent:
            continue
        for mi in range(na):
            for mj in range(na):
                prod = a.mult_mono(mi, mj)
                if not prod:
                    continue
                out = {}
                for (dc, k), c in ent.items():
                    for mk, pc in prod.items():
                        out[(dc, k * na + mk)] = f.mul(c, pc)
                if out:
                    table[((ka[0], ka[1] * na + mi), (kb[0], kb[1] * na + mj))] = out
    t = TensoredDgla(f, space, diff, table=table, name=f"{d.name}⊗m({a.name})")
    t.base = d
    t.artin = a
    return t
