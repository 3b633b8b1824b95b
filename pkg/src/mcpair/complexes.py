"""Graded vector spaces, cochain complexes, cones and quasi-isomorphisms.

All complexes are finite, supported in a bounded window of degrees, with
exact coefficients from fields.py.  Cohomology representatives come from
deterministic echelon completion, so repeated runs print identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .fields import (
    Field,
    Matrix,
    Subspace,
    Vector,
    coordinates,
    kernel_basis,
    vec_is_zero,
)

DEGREE_WINDOW = (-8, 8)


class GradedVectorSpace:
    """Finite basis labels partitioned by integer degree."""

    def __init__(self, labels: Mapping[int, Sequence[str]]):
        cleaned = {}
        seen = set()
        for deg, labs in labels.items():
            labs = tuple(labs)
            if not labs:
                continue
            if deg < DEGREE_WINDOW[0] or deg > DEGREE_WINDOW[1]:
                raise ValueError(f"degree {deg} outside supported window {DEGREE_WINDOW}")
            for lab in labs:
                if lab in seen:
                    raise ValueError(f"duplicate basis label {lab!r}")
                seen.add(lab)
            cleaned[deg] = labs
        self._labels = cleaned
        self.degrees = tuple(sorted(cleaned))
        self._index = {
            deg: {lab: i for i, lab in enumerate(labs)} for deg, labs in cleaned.items()
        }

    def dim(self, degree: int) -> int:
        return len(self._labels.get(degree, ()))

    def labels(self, degree: int) -> tuple[str, ...]:
        return self._labels.get(degree, ())

    def index(self, degree: int, label: str) -> int:
        try:
            return self._index[degree][label]
        except KeyError:
            raise KeyError(f"no basis label {label!r} in degree {degree}") from None

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self._labels.values())

    @property
    def min_degree(self) -> int:
        return self.degrees[0] if self.degrees else 0

    @property
    def max_degree(self) -> int:
        return self.degrees[-1] if self.degrees else 0

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self._labels == other._labels

    def __repr__(self):
        parts = ", ".join(f"{d}:{self.dim(d)}" for d in self.degrees)
        return f"GradedVectorSpace({parts})"


class CochainComplex:
    """Graded space with a degree +1 differential, d∘d = 0 enforced."""

    def __init__(self, field: Field, space: GradedVectorSpace, d: Mapping[int, Matrix]):
        self.field = field
        self.space = space
        diff = {}
        for deg, m in d.items():
            if m.nrows != space.dim(deg + 1) or m.ncols != space.dim(deg):
                raise ValueError(
                    f"differential at degree {deg} has shape {m.nrows}x{m.ncols}, "
                    f"expected {space.dim(deg + 1)}x{space.dim(deg)}"
                )
            if not m.is_zero():
                diff[deg] = m
        self.d = diff
        for deg in list(diff):
            comp = self.differential(deg + 1) @ diff[deg]
            if not comp.is_zero():
                raise ValueError(f"d∘d ≠ 0 starting at degree {deg}")
        self._h_cache: dict[int, "CohomologySpace"] = {}

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    def differential(self, degree: int) -> Matrix:
        m = self.d.get(degree)
        if m is None:
            return Matrix.zero(self.field, self.space.dim(degree + 1), self.space.dim(degree))
        return m

    def cocycles(self, degree: int) -> list[Vector]:
        if self.dim(degree) == 0:
            return []
        return kernel_basis(self.differential(degree))

    def coboundaries(self, degree: int) -> Subspace:
        """Span of d(previous degree) inside degree `degree`."""
        sub = Subspace(self.field, self.dim(degree))
        prev = self.d.get(degree - 1)
        if prev is not None:
            for j in range(prev.ncols):
                sub.insert(prev.column(j))
        return sub

    def cohomology_dim(self, degree: int) -> int:
        return len(self.cohomology(degree))

    def cohomology(self, degree: int) -> list[Vector]:
        """Representative cocycles for H^degree, deterministically chosen."""
        reps = []
        span = self.coboundaries(degree)
        for z in self.cocycles(degree):
            if span.insert(z):
                reps.append(z)
        return reps

    def cohomology_space(self, degree: int) -> "CohomologySpace":
        got = self._h_cache.get(degree)
        if got is None:
            got = self._h_cache[degree] = CohomologySpace(self, degree)
        return got

    def euler_characteristic(self) -> int:
        chi = 0
        for deg in self.space.degrees:
            chi += (-1) ** (deg % 2) * self.dim(deg)
        return chi

    def degree_range(self) -> range:
        if not self.space.degrees:
            return range(0)
        return range(self.space.min_degree, self.space.max_degree + 1)


class CohomologySpace:
    """H^i with a fixed representative basis and coordinate extraction."""

    def __init__(self, complex_: CochainComplex, degree: int):
        self.complex = complex_
        self.degree = degree
        self.field = complex_.field
        self.reps = complex_.cohomology(degree)
        self._boundaries = complex_.coboundaries(degree).basis()

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords_of(self, cocycle: Sequence) -> Vector:
        """Coordinates of a cocycle's class in the representative basis."""
        d = self.complex.differential(self.degree)
        if not vec_is_zero(self.field, d.apply(cocycle)):
            raise ValueError("not a cocycle")
        full = coordinates(self.field, list(self.reps) + self._boundaries, cocycle)
        if full is None:
            raise ValueError("cocycle outside span of representatives and boundaries")
        return tuple(full[: self.dim])

    def is_zero_class(self, cocycle: Sequence) -> bool:
        return vec_is_zero(self.field, self.coords_of(cocycle))


class ChainMap:
    """Degreewise linear map commuting with the differentials."""

    def __init__(
        self,
        source: CochainComplex,
        target: CochainComplex,
        blocks: Mapping[int, Matrix],
        check: bool = True,
    ):
        if source.field is not target.field:
            raise ValueError("field mismatch between source and target")
        self.source = source
        self.target = target
        cleaned = {}
        for deg, m in blocks.items():
            if m.nrows != target.dim(deg) or m.ncols != source.dim(deg):
                raise ValueError(
                    f"block at degree {deg} has shape {m.nrows}x{m.ncols}, "
                    f"expected {target.dim(deg)}x{source.dim(deg)}"
                )
            if not m.is_zero():
                cleaned[deg] = m
        self.blocks = cleaned
        if check:
            for deg in self._active_degrees():
                left = self.target.differential(deg) @ self.block(deg)
                right = self.block(deg + 1) @ self.source.differential(deg)
                if left != right:
                    raise ValueError(f"map does not commute with d at degree {deg}")

    def _active_degrees(self):
        degs = set(self.source.space.degrees) | set(self.target.space.degrees)
        return sorted(degs)

    def block(self, degree: int) -> Matrix:
        m = self.blocks.get(degree)
        if m is None:
            return Matrix.zero(self.source.field, self.target.dim(degree), self.source.dim(degree))
        return m

    def apply(self, degree: int, v: Sequence) -> Vector:
        return self.block(degree).apply(v)

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self ∘ first."""
        if first.target is not self.source and first.target.space != self.source.space:
            raise ValueError("composition mismatch")
        degs = set(first.blocks) | set(self.blocks)
        return ChainMap(
            first.source,
            self.target,
            {d: self.block(d) @ first.block(d) for d in degs},
            check=False,
        )

    @classmethod
    def identity(cls, c: CochainComplex) -> "ChainMap":
        return cls(c, c, {d: Matrix.identity(c.field, c.dim(d)) for d in c.space.degrees}, check=False)

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> "ChainMap":
        return cls(source, target, {}, check=False)

    def induced_on_cohomology(self, degree: int) -> Matrix:
        """Matrix of H^degree(source) → H^degree(target) in the chosen bases."""
        src = self.source.cohomology_space(degree)
        tgt = self.target.cohomology_space(degree)
        cols = [tgt.coords_of(self.apply(degree, rep)) for rep in src.reps]
        return Matrix.from_columns(self.source.field, cols, nrows=tgt.dim)


@dataclass(frozen=True)
class DegreeCertificate:
    degree: int
    source_h_dim: int
    target_h_dim: int
    rank: int

    @property
    def bijective(self) -> bool:
        return self.source_h_dim == self.target_h_dim == self.rank


@dataclass(frozen=True)
class QuasiIsoCertificate:
    ok: bool
    degrees: tuple[DegreeCertificate, ...]

    def __bool__(self):
        return self.ok


def is_quasi_isomorphism(f: ChainMap) -> QuasiIsoCertificate:
    """Bijectivity of H^i(f) for every supported degree, with rank certificates."""
    rows = []
    ok = True
    degs = sorted(set(f.source.space.degrees) | set(f.target.space.degrees))
    for deg in degs:
        m = f.induced_on_cohomology(deg)
        cert = DegreeCertificate(deg, m.ncols, m.nrows, m.rank())
        rows.append(cert)
        ok = ok and cert.bijective
    return QuasiIsoCertificate(ok, tuple(rows))


def _as_complex(x) -> CochainComplex:
    if isinstance(x, CochainComplex):
        return x
    c = getattr(x, "complex", None)
    if isinstance(c, CochainComplex):
        return c
    raise TypeError(f"expected a cochain complex, got {type(x).__name__}")


def _as_chain_map(x) -> ChainMap:
    if isinstance(x, ChainMap):
        return x
    m = getattr(x, "chain_map", None)
    if isinstance(m, ChainMap):
        return m
    raise TypeError(f"expected a chain map, got {type(x).__name__}")


def mapping_cone(f: ChainMap) -> CochainComplex:
    """Cone of f with degree i part source^i ⊕ target^{i−1} and D(l,n) = (dl, f(l) − dn)."""
    src, tgt = f.source, f.target
    field = src.field
    degs = set(src.space.degrees) | {d + 1 for d in tgt.space.degrees}
    labels = {}
    for i in sorted(degs):
        labs = [f"A:{lab}" for lab in src.space.labels(i)]
        labs += [f"B:{lab}" for lab in tgt.space.labels(i - 1)]
        if labs:
            labels[i] = labs
    space = GradedVectorSpace(labels)
    diff = {}
    for i in sorted(degs):
        scols, tcols = src.dim(i), tgt.dim(i - 1)
        srows, trows = src.dim(i + 1), tgt.dim(i)
        ncols, nrows = scols + tcols, srows + trows
        if ncols == 0 or nrows == 0:
            continue
        ds = src.differential(i)
        dt = tgt.differential(i - 1)
        fb = f.block(i)
        rows = []
        for r in range(srows):
            rows.append(tuple(ds.rows[r]) + (field.zero,) * tcols)
        for r in range(trows):
            rows.append(tuple(fb.rows[r]) + tuple(field.neg(a) for a in dt.rows[r]))
        diff[i] = Matrix(field, rows, ncols)
    return CochainComplex(field, space, diff)


class PairCone:
    """The assembled complex with degree i part L^i ⊕ N^i ⊕ M^{i−1}.

    The differential is D(l,n,m) = (dl, dn, −dm − g(n) + h(l)); D∘D = 0 is
    asserted at construction.  Component embedding and splitting helpers keep
    every consumer on one coordinate convention.
    """

    def __init__(self, L: CochainComplex, N: CochainComplex, M: CochainComplex,
                 h: ChainMap, g: ChainMap):
        if h.source is not L or h.target is not M:
            raise ValueError("h must map L to M")
        if g.source is not N or g.target is not M:
            raise ValueError("g must map N to M")
        self.L, self.N, self.M = L, N, M
        self.h, self.g = h, g
        field = L.field
        degs = set(L.space.degrees) | set(N.space.degrees) | {d + 1 for d in M.space.degrees}
        labels = {}
        for i in sorted(degs):
            labs = [f"L:{lab}" for lab in L.space.labels(i)]
            labs += [f"N:{lab}" for lab in N.space.labels(i)]
            labs += [f"M:{lab}" for lab in M.space.labels(i - 1)]
            if labs:
                labels[i] = labs
        space = GradedVectorSpace(labels)
        diff = {}
        for i in sorted(degs):
            lc, nc, mc = L.dim(i), N.dim(i), M.dim(i - 1)
            lr, nr, mr = L.dim(i + 1), N.dim(i + 1), M.dim(i)
            ncols, nrows = lc + nc + mc, lr + nr + mr
            if ncols == 0 or nrows == 0:
                continue
            dl, dn, dm = L.differential(i), N.differential(i), M.differential(i - 1)
            hb, gb = h.block(i), g.block(i)
            rows = []
            for r in range(lr):
                rows.append(tuple(dl.rows[r]) + (field.zero,) * (nc + mc))
            for r in range(nr):
                rows.append((field.zero,) * lc + tuple(dn.rows[r]) + (field.zero,) * mc)
            for r in range(mr):
                rows.append(
                    tuple(hb.rows[r])
                    + tuple(field.neg(a) for a in gb.rows[r])
                    + tuple(field.neg(a) for a in dm.rows[r])
                )
            diff[i] = Matrix(field, rows, ncols)
        self.complex = CochainComplex(field, space, diff)
        for i in sorted(diff):
            nxt = self.complex.differential(i + 1)
            if not (nxt @ diff[i]).is_zero():
                raise ValueError(f"cone differential fails D∘D = 0 at degree {i}")

    @property
    def field(self):
        return self.complex.field

    def dim(self, i: int) -> int:
        return self.complex.dim(i)

    def embed(self, i: int, l: Optional[Sequence] = None, n: Optional[Sequence] = None,
              m: Optional[Sequence] = None) -> Vector:
        field = self.field
        lc, nc, mc = self.L.dim(i), self.N.dim(i), self.M.dim(i - 1)
        l = tuple(l) if l is not None else (field.zero,) * lc
        n = tuple(n) if n is not None else (field.zero,) * nc
        m = tuple(m) if m is not None else (field.zero,) * mc
        if (len(l), len(n), len(m)) != (lc, nc, mc):
            raise ValueError("component dimensions do not match the cone degree")
        return l + n + m

    def split(self, i: int, v: Sequence) -> tuple[Vector, Vector, Vector]:
        lc, nc, mc = self.L.dim(i), self.N.dim(i), self.M.dim(i - 1)
        if len(v) != lc + nc + mc:
            raise ValueError("vector does not match the cone degree")
        v = tuple(v)
        return v[:lc], v[lc : lc + nc], v[lc + nc :]

    def euler_characteristic(self) -> int:
        return self.complex.euler_characteristic()

    def cohomology_space(self, i: int) -> CohomologySpace:
        return self.complex.cohomology_space(i)


def pair_cone(pd) -> PairCone:
    """Assemble the cone of a pair diagram (h: L→M, g: N→M).

    Accepts anything exposing L, N, M, h, g where the algebras carry a
    .complex view and the maps a .chain_map view (plain complexes and chain
    maps work directly).
    """
    L = _as_complex(pd.L)
    N = _as_complex(pd.N)
    M = _as_complex(pd.M)
    h = _as_chain_map(pd.h)
    g = _as_chain_map(pd.g)
    if h.source is not L or h.target is not M or g.source is not N or g.target is not M:
        # views may be fresh objects; rebind by space identity
        h = ChainMap(L, M, h.blocks, check=True)
        g = ChainMap(N, M, g.blocks, check=True)
    return PairCone(L, N, M, h, g)


def induced_cone_map(dm) -> ChainMap:
    """Chain map between pair cones induced by a commuting six-algebra diagram.

    dm exposes source and target pair diagrams plus component maps on_L, on_N,
    on_M.  Each square is re-checked; a non-commuting square is reported with
    the offending composite.
    """
    src = pair_cone(dm.source)
    tgt = pair_cone(dm.target)
    aL = _as_chain_map(dm.on_L)
    aN = _as_chain_map(dm.on_N)
    aM = _as_chain_map(dm.on_M)
    for deg in set(src.L.space.degrees) | set(tgt.L.space.degrees):
        if tgt.h.block(deg) @ aL.block(deg) != aM.block(deg) @ src.h.block(deg):
            raise ValueError(
                f"diagram does not commute at degree {deg}: target_h∘on_L ≠ on_M∘source_h"
            )
    for deg in set(src.N.space.degrees) | set(tgt.N.space.degrees):
        if tgt.g.block(deg) @ aN.block(deg) != aM.block(deg) @ src.g.block(deg):
            raise ValueError(
                f"diagram does not commute at degree {deg}: target_g∘on_N ≠ on_M∘source_g"
            )
    field = src.field
    blocks = {}
    for i in src.complex.degree_range():
        nrows, ncols = tgt.dim(i), src.dim(i)
        if nrows == 0 or ncols == 0:
            continue
        lb, nb, mb = aL.block(i), aN.block(i), aM.block(i - 1)
        rows = []
        lc, nc, mc = src.L.dim(i), src.N.dim(i), src.M.dim(i - 1)
        for r in range(tgt.L.dim(i)):
            rows.append(tuple(lb.rows[r]) + (field.zero,) * (nc + mc))
        for r in range(tgt.N.dim(i)):
            rows.append((field.zero,) * lc + tuple(nb.rows[r]) + (field.zero,) * mc)
        for r in range(tgt.M.dim(i - 1)):
            rows.append((field.zero,) * (lc + nc) + tuple(mb.rows[r]))
        blocks[i] = Matrix(field, rows, ncols)
    return ChainMap(src.complex, tgt.complex, blocks, check=True)


class QuotientComplex:
    """M/S for a d-stable subspace S, with projection data."""

    def __init__(self, M: CochainComplex, sub_vectors: Mapping[int, Sequence[Vector]],
                 label_suffix: str = "'"):
        from .fields import quotient_representatives

        self.M = M
        field = M.field
        self.sub = {}
        reps = {}
        labels = {}
        for i in M.space.degrees:
            vecs = list(sub_vectors.get(i, ()))
            span = Subspace(field, M.dim(i), vecs)
            self.sub[i] = span
            completion = quotient_representatives(field, span.basis(), M.dim(i))
            reps[i] = completion
            labs = []
            for e in completion:
                j = next(k for k, a in enumerate(e) if not field.is_zero(a))
                labs.append(M.space.labels(i)[j] + label_suffix)
            if labs:
                labels[i] = labs
        self.reps = reps
        self.space = GradedVectorSpace(labels)
        diff = {}
        for i in M.space.degrees:
            if not reps.get(i):
                continue
            cols = [self.project(i + 1, M.differential(i).apply(r)) for r in reps[i]]
            if cols and any(not vec_is_zero(field, c) for c in cols):
                diff[i] = Matrix.from_columns(field, cols, nrows=len(reps.get(i + 1, ())))
        self.complex = CochainComplex(field, self.space, diff)
        self.pi = ChainMap(
            M,
            self.complex,
            {
                i: Matrix.from_columns(
                    field,
                    [self.project(i, self._std(i, j)) for j in range(M.dim(i))],
                    nrows=len(reps.get(i, ())),
                )
                for i in M.space.degrees
                if M.dim(i)
            },
            check=True,
        )

    def _std(self, i: int, j: int) -> Vector:
        field = self.M.field
        v = [field.zero] * self.M.dim(i)
        v[j] = field.one
        return tuple(v)

    def project(self, i: int, v: Sequence) -> Vector:
        """Coordinates of v + S in the chosen representative basis."""
        field = self.M.field
        q = len(self.reps.get(i, ()))
        if q == 0:
            return ()
        basis = self.sub[i].basis() + list(self.reps[i])
        full = coordinates(field, basis, v)
        if full is None:
            raise ValueError("vector outside ambient space")
        return tuple(full[len(basis) - q :])


@dataclass
class ReducedPair:
    """Mapping cone of N → M/L with the comparison from the pair cone."""

    cone: CochainComplex
    witness: ChainMap
    quotient: QuotientComplex
    composite: ChainMap


def reduce_injective_pair(pd) -> ReducedPair:
    """Replace a pair cone with the cone of N → M → M/L when h is injective.

    Returns the mapping cone of the composite and the chain map
    (l,n,m) ↦ (n, −π(m)), which is a quasi-isomorphism; the caller can certify
    it via is_quasi_isomorphism.
    """
    pc = pair_cone(pd)
    L, N, M, h, g = pc.L, pc.N, pc.M, pc.h, pc.g
    field = pc.field
    for i in L.space.degrees:
        if len(kernel_basis(h.block(i))) != 0:
            raise ValueError(f"h is not injective in degree {i}")
    image = {
        i: [h.block(i).column(j) for j in range(L.dim(i))]
        for i in L.space.degrees
    }
    quot = QuotientComplex(M, image)
    composite = quot.pi.compose(g)
    cone = mapping_cone(composite)
    blocks = {}
    for i in pc.complex.degree_range():
        ncols = pc.dim(i)
        nrows = cone.dim(i)
        if ncols == 0 or nrows == 0:
            continue
        lc, nc, mc = L.dim(i), N.dim(i), M.dim(i - 1)
        rows = []
        for r in range(N.dim(i)):
            row = [field.zero] * ncols
            row[lc + r] = field.one
            rows.append(tuple(row))
        pib = quot.pi.block(i - 1)
        for r in range(len(quot.reps.get(i - 1, ()))):
            rows.append((field.zero,) * (lc + nc) + tuple(field.neg(a) for a in pib.rows[r]))
        blocks[i] = Matrix(field, rows, ncols)
    witness = ChainMap(pc.complex, cone, blocks, check=True)
    return ReducedPair(cone, witness, quot, composite)
