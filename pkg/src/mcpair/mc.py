"""Maurer-Cartan elements of a pair diagram over an Artinian base, with gauge action.

A solution is a triple (x, y, p) with x ∈ L¹⊗m, y ∈ N¹⊗m, p ∈ M⁰⊗m: both x and
y satisfy the Maurer-Cartan equation and the images in M glue, g(y) = e^p * h(x).
Group elements are stored as logarithms; all products go through the
Baker-Campbell-Hausdorff series, which terminates because m is nilpotent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Iterator, Optional, Sequence

from .artin import ArtinAlgebra, nilpotency_index
from .dgla import Dgla, DglaMorphism, PairDiagram, TensoredDgla, tensor_with_ideal
from .fields import (Field, Matrix, Vector, solve, vec_add, vec_is_zero,
                     vec_scale, vec_sub, vec_zero)
from .report import ReportBuilder, ValidationReport


def _require_invertible(field: Field, n: int):
    # the series coefficients need 1/1, ..., 1/n
    if field.characteristic and field.characteristic <= n:
        raise ValueError(
            f"characteristic too small: {field.name} cannot invert the integers up to {n}"
        )


def _nilpotency_of(g: Dgla) -> int:
    if isinstance(g, TensoredDgla):
        return nilpotency_index(g.artin)
    raise ValueError("pass order= explicitly for a DGLA without Artinian coefficients")


def mc_residual(g: Dgla, x: Sequence) -> Vector:
    """dx + ½[x,x] for a degree-1 element; vanishing is the Maurer-Cartan equation."""
    f = g.field
    x = tuple(x)
    if len(x) != g.dim(1):
        raise ValueError(
            f"wrong degree: element of length {len(x)} does not live in degree 1 "
            f"(dimension {g.dim(1)})"
        )
    _require_invertible(f, 2)
    dx = g.d_apply(1, x)
    half = f.inv(f.from_int(2))
    return vec_add(f, dx, vec_scale(f, half, g.bracket(1, x, 1, x)))


def gauge_act(g: Dgla, a: Sequence, x: Sequence, order: Optional[int] = None) -> Vector:
    """e^a * x = x + Σ_{n≥0} ad_a^n/(n+1)! ([a,x] − da), truncated by nilpotency.

    `order` is the nilpotency index of the coefficient ideal; it is read off a
    tensored DGLA automatically.
    """
    f = g.field
    a, x = tuple(a), tuple(x)
    if len(a) != g.dim(0) or len(x) != g.dim(1):
        raise ValueError("degree mismatch: gauge_act needs a in degree 0 and x in degree 1")
    order = order if order is not None else _nilpotency_of(g)
    _require_invertible(f, max(order - 1, 1))
    s = vec_sub(f, g.bracket(0, a, 1, x), g.d_apply(0, a))
    out = vec_add(f, x, s)
    n = 1
    # the n-th summand sits in m^{n+1}, so it dies once n+1 reaches the order
    while n + 1 < order and not vec_is_zero(f, s):
        s = vec_scale(f, f.inv(f.from_int(n + 1)), g.bracket(0, a, 1, s))
        out = vec_add(f, out, s)
        n += 1
    return out


def _bch_blocks(limit: int) -> list[tuple[tuple[int, int], ...]]:
    """All nonempty sequences of blocks (r_i, s_i) ≠ (0,0) with Σ(r_i+s_i) ≤ limit."""
    out = []

    def rec(prefix: list, remaining: int):
        if prefix:
            out.append(tuple(prefix))
        for r in range(remaining + 1):
            for s in range(remaining - r + 1):
                if r + s == 0:
                    continue
                prefix.append((r, s))
                rec(prefix, remaining - r - s)
                prefix.pop()

    rec([], limit)
    return out


def bch(g: Dgla, p: Sequence, q: Sequence, order: Optional[int] = None) -> Vector:
    """log(e^p e^q) for degree-0 elements, by the Dynkin series.

    Words longer than order−1 land in m^order = 0 and are dropped, so the sum
    is finite and the group law is exact (associativity holds on the nose).
    """
    f = g.field
    p, q = tuple(p), tuple(q)
    n0 = g.dim(0)
    if len(p) != n0 or len(q) != n0:
        raise ValueError("degree mismatch: bch arguments live in degree 0")
    order = order if order is not None else _nilpotency_of(g)
    limit = order - 1
    if limit <= 0:
        return vec_zero(f, n0)
    _require_invertible(f, limit)
    vecs = {"p": p, "q": q}
    zero = vec_zero(f, n0)
    cache: dict[tuple, Vector] = {}

    def nested(word: tuple) -> Vector:
        # right-nested commutator [w0, [w1, [...]]]
        got = cache.get(word)
        if got is not None:
            return got
        if len(word) == 1:
            val = vecs[word[0]]
        else:
            tail = nested(word[1:])
            val = zero if vec_is_zero(f, tail) else g.bracket(0, vecs[word[0]], 0, tail)
        cache[word] = val
        return val

    total = zero
    for blocks in _bch_blocks(limit):
        word = []
        for r, s in blocks:
            word.extend("p" * r)
            word.extend("q" * s)
        v = nested(tuple(word))
        if vec_is_zero(f, v):
            continue
        n = len(blocks)
        denom = n * len(word)
        for r, s in blocks:
            denom *= factorial(r) * factorial(s)
        c = f.div(f.from_int(1 if n % 2 == 1 else -1), f.from_int(denom))
        total = vec_add(f, total, vec_scale(f, c, v))
    return total


@dataclass(frozen=True)
class McTriple:
    """Candidate solution (x, y, p) with p the logarithm of the gluing group element."""

    x: Vector
    y: Vector
    p: Vector

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "p", tuple(self.p))


@dataclass(frozen=True)
class GaugePair:
    """Logarithms (a, b) of a gauge group element of exp(L⁰⊗m) × exp(N⁰⊗m)."""

    a: Vector
    b: Vector

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))


class TensoredPair:
    """A pair diagram with coefficients extended by the maximal ideal of an Artinian algebra.

    Precomputes the three tensored DGLAs and the extended morphisms once, so
    the solvers below can share them across many calls.
    """

    def __init__(self, pd: PairDiagram, artin: ArtinAlgebra):
        if pd.L.field is not artin.field:
            raise ValueError("field mismatch")
        self.pd = pd
        self.artin = artin
        self.field = pd.L.field
        self.L = tensor_with_ideal(pd.L, artin)
        self.N = tensor_with_ideal(pd.N, artin)
        self.M = tensor_with_ideal(pd.M, artin)
        self.h = tensor_morphism(pd.h, self.L, self.M)
        self.g = tensor_morphism(pd.g, self.N, self.M)
        self.order = nilpotency_index(artin)

    def zero_triple(self) -> McTriple:
        f = self.field
        return McTriple(vec_zero(f, self.L.dim(1)), vec_zero(f, self.N.dim(1)),
                        vec_zero(f, self.M.dim(0)))

    def zero_gauge(self) -> GaugePair:
        f = self.field
        return GaugePair(vec_zero(f, self.L.dim(0)), vec_zero(f, self.N.dim(0)))


def tensor_morphism(dm: DglaMorphism, src: TensoredDgla, tgt: TensoredDgla) -> DglaMorphism:
    """Extend a base morphism to ⊗m_A coefficients (block ⊗ identity)."""
    f = src.field
    na = src.artin.dim
    blocks = {}
    for deg in src.space.degrees:
        base = dm.block(deg)
        if base.is_zero():
            continue
        nr, nc = tgt.dim(deg), src.dim(deg)
        rows = [[f.zero] * nc for _ in range(nr)]
        for rb in range(base.nrows):
            for cb in range(base.ncols):
                c = base.rows[rb][cb]
                if f.is_zero(c):
                    continue
                for mj in range(na):
                    rows[rb * na + mj][cb * na + mj] = c
        blocks[deg] = Matrix(f, rows, ncols=nc)
    return DglaMorphism(src, tgt, blocks, name=dm.name, check=False)


def mc_triple_valid(xi: McTriple, pd: PairDiagram, artin: ArtinAlgebra,
                    ctx: Optional[TensoredPair] = None) -> ValidationReport:
    """Check the two Maurer-Cartan equations and the gluing condition g(y) = e^p * h(x)."""
    ctx = ctx if ctx is not None else TensoredPair(pd, artin)
    f = ctx.field
    rb = ReportBuilder(f"mc triple over {ctx.artin.name}")

    rx = mc_residual(ctx.L, xi.x)
    rb.add("x Maurer-Cartan", vec_is_zero(f, rx),
           f"dx + ½[x,x] = {ctx.L.format_element(2, rx)}")
    ry = mc_residual(ctx.N, xi.y)
    rb.add("y Maurer-Cartan", vec_is_zero(f, ry),
           f"dy + ½[y,y] = {ctx.N.format_element(2, ry)}")

    hx = ctx.h.apply(1, xi.x)
    act = gauge_act(ctx.M, xi.p, hx, order=ctx.order)
    gy = ctx.g.apply(1, xi.y)
    diff = vec_sub(f, gy, act)
    rb.add("compatibility", vec_is_zero(f, diff),
           f"g(y) - e^p*h(x) = {ctx.M.format_element(1, diff)}")
    return rb.build()


def gauge_act_pair(gp: GaugePair, xi: McTriple, pd: PairDiagram, artin: ArtinAlgebra,
                   ctx: Optional[TensoredPair] = None) -> McTriple:
    """(e^a, e^b) * (x, y, e^p) = (e^a*x, e^b*y, e^{g(b)} e^p e^{−h(a)})."""
    ctx = ctx if ctx is not None else TensoredPair(pd, artin)
    f = ctx.field
    x2 = gauge_act(ctx.L, gp.a, xi.x, order=ctx.order)
    y2 = gauge_act(ctx.N, gp.b, xi.y, order=ctx.order)
    neg_ha = vec_scale(f, f.neg(f.one), ctx.h.apply(0, gp.a))
    p2 = bch(ctx.M, ctx.g.apply(0, gp.b), bch(ctx.M, xi.p, neg_ha, order=ctx.order),
             order=ctx.order)
    return McTriple(x2, y2, p2)


def _level_indices(t: TensoredDgla, degree: int, level: int) -> list[int]:
    return [i for i in range(t.dim(degree)) if t.monomial_level_of(i) == level]


def gauge_equivalent(xi1: McTriple, xi2: McTriple, pd: PairDiagram, artin: ArtinAlgebra,
                     ctx: Optional[TensoredPair] = None) -> Optional[GaugePair]:
    """Search for a gauge pair carrying xi1 to xi2; None when no witness exists.

    Solved stage by stage along the filtration m ⊇ m² ⊇ …: at stage k the
    discrepancy in level-k coefficients is linear in the level-k part of the
    unknown logarithms, so each stage is one exact linear solve.
    """
    ctx = ctx if ctx is not None else TensoredPair(pd, artin)
    f = ctx.field
    a = vec_zero(f, ctx.L.dim(0))
    b = vec_zero(f, ctx.N.dim(0))
    for level in range(1, ctx.order):
        cur = gauge_act_pair(GaugePair(a, b), xi1, pd, artin, ctx=ctx)
        dx = vec_sub(f, xi2.x, cur.x)
        dy = vec_sub(f, xi2.y, cur.y)
        dp = vec_sub(f, xi2.p, cur.p)
        rows_x = _level_indices(ctx.L, 1, level)
        rows_y = _level_indices(ctx.N, 1, level)
        rows_p = _level_indices(ctx.M, 0, level)
        rhs = ([f.neg(dx[i]) for i in rows_x] + [f.neg(dy[i]) for i in rows_y]
               + [dp[i] for i in rows_p])
        if vec_is_zero(f, rhs):
            continue
        cols_a = _level_indices(ctx.L, 0, level)
        cols_b = _level_indices(ctx.N, 0, level)
        dL = ctx.L.differential(0)
        dN = ctx.N.differential(0)
        hblk = ctx.h.block(0)
        gblk = ctx.g.block(0)
        columns = []
        for i in cols_a:
            # acting by e^alpha changes x by −d(alpha) and p by −h(alpha) at this level
            col = ([dL.rows[r][i] for r in rows_x]
                   + [f.zero] * len(rows_y)
                   + [f.neg(hblk.rows[r][i]) for r in rows_p])
            columns.append(col)
        for j in cols_b:
            col = ([f.zero] * len(rows_x)
                   + [dN.rows[r][j] for r in rows_y]
                   + [gblk.rows[r][j] for r in rows_p])
            columns.append(col)
        m = Matrix.from_columns(f, columns, nrows=len(rhs))
        sol = solve(m, tuple(rhs))
        if sol is None:
            return None
        particular, _ = sol
        alpha = list(vec_zero(f, ctx.L.dim(0)))
        beta = list(vec_zero(f, ctx.N.dim(0)))
        for k, i in enumerate(cols_a):
            alpha[i] = particular[k]
        for k, j in enumerate(cols_b):
            beta[j] = particular[len(cols_a) + k]
        a = bch(ctx.L, tuple(alpha), a, order=ctx.order)
        b = bch(ctx.N, tuple(beta), b, order=ctx.order)
    final = gauge_act_pair(GaugePair(a, b), xi1, pd, artin, ctx=ctx)
    if final != xi2:
        return None
    return GaugePair(a, b)


def field_elements(f: Field) -> list:
    """All elements of a prime field, in residue order."""
    if not f.characteristic:
        raise ValueError("enumeration needs a finite field")
    return [f.from_int(i) for i in range(f.characteristic)]


def iter_vectors(f: Field, n: int) -> Iterator[Vector]:
    for combo in product(field_elements(f), repeat=n):
        yield combo


def enumerate_mc_triples(pd: PairDiagram, artin: ArtinAlgebra,
                         ctx: Optional[TensoredPair] = None) -> list[McTriple]:
    """Exhaustive Maurer-Cartan set over a finite field (desk-scale only)."""
    ctx = ctx if ctx is not None else TensoredPair(pd, artin)
    f = ctx.field
    xs = [x for x in iter_vectors(f, ctx.L.dim(1)) if vec_is_zero(f, mc_residual(ctx.L, x))]
    ys = [y for y in iter_vectors(f, ctx.N.dim(1)) if vec_is_zero(f, mc_residual(ctx.N, y))]
    by_image: dict[Vector, list[Vector]] = {}
    for y in ys:
        by_image.setdefault(ctx.g.apply(1, y), []).append(y)
    out = []
    for x in xs:
        hx = ctx.h.apply(1, x)
        for p in iter_vectors(f, ctx.M.dim(0)):
            act = gauge_act(ctx.M, p, hx, order=ctx.order)
            for y in by_image.get(act, ()):
                out.append(McTriple(x, y, p))
    return out


def gauge_generators(ctx: TensoredPair) -> list[GaugePair]:
    """Single-coordinate gauge pairs; they generate the whole gauge group."""
    f = ctx.field
    nonzero = [c for c in field_elements(f) if not f.is_zero(c)]
    na, nb = ctx.L.dim(0), ctx.N.dim(0)
    gens = []
    for i in range(na):
        for c in nonzero:
            a = [f.zero] * na
            a[i] = c
            gens.append(GaugePair(tuple(a), vec_zero(f, nb)))
    for j in range(nb):
        for c in nonzero:
            b = [f.zero] * nb
            b[j] = c
            gens.append(GaugePair(vec_zero(f, na), tuple(b)))
    return gens


def orbit_partition(pd: PairDiagram, artin: ArtinAlgebra,
                    triples: Optional[Sequence[McTriple]] = None,
                    ctx: Optional[TensoredPair] = None) -> list[list[McTriple]]:
    """Partition the Maurer-Cartan set into gauge orbits by closure under generators."""
    ctx = ctx if ctx is not None else TensoredPair(pd, artin)
    if triples is None:
        triples = enumerate_mc_triples(pd, artin, ctx=ctx)
    gens = gauge_generators(ctx)
    universe = set(triples)
    remaining = set(triples)
    orbits = []
    while remaining:
        seed = min(remaining, key=lambda t: (t.x, t.y, t.p))
        orbit = {seed}
        frontier = [seed]
        remaining.discard(seed)
        while frontier:
            t = frontier.pop()
            for gp in gens:
                t2 = gauge_act_pair(gp, t, pd, artin, ctx=ctx)
                if t2 not in orbit:
                    if t2 not in universe:
                        raise AssertionError("gauge action left the Maurer-Cartan set")
                    orbit.add(t2)
                    remaining.discard(t2)
                    frontier.append(t2)
        orbits.append(sorted(orbit, key=lambda t: (t.x, t.y, t.p)))
    orbits.sort(key=lambda o: (o[0].x, o[0].y, o[0].p))
    return orbits
