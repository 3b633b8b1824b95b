"""Obstruction classes in H² of the pair cone, lifting probes, and annihilation.

The class of a triple ξ against a small extension B → A is computed from an
arbitrary degreewise lift (x̃, ỹ, p̃) to B: the defect

    (dx̃ + ½[x̃,x̃],  dỹ + ½[ỹ,ỹ],  e^{p̃}*h(x̃) − g(ỹ))

has coefficients in the kernel J, is closed for the cone differential, and its
class in H²(cone)⊗J is independent of the chosen lift.  The vanishing of the
class is equivalent to the existence of a Maurer-Cartan lift, which the
brute-force oracle checks independently on finite fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .artin import ArtinAlgebra, SmallExtension, curvilinear
from .complexes import PairCone, induced_cone_map, is_quasi_isomorphism, pair_cone
from .dgla import DiagramMorphism, PairDiagram, TensoredDgla, is_abelian
from .fields import Field, solve, vec_add, vec_is_zero, vec_scale, vec_sub
from .mc import (McTriple, TensoredPair, enumerate_mc_triples, gauge_act,
                 iter_vectors, mc_residual, mc_triple_valid, orbit_partition,
                 tensor_morphism)
from .report import ReportBuilder, ValidationReport


# --- coefficient bookkeeping between ⊗m_A and ⊗m_B ------------------------------

def _kernel_indices(e: SmallExtension) -> list[int]:
    return [e.B.monomial_index(lab) for lab in e.kernel_labels]


def _lift_vector(e: SmallExtension, t_a: TensoredDgla, t_b: TensoredDgla,
                 degree: int, v: Sequence) -> tuple:
    """Apply the extension's linear section to each base coordinate's coefficients."""
    f = t_b.field
    na, nb = t_a.artin.dim, t_b.artin.dim
    nbase = t_b.base.space.dim(degree)
    out = [f.zero] * (nbase * nb)
    for bi in range(nbase):
        lifted = e.lift(tuple(v[bi * na:(bi + 1) * na]))
        for mj, c in enumerate(lifted):
            out[bi * nb + mj] = c
    return tuple(out)


def _kernel_supported(e: SmallExtension, t_b: TensoredDgla, v: Sequence) -> bool:
    kset = set(_kernel_indices(e))
    nb = t_b.artin.dim
    f = t_b.field
    return all(f.is_zero(c) or (i % nb) in kset for i, c in enumerate(v))


def _kernel_component(e: SmallExtension, t_b: TensoredDgla, degree: int,
                      v: Sequence, pos: int) -> tuple:
    """The base-coordinate slice of v at the pos-th kernel monomial."""
    ki = _kernel_indices(e)[pos]
    nb = t_b.artin.dim
    nbase = t_b.base.space.dim(degree)
    return tuple(v[bi * nb + ki] for bi in range(nbase))


def _embed_kernel(e: SmallExtension, t_b: TensoredDgla, degree: int,
                  comps: Sequence[Sequence]) -> tuple:
    """Place one base-coordinate vector per kernel monomial into ⊗m_B coordinates."""
    f = t_b.field
    nb = t_b.artin.dim
    nbase = t_b.base.space.dim(degree)
    out = [f.zero] * (nbase * nb)
    for pos, ki in enumerate(_kernel_indices(e)):
        comp = comps[pos]
        for bi in range(nbase):
            out[bi * nb + ki] = comp[bi]
    return tuple(out)


def _random_scalar(f: Field, rng):
    if f.characteristic:
        return f.from_int(rng.randrange(f.characteristic))
    return f.from_int(rng.randint(-9, 9))


def _random_kernel_vector(e: SmallExtension, t_b: TensoredDgla, degree: int, rng) -> tuple:
    f = t_b.field
    nbase = t_b.base.space.dim(degree)
    comps = [tuple(_random_scalar(f, rng) for _ in range(nbase)) for _ in e.kernel_labels]
    return _embed_kernel(e, t_b, degree, comps)


@dataclass(frozen=True)
class ObstructionClass:
    """A class in H²(pair cone) ⊗ J, one component per kernel generator."""

    extension_name: str
    kernel_labels: tuple[str, ...]
    representatives: tuple[tuple, ...]   # closed cone-degree-2 vectors
    coordinates: tuple[tuple, ...]       # H² coordinates in the cone's basis
    field: Field

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for vec in self.coordinates for c in vec)

    def __eq__(self, other):
        return (isinstance(other, ObstructionClass)
                and self.kernel_labels == other.kernel_labels
                and self.coordinates == other.coordinates)

    def __hash__(self):
        return hash((self.kernel_labels, self.coordinates))


def _defect(xi: McTriple, e: SmallExtension, ctx_a: TensoredPair, ctx_b: TensoredPair,
            rng=None):
    """Lift ξ to B and return (lift, per-kernel-label defect components)."""
    f = ctx_b.field
    xt = _lift_vector(e, ctx_a.L, ctx_b.L, 1, xi.x)
    yt = _lift_vector(e, ctx_a.N, ctx_b.N, 1, xi.y)
    pt = _lift_vector(e, ctx_a.M, ctx_b.M, 0, xi.p)
    if rng is not None:
        xt = vec_add(f, xt, _random_kernel_vector(e, ctx_b.L, 1, rng))
        yt = vec_add(f, yt, _random_kernel_vector(e, ctx_b.N, 1, rng))
        pt = vec_add(f, pt, _random_kernel_vector(e, ctx_b.M, 0, rng))
    rx = mc_residual(ctx_b.L, xt)
    ry = mc_residual(ctx_b.N, yt)
    w = gauge_act(ctx_b.M, pt, ctx_b.h.apply(1, xt), order=ctx_b.order)
    r = vec_sub(f, w, ctx_b.g.apply(1, yt))
    for t, v in ((ctx_b.L, rx), (ctx_b.N, ry), (ctx_b.M, r)):
        if not _kernel_supported(e, t, v):
            raise ValueError(
                "triple is not Maurer-Cartan over the base of the extension"
            )
    comps = []
    for pos in range(len(e.kernel_labels)):
        comps.append((
            _kernel_component(e, ctx_b.L, 2, rx, pos),
            _kernel_component(e, ctx_b.N, 2, ry, pos),
            _kernel_component(e, ctx_b.M, 1, r, pos),
        ))
    return (xt, yt, pt), comps


def obstruction_class(xi: McTriple, e: SmallExtension, pd: PairDiagram, *,
                      rng=None, ctx_a: Optional[TensoredPair] = None,
                      ctx_b: Optional[TensoredPair] = None,
                      cone: Optional[PairCone] = None) -> ObstructionClass:
    """The obstruction to lifting ξ from A to B, as a class in H²(cone)⊗J.

    Pass rng to pick the set-theoretic lift at random instead of using the
    extension's section; the resulting class must not change.
    """
    ctx_a = ctx_a if ctx_a is not None else TensoredPair(pd, e.A)
    ctx_b = ctx_b if ctx_b is not None else TensoredPair(pd, e.B)
    cone = cone if cone is not None else pair_cone(pd)
    f = ctx_b.field
    _, comps = _defect(xi, e, ctx_a, ctx_b, rng=rng)
    h2 = cone.complex.cohomology_space(2)
    d2 = cone.complex.differential(2)
    reps, coords = [], []
    for lv, nv, mv in comps:
        vec = cone.embed(2, lv, nv, mv)
        assert vec_is_zero(f, d2.apply(vec)), "obstruction defect is not closed"
        reps.append(vec)
        coords.append(h2.coords_of(vec))
    return ObstructionClass(e.name, tuple(e.kernel_labels), tuple(reps),
                            tuple(coords), f)


def lift_mc_triple(xi: McTriple, e: SmallExtension, pd: PairDiagram, *,
                   rng=None, ctx_a: Optional[TensoredPair] = None,
                   ctx_b: Optional[TensoredPair] = None,
                   cone: Optional[PairCone] = None) -> Optional[McTriple]:
    """A Maurer-Cartan lift of ξ to B, or None when the obstruction is nonzero.

    The correction is the deterministic echelon solution of D(δ) = −defect;
    with rng both the lift and the solution are randomized (the verdict may
    not depend on either).
    """
    ctx_a = ctx_a if ctx_a is not None else TensoredPair(pd, e.A)
    ctx_b = ctx_b if ctx_b is not None else TensoredPair(pd, e.B)
    cone = cone if cone is not None else pair_cone(pd)
    f = ctx_b.field
    (xt, yt, pt), comps = _defect(xi, e, ctx_a, ctx_b, rng=rng)
    d1 = cone.complex.differential(1)
    dl, dn, dm = [], [], []
    for lv, nv, mv in comps:
        target = tuple(f.neg(c) for c in cone.embed(2, lv, nv, mv))
        sol = solve(d1, target)
        if sol is None:
            return None
        delta, kernel = sol
        if rng is not None and kernel:
            for kv in kernel:
                delta = vec_add(f, delta, vec_scale(f, _random_scalar(f, rng), kv))
        a, b, c = cone.split(1, delta)
        dl.append(a)
        dn.append(b)
        dm.append(c)
    lifted = McTriple(
        vec_add(f, xt, _embed_kernel(e, ctx_b.L, 1, dl)),
        vec_add(f, yt, _embed_kernel(e, ctx_b.N, 1, dn)),
        vec_add(f, pt, _embed_kernel(e, ctx_b.M, 0, dm)),
    )
    report = mc_triple_valid(lifted, pd, e.B, ctx=ctx_b)
    assert report.ok, "corrected lift fails the Maurer-Cartan conditions"
    return lifted


def lift_exists_bruteforce(xi: McTriple, e: SmallExtension, pd: PairDiagram,
                           bound: int = 10 ** 6,
                           ctx_a: Optional[TensoredPair] = None,
                           ctx_b: Optional[TensoredPair] = None) -> bool:
    """Exhaustive search over every correction in C¹⊗J; the oracle for the class."""
    ctx_a = ctx_a if ctx_a is not None else TensoredPair(pd, e.A)
    ctx_b = ctx_b if ctx_b is not None else TensoredPair(pd, e.B)
    f = ctx_b.field
    if not f.characteristic:
        raise ValueError("brute-force lifting needs a finite field")
    k = len(e.kernel_labels)
    nx = pd.L.dim(1) * k
    ny = pd.N.dim(1) * k
    np_ = pd.M.dim(0) * k
    size = f.characteristic ** (nx + ny + np_)
    if size > bound:
        raise ValueError(f"search-space bound exceeded: {size} corrections > {bound}")
    x0 = _lift_vector(e, ctx_a.L, ctx_b.L, 1, xi.x)
    y0 = _lift_vector(e, ctx_a.N, ctx_b.N, 1, xi.y)
    p0 = _lift_vector(e, ctx_a.M, ctx_b.M, 0, xi.p)

    def corrections(t: TensoredDgla, degree: int):
        nbase = t.base.space.dim(degree)
        for combo in iter_vectors(f, nbase * k):
            comps = [combo[i * nbase:(i + 1) * nbase] for i in range(k)]
            yield _embed_kernel(e, t, degree, comps)

    good_images = set()
    for cy in corrections(ctx_b.N, 1):
        yt = vec_add(f, y0, cy)
        if vec_is_zero(f, mc_residual(ctx_b.N, yt)):
            good_images.add(ctx_b.g.apply(1, yt))
    for cx in corrections(ctx_b.L, 1):
        xt = vec_add(f, x0, cx)
        if not vec_is_zero(f, mc_residual(ctx_b.L, xt)):
            continue
        hx = ctx_b.h.apply(1, xt)
        for cp in corrections(ctx_b.M, 0):
            pt = vec_add(f, p0, cp)
            if gauge_act(ctx_b.M, pt, hx, order=ctx_b.order) in good_images:
                return True
    return False


@dataclass(frozen=True)
class ProbeResult:
    """Lift verdicts along the one-variable tower k[x]/(x²) ⊂ k[x]/(x³) ⊂ …"""

    depth: int
    verdicts: tuple[bool, ...]                 # order 2, 3, … in turn
    first_obstructed: Optional[int]
    obstructing_class: Optional[ObstructionClass]

    @property
    def unobstructed(self) -> bool:
        return self.first_obstructed is None

    def describe(self) -> str:
        if self.unobstructed:
            return f"unobstructed to depth {self.depth}"
        return f"first obstruction at order {self.first_obstructed}"


def curvilinear_probe(xi1: McTriple, pd: PairDiagram, depth: int, *,
                      rng=None) -> ProbeResult:
    """Lift a first-order triple up the one-variable tower, reporting the first failure.

    xi1 lives over a one-variable square-zero algebra (dim m = 1).  Stage n
    asks for a lift from k[x]/(xⁿ) to k[x]/(xⁿ⁺¹); once a stage is obstructed
    the probe stops.
    """
    if depth > 8:
        raise ValueError("probe depth is capped at 8")
    f = pd.L.field
    cur = xi1
    verdicts: list[bool] = []
    for n in range(2, depth + 1):
        ext = curvilinear(f, n)
        ctx_a = TensoredPair(pd, ext.A)
        ctx_b = TensoredPair(pd, ext.B)
        if n == 2 and (len(cur.x), len(cur.y), len(cur.p)) != (
                ctx_a.L.dim(1), ctx_a.N.dim(1), ctx_a.M.dim(0)):
            raise ValueError("probe input must live over a one-variable square-zero algebra")
        cls = obstruction_class(cur, ext, pd, ctx_a=ctx_a, ctx_b=ctx_b)
        if not cls.is_zero():
            verdicts.append(False)
            return ProbeResult(depth, tuple(verdicts), n, cls)
        verdicts.append(True)
        cur = lift_mc_triple(cur, ext, pd, rng=rng, ctx_a=ctx_a, ctx_b=ctx_b)
    return ProbeResult(depth, tuple(verdicts), None, None)


def _enumeration_guard(ctx: TensoredPair, bound: int):
    f = ctx.field
    if not f.characteristic:
        raise ValueError("orbit enumeration needs a finite field")
    worst = max(ctx.L.dim(1), ctx.N.dim(1), ctx.M.dim(0), ctx.L.dim(0), ctx.N.dim(0))
    if f.characteristic ** worst > bound:
        raise ValueError(
            f"enumeration bound exceeded: {f.characteristic}^{worst} > {bound}"
        )


def verify_functor_iso(dm: DiagramMorphism, algebras: Sequence[ArtinAlgebra],
                       bound: int = 10 ** 6) -> ValidationReport:
    """Check that the induced map on gauge-orbit sets is a bijection for each algebra.

    The first check records whether the induced cone map is a
    quasi-isomorphism; the per-algebra checks are the exhaustive orbit
    comparisons.
    """
    rb = ReportBuilder(f"functor comparison {dm.name}")
    cm = induced_cone_map(dm)
    cert = is_quasi_isomorphism(cm)
    bad = [c for c in cert.degrees if not c.bijective]
    rb.add("cone map is a quasi-isomorphism", bool(cert),
           None if cert else (
               f"H^{bad[0].degree}: dims {bad[0].source_h_dim} → "
               f"{bad[0].target_h_dim}, rank {bad[0].rank}"))
    for art in algebras:
        src_ctx = TensoredPair(dm.source, art)
        tgt_ctx = TensoredPair(dm.target, art)
        _enumeration_guard(src_ctx, bound)
        _enumeration_guard(tgt_ctx, bound)
        src_orbits = orbit_partition(dm.source, art, ctx=src_ctx)
        tgt_orbits = orbit_partition(dm.target, art, ctx=tgt_ctx)
        tL = tensor_morphism(dm.on_L, src_ctx.L, tgt_ctx.L)
        tN = tensor_morphism(dm.on_N, src_ctx.N, tgt_ctx.N)
        tM = tensor_morphism(dm.on_M, src_ctx.M, tgt_ctx.M)
        where = {t: k for k, orb in enumerate(tgt_orbits) for t in orb}
        ok, wit = True, None
        images = []
        for orb in src_orbits:
            seen = {where.get(McTriple(tL.apply(1, t.x), tN.apply(1, t.y),
                                       tM.apply(0, t.p))) for t in orb}
            if None in seen:
                ok, wit = False, "image of a Maurer-Cartan triple fails the equations"
                break
            if len(seen) != 1:
                ok, wit = False, "image of one orbit meets several target orbits"
                break
            images.append(seen.pop())
        if ok and len(set(images)) != len(images):
            ok = False
            wit = (f"not injective on orbits: {len(src_orbits)} source orbits, "
                   f"{len(set(images))} distinct images")
        if ok and len(set(images)) != len(tgt_orbits):
            ok = False
            wit = (f"not surjective on orbits: {len(tgt_orbits)} target orbits, "
                   f"{len(set(images))} reached")
        rb.add(f"orbit bijection over {art.name}", ok, wit)
    return rb.build()


@dataclass(frozen=True)
class AnnihilationEntry:
    label: str
    coordinates: tuple        # H² coordinates of the source class component
    image: tuple              # its image in the target H²
    ok: bool


class AnnihilationReport:
    """Per-class record of the induced H² map killing every obstruction."""

    def __init__(self, subject: str, smoothness: str,
                 entries: Sequence[AnnihilationEntry]):
        self.subject = subject
        self.smoothness = smoothness
        self.entries = tuple(entries)

    @property
    def ok(self) -> bool:
        return all(en.ok for en in self.entries)

    def lines(self):
        yield f"{self.subject} [{'ok' if self.ok else 'FAILED'}]"
        yield f"  target smoothness: {self.smoothness}"
        for en in self.entries:
            mark = "ok" if en.ok else "FAIL"
            yield (f"  [{mark}] {en.label}: class {list(en.coordinates)} "
                   f"-> image {list(en.image)}")


def annihilation_check(dm: DiagramMorphism,
                       corpus: Sequence[tuple[McTriple, SmallExtension]],
                       bound: int = 10 ** 6,
                       smooth_via: Optional[DiagramMorphism] = None) -> AnnihilationReport:
    """Verify every corpus obstruction class dies under H²(cone) → H²(target cone).

    The target pair must be certified smooth first, by one of three routes:
    all three of its DGLAs abelian; a supplied comparison smooth_via from an
    all-abelian pair into the target whose induced cone map is a
    quasi-isomorphism (deformations then agree with a smooth functor); or
    (finite fields) exhaustive lifting of every Maurer-Cartan triple over each
    corpus extension's base.
    """
    target = dm.target
    f = target.L.field
    distinct = []
    for _, e in corpus:
        if all(e is not seen for seen in distinct):
            distinct.append(e)
    if is_abelian(target.L) and is_abelian(target.N) and is_abelian(target.M):
        smoothness = "abelian target"
    elif smooth_via is not None:
        if smooth_via.target is not target:
            raise ValueError("smooth_via must land in the annihilation target pair")
        src = smooth_via.source
        if not (is_abelian(src.L) and is_abelian(src.N) and is_abelian(src.M)):
            raise ValueError("target not certified smooth: smooth_via source is not abelian")
        if not is_quasi_isomorphism(induced_cone_map(smooth_via)):
            raise ValueError(
                "target not certified smooth: smooth_via cone map is not a quasi-isomorphism"
            )
        smoothness = f"abelian comparison {smooth_via.name}"
    else:
        if not f.characteristic:
            raise ValueError(
                "target not certified smooth: need an abelian target or a finite field"
            )
        for e in distinct:
            ctx_a = TensoredPair(target, e.A)
            ctx_b = TensoredPair(target, e.B)
            _enumeration_guard(ctx_a, bound)
            for tau in enumerate_mc_triples(target, e.A, ctx=ctx_a):
                if not lift_exists_bruteforce(tau, e, target, bound=bound,
                                              ctx_a=ctx_a, ctx_b=ctx_b):
                    raise ValueError(
                        f"target not certified smooth: a triple over {e.A.name} "
                        f"does not lift through {e.name}"
                    )
        smoothness = f"exhaustive over {f.name}"
    cm = induced_cone_map(dm)
    h2_map = cm.induced_on_cohomology(2)
    cone = pair_cone(dm.source)
    ctx_cache: dict[int, tuple[TensoredPair, TensoredPair]] = {}
    entries = []
    for i, (xi, e) in enumerate(corpus):
        key = id(e)
        if key not in ctx_cache:
            ctx_cache[key] = (TensoredPair(dm.source, e.A), TensoredPair(dm.source, e.B))
        ctx_a, ctx_b = ctx_cache[key]
        cls = obstruction_class(xi, e, dm.source, ctx_a=ctx_a, ctx_b=ctx_b, cone=cone)
        for pos, klab in enumerate(cls.kernel_labels):
            coords = cls.coordinates[pos]
            image = h2_map.apply(coords)
            entries.append(AnnihilationEntry(
                f"entry {i}, {e.name} ⊗ {klab}", coords, tuple(image),
                vec_is_zero(f, image)))
    return AnnihilationReport(f"annihilation through {dm.name}", smoothness, entries)
