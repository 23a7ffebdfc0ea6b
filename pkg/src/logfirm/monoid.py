"""Fine saturated monoids and their homomorphisms.

An affine monoid is stored as (cone generated by its generators) intersected
with (the subgroup generated by them, or an explicitly supplied subgroup) in
an ambient lattice Z^d.  All structural computation happens in "local"
coordinates on the group: the group basis is a Hermite-form lattice basis,
and cones, facets, and Hilbert bases live in Z^g where g is the group rank.

Homomorphisms are integer matrices on the ambient lattices that carry the
source monoid into the target monoid.  The searches in this module
(retraction, factorization, pushout saturation probes) are complete: they
reduce to exact integer feasibility problems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .intlinalg import (
    Vec,
    dual_description,
    hermite_normal_form,
    identity,
    ilp_feasible,
    in_row_lattice,
    kernel_and_cokernel,
    mat_mul,
    mat_vec,
    primitive,
    row_lattice_basis,
    smith_normal_form,
    solve_lattice,
    vec_add,
    vec_sub,
    dot,
)


class NotSharp(Exception):
    """The operation requires a sharp monoid (pointed cone, trivial units)."""


class NotAFace(Exception):
    """The supplied face does not belong to the monoid."""


class HomNotRepresentable(Exception):
    """A group-level homomorphism admits no integer matrix on the chosen
    ambient lattices.  Present the source monoid in group coordinates
    (full-lattice generators) to avoid this."""


# ---------------------------------------------------------------------------
# AffineMonoid


@dataclass(frozen=True)
class AffineMonoid:
    ambient_rank: int
    generators: tuple[Vec, ...]
    group_basis: tuple[Vec, ...]       # Hermite-form rows spanning the group
    facets_local: tuple[Vec, ...]      # halfspace normals in group coordinates
    rays_local: tuple[Vec, ...]        # extreme rays in group coordinates
    sharp: bool
    hilbert_local: tuple[Vec, ...] | None  # None when not sharp

    # -- coordinates ------------------------------------------------------

    @property
    def group_rank(self) -> int:
        return len(self.group_basis)

    def coords(self, v) -> Vec | None:
        """Group coordinates of an ambient vector, or None if outside the group."""
        if self.group_rank == 0:
            return () if not any(v) else None
        return in_row_lattice(self.group_basis, v)

    def ambient(self, c) -> Vec:
        """Ambient vector of group coordinates."""
        out = [0] * self.ambient_rank
        for ci, row in zip(c, self.group_basis):
            out = [a + ci * b for a, b in zip(out, row)]
        return tuple(out)

    # -- membership and basic structure ------------------------------------

    def contains(self, v) -> bool:
        c = self.coords(v)
        if c is None:
            return False
        return all(dot(f, c) >= 0 for f in self.facets_local)

    @property
    def hilbert(self) -> tuple[Vec, ...]:
        """Hilbert basis in ambient coordinates (sharp monoids only)."""
        if self.hilbert_local is None:
            raise NotSharp("Hilbert basis is defined for sharp monoids only")
        return tuple(sorted(self.ambient(h) for h in self.hilbert_local))

    def generating_set(self) -> tuple[Vec, ...]:
        """An ambient generating set: Hilbert basis when sharp, else Hilbert
        generators of the sharpening lifted to the monoid plus a +-basis of
        the unit group."""
        if self.sharp:
            return self.hilbert
        units = self.unit_basis()
        sharp_m, proj = sharpen(self)
        lifts = []
        for h in sharp_m.hilbert:
            lift = self._lift_through(proj, h)
            lifts.append(lift)
        out = list(lifts)
        for u in units:
            out.append(u)
            out.append(tuple(-x for x in u))
        return tuple(sorted(set(out)))

    def _lift_through(self, proj: "MonoidHom", target_value: Vec) -> Vec:
        """Find v in this monoid with proj(v) = target_value (exists when
        proj is the sharpening projection)."""
        g = self.group_rank
        # unknowns: group coordinates c of v; constraints: facets * c >= 0
        # and proj(ambient(c)) = target_value
        pm = [list(row) for row in proj.matrix]
        eq = []
        rhs = []
        for i in range(len(pm)):
            eq.append([dot(pm[i], self.ambient(e_j(g, j))) for j in range(g)])
            rhs.append(target_value[i])
        sol = ilp_feasible(g, eq, rhs, [list(f) for f in self.facets_local])
        if sol is None:
            raise ValueError("sharpening lift unexpectedly infeasible")
        return self.ambient(sol)

    def unit_basis(self) -> tuple[Vec, ...]:
        """Ambient basis of the group of units (lineality of the cone)."""
        if not self.facets_local:
            # no facet constraints: every group element is a unit
            lin = [tuple(row) for row in identity(self.group_rank)]
        else:
            lin = kernel_and_cokernel([list(f) for f in self.facets_local]).kernel_basis
        return tuple(self.ambient(b) for b in lin)

    def canonical_key(self):
        """Deterministic identity for sharp monoids: group rank plus the
        lexicographically sorted local Hilbert basis."""
        if self.hilbert_local is None:
            raise NotSharp("canonical form is defined for sharp monoids only")
        return (self.group_rank, tuple(sorted(self.hilbert_local)))


def e_j(n: int, j: int) -> Vec:
    return tuple(1 if i == j else 0 for i in range(n))


def saturate(ambient_rank: int, generators, group=None) -> AffineMonoid:
    """The fs monoid cone(generators) intersected with the subgroup generated
    by them (or an explicitly supplied subgroup).  Idempotent."""
    gens = [tuple(g) for g in generators if any(g)]
    if group is not None:
        basis = row_lattice_basis([tuple(r) for r in group], ambient_rank)
    else:
        basis = row_lattice_basis(gens, ambient_rank)
    basis = tuple(tuple(r) for r in basis)
    g = len(basis)
    if g == 0:
        return AffineMonoid(ambient_rank, tuple(gens), (), (), (), True, ())
    gens_local = []
    for v in gens:
        c = in_row_lattice(basis, v)
        if c is None:
            raise ValueError("generator outside the supplied group")
        gens_local.append(c)
    if not gens_local:
        # trivial monoid inside a nontrivial group: only unit is 0
        facets = tuple(tuple(row) for row in identity(g)) + tuple(
            tuple(-x for x in row) for row in identity(g))
        return AffineMonoid(ambient_rank, tuple(gens), basis, facets, (), True, ())
    dd = dual_description(gens_local, g)
    facets = dd.facets
    rays = dd.rays
    pointed = not kernel_and_cokernel([list(f) for f in facets]).kernel_basis \
        if facets else (g == 0)
    hilbert = _hilbert_basis_local(rays, facets, g) if pointed else None
    return AffineMonoid(ambient_rank, tuple(gens), basis, facets, rays,
                        pointed, hilbert)


def _hilbert_basis_local(rays, facets, g: int) -> tuple[Vec, ...]:
    """Hilbert basis of a pointed full-dimensional cone in Z^g.

    Candidates are the lattice points of the zonotope spanned by the extreme
    rays (every irreducible element lies in the fundamental parallelepiped of
    some simplicial subcone); irreducibles are extracted by a graded greedy
    pass.
    """
    if g == 0 or not rays:
        return ()
    lo = [sum(min(0, r[j]) for r in rays) for j in range(g)]
    hi = [sum(max(0, r[j]) for r in rays) for j in range(g)]
    candidates = []
    for pt in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if not any(pt):
            continue
        if all(dot(f, pt) >= 0 for f in facets):
            candidates.append(pt)
    degree = {pt: sum(dot(f, pt) for f in facets) for pt in candidates}
    candidates.sort(key=lambda p: (degree[p], p))
    basis: list[Vec] = []
    for pt in candidates:
        reducible = False
        for h in basis:
            rest = vec_sub(pt, h)
            if any(rest) and all(dot(f, rest) >= 0 for f in facets):
                reducible = True
                break
            if not any(rest):
                reducible = True  # duplicate
                break
        if not reducible:
            basis.append(pt)
    return tuple(sorted(basis))


def hilbert_basis(m: AffineMonoid) -> list[Vec]:
    """Unique minimal generating set of a sharp affine monoid (ambient
    coordinates, sorted)."""
    if not m.sharp:
        raise NotSharp("monoid contains a line")
    return list(m.hilbert)


def in_group_coordinates(m: AffineMonoid) -> AffineMonoid:
    """Isomorphic copy of m whose ambient lattice is its own group.

    Every monoid hom out of the copy is representable by an integer matrix,
    which is not true of monoids whose group is a proper sublattice of the
    ambient lattice.
    """
    g = m.group_rank
    gens = [m.coords(v) for v in m.generators]
    return saturate(g, [c for c in gens if c is not None],
                    group=identity(g))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class MonoidHom:
    source: AffineMonoid
    target: AffineMonoid
    matrix: tuple[Vec, ...]  # target_ambient x source_ambient

    def __post_init__(self):
        gens = self.source.hilbert if self.source.sharp else self.source.generators
        for v in gens:
            if not self.target.contains(self.apply(v)):
                raise ValueError(
                    f"matrix does not map generator {v} into the target monoid")

    def apply(self, v) -> Vec:
        return mat_vec(self.matrix, v)

    def compose(self, inner: "MonoidHom") -> "MonoidHom":
        """self o inner."""
        mat = mat_mul([list(r) for r in self.matrix], [list(r) for r in inner.matrix])
        return MonoidHom(inner.source, self.target,
                         tuple(tuple(r) for r in mat))

    def equal_on_source(self, other: "MonoidHom") -> bool:
        gens = self.source.hilbert if self.source.sharp else self.source.generators
        return all(self.apply(v) == other.apply(v) for v in gens)


def identity_hom(m: AffineMonoid) -> MonoidHom:
    return MonoidHom(m, m, tuple(tuple(r) for r in identity(m.ambient_rank)))


def is_local(h: MonoidHom) -> bool:
    """True iff h^{-1}(0) = {0}: no nonzero Hilbert generator maps to zero."""
    gens = h.source.hilbert if h.source.sharp else h.source.generators
    return all(any(h.apply(v)) for v in gens)


def local_matrix(h: MonoidHom):
    """The induced matrix on group coordinates: g_target x g_source."""
    cols = []
    for j in range(h.source.group_rank):
        b = h.source.group_basis[j]
        c = h.target.coords(h.apply(b))
        if c is None:
            raise ValueError("hom does not carry the source group into the target group")
        cols.append(c)
    gt = h.target.group_rank
    return [[cols[j][i] for j in range(len(cols))] for i in range(gt)]


def ambient_matrix_from_group_images(source: AffineMonoid, images,
                                     target_rank: int):
    """Integer ambient matrix T with T(b_j) = images[j] for the source group
    basis, or raise HomNotRepresentable."""
    d = source.ambient_rank
    basis = [list(b) for b in source.group_basis]
    rows = []
    for i in range(target_rank):
        rhs = [images[j][i] for j in range(len(basis))]
        sol = solve_lattice(basis, rhs) if basis else None
        if basis and sol is None:
            raise HomNotRepresentable(
                "no integer ambient matrix realizes this group map; present "
                "the source monoid in group coordinates")
        rows.append(list(sol.particular) if basis else [0] * d)
    return tuple(tuple(r) for r in rows)


def hom_from_local_matrix(source: AffineMonoid, target: AffineMonoid,
                          h_local) -> MonoidHom:
    """Build a MonoidHom from a matrix on group coordinates."""
    images = []
    for j in range(source.group_rank):
        c = mat_vec(h_local, e_j(source.group_rank, j))
        images.append(target.ambient(c))
    mat = ambient_matrix_from_group_images(source, images, target.ambient_rank)
    return MonoidHom(source, target, mat)


# ---------------------------------------------------------------------------
# faces and localization


@dataclass(frozen=True)
class Face:
    generator_subset: tuple[int, ...]  # indices into the Hilbert basis
    normal: Vec                        # supporting ambient functional
    monoid: AffineMonoid               # the face as a monoid


def _ambient_functional(m: AffineMonoid, lam) -> Vec:
    """Ambient covector w with <w, b_i> = t * lam_i for the smallest t >= 1."""
    if m.group_rank == 0 or not any(lam):
        return tuple([0] * m.ambient_rank)
    basis = [list(b) for b in m.group_basis]
    for t in range(1, 10_000):
        sol = solve_lattice(basis, [t * x for x in lam])
        if sol is not None:
            return sol.particular
    raise ValueError("no integer supporting functional found")


def faces(m: AffineMonoid) -> list[Face]:
    """The full face lattice of a sharp monoid, from {0} to m itself."""
    if not m.sharp:
        raise NotSharp("faces are enumerated for sharp monoids only")
    hb = m.hilbert
    hb_local = [m.coords(h) for h in hb]
    seen: dict[frozenset, Vec] = {}
    nf = len(m.facets_local)
    for size in range(nf + 1):
        for subset in itertools.combinations(range(nf), size):
            lam = tuple(sum(m.facets_local[i][j] for i in subset)
                        for j in range(m.group_rank)) if subset else \
                tuple([0] * m.group_rank)
            tight = frozenset(
                k for k, h in enumerate(hb_local)
                if all(dot(m.facets_local[i], h) == 0 for i in subset))
            if tight not in seen:
                seen[tight] = lam
    out = []
    for tight, lam in seen.items():
        gens = [hb[k] for k in sorted(tight)]
        fm = saturate(m.ambient_rank, gens) if gens else \
            saturate(m.ambient_rank, [])
        out.append(Face(tuple(sorted(tight)), _ambient_functional(m, lam), fm))
    out.sort(key=lambda f: (len(f.generator_subset), f.generator_subset))
    return out


def _face_of(m: AffineMonoid, f: Face) -> None:
    """Validate that f is a face of m (raises NotAFace)."""
    hb = m.hilbert if m.sharp else m.generators
    for idx in f.generator_subset:
        if idx >= len(hb):
            raise NotAFace("generator index out of range")
    on_face = {idx for idx, h in enumerate(hb) if dot(f.normal, h) == 0}
    if set(f.generator_subset) != on_face:
        raise NotAFace("normal does not support the claimed generator subset")
    for h in hb:
        if dot(f.normal, h) < 0:
            raise NotAFace("normal is not supporting")


def face_localization(m: AffineMonoid, f: Face) -> tuple[AffineMonoid, MonoidHom]:
    """Quotient of m by the subgroup spanned by the face; the image is
    saturated and sharp.  Returns (localized monoid, projection hom)."""
    if not m.sharp:
        raise NotSharp("localization implemented for sharp monoids")
    _face_of(m, f)
    hb = m.hilbert
    span_gens = [hb[i] for i in f.generator_subset]
    if not span_gens:
        return m, identity_hom(m)
    d = m.ambient_rank
    # saturated span of the face inside the ambient lattice
    ker = kernel_and_cokernel([list(v) for v in span_gens]).kernel_basis
    if ker:
        sat_span = kernel_and_cokernel([list(v) for v in ker]).kernel_basis
    else:
        sat_span = tuple(tuple(r) for r in identity(d))
    s = len(sat_span)
    snf = smith_normal_form([list(v) for v in sat_span])
    v_mat = [list(r) for r in snf.V]
    proj = tuple(tuple(v_mat[i][s + j] for i in range(d)) for j in range(d - s))
    target = saturate(d - s, [mat_vec(proj, g) for g in m.generators])
    hom = MonoidHom(m, target, proj)
    return target, hom


def sharpen(m: AffineMonoid) -> tuple[AffineMonoid, MonoidHom]:
    """Quotient by the unit group: returns (sharp monoid, projection hom)."""
    if m.sharp:
        return m, identity_hom(m)
    units = m.unit_basis()
    d = m.ambient_rank
    ker = kernel_and_cokernel([list(v) for v in units]).kernel_basis
    if ker:
        sat_span = kernel_and_cokernel([list(v) for v in ker]).kernel_basis
    else:
        sat_span = tuple(tuple(r) for r in identity(d))
    s = len(sat_span)
    snf = smith_normal_form([list(v) for v in sat_span])
    v_mat = [list(r) for r in snf.V]
    proj = tuple(tuple(v_mat[i][s + j] for i in range(d)) for j in range(d - s))
    target = saturate(d - s, [mat_vec(proj, g) for g in m.generators])
    hom = MonoidHom(m, target, proj)
    return target, hom


# ---------------------------------------------------------------------------
# duality


def dual(m: AffineMonoid) -> AffineMonoid:
    """Hom(m, N) as an affine monoid in the dual lattice of gp(m)."""
    if not m.sharp:
        raise NotSharp("dual is defined for sharp monoids")
    g = m.group_rank
    if g == 0:
        return saturate(0, [])
    return saturate(g, [list(f) for f in m.facets_local], group=identity(g))


def is_isomorphic(m1: AffineMonoid, m2: AffineMonoid) -> bool:
    """Decide isomorphism of sharp monoids by searching unimodular matches
    between Hilbert bases (any isomorphism permutes Hilbert bases)."""
    if not (m1.sharp and m2.sharp):
        raise NotSharp("isomorphism test implemented for sharp monoids")
    if m1.group_rank != m2.group_rank:
        return False
    if m1.canonical_key() == m2.canonical_key():
        return True
    g = m1.group_rank
    hb1 = sorted(m1.hilbert_local)
    hb2 = sorted(m2.hilbert_local)
    if len(hb1) != len(hb2):
        return False
    if g == 0:
        return True
    # pick g linearly independent elements of hb1
    base_idx = _independent_subset(hb1, g)
    if base_idx is None:
        return False
    base = [hb1[i] for i in base_idx]
    for images in itertools.permutations(range(len(hb2)), g):
        targets = [hb2[i] for i in images]
        u = _solve_linear_map(base, targets, g)
        if u is None:
            continue
        mapped = sorted(tuple(mat_vec(u, h)) for h in hb1)
        if mapped == hb2:
            return True
    return False


def _independent_subset(vectors, g):
    idx = []
    rows = []
    for i, v in enumerate(vectors):
        trial = rows + [list(v)]
        h, _ = hermite_normal_form(trial)
        if sum(1 for r in h if any(r)) == len(trial):
            rows = trial
            idx.append(i)
            if len(idx) == g:
                return idx
    return None


def _solve_linear_map(base, targets, g):
    """Integer matrix u with u*base_j = targets_j, unimodular, or None."""
    bmat = [[Fraction(base[j][i]) for j in range(g)] for i in range(g)]
    tmat = [[Fraction(targets[j][i]) for j in range(g)] for i in range(g)]
    # u = tmat * bmat^{-1}
    try:
        n = g
        aug = [row[:] + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(bmat)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                return None
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    fct = aug[r][col]
                    aug[r] = [x - fct * y for x, y in zip(aug[r], aug[col])]
        binv = [row[n:] for row in aug]
        u = [[sum(tmat[i][k] * binv[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
    except ZeroDivisionError:
        return None
    out = []
    for row in u:
        r = []
        for x in row:
            if x.denominator != 1:
                return None
            r.append(int(x))
        out.append(r)
    from .intlinalg import mat_inverse_unimodular
    try:
        mat_inverse_unimodular(out)
    except ValueError:
        return None
    return out


# ---------------------------------------------------------------------------
# fs pushout


@dataclass(frozen=True)
class PushoutResult:
    free_rank: int
    torsion_orders: tuple[int, ...]
    amalgam_generators: tuple[tuple[Vec, Vec], ...]  # (torsion part, free part)
    saturation_free: AffineMonoid   # saturation of the free projection
    characteristic: AffineMonoid    # sharpening of the saturation
    leg1: MonoidHom                 # Q1 -> characteristic
    leg2: MonoidHom                 # Q2 -> characteristic

    def amalgam_contains(self, torsion_part, free_part) -> bool:
        """Exact membership of a group element in the integral amalgam."""
        gens = self.amalgam_generators
        n = len(gens)
        t = len(self.torsion_orders)
        fr = self.free_rank
        num_vars = n + t
        eq, rhs = [], []
        for i in range(fr):
            eq.append([gens[k][1][i] for k in range(n)] + [0] * t)
            rhs.append(free_part[i])
        for j in range(t):
            eq.append([gens[k][0][j] for k in range(n)]
                      + [self.torsion_orders[j] if jj == j else 0 for jj in range(t)])
            rhs.append(torsion_part[j])
        ineq = [[1 if k == i else 0 for k in range(num_vars)] for i in range(n)]
        return ilp_feasible(num_vars, eq, rhs, ineq) is not None

    def saturation_contains(self, torsion_part, free_part) -> bool:
        return self.saturation_free.contains(free_part)

    def saturation_generators(self):
        """Group elements generating the saturation as a monoid."""
        t = len(self.torsion_orders)
        zero_t = tuple([0] * t)
        out = []
        for v in self.saturation_free.generating_set():
            out.append((zero_t, v))
        zero_f = tuple([0] * self.free_rank)
        for j in range(t):
            out.append((tuple(1 if jj == j else 0 for jj in range(t)), zero_f))
        return out

    def amalgam_equals_saturation(self):
        """None when equal; otherwise a witness element of saturation \\ amalgam."""
        for tor, free in self.saturation_generators():
            if not self.amalgam_contains(tor, free):
                return (tor, free)
        return None


def fs_pushout(f: MonoidHom, g: MonoidHom) -> PushoutResult:
    """Pushout of Q1 <- P -> Q2 in fs monoids.

    The group is Z^{g1+g2} modulo the relations (f(p), -g(p)); torsion is
    made explicit via Smith normal form.  The saturation equals (saturation
    of the free projection of the amalgam) plus the full torsion subgroup.
    """
    if f.source is not g.source and f.source.generators != g.source.generators:
        raise ValueError("pushout legs must share their source")
    p = f.source
    q1, q2 = f.target, g.target
    g1, g2 = q1.group_rank, q2.group_rank
    m_dim = g1 + g2
    f_loc = local_matrix(f)
    g_loc = local_matrix(g)
    relations = []
    p_gens = p.hilbert if p.sharp else p.generators
    for pv in p_gens:
        c = p.coords(pv)
        r1 = mat_vec(f_loc, c)
        r2 = mat_vec(g_loc, c)
        relations.append(list(r1) + [-x for x in r2])
    if relations:
        snf = smith_normal_form(relations)
        v_mat = [list(r) for r in snf.V]
        rank = sum(1 for dv in snf.divisors if dv != 0)
        orders = [snf.divisors[i] for i in range(rank)]
    else:
        v_mat = identity(m_dim)
        rank = 0
        orders = []
    torsion_pos = [i for i in range(rank) if orders[i] > 1]
    torsion_orders = tuple(orders[i] for i in torsion_pos)
    free_pos = list(range(rank, m_dim))
    free_rank = len(free_pos)

    def project(x):
        y = [sum(x[i] * v_mat[i][j] for i in range(m_dim)) for j in range(m_dim)]
        tor = tuple(y[i] % orders[i] for i in torsion_pos)
        free = tuple(y[i] for i in free_pos)
        return tor, free

    amalgam = []
    q1_gens = q1.hilbert if q1.sharp else q1.generators
    q2_gens = q2.hilbert if q2.sharp else q2.generators
    q1_images = {}
    q2_images = {}
    for qv in q1_gens:
        c = q1.coords(qv)
        tor, free = project(list(c) + [0] * g2)
        amalgam.append((tor, free))
        q1_images[qv] = (tor, free)
    for qv in q2_gens:
        c = q2.coords(qv)
        tor, free = project([0] * g1 + list(c))
        amalgam.append((tor, free))
        q2_images[qv] = (tor, free)

    sat_free = saturate(free_rank, [free for _, free in amalgam])
    characteristic, sharp_proj = sharpen(sat_free)

    def leg_for(q: AffineMonoid, offset: int) -> MonoidHom:
        images = []
        for j in range(q.group_rank):
            x = [0] * m_dim
            x[offset + j] = 1
            _, free = project(x)
            images.append(sharp_proj.apply(free))
        mat = ambient_matrix_from_group_images(q, images, characteristic.ambient_rank)
        return MonoidHom(q, characteristic, mat)

    return PushoutResult(
        free_rank=free_rank,
        torsion_orders=torsion_orders,
        amalgam_generators=tuple(amalgam),
        saturation_free=sat_free,
        characteristic=characteristic,
        leg1=leg_for(q1, 0),
        leg2=leg_for(q2, g1),
    )


# ---------------------------------------------------------------------------
# factorization / retraction search


def find_factorization(theta: MonoidHom, psi: MonoidHom,
                       budget: int | None = None) -> MonoidHom | None:
    """Some h: Q -> R with h o theta = psi, or None (complete decision).

    The unknown is the induced matrix on group coordinates; constraints are
    the composite equalities on P's Hilbert generators plus cone membership
    of the images of Q's Hilbert generators.
    """
    p, q, r = theta.source, theta.target, psi.target
    if psi.source is not p and psi.source.generators != p.generators:
        raise ValueError("theta and psi must share their source")
    if not (p.sharp and q.sharp and r.sharp):
        raise NotSharp("factorization search requires sharp monoids")
    gq, gr = q.group_rank, r.group_rank
    num_vars = gr * gq  # H[i][j], row-major

    def var(i, j):
        return i * gq + j

    eq, rhs = [], []
    theta_loc = local_matrix(theta)
    psi_loc = local_matrix(psi)
    p_gens = p.hilbert
    for pv in p_gens:
        c = p.coords(pv)
        u = mat_vec(theta_loc, c)   # in Z^gq
        w = mat_vec(psi_loc, c)     # in Z^gr
        for i in range(gr):
            row = [0] * num_vars
            for j in range(gq):
                row[var(i, j)] = u[j]
            eq.append(row)
            rhs.append(w[i])
    ineq = []
    for qv in q.hilbert:
        u = q.coords(qv)
        for fct in r.facets_local:
            row = [0] * num_vars
            for i in range(gr):
                for j in range(gq):
                    row[var(i, j)] += fct[i] * u[j]
            ineq.append(row)
    kwargs = {} if budget is None else {"budget": budget}
    sol = ilp_feasible(num_vars, eq, rhs, ineq, **kwargs)
    if sol is None:
        return None
    h_local = [[sol[var(i, j)] for j in range(gq)] for i in range(gr)]
    return hom_from_local_matrix(q, r, h_local)


def find_retraction(theta: MonoidHom, budget: int | None = None) -> MonoidHom | None:
    """Some t: Q -> P with t o theta = id_P, or None (complete decision)."""
    return find_factorization(theta, identity_hom(theta.source), budget=budget)


# ---------------------------------------------------------------------------
# integrality / saturation semi-decisions


@dataclass(frozen=True)
class SemiDecision:
    verdict: str           # "no" | "probably_yes"
    bound: int
    witness: object = None

    def __bool__(self):
        return self.verdict == "probably_yes"


def _elements_up_to_degree(m: AffineMonoid, bound: int) -> list[Vec]:
    """All monoid elements expressible as sums of at most ``bound`` Hilbert
    generators (ambient coordinates)."""
    gens = m.hilbert
    current = {tuple([0] * m.ambient_rank)}
    seen = set(current)
    for _ in range(bound):
        nxt = set()
        for v in current:
            for h in gens:
                nxt.add(vec_add(v, h))
        nxt -= seen
        seen |= nxt
        current = nxt
        if not current:
            break
    return sorted(seen)


def is_integral(theta: MonoidHom, bound: int = 6) -> SemiDecision:
    """Bounded search for a violation of the integrality quadruple condition.

    theta is integral iff whenever theta(a1)+b1 = theta(a2)+b2 there are
    a3, a4 in P and b in Q with b1 = theta(a3)+b, b2 = theta(a4)+b and
    a1+a3 = a2+a4.  "no" is sound; "probably_yes" records the bound.
    """
    p, q = theta.source, theta.target
    if not (p.sharp and q.sharp):
        raise NotSharp("integrality check requires sharp monoids")
    p_elts = _elements_up_to_degree(p, bound)
    q_elts = _elements_up_to_degree(q, bound)
    theta_loc = local_matrix(theta)
    gp, gq = p.group_rank, q.group_rank
    facets_p = [list(f) for f in p.facets_local]
    facets_q = [list(f) for f in q.facets_local]
    checked = set()
    for a1, a2 in itertools.product(p_elts, repeat=2):
        ta1, ta2 = theta.apply(a1), theta.apply(a2)
        for b1 in q_elts:
            b2 = vec_sub(vec_add(ta1, b1), ta2)
            if not q.contains(b2):
                continue
            key = tuple(sorted([(a1, b1), (a2, b2)]))
            if key in checked:
                continue
            checked.add(key)
            if (a1, b1) == (a2, b2):
                continue
            ca1, ca2 = p.coords(a1), p.coords(a2)
            cb1, cb2 = q.coords(b1), q.coords(b2)
            # unknowns: a3 (gp), a4 (gp), b (gq) in group coordinates
            nv = 2 * gp + gq
            eq, rhs = [], []
            for i in range(gq):  # theta(a3) + b = b1
                row = [0] * nv
                for j in range(gp):
                    row[j] = theta_loc[i][j]
                row[2 * gp + i] = 1
                eq.append(row)
                rhs.append(cb1[i])
            for i in range(gq):  # theta(a4) + b = b2
                row = [0] * nv
                for j in range(gp):
                    row[gp + j] = theta_loc[i][j]
                row[2 * gp + i] = 1
                eq.append(row)
                rhs.append(cb2[i])
            for i in range(gp):  # a1 + a3 = a2 + a4
                row = [0] * nv
                row[i] = 1
                row[gp + i] = -1
                eq.append(row)
                rhs.append(ca2[i] - ca1[i])
            ineq = []
            for f in facets_p:
                ineq.append(list(f) + [0] * (gp + gq))
                ineq.append([0] * gp + list(f) + [0] * gq)
            for f in facets_q:
                ineq.append([0] * (2 * gp) + list(f))
            if ilp_feasible(nv, eq, rhs, ineq) is None:
                return SemiDecision("no", bound, witness=(a1, a2, b1, b2))
    return SemiDecision("probably_yes", bound)


def is_saturated(theta: MonoidHom, bound: int = 6) -> SemiDecision:
    """Probe fs pushouts of theta against Kummer covers k*phi (phi a dual
    generator, k <= bound) and against theta itself; report "no" with a
    witness element whose saturation strictly exceeds the amalgam."""
    p = theta.source
    if not p.sharp:
        raise NotSharp("saturation check requires a sharp source")
    probes: list[MonoidHom] = [theta]
    n_monoid = saturate(1, [(1,)])
    for phi in dual(p).hilbert if p.group_rank else []:
        for k in range(1, bound + 1):
            w = _ambient_functional(p, tuple(k * x for x in phi))
            try:
                probes.append(MonoidHom(p, n_monoid, (tuple(w),)))
            except ValueError:
                continue
    for probe in probes:
        result = fs_pushout(theta, probe)
        witness = result.amalgam_equals_saturation()
        if witness is not None:
            return SemiDecision("no", bound, witness=witness)
    return SemiDecision("probably_yes", bound)
