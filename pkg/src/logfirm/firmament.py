"""Firmaments: images of integral points under maps of cone complexes.

Given charts θᵢ: P → Qᵢ, each dual cone Hom(Qᵢ, R≥0) maps to the dual cone
of P by precomposition; the firmament is the image of the lattice points of
the sources.  Membership is decided exactly, one integer program per source
cone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fan import (
    ConeComplex,
    ConeComplexMap,
    IntegralPoint,
    complex_map,
    cone_complex,
    lattice_points_box,
    point,
)
from .intlinalg import facets_to_rays, ilp_feasible, solve_lattice
from .monoid import AffineMonoid, MonoidHom, local_matrix

Vec = tuple[int, ...]


class NotAdditive(Exception):
    """The requested valuations do not extend to a monoid homomorphism."""


@dataclass(frozen=True)
class Firmament:
    map: ConeComplexMap


@dataclass(frozen=True)
class ContactOrder:
    """The point of the target complex recording generator valuations of a
    DVR point."""

    point: IntegralPoint


def dual_cone_complex(m: AffineMonoid) -> ConeComplex:
    """The cone of nonnegative functionals on a sharp monoid, as a one-cone
    complex in the dual of gp(m)."""
    g = m.group_rank
    if g == 0:
        return cone_complex(0, [[]])
    rays = facets_to_rays([list(h) for h in m.hilbert_local], g)
    return cone_complex(g, [rays])


def restriction_hom(m: AffineMonoid, dual_m: AffineMonoid) -> MonoidHom:
    """The hom N^d -> Hom(m, N) restricting coordinate functionals to a
    submonoid m of N^d (``dual_m`` must be dual(m) in local coordinates)."""
    matrix = tuple(tuple(row) for row in m.group_basis)
    return MonoidHom(_orthant(m.ambient_rank), dual_m, matrix)


def _orthant(rank: int) -> AffineMonoid:
    from .monoid import saturate
    return saturate(rank, [tuple(1 if i == j else 0 for i in range(rank))
                           for j in range(rank)])


def firmament_from_charts(p: AffineMonoid, thetas) -> Firmament:
    """Firmament of the map presented by charts θᵢ: p → Qᵢ: sources are the
    dual cones of the Qᵢ (in orthogonal blocks), the target is the dual cone
    of p, and each block maps by the transpose of the chart matrix."""
    target = dual_cone_complex(p)
    gp = p.group_rank
    blocks = [theta.target.group_rank for theta in thetas]
    total = sum(blocks)
    if total == 0:
        source = cone_complex(0, [[]])
        return Firmament(complex_map(source, target, [[] for _ in range(gp)]))
    maximal = []
    offset = 0
    columns: list[list[int]] = []
    for theta, width in zip(thetas, blocks):
        q = theta.target
        rays = facets_to_rays([list(h) for h in q.hilbert_local], width)
        embedded = []
        for r in rays:
            v = [0] * total
            v[offset:offset + width] = list(r)
            embedded.append(v)
        if embedded:
            maximal.append(embedded)
        else:
            maximal.append([[0] * total])
        loc = local_matrix(theta)  # g_Q x g_P
        for j in range(width):
            columns.append([loc[j][i] for i in range(gp)])
        offset += width
    matrix = [[columns[c][i] for c in range(total)] for i in range(gp)]
    source = cone_complex(total, maximal)
    return Firmament(complex_map(source, target, matrix))


def firmament_member(gamma: Firmament, n, budget: int | None = None) -> bool:
    """Exact membership: does some lattice point of a source cone map to n?"""
    coords = tuple(n.coordinates) if isinstance(n, IntegralPoint) else tuple(n)
    src = gamma.map.source
    for cone in src.maximal:
        idx = src.cone_index(cone)
        _, matrix = gamma.map.assignments[idx]
        eq = [list(row) for row in matrix]
        ineq = [list(f) for f in cone.facets]
        kwargs = {} if budget is None else {"budget": budget}
        if ilp_feasible(src.ambient_rank, eq, list(coords), ineq,
                        **kwargs) is not None:
            return True
    return False


def firmament_enumerate_box(gamma: Firmament, bound: int) -> set[IntegralPoint]:
    return {pt for pt in lattice_points_box(gamma.map.target, bound)
            if firmament_member(gamma, pt)}


def contact_order(p: AffineMonoid, vals) -> ContactOrder:
    """The integral point of the dual cone of p determined by prescribing
    valuations on the Hilbert generators (vals: mapping generator -> N, or a
    sequence aligned with p.hilbert)."""
    hb = list(p.hilbert)
    if isinstance(vals, dict):
        values = [vals[h] for h in hb]
    else:
        values = list(vals)
    if any(v < 0 for v in values):
        raise NotAdditive("valuations must be nonnegative")
    rows = [list(p.coords(h)) for h in hb]
    target = dual_cone_complex(p)
    if p.group_rank == 0:
        return ContactOrder(point(target, ()))
    sol = solve_lattice(rows, values)
    if sol is None:
        raise NotAdditive(
            "the prescribed valuations violate a relation among generators")
    return ContactOrder(point(target, sol.particular))


def lies_in_firmament(gamma: Firmament, c: ContactOrder) -> bool:
    """Whether the monogenic set of multiples of the contact order sits in
    the firmament; by scaling-stability this is membership of the generator."""
    return firmament_member(gamma, c.point)
