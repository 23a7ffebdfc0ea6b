"""A small library of example chart presentations.

Each constructor returns (base monoid P, list of charts θᵢ: P → Qᵢ) ready
for firmness checks and firmament construction.
"""

from __future__ import annotations

from .monoid import AffineMonoid, MonoidHom, dual, in_group_coordinates, saturate


def orthant_monoid(rank: int) -> AffineMonoid:
    """N^rank."""
    return saturate(rank, [tuple(1 if i == j else 0 for i in range(rank))
                           for j in range(rank)])


def parity_monoid() -> AffineMonoid:
    """{(a,b) in N^2 : 2 | a+b}, presented inside Z^2."""
    return saturate(2, [(2, 0), (1, 1), (0, 2)])


def kummer_two_three():
    """Two Kummer covers of a line: x -> x^2 and x -> x^3.  The union of
    their images is 2N ∪ 3N."""
    n = orthant_monoid(1)
    return n, [MonoidHom(n, n, ((2,),)), MonoidHom(n, n, ((3,),))]


def parity_root():
    """Square root of the product coordinate on a plane: the chart whose
    image monoid is the even-parity submonoid of N^2."""
    n2 = orthant_monoid(2)
    q = in_group_coordinates(parity_monoid())
    # e_1 -> (2,-1), e_2 -> (0,1) in the coordinates of q
    theta = MonoidHom(n2, q, ((2, 0), (-1, 1)))
    return n2, [theta]


def monomial_x2y3_x():
    """The monomial map (x, y) -> (x^2 y^3, x) on coordinate monoids:
    e_s -> (2,3), e_t -> (1,0)."""
    n2 = orthant_monoid(2)
    theta = MonoidHom(n2, n2, ((2, 1), (3, 0)))
    return n2, [theta]


def diagonal_embedding():
    """The diagonal of a line in the plane: e_s -> 1, e_t -> 1."""
    n2 = orthant_monoid(2)
    n = orthant_monoid(1)
    return n2, [MonoidHom(n2, n, ((1, 1),))]


def parity_cover():
    """Three point-charts over the plane whose images cover N^2: the duals
    of the even-parity monoid, 2N x N, and N x 2N."""
    n2 = orthant_monoid(2)
    q1 = in_group_coordinates(parity_monoid())
    d1 = dual(q1)
    theta1 = MonoidHom(n2, d1, tuple(tuple(r) for r in
                                     parity_monoid().group_basis))
    d2 = orthant_monoid(2)
    theta2 = MonoidHom(n2, d2, ((2, 0), (0, 1)))
    d3 = orthant_monoid(2)
    theta3 = MonoidHom(n2, d3, ((1, 0), (0, 2)))
    return n2, [theta1, theta2, theta3]
