"""Solving DVR-point lifts through monomial maps.

A monomial chart sends source coordinates (x_1, ..., x_m) to target
coordinates y_j = prod_i x_i^{A[j][i]}.  A DVR point of the target is
y_j = u_{y_j} * pi^{e_j} with units u_{y_j}.  Lifting splits into an
exponent system over N (integer feasibility) and a multiplicative unit
system solved symbolically on exponent lattices over Q: the denominators of
the solution are the root orders of units one must adjoin, and the primes
dividing them are exactly where the extension ramifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .intlinalg import identity, ilp_feasible, smith_normal_form, solve_lattice


def _primes_of(n: int) -> set[int]:
    out = set()
    n = abs(n)
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class MonomialChart:
    """matrix[j][i] = exponent of x_i in y_j; all entries nonnegative."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for row in self.matrix:
            if any(a < 0 for a in row):
                raise ValueError("monomial exponents must be nonnegative")
            if len(row) != len(self.matrix[0]):
                raise ValueError("ragged exponent matrix")

    @property
    def num_target(self) -> int:
        return len(self.matrix)

    @property
    def num_source(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0


@dataclass(frozen=True)
class DVRTargetPoint:
    """y_j = u_{y_j} * pi^{valuations[j]} with opaque unit labels."""

    valuations: tuple[int, ...]
    unit_labels: tuple[str, ...] = ()

    def labels(self) -> tuple[str, ...]:
        if self.unit_labels:
            return self.unit_labels
        return tuple(f"u_y{j + 1}" for j in range(len(self.valuations)))


@dataclass(frozen=True)
class NotInFirmament:
    valuations: tuple[int, ...]


@dataclass(frozen=True)
class LiftSolution:
    exponents: tuple[int, ...]
    unit_matrix: tuple[tuple[Fraction, ...], ...]  # u_{x_i} = prod_j u_{y_j}^C[i][j]
    root_orders: tuple[int, ...]                   # per source unit
    ramification_primes: frozenset[int]
    unit_constraints: tuple[tuple[int, ...], ...]  # rows L: prod u_{y_j}^{L_j} = 1
    etale: bool | None = None                      # set when a residue char is given


def solve_exponents(chart: MonomialChart, e) -> tuple[int, ...] | None:
    """A nonnegative integer solution x of A.x = e, or None (complete)."""
    e = list(e)
    m = chart.num_source
    if len(e) != chart.num_target:
        raise ValueError("valuation vector length mismatch")
    if m == 0:
        return () if not any(e) else None
    sol = ilp_feasible(m, [list(r) for r in chart.matrix], e, identity(m))
    return sol


def solve_units(chart: MonomialChart):
    """Solve u_{y_j} = prod_i u_{x_i}^{A[j][i]} for the source units.

    Returns (C, root_orders, unit_constraints) where C[i] gives the exponents
    of u_{x_i} over the target units, root_orders[i] is the denominator of
    row i, and unit_constraints are multiplicative relations the target units
    must satisfy whenever the rows of A are dependent.
    """
    a = [list(r) for r in chart.matrix]
    n, m = chart.num_target, chart.num_source
    if n == 0 or m == 0:
        return tuple(), tuple([1] * m), tuple()
    snf = smith_normal_form(a)
    rank = sum(1 for d in snf.divisors if d != 0)
    # relations among the target units: rows of U past the rank span the
    # left kernel of A
    constraints = tuple(tuple(snf.U[i]) for i in range(rank, n))

    # the set of valid columns c_j (A.c_j = e_j modulo the constraint locus)
    # is a coset of the rational kernel; per column, the minimal clearing
    # denominator q_j is the least q with an integer solution of A.x = q.e_j.
    # q_j divides the largest elementary divisor, which bounds the search.
    cap = 1
    for d in snf.divisors:
        if d > cap:
            cap = d
    columns: list[list[Fraction]] = []
    for j in range(n):
        target = [1 if jj == j else 0 for jj in range(n)]
        col = None
        for cand in range(1, cap + 1):
            scaled = [cand * t for t in target]
            reduced = _drop_left_kernel(snf, scaled, rank)
            sol = solve_lattice(a, reduced)
            if sol is not None:
                col = [Fraction(x, cand) for x in sol.particular]
                break
        if col is None:  # pragma: no cover - cap bounds every denominator
            raise AssertionError("no clearing denominator found")
        columns.append(col)
    c = tuple(tuple(columns[j][i] for j in range(n)) for i in range(m))
    root_orders = tuple(
        lcm(*[f.denominator for f in row]) if row else 1 for row in c)
    return c, root_orders, constraints


def _drop_left_kernel(snf, target, rank):
    """Project the target onto the row space of A: in SNF coordinates the
    components past the rank lie in the left kernel (they are absorbed by
    the unit constraints), so zero them out and map back."""
    n = len(target)
    y = [sum(snf.U[i][k] * target[k] for k in range(n)) for i in range(n)]
    # components past the rank are unconstrained by A; they are absorbed by
    # the unit_constraints, so the solvable part keeps only the first rows
    y = y[:rank] + [0] * (n - rank)
    u_inv = _int_inverse([list(r) for r in snf.U])
    return [sum(u_inv[i][k] * y[k] for k in range(n)) for i in range(n)]


def _int_inverse(u):
    from .intlinalg import mat_inverse_unimodular

    return mat_inverse_unimodular(u)


def root_orders(chart: MonomialChart) -> tuple[int, ...]:
    return solve_units(chart)[1]


def ramification_primes(chart: MonomialChart) -> set[int]:
    orders = root_orders(chart)
    total = 1
    for q in orders:
        total = lcm(total, q)
    return _primes_of(total)


def log_smooth_primes(matrix) -> set[int]:
    """Primes at which the lattice map fails to be log smooth: divisors of
    the elementary divisors > 1 (torsion of the cokernel) plus the torsion
    of the kernel, which is zero for lattice maps."""
    m = [list(r) for r in matrix]
    if not m or not m[0]:
        return set()
    snf = smith_normal_form(m)
    out: set[int] = set()
    for d in snf.divisors:
        if d > 1:
            out |= _primes_of(d)
    return out


def describe_lift(chart: MonomialChart, p: DVRTargetPoint,
                  residue_char: int | None = None):
    """Full lift description: NotInFirmament when the exponent system has no
    solution, else a LiftSolution; with a residue characteristic, reports
    whether the required unit extension is etale there."""
    x = solve_exponents(chart, p.valuations)
    if x is None:
        return NotInFirmament(tuple(p.valuations))
    c, orders, constraints = solve_units(chart)
    primes = frozenset(ramification_primes(chart))
    etale = None if residue_char is None else residue_char not in primes
    return LiftSolution(
        exponents=tuple(x),
        unit_matrix=c,
        root_orders=orders,
        ramification_primes=primes,
        unit_constraints=constraints,
        etale=etale,
    )
