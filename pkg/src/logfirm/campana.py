"""Orbifold multiplicities of monomial ideals and Campana-point membership.

For a monomial ideal I, the multiplicity m(I) is the largest e with I
contained in the e-th power of every isolated prime; variants use the
primary decomposition (m_a), symbolic powers (m_b), and powers of the
radical (m_c and the threshold companion of m_d).  Together with the
intersection multiplicity of a DVR point, these decide membership in the
Campana set: valuation zero, valuation at least m, or lying inside the
subscheme outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .intlinalg import ilp_feasible
from .lift import MonomialChart

Exponent = tuple[int, ...]


class ZeroOrUnitIdeal(Exception):
    """The ideal is zero or the whole ring; multiplicities are undefined."""


class NotContaining(Exception):
    """The prime does not contain the ideal."""


class NotUnimodular(Exception):
    """The substitution matrix is not invertible over the rationals."""


class InZ:
    """Sentinel: the point lies inside the subscheme."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "InZ"


IN_Z = InZ()


# ---------------------------------------------------------------------------
# polynomials (only what linear substitution needs)


@dataclass(frozen=True)
class IntPolynomial:
    """Sparse integer polynomial: exponent vector -> coefficient."""

    num_vars: int
    terms: tuple[tuple[Exponent, int], ...]

    @staticmethod
    def from_dict(num_vars: int, d) -> "IntPolynomial":
        items = tuple(sorted((tuple(e), c) for e, c in d.items() if c))
        return IntPolynomial(num_vars, items)

    @staticmethod
    def linear(coeffs) -> "IntPolynomial":
        n = len(coeffs)
        d = {}
        for i, c in enumerate(coeffs):
            if c:
                d[tuple(1 if j == i else 0 for j in range(n))] = c
        return IntPolynomial.from_dict(n, d)

    @staticmethod
    def monomial(exponent, coeff=1) -> "IntPolynomial":
        return IntPolynomial.from_dict(len(exponent), {tuple(exponent): coeff})

    def as_dict(self):
        return dict(self.terms)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# monomial ideals


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal generated by monomials, stored by a minimal generator set."""

    num_vars: int
    generators: tuple[Exponent, ...]

    @staticmethod
    def of(num_vars: int, generators) -> "MonomialIdeal":
        gens = sorted({tuple(g) for g in generators})
        minimal = [g for g in gens
                   if not any(h != g and _divides(h, g) for h in gens)]
        return MonomialIdeal(num_vars, tuple(sorted(minimal)))

    def contains_monomial(self, e) -> bool:
        e = tuple(e)
        return any(_divides(g, e) for g in self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)


@dataclass(frozen=True)
class MonomialPrime:
    """The prime generated by a nonempty set of variables."""

    variables: frozenset[int]

    def __post_init__(self):
        if not self.variables:
            raise ValueError("a monomial prime needs at least one variable")


def _check_proper(i: MonomialIdeal):
    if i.is_zero or i.is_unit:
        raise ZeroOrUnitIdeal("multiplicities need a nonzero proper ideal")


def minimal_primes(i: MonomialIdeal) -> list[MonomialPrime]:
    """Isolated primes: the set-minimal transversals of the generator
    supports."""
    _check_proper(i)
    supports = [frozenset(j for j, e in enumerate(g) if e)
                for g in i.generators]
    used = sorted(set().union(*supports))
    transversals = []
    for size in range(1, len(used) + 1):
        for sub in itertools.combinations(used, size):
            s = frozenset(sub)
            if all(s & sup for sup in supports):
                if not any(t < s for t in transversals):
                    transversals.append(s)
    return [MonomialPrime(t) for t in sorted(transversals, key=sorted)]


def containment_order(i: MonomialIdeal, p: MonomialPrime) -> int:
    """max{e : I is contained in p^e} = the least p-degree of a generator."""
    orders = []
    for g in i.generators:
        deg = sum(g[v] for v in p.variables)
        if deg == 0:
            raise NotContaining("a generator avoids the prime")
        orders.append(deg)
    if not orders:
        raise ZeroOrUnitIdeal("zero ideal")
    return min(orders)


def m_multiplicity(i: MonomialIdeal) -> int:
    _check_proper(i)
    return min(containment_order(i, p) for p in minimal_primes(i))


# -- variants ---------------------------------------------------------------


def radical(i: MonomialIdeal) -> MonomialIdeal:
    return MonomialIdeal.of(
        i.num_vars, [tuple(1 if e else 0 for e in g) for g in i.generators])


def irreducible_decomposition(i: MonomialIdeal) -> list[MonomialIdeal]:
    """Write the ideal as an irredundant intersection of ideals generated by
    pure variable powers (splitting algorithm)."""
    _check_proper(i)
    stack = [i]
    irreducible = []
    while stack:
        j = stack.pop()
        split = None
        for g in j.generators:
            support = [v for v, e in enumerate(g) if e]
            if len(support) > 1:
                v = support[0]
                power = tuple(g[v] if k == v else 0 for k in range(j.num_vars))
                rest = tuple(0 if k == v else g[k] for k in range(j.num_vars))
                split = (g, power, rest)
                break
        if split is None:
            irreducible.append(j)
            continue
        g, power, rest = split
        others = [h for h in j.generators if h != g]
        stack.append(MonomialIdeal.of(j.num_vars, others + [power]))
        stack.append(MonomialIdeal.of(j.num_vars, others + [rest]))
    # irredundancy: drop any component containing the intersection of the rest
    out = []
    uniq = {c.generators: c for c in irreducible}.values()
    comps = list(uniq)
    for k, c in enumerate(comps):
        rest = [d for kk, d in enumerate(comps) if kk != k]
        if rest and _intersection_contained_in(rest, c):
            continue
        out.append(c)
    return out


def _ideal_intersection(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    gens = [tuple(max(x, y) for x, y in zip(g, h))
            for g in a.generators for h in b.generators]
    return MonomialIdeal.of(a.num_vars, gens)


def _intersection_contained_in(parts, c: MonomialIdeal) -> bool:
    inter = parts[0]
    for p in parts[1:]:
        inter = _ideal_intersection(inter, p)
    return all(c.contains_monomial(g) for g in inter.generators)


def primary_components(i: MonomialIdeal):
    """Group the irreducible components by radical; returns
    [(prime, primary ideal)]."""
    comps = irreducible_decomposition(i)
    by_radical: dict[frozenset[int], MonomialIdeal] = {}
    for c in comps:
        key = frozenset(v for g in c.generators for v, e in enumerate(g) if e)
        if key in by_radical:
            by_radical[key] = _ideal_intersection(by_radical[key], c)
        else:
            by_radical[key] = c
    return [(MonomialPrime(k), v) for k, v in
            sorted(by_radical.items(), key=lambda kv: sorted(kv[0]))]


def _power_contains(prime_gens, e: int, monomial: Exponent) -> bool:
    """Monomial membership in (g_1, ..., g_k)^e via integer feasibility."""
    k = len(prime_gens)
    n = len(monomial)
    # find c >= 0 with c_1 + ... + c_k = e and sum c_t g_t <= monomial
    # componentwise; the inequalities are made homogeneous with an auxiliary
    # variable pinned to 1 by an equality
    num = k + 1
    eq = [[1] * k + [0], [0] * k + [1]]
    rhs = [e, 1]
    ineq = []
    for j in range(n):
        ineq.append([-prime_gens[t][j] for t in range(k)] + [monomial[j]])
    for t in range(k):
        ineq.append([1 if tt == t else 0 for tt in range(k)] + [0])
    return ilp_feasible(num, eq, rhs, ineq) is not None


def variant_multiplicities(i: MonomialIdeal):
    """(m_a, m_b, m_c, m_d_threshold) for a proper nonzero monomial ideal."""
    _check_proper(i)
    primes = minimal_primes(i)
    isolated = {p.variables for p in primes}

    # m_a: containment order of each isolated primary component in its prime
    m_a = None
    for prime, q in primary_components(i):
        if prime.variables not in isolated:
            continue
        val = containment_order(q, prime)
        m_a = val if m_a is None else min(m_a, val)

    # m_b: symbolic order — restrict generators to the prime's variables and
    # take the least total degree
    m_b = None
    for p in primes:
        val = min(sum(g[v] for v in p.variables) for g in i.generators)
        m_b = val if m_b is None else min(m_b, val)

    # m_c: largest e with I inside radical(I)^e
    rad = radical(i).generators
    bound = max(sum(g) for g in i.generators)
    m_c = 0
    for e in range(1, bound + 1):
        if all(_power_contains(rad, e, g) for g in i.generators):
            m_c = e
        else:
            break

    # threshold companion of m_d: least e with radical(I)^e inside I
    m_d_threshold = None
    cap = sum(max(g[v] for g in i.generators) for v in range(i.num_vars)) + 1
    for e in range(1, cap + 1):
        products = itertools.combinations_with_replacement(rad, e)
        ok = True
        for combo in products:
            total = tuple(sum(g[v] for g in combo) for v in range(i.num_vars))
            if not i.contains_monomial(total):
                ok = False
                break
        if ok:
            m_d_threshold = e
            break
    if m_d_threshold is None:  # pragma: no cover - cap always suffices
        raise AssertionError("no power of the radical fits inside the ideal")
    return m_a, m_b, m_c, m_d_threshold


# ---------------------------------------------------------------------------
# Campana membership


def intersection_multiplicity(i: MonomialIdeal, vals, in_z: bool = False):
    """Valuation of the ideal at a DVR point with the given coordinate
    valuations; the in_z flag marks points lying inside the subscheme."""
    if in_z:
        return IN_Z
    vals = list(vals)
    if any(v < 0 for v in vals):
        raise ValueError("valuations must be nonnegative")
    if i.is_zero:
        return IN_Z
    return min(sum(e * v for e, v in zip(g, vals)) for g in i.generators)


def campana_member(n, m: int) -> bool:
    """Whether a point with intersection multiplicity n belongs to the
    Campana set of level m: inside the subscheme, untouched, or deep enough."""
    if m < 1:
        raise ValueError("the multiplicity level must be at least 1")
    if isinstance(n, InZ):
        return True
    return n == 0 or n >= m


# ---------------------------------------------------------------------------
# substitutions and pullbacks


def _rational_inverse(m):
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotUnimodular("substitution matrix must be square")
    aug = [[Fraction(m[i][j]) for j in range(n)]
           + [Fraction(1 if j == i else 0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise NotUnimodular("substitution matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _substitute(poly: IntPolynomial, m_inv) -> dict:
    """Expand poly(M^{-1} x') exactly over the rationals."""
    n = poly.num_vars
    # the image of each old variable as a dict polynomial in the new ones
    images = []
    for i in range(n):
        img = {}
        for j in range(n):
            c = m_inv[i][j]
            if c:
                img[tuple(1 if k == j else 0 for k in range(n))] = c
        images.append(img)
    zero_exp = tuple([0] * n)
    out: dict = {}
    for exp, coeff in poly.terms:
        term = {zero_exp: Fraction(coeff)}
        for i, e in enumerate(exp):
            for _ in range(e):
                term = _poly_mul(term, images[i])
        for k, v in term.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def linear_substitution(polys, matrix) -> MonomialIdeal | None:
    """Rewrite generators in the coordinates x' = M.x and return the
    resulting monomial ideal, or None when some generator fails to become a
    single monomial.  Generators may be given pre-factored as lists of
    polynomials (the factors are substituted individually and their
    exponents added)."""
    m_inv = _rational_inverse([list(r) for r in matrix])
    num_vars = len(matrix)
    gens = []
    for entry in polys:
        factors = entry if isinstance(entry, (list, tuple)) else [entry]
        exponent = [0] * num_vars
        ok = True
        for f in factors:
            expanded = _substitute(f, m_inv)
            if len(expanded) != 1:
                ok = False
                break
            (e, _coeff), = expanded.items()
            exponent = [a + b for a, b in zip(exponent, e)]
        if not ok:
            return None
        gens.append(tuple(exponent))
    return MonomialIdeal.of(num_vars, gens)


def pullback_ideal(chart: MonomialChart, i: MonomialIdeal) -> MonomialIdeal:
    """Substitute each target variable by its source monomial."""
    m = chart.num_source
    gens = []
    for g in i.generators:
        exp = tuple(sum(g[j] * chart.matrix[j][k] for j in range(len(g)))
                    for k in range(m))
        gens.append(exp)
    return MonomialIdeal.of(m, gens)
