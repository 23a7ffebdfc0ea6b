"""Firmness decisions for maps presented by monoid charts.

A fiber problem is a sharp base monoid P with chart homs θᵢ: P → Qᵢ, one per
component of the source.  A log point query is a local hom ψ: P → R.  The
query is *firm* when ψ factors as h ∘ θᵢ for some component and some
h: Qᵢ → R; equivalently, when the base change along ψ admits a retraction
after localizing at a suitable face.  Both criteria are implemented and
cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import dot
from .monoid import (
    AffineMonoid,
    Face,
    MonoidHom,
    SemiDecision,
    face_localization,
    faces,
    find_factorization,
    find_retraction,
    fs_pushout,
    identity_hom,
    is_local,
)


class EvidenceMissing(Exception):
    """The caller did not supply adequate integrality/saturation evidence."""


@dataclass(frozen=True)
class FiberProblem:
    base: AffineMonoid
    components: tuple[MonoidHom, ...]

    def __post_init__(self):
        if not self.base.sharp:
            raise ValueError("base monoid must be sharp")
        for theta in self.components:
            if theta.source.generators != self.base.generators:
                raise ValueError("every chart must start at the base monoid")


@dataclass(frozen=True)
class LogPointQuery:
    point_monoid: AffineMonoid
    psi: MonoidHom

    def __post_init__(self):
        if not self.point_monoid.sharp:
            raise ValueError("point monoid must be sharp")
        if not is_local(self.psi):
            raise ValueError("query hom must be local (psi^{-1}(0) = 0)")
        if self.point_monoid.group_rank == 0 and self.psi.source.group_rank != 0:
            raise ValueError("trivial point monoid requires a trivial base")


@dataclass(frozen=True)
class FirmnessWitness:
    component_index: int
    hom: MonoidHom            # h: Q_i -> R with h o theta_i = psi
    induced_face: Face        # h^{-1}(0), a face of Q_i


def _zero_preimage_face(h: MonoidHom) -> Face:
    """The face h^{-1}(0) of the source of h."""
    q = h.source
    subset = tuple(i for i, v in enumerate(q.hilbert) if not any(h.apply(v)))
    for f in faces(q):
        if f.generator_subset == subset:
            return f
    raise AssertionError("kernel of a monoid hom must be a face")


def verify_witness(prob: FiberProblem, q: LogPointQuery,
                   w: FirmnessWitness) -> bool:
    """Exact re-check of a witness: composite equality, locality of the
    query, and triviality of the chart preimage of the induced face."""
    if not (0 <= w.component_index < len(prob.components)):
        return False
    theta = prob.components[w.component_index]
    if not w.hom.compose(theta).equal_on_source(q.psi):
        return False
    hb = theta.source.hilbert
    for v in hb:
        if any(v) and dot(w.induced_face.normal, theta.apply(v)) == 0:
            return False
    return True


def firm_check(prob: FiberProblem, q: LogPointQuery,
               budget: int | None = None) -> FirmnessWitness | None:
    """Complete factorization-criterion decision: the lowest-index witness
    h with h o theta_i = psi, or None when the query is not firm."""
    for i, theta in enumerate(prob.components):
        h = find_factorization(theta, q.psi, budget=budget)
        if h is not None:
            w = FirmnessWitness(i, h, _zero_preimage_face(h))
            assert verify_witness(prob, q, w)
            return w
    return None


@dataclass(frozen=True)
class PushoutFirmness:
    firm: bool
    component_index: int | None = None
    face: Face | None = None          # face of the pushout characteristic
    retraction: MonoidHom | None = None


def firm_check_pushout(prob: FiberProblem, q: LogPointQuery,
                       budget: int | None = None) -> PushoutFirmness:
    """Literal base-change criterion: for each component, form the fs
    pushout of theta_i and psi, and look for a face G of its characteristic
    monoid N whose preimage in R is trivial such that the localized leg
    R -> (N_G)# admits a retraction."""
    r = q.point_monoid
    r_gens = [v for v in r.hilbert if any(v)]
    for i, theta in enumerate(prob.components):
        res = fs_pushout(theta, q.psi)
        n = res.characteristic
        leg_r = res.leg2
        for g_face in faces(n):
            if any(dot(g_face.normal, leg_r.apply(v)) == 0 for v in r_gens):
                continue  # a nonzero element of R would land on the face
            loc, proj = face_localization(n, g_face)
            composite = proj.compose(leg_r)
            t = find_factorization(composite, identity_hom(r), budget=budget)
            if t is not None:
                return PushoutFirmness(True, i, g_face, t)
    return PushoutFirmness(False)


@dataclass(frozen=True)
class Retraction:
    hom: MonoidHom


@dataclass(frozen=True)
class BoundaryFactorization:
    face: Face  # nonzero face of the source killed by the hom


def _adequate(evidence) -> bool:
    if evidence == "constructed":
        return True
    if isinstance(evidence, (tuple, list)) and len(evidence) == 2:
        return all(isinstance(e, SemiDecision) and bool(e) and e.bound >= 6
                   for e in evidence)
    return False


def dichotomy(theta: MonoidHom, int_sat_evidence):
    """For an integral and saturated hom of sharp fs monoids: either a
    retraction (when theta is local) or the nonzero face of the source
    killed by theta (boundary factorization)."""
    if not _adequate(int_sat_evidence):
        raise EvidenceMissing(
            "supply 'constructed' or a pair of affirmative semi-decisions "
            "with bound >= 6")
    if is_local(theta):
        t = find_retraction(theta)
        if t is None:
            raise AssertionError(
                "a local integral saturated hom must admit a retraction")
        return Retraction(t)
    p = theta.source
    killed = tuple(i for i, v in enumerate(p.hilbert)
                   if not any(theta.apply(v)))
    for f in faces(p):
        if f.generator_subset == killed:
            return BoundaryFactorization(f)
    raise AssertionError("kernel of a monoid hom must be a face")


def generization_witnesses(prob: FiberProblem, q: LogPointQuery,
                           w: FirmnessWitness) -> dict[Face, FirmnessWitness]:
    """Witnesses for the localized queries at every face F of R for which
    the localized query stays local; each returned witness re-verifies."""
    assert verify_witness(prob, q, w)
    out: dict[Face, FirmnessWitness] = {}
    r = q.point_monoid
    for f in faces(r):
        loc, proj = face_localization(r, f)
        psi_loc = proj.compose(q.psi)
        if not is_local(psi_loc):
            continue
        h_loc = proj.compose(w.hom)
        w_loc = FirmnessWitness(w.component_index, h_loc,
                                _zero_preimage_face(h_loc))
        q_loc = LogPointQuery(loc, psi_loc)
        if not verify_witness(prob, q_loc, w_loc):
            continue
        out[f] = w_loc
    return out
