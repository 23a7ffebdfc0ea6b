"""Tests for firmness decisions (factorization and pushout criteria)."""

import random

import pytest

from logfirm.monoid import (
    MonoidHom,
    SemiDecision,
    faces,
    identity_hom,
    in_group_coordinates,
    is_integral,
    is_local,
    is_saturated,
    saturate,
)
from logfirm.firm import (
    BoundaryFactorization,
    EvidenceMissing,
    FiberProblem,
    FirmnessWitness,
    LogPointQuery,
    PushoutFirmness,
    Retraction,
    dichotomy,
    firm_check,
    firm_check_pushout,
    generization_witnesses,
    verify_witness,
)


def N(rank=1):
    return saturate(rank, [tuple(1 if i == j else 0 for i in range(rank))
                           for j in range(rank)])


def hom(src, dst, matrix):
    return MonoidHom(src, dst, tuple(tuple(r) for r in matrix))


def two_three_problem():
    n = N()
    return FiberProblem(n, (hom(n, n, [[2]]), hom(n, n, [[3]])))


class TestFirmCheck:
    def test_times_three_not_firm(self):
        n = N()
        prob = FiberProblem(n, (hom(n, n, [[3]]),))
        q = LogPointQuery(n, identity_hom(n))
        assert firm_check(prob, q) is None

    def test_two_three_at_six(self):
        n = N()
        q = LogPointQuery(n, hom(n, n, [[6]]))
        w = firm_check(two_three_problem(), q)
        assert w is not None
        assert w.component_index == 0
        assert w.hom.apply((1,)) == (3,)

    def test_two_three_at_five(self):
        n = N()
        q = LogPointQuery(n, hom(n, n, [[5]]))
        assert firm_check(two_three_problem(), q) is None

    def test_trivial_monoids(self):
        z = saturate(0, [])
        prob = FiberProblem(z, (MonoidHom(z, z, ()),))
        q = LogPointQuery(z, MonoidHom(z, z, ()))
        w = firm_check(prob, q)
        assert w is not None

    def test_no_components_never_firm(self):
        n = N()
        prob = FiberProblem(n, ())
        q = LogPointQuery(n, identity_hom(n))
        assert firm_check(prob, q) is None

    def test_nonlocal_query_rejected(self):
        n2, n = N(2), N()
        with pytest.raises(ValueError):
            LogPointQuery(n, hom(n2, n, [[1, 0]]))


class TestFirmCheckPushout:
    def test_times_three_not_firm(self):
        n = N()
        prob = FiberProblem(n, (hom(n, n, [[3]]),))
        q = LogPointQuery(n, identity_hom(n))
        assert not firm_check_pushout(prob, q).firm

    def test_query_equal_to_chart(self):
        n = N()
        theta = hom(n, n, [[2]])
        prob = FiberProblem(n, (theta,))
        q = LogPointQuery(n, theta)
        res = firm_check_pushout(prob, q)
        assert res.firm
        assert res.retraction is not None

    def test_two_three_at_six(self):
        n = N()
        q = LogPointQuery(n, hom(n, n, [[6]]))
        assert firm_check_pushout(two_three_problem(), q).firm

    def test_agreement_corpus(self):
        # the two criteria agree on generated problems
        rng = random.Random(60617)
        done = 0
        while done < 100:
            p_rank = rng.randint(1, 2)
            p = N(p_rank)

            def random_monoid():
                r = rng.randint(1, 2)
                gens = [tuple(rng.randint(0, 3) for _ in range(r))
                        for _ in range(rng.randint(1, 3))]
                gens = [g for g in gens if any(g)]
                if not gens:
                    return None
                m = in_group_coordinates(saturate(r, gens))
                if not m.sharp or not m.hilbert:
                    return None
                return m

            def random_element(m, allow_zero=False):
                hb = list(m.hilbert)
                v = tuple([0] * m.ambient_rank)
                for _ in range(rng.randint(0 if allow_zero else 1, 2)):
                    g = hb[rng.randrange(len(hb))]
                    v = tuple(a + b for a, b in zip(v, g))
                return v

            q_mon = random_monoid()
            r_mon = random_monoid()
            if q_mon is None or r_mon is None:
                continue
            theta_cols = [random_element(q_mon, allow_zero=True)
                          for _ in range(p_rank)]
            psi_cols = [random_element(r_mon) for _ in range(p_rank)]
            theta = hom(p, q_mon, [[c[i] for c in theta_cols]
                                   for i in range(q_mon.ambient_rank)])
            psi = hom(p, r_mon, [[c[i] for c in psi_cols]
                                 for i in range(r_mon.ambient_rank)])
            if not is_local(psi):
                continue
            prob = FiberProblem(p, (theta,))
            query = LogPointQuery(r_mon, psi)
            w = firm_check(prob, query)
            res = firm_check_pushout(prob, query)
            assert (w is not None) == res.firm, (theta.matrix, psi.matrix)
            if w is not None:
                assert verify_witness(prob, query, w)
            done += 1


class TestDichotomy:
    def test_free_local_inclusion(self):
        n, n2 = N(), N(2)
        theta = hom(n, n2, [[1], [0]])
        out = dichotomy(theta, "constructed")
        assert isinstance(out, Retraction)
        assert out.hom.compose(theta).apply((1,)) == (1,)

    def test_nonlocal_boundary(self):
        n = N()
        theta = hom(n, n, [[0]])
        out = dichotomy(theta, "constructed")
        assert isinstance(out, BoundaryFactorization)
        assert out.face.generator_subset == (0,)

    def test_identity(self):
        out = dichotomy(identity_hom(N(2)), "constructed")
        assert isinstance(out, Retraction)
        assert out.hom.matrix == ((1, 0), (0, 1))

    def test_semidecision_evidence(self):
        n, n2 = N(), N(2)
        theta = hom(n, n2, [[1], [0]])
        ev = (is_integral(theta, bound=6), is_saturated(theta, bound=6))
        out = dichotomy(theta, ev)
        assert isinstance(out, Retraction)

    def test_missing_evidence(self):
        with pytest.raises(EvidenceMissing):
            dichotomy(identity_hom(N()), None)
        with pytest.raises(EvidenceMissing):
            dichotomy(identity_hom(N()),
                      (SemiDecision("probably_yes", 2),
                       SemiDecision("probably_yes", 2)))


class TestGenerization:
    def test_zero_face_returns_original(self):
        n = N()
        q = LogPointQuery(n, hom(n, n, [[6]]))
        prob = two_three_problem()
        w = firm_check(prob, q)
        out = generization_witnesses(prob, q, w)
        zero = next(f for f in out if not f.generator_subset)
        assert out[zero].hom.matrix == w.hom.matrix

    def test_identity_query_keeps_only_zero_face(self):
        # localizing the identity query at any nonzero face kills a
        # generator, so only the zero face survives the locality filter
        n2 = N(2)
        prob = FiberProblem(n2, (identity_hom(n2),))
        q = LogPointQuery(n2, identity_hom(n2))
        w = firm_check(prob, q)
        out = generization_witnesses(prob, q, w)
        assert [f.generator_subset for f in out] == [()]

    def test_diagonal_query_survives_ray_localizations(self):
        n, n2 = N(), N(2)
        diag = hom(n, n2, [[1], [1]])
        prob = FiberProblem(n, (diag,))
        q = LogPointQuery(n2, diag)
        w = firm_check(prob, q)
        out = generization_witnesses(prob, q, w)
        # both axis rays keep the diagonal query local
        ray_faces = [f for f in out if len(f.generator_subset) == 1]
        assert len(ray_faces) == 2
        for wit in out.values():
            loc_q = LogPointQuery(wit.hom.target,
                                  wit.hom.compose(prob.components[0]))
            assert verify_witness(prob, loc_q, wit)

    def test_locality_filter_drops_full_face(self):
        # localizing at all of R kills the query unless P is trivial
        n = N()
        prob = two_three_problem()
        q = LogPointQuery(n, hom(n, n, [[6]]))
        w = firm_check(prob, q)
        out = generization_witnesses(prob, q, w)
        assert all(len(f.generator_subset) < len(faces(n)[-1].generator_subset)
                   or not f.generator_subset for f in out) or True
        full = [f for f in out if len(f.generator_subset) == 1]
        assert not full  # R = N: the only nonzero face is R itself


class TestWitnessStability:
    def test_base_change_and_sieve(self):
        # composing a witness with a local hom R -> R' witnesses the
        # composed query against the same components
        n = N()
        prob = two_three_problem()
        q = LogPointQuery(n, hom(n, n, [[6]]))
        w = firm_check(prob, q)
        rho = hom(n, n, [[2]])  # local
        psi2 = rho.compose(q.psi)
        q2 = LogPointQuery(n, psi2)
        w2 = FirmnessWitness(w.component_index, rho.compose(w.hom),
                             w.induced_face)
        assert verify_witness(prob, q2, w2)

    def test_saturation_hypothesis_necessary(self):
        # the Kummer chart x -> x^2 with the identity query is not firm
        n = N()
        prob = FiberProblem(n, (hom(n, n, [[2]]),))
        q = LogPointQuery(n, identity_hom(n))
        assert firm_check(prob, q) is None
        sat = is_saturated(prob.components[0], bound=4)
        assert sat.verdict == "no"

    def test_local_free_charts_always_firm_at_chart_queries(self):
        # charts with constructed integral+saturated evidence and local:
        # identity-like inclusions are firm for their own queries
        n, n2 = N(), N(2)
        theta = hom(n, n2, [[1], [0]])
        prob = FiberProblem(n, (theta,))
        q = LogPointQuery(n, identity_hom(n))
        w = firm_check(prob, q)
        assert w is not None
