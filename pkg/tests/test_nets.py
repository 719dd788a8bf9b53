"""Covering nets: greedy construction, verification, profiles, lift."""
from fractions import Fraction as F

import numpy as np
import pytest

import asymlp as a
import oracles


class TestGreedy:
    def test_every_member_covered_strictly(self, corpus):
        for name, fam in corpus.items():
            for eps in (0.25, 0.5, 1.0):
                net = a.greedy_net(fam, eps)
                check = a.verify_covering(fam, net)
                assert check.passed, f"{name} eps={eps}"
                assert check.max_distance < eps

    def test_deterministic(self):
        fam = a.u_family(6, 1.0)
        n1 = a.greedy_net(fam, 0.5)
        n2 = a.greedy_net(fam, 0.5)
        assert n1.center_indices == n2.center_indices
        assert n1.assignment == n2.assignment

    def test_first_member_is_first_center(self):
        fam = a.g_family(5)
        net = a.greedy_net(fam, 0.5)
        assert net.center_indices[0] == fam.indices[0]

    def test_huge_eps_gives_single_center(self, corpus):
        for name, fam in corpus.items():
            diam = float(np.max(a.pairwise_distances(fam)))
            net = a.greedy_net(fam, diam + 1.0)
            assert net.size == 1, name

    def test_eps_must_be_positive(self):
        with pytest.raises(a.GridError):
            a.greedy_net(a.g_family(3), 0.0)

    def test_greedy_never_beats_exhaustive_minimum(self, corpus):
        for name, fam in corpus.items():
            if len(fam) > 6:
                continue
            dm = a.pairwise_distances(fam)
            for eps in (0.25, 0.5, 1.0):
                best = oracles.minimal_cover_size(dm.tolist(), eps)
                got = a.greedy_net(fam, eps).size
                assert best <= got <= len(fam), f"{name} eps={eps}"


class TestVerify:
    def test_detects_bad_assignment(self):
        fam = a.g_family(4)
        net = a.greedy_net(fam, 0.5)
        # indicators are mutually at distance 2^(1/p): reassigning member 0
        # to a different center must fail
        if net.size > 1:
            tampered = a.EpsNet(
                eps=net.eps, p=net.p, method=net.method,
                center_indices=net.center_indices, centers=net.centers,
                assignment=(1,) + net.assignment[1:],
                distances=net.distances,
                max_assigned_distance=net.max_assigned_distance,
                extras=net.extras,
            )
            check = a.verify_covering(fam, tampered)
            assert not check.passed
            assert check.failures

    def test_rejects_wrong_arity(self):
        fam = a.g_family(4)
        net = a.greedy_net(fam, 0.5)
        with pytest.raises(a.GridError):
            a.verify_covering(fam.subfamily(2), net)

    def test_rejects_dangling_center(self):
        fam = a.g_family(3)
        net = a.greedy_net(fam, 0.5)
        bad = a.EpsNet(
            eps=net.eps, p=net.p, method=net.method,
            center_indices=net.center_indices, centers=net.centers,
            assignment=(net.size + 5,) * len(fam),
            distances=net.distances,
            max_assigned_distance=net.max_assigned_distance,
            extras=net.extras,
        )
        with pytest.raises(a.GridError):
            a.verify_covering(fam, bad)


class TestProfile:
    def test_escaping_indicators_grow_linearly(self):
        fam = a.g_family(8)
        sizes = a.covering_profile(fam, 0.5, [2, 5, 8])
        assert sizes == [2, 5, 8]

    def test_convergent_family_stabilises(self):
        fam = a.u_family(8, 1.0)
        sizes = a.covering_profile(fam, 0.5, [8, 32, 64])
        assert sizes[0] == sizes[1] == sizes[2] == 4

    def test_streams_past_materialised_members(self):
        fam = a.u_family(4, 1.0)  # only 4 members materialised
        sizes = a.covering_profile(fam, 0.5, [16])
        assert sizes == [4]


class TestTruncationLift:
    def test_lift_on_u_family(self):
        fam = a.u_family(32, 1.0)
        for eta in (0.5, 0.25):
            net = a.truncation_lift_net(fam, eta)
            assert net.method == "truncation-lift"
            check = a.verify_covering(fam, net)
            assert check.passed
            assert check.max_distance < eta
            assert net.extras["M"] > 1.0
            assert net.extras["worst_level_measure"] < (eta / 2) ** fam.p

    def test_lift_fails_on_growing_plateaus(self):
        fam = a.f_family(20, 1.0)
        with pytest.raises(a.LevelConditionError) as err:
            a.truncation_lift_net(fam, 0.5)
        assert err.value.offender_index >= 17
        assert err.value.offending_value == 1.0

    def test_lift_net_never_larger_than_family(self):
        fam = a.u_family(16, 1.0)
        net = a.truncation_lift_net(fam, 0.5)
        assert net.size <= len(fam)


class TestThreads:
    def test_thread_count_does_not_change_matrix(self, monkeypatch):
        fam = a.u_family(6, 1.0)
        base = a.pairwise_distances(fam)
        monkeypatch.setenv("ASYMLP_THREADS", "4")
        threaded = a.pairwise_distances(fam)
        assert np.array_equal(base, threaded)
