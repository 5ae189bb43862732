from __future__ import annotations

import math

import pytest

from transfactor.bipartite import BipartiteGraph
from transfactor.clustering import (
    SystemClusterPlan,
    cluster_subsystem,
    degree_inheritance_check,
    location_spread_audit,
    sample_bipartite_clusters,
    sample_system_clusters,
)
from transfactor.errors import ParameterError
from transfactor.hypergraph import Hypergraph, HypergraphSystem
from transfactor.randmodels import (
    random_bipartite_with_degree_sum_floor,
    random_system_with_degree_floor,
)
from transfactor.rng import RngSpec


def test_plan_arithmetic_example():
    # s=3, t=3, C=3, n=24: unit 18 divides 72, so r1 = 18 and m' = 10
    plan = SystemClusterPlan.create(3, 3, 24, 3)
    assert plan.r1 == 18
    assert plan.r2 == 18
    assert plan.m_prime == 10
    assert plan.m == 7  # (m'-1)(1-1/C) good clusters plus the first
    blocks = plan.vertex_blocks()
    assert blocks[0] == (0, 18)
    assert all(b - a == 6 for a, b in blocks[1:])
    assert blocks[-1][1] == 72


def test_plan_with_remainder():
    plan = SystemClusterPlan.create(2, 1, 7, 2)
    # unit = 2*2*1 = 4; 14 mod 4 = 2, so r1 = 6
    assert plan.r1 == 6
    assert (plan.s * plan.n - plan.r1) % (plan.s * (plan.C - 1)) == 0


def test_plan_rejects_small_n():
    with pytest.raises(ParameterError):
        SystemClusterPlan.create(3, 3, 5, 3)


def test_degree_check_complete_and_empty():
    S = HypergraphSystem.complete(2, 3, 3, 8)
    assert degree_inheritance_check(
        S, list(range(6)), [0, 1, 2], delta=0.5, alpha=0.2, d=1
    )
    # empty color set is vacuous
    assert degree_inheritance_check(S, list(range(6)), [], delta=0.9, alpha=0.2, d=1)


def test_degree_check_low_codegree_witness():
    # delete every edge at vertex 0 in color 0: the check must fail
    base = Hypergraph.complete(2, 12)
    crippled = Hypergraph(2, 12, frozenset(e for e in base.edges if 0 not in e))
    colors = (crippled,) + (base,) * 3
    S = HypergraphSystem(2, 3, 1, 4, colors)
    assert not degree_inheritance_check(
        S, list(range(6)), [0], delta=0.5, alpha=0.2, d=1
    )
    assert degree_inheritance_check(
        S, list(range(1, 7)), [0], delta=0.5, alpha=0.2, d=1
    )


def test_cluster_subsystem_relabels():
    S = HypergraphSystem.complete(2, 2, 1, 3)
    sub, vids, cids = cluster_subsystem(S, [1, 3, 4, 5], [0, 2])
    assert sub.vertex_count == 4 and sub.color_count == 2
    assert vids == (1, 3, 4, 5) and cids == (0, 2)
    assert sub.colors[0] == Hypergraph.complete(2, 4)


def test_system_clustering_complete_host():
    S = HypergraphSystem.complete(2, 3, 3, 12)
    partition, family, audit = sample_system_clusters(
        S, C=3, delta=0.4, alpha=0.1, d=1, rng=RngSpec(5)
    )
    assert audit["attempts"] == 1
    # complete graphs inherit everything: the family is pure padding
    assert set(family.reasons.values()) == {"padding"}
    assert all(c.passes for c in partition.certificates)
    assert len(partition.vertex_clusters[0]) == 18
    assert all(len(u) == 9 for u in partition.vertex_clusters[1:])


def test_system_clustering_dense_random_host():
    floor = math.ceil(0.5 * 71)
    successes = 0
    trials = 15
    for trial in range(trials):
        S = random_system_with_degree_floor(
            2, 3, 3, 24, d=1, floor=floor, keep_fraction=0.9, rng=RngSpec(800 + trial)
        )
        partition, family, audit = sample_system_clusters(
            S, C=3, delta=0.4, alpha=0.1, d=1, rng=RngSpec(900 + trial)
        )
        assert all(c.passes for c in partition.certificates)
        assert len(family) == 3  # m' - m is exact
        successes += 1
    assert successes == trials


def test_system_clustering_rejects_weak_host():
    S = HypergraphSystem(2, 3, 1, 4, (Hypergraph(2, 12),) * 4)
    with pytest.raises(ParameterError):
        sample_system_clusters(S, C=2, delta=0.4, alpha=0.1, d=1, rng=RngSpec(0))


def test_system_clustering_deterministic():
    S = HypergraphSystem.complete(2, 2, 1, 12)
    p1, f1, _ = sample_system_clusters(S, C=2, delta=0.3, alpha=0.1, d=1, rng=RngSpec(33))
    p2, f2, _ = sample_system_clusters(S, C=2, delta=0.3, alpha=0.1, d=1, rng=RngSpec(33))
    assert p1.vertex_clusters == p2.vertex_clusters
    assert p1.color_clusters == p2.color_clusters
    assert f1.member_indices == f2.member_indices


def test_bipartite_cluster_sizes_complete():
    G = BipartiteGraph.complete(30)
    partition, audit = sample_bipartite_clusters(G, C=3, eps=0.5, rng=RngSpec(1))
    assert len(partition.clusters[0]) == 12  # 2r with r = 6
    assert all(len(cl) == 6 for cl in partition.clusters[1:])
    for cl in partition.clusters:
        lefts = [v for side, v in cl if side == "L"]
        rights = [v for side, v in cl if side == "R"]
        assert len(lefts) == len(rights)
    assert all(c.passes for c in partition.certificates)


def test_bipartite_cluster_random_host_success_rate():
    n = 30
    successes = 0
    trials = 20
    for trial in range(trials):
        G = random_bipartite_with_degree_sum_floor(
            n, floor_sum=39, keep_fraction=0.8, rng=RngSpec(70 + trial)
        )
        dl, dr = G.min_degrees()
        assert dl + dr >= 39
        partition, _ = sample_bipartite_clusters(G, C=4, eps=0.3, rng=RngSpec(170 + trial))
        assert all(c.passes for c in partition.certificates)
        successes += 1
    assert successes >= 0.9 * trials


def test_location_audit_single_pin_symmetry():
    S = HypergraphSystem.complete(2, 2, 1, 12)

    def sampler(stream):
        partition, _, _ = sample_system_clusters(
            S, C=2, delta=0.3, alpha=0.1, d=1, rng=stream, augment_samples=60
        )
        return partition

    base = sampler(RngSpec(0))
    sizes = [len(u) for u in base.vertex_clusters]
    trials = 400
    report = location_spread_audit(
        sampler, [(5, 0)], [], trials=trials, rng=RngSpec(91), c_prime=10.0, n=12
    )
    expected = sizes[0] / 24
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(report.probability - expected) <= 4 * sigma


def test_location_audit_two_pins_near_independent():
    S = HypergraphSystem.complete(2, 2, 1, 12)

    def sampler(stream):
        partition, _, _ = sample_system_clusters(
            S, C=2, delta=0.3, alpha=0.1, d=1, rng=stream, augment_samples=60
        )
        return partition

    trials = 400
    single = location_spread_audit(
        sampler, [(3, 1)], [], trials=trials, rng=RngSpec(92), c_prime=10.0, n=12
    )
    joint = location_spread_audit(
        sampler, [(3, 1), (7, 1)], [], trials=trials, rng=RngSpec(92), c_prime=10.0, n=12
    )
    assert joint.probability <= 1.2 * single.probability * single.probability + 4 * math.sqrt(
        joint.probability / trials + 1e-9
    )
