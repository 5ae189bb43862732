from __future__ import annotations

import math

import pytest

from transfactor.errors import ParameterError
from transfactor.hypergraph import Hypergraph, HypergraphSystem
from transfactor.patterns import Pattern
from transfactor.randmodels import (
    coupled_complex_sample,
    random_k_graph,
    sparsify,
    sparsify_system,
)
from transfactor.rng import RngSpec

K3 = Pattern.from_graph(Hypergraph.complete(2, 3))


def test_sparsify_extremes():
    H = Hypergraph.complete(2, 6)
    rng = RngSpec(1)
    assert sparsify(H, 1.0, rng).edges == H.edges
    assert sparsify(H, 0.0, rng).edge_count == 0


def test_sparsify_rejects_bad_p():
    with pytest.raises(ParameterError):
        sparsify(Hypergraph.complete(2, 4), 1.5, RngSpec(0))


def test_sparsify_mean_kept_count():
    # K10 has 45 edges; mean kept at p=0.5 is 22.5, tolerance 3 sigma
    H = Hypergraph.complete(2, 10)
    trials = 10_000
    total = sum(sparsify(H, 0.5, RngSpec(7, i)).edge_count for i in range(trials))
    mean = total / trials
    sigma = math.sqrt(45 * 0.25 / trials)
    assert abs(mean - 22.5) <= 3 * sigma


def test_sparsify_determinism():
    H = Hypergraph.complete(2, 8)
    a = sparsify(H, 0.4, RngSpec(42, 3))
    b = sparsify(H, 0.4, RngSpec(42, 3))
    assert a == b
    c = sparsify(H, 0.4, RngSpec(42, 4))
    assert a != c  # overwhelmingly likely for distinct streams


def test_sparsify_monotone_coupling():
    H = Hypergraph.complete(2, 12)
    rng = RngSpec(5, 11)
    grid = [0.1, 0.2, 0.35, 0.5, 0.8, 1.0]
    kept = [sparsify(H, p, rng).edges for p in grid]
    for lo, hi in zip(kept, kept[1:]):
        assert lo <= hi


def test_sparsify_system_extremes_and_independence():
    S = HypergraphSystem.complete(2, 2, 1, 2)
    assert sparsify_system(S, 1.0, RngSpec(0)).system == S
    assert all(g.edge_count == 0 for g in sparsify_system(S, 0.0, RngSpec(0)).system.colors)

    # joint retention of one fixed edge in two colors ~ p^2
    trials = 10_000
    hits = 0
    edge = (0, 1)
    for i in range(trials):
        sp = sparsify_system(S, 0.5, RngSpec(13, i)).system
        if sp.colors[0].has_edge(edge) and sp.colors[1].has_edge(edge):
            hits += 1
    sigma = math.sqrt(0.25 * 0.75 / trials)
    assert abs(hits / trials - 0.25) <= 3 * sigma


def test_stream_independence_correlation():
    H = Hypergraph.from_edges(2, 4, [(0, 1)])
    trials = 10_000
    xs, ys = [], []
    for i in range(trials):
        base = RngSpec(99, i)
        xs.append(1 if sparsify(H, 0.5, base.split(0)).edge_count else 0)
        ys.append(1 if sparsify(H, 0.5, base.split(1)).edge_count else 0)
    n = trials
    mx, my = sum(xs) / n, sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / n
    corr = cov / math.sqrt(mx * (1 - mx) * my * (1 - my))
    assert abs(corr) <= 3 / math.sqrt(n)


def test_random_k_graph_extremes():
    assert random_k_graph(5, 2, 1.0, RngSpec(0)) == Hypergraph.complete(2, 5)
    g = random_k_graph(3, 3, 0.5, RngSpec(0))
    assert g.edge_count in (0, 1)


def test_random_k_graph_mean_edges():
    trials = 10_000
    total = sum(random_k_graph(6, 2, 1 / 3, RngSpec(21, i)).edge_count for i in range(trials))
    sigma = math.sqrt(15 * (1 / 3) * (2 / 3) / trials)
    assert abs(total / trials - 5.0) <= 3 * sigma


def test_coupled_complex_extremes():
    _, cx = coupled_complex_sample(5, 2, 0.0, K3, RngSpec(3))
    assert cx.copy_count == 0
    g, cx = coupled_complex_sample(4, 2, 1.0, K3, RngSpec(3))
    assert cx.copy_count == 4
    assert g == Hypergraph.complete(2, 4)


def test_coupled_complex_mean_copy_count():
    # E[#triangles] = C(10,3) * p^3 = 3.24 at p = 0.3
    trials = 4_000
    counts = []
    for i in range(trials):
        _, cx = coupled_complex_sample(10, 2, 0.3, K3, RngSpec(17, i))
        counts.append(cx.copy_count)
    mean = sum(counts) / trials
    expect = math.comb(10, 3) * 0.3**3
    var = sum((c - mean) ** 2 for c in counts) / (trials - 1)
    assert abs(mean - expect) <= 3 * math.sqrt(var / trials)
