from __future__ import annotations

import math
from collections import Counter
from itertools import product

import pytest

from transfactor.errors import CapacityError, PipelineFailureError
from transfactor.hypergraph import (
    Hypergraph,
    HypergraphSystem,
    build_colored_expansion,
)
from transfactor.patterns import Pattern, expand, f_complex
from transfactor.rng import RngSpec
from transfactor.randmodels import random_k_graph
from transfactor.solver import (
    Embedding,
    FactorSampler,
    compose_global_embedding,
    count_transversal_factors,
    enumerate_factors,
    find_factor_in_expansion,
    find_transversal_factor,
    uniform_random_factor,
    validate_embedding,
)

K2 = Pattern.from_graph(Hypergraph.from_edges(2, 2, [(0, 1)]))
K3 = Pattern.from_graph(Hypergraph.complete(2, 3))


def brute_force_count(S: HypergraphSystem, F: Pattern) -> int:
    """Oracle: pick one edge per color (cartesian product), then check the
    selection splits into n disjoint pattern copies with matching edges."""
    choices = [sorted(g.edges) for g in S.colors]
    if any(not c for c in choices):
        return 0
    fedges = F.graph.sorted_edges()
    total = 0
    seen = set()
    for pick in product(*choices):
        key = frozenset((e, c) for c, e in enumerate(pick))
        if key in seen:
            continue
        seen.add(key)
        if _selection_is_factor(S, F, fedges, pick):
            total += 1
    return total


def _selection_is_factor(S, F, fedges, pick) -> bool:
    remaining = set(enumerate(pick))
    uncovered = set(range(S.vertex_count))

    def go(rem, unc):
        if not rem:
            return not unc
        anchor = min(unc)
        anchored = [(c, e) for c, e in rem if anchor in e]
        # try every way to realize a copy on some vertex set through anchor
        for r in range(len(anchored)):
            c0, e0 = anchored[r]
            for group in _groups_through(rem, F, e0, c0, unc):
                verts = {v for _, e in group for v in e}
                if anchor not in verts:
                    continue
                local = sorted(verts)
                relabel = {v: i for i, v in enumerate(local)}
                shape = frozenset(tuple(sorted(relabel[v] for v in e)) for _, e in group)
                if shape == frozenset(fedges_relabelled(F)):
                    if go(rem - group, unc - verts):
                        return True
        return False

    def _groups_through(rem, F, seed_edge, seed_color, unc):
        # all |t|-subsets of remaining picks that include the seed and span s vertices
        from itertools import combinations

        pool = [x for x in rem if x != (seed_color, seed_edge)]
        for extra in combinations(pool, F.t - 1):
            group = frozenset(((seed_color, seed_edge),) + extra)
            verts = {v for _, e in group for v in e}
            if len(verts) == F.s and verts <= unc:
                yield group

    def fedges_relabelled(F):
        return F.graph.sorted_edges()

    return go(frozenset(remaining), frozenset(uncovered))


def test_count_k2_two_colors_k4():
    S = HypergraphSystem.complete(2, 2, 1, 2)
    assert count_transversal_factors(S, K2) == 6
    assert brute_force_count(S, K2) == 6


def test_count_zero_when_color_edgeless():
    k4 = Hypergraph.complete(2, 4)
    S = HypergraphSystem(2, 2, 1, 2, (k4, Hypergraph(2, 4)))
    assert count_transversal_factors(S, K2) == 0
    assert find_transversal_factor(S, K2) is None


def test_count_single_edge():
    S = HypergraphSystem(2, 2, 1, 1, (Hypergraph.from_edges(2, 2, [(0, 1)]),))
    assert count_transversal_factors(S, K2) == 1


def test_find_complete_system():
    S = HypergraphSystem.complete(2, 3, 3, 2)
    emb = find_transversal_factor(S, K3)
    assert emb is not None
    validate_embedding(S, K3, emb)


def test_find_respects_cap():
    S = HypergraphSystem.complete(2, 3, 3, 20)
    with pytest.raises(CapacityError):
        find_transversal_factor(S, K3)


def test_counts_match_oracle_on_random_tiny_instances():
    rng = RngSpec(404)
    checked = 0
    for trial in range(60):
        stream = rng.split(trial)
        n = 1 + trial % 2
        colors = tuple(
            random_k_graph(2 * n, 2, 0.7, stream.split(c)) for c in range(n)
        )
        S = HypergraphSystem(2, 2, 1, n, colors)
        assert count_transversal_factors(S, K2) == brute_force_count(S, K2)
        checked += 1
    assert checked == 60


def test_count_matches_complex_pm_count():
    # expansion route: perfect matchings of the expanded pattern's complex
    rng = RngSpec(505)
    star = expand(K2)
    for trial in range(50):
        stream = rng.split(trial)
        n = 1 + trial % 2
        colors = tuple(random_k_graph(2 * n, 2, 0.6, stream.split(c)) for c in range(n))
        S = HypergraphSystem(2, 2, 1, n, colors)
        flat_edges = []
        for c, g in enumerate(S.colors):
            for e in g.edges:
                flat_edges.append(e + (S.vertex_count + c,))
        flat = Hypergraph.from_edges(3, S.vertex_count + S.color_count, flat_edges)
        cx = f_complex(flat, Pattern.from_graph(star.graph))
        assert cx.perfect_matching_count() == count_transversal_factors(S, K2)


def test_expansion_solver_equivalence_random():
    rng = RngSpec(606)
    star = expand(K2)
    agree = 0
    for trial in range(200):
        stream = rng.split(trial)
        n = 1 + trial % 2
        p = 0.35 + 0.3 * (trial % 3)
        colors = tuple(random_k_graph(2 * n, 2, p, stream.split(c)) for c in range(n))
        S = HypergraphSystem(2, 2, 1, n, colors)
        direct = find_transversal_factor(S, K2) is not None
        via_expansion = find_factor_in_expansion(build_colored_expansion(S), star) is not None
        assert direct == via_expansion
        agree += 1
    assert agree == 200


def test_expansion_adversarial_instance():
    # union of colors holds a perfect matching, but the transversal demands
    # collide: color 1 only offers edges through vertex 0
    g0 = Hypergraph.from_edges(2, 4, [(0, 1), (2, 3)])
    g1 = Hypergraph.from_edges(2, 4, [(0, 1), (0, 2), (0, 3)])
    S = HypergraphSystem(2, 2, 1, 2, (g1, g1))
    assert find_transversal_factor(S, K2) is None
    assert find_factor_in_expansion(build_colored_expansion(S), expand(K2)) is None
    S_ok = HypergraphSystem(2, 2, 1, 2, (g0, g1))
    assert find_transversal_factor(S_ok, K2) is not None


def test_monotone_under_edge_addition():
    rng = RngSpec(707)
    for trial in range(30):
        stream = rng.split(trial)
        colors = tuple(random_k_graph(4, 2, 0.5, stream.split(c)) for c in range(2))
        S = HypergraphSystem(2, 2, 1, 2, colors)
        if find_transversal_factor(S, K2) is None:
            continue
        gen = stream.generator()
        c = gen.randrange(2)
        missing = sorted(set(Hypergraph.complete(2, 4).edges) - set(colors[c].edges))
        if not missing:
            continue
        extra = missing[gen.randrange(len(missing))]
        bigger = list(colors)
        bigger[c] = colors[c].add_edges([extra])
        S2 = HypergraphSystem(2, 2, 1, 2, tuple(bigger))
        assert find_transversal_factor(S2, K2) is not None


def test_uniform_random_factor_unique_instance():
    S = HypergraphSystem(2, 2, 1, 1, (Hypergraph.from_edges(2, 2, [(0, 1)]),))
    emb = uniform_random_factor(S, K2, RngSpec(1))
    assert emb.vertex_map in ((0, 1), (1, 0))
    with pytest.raises(PipelineFailureError):
        uniform_random_factor(
            HypergraphSystem(2, 2, 1, 1, (Hypergraph(2, 2),)), K2, RngSpec(1)
        )


def test_uniform_random_factor_equidistribution():
    # frozen oracle: 6 factors x 2! slot orders x |Aut(K2)|^2 = 48 labelings
    S = HypergraphSystem.complete(2, 2, 1, 2)
    sampler = FactorSampler(S, K2)
    assert len(sampler) == 6
    trials = 96_000
    counts = Counter()
    for i in range(trials):
        emb = sampler.sample(RngSpec(42, i))
        counts[(emb.vertex_map, emb.color_map)] += 1
    assert len(counts) == 48
    p = 1 / 48
    sigma = math.sqrt(p * (1 - p) / trials)
    for c in counts.values():
        assert abs(c / trials - p) <= 4 * sigma


def test_uniform_random_factor_vertex_marginal():
    # P[slot 0 -> host v] = 1/(sn) by symmetry on the complete system
    S = HypergraphSystem.complete(2, 3, 3, 2)
    sampler = FactorSampler(S, K3)
    trials = 3_000
    hits = Counter()
    for i in range(trials):
        emb = sampler.sample(RngSpec(77, i))
        hits[emb.vertex_map[0]] += 1
    p = 1 / 6
    sigma = math.sqrt(p * (1 - p) / trials)
    for v in range(6):
        assert abs(hits[v] / trials - p) <= 4 * sigma


def test_compose_single_and_two_clusters():
    S = HypergraphSystem.complete(2, 2, 1, 2)
    emb = find_transversal_factor(S, K2)
    whole = compose_global_embedding(S, K2, [(emb, list(range(4)), list(range(2)))])
    assert whole.vertex_map == emb.vertex_map

    # two disjoint complete clusters forming a 4-copy instance
    big = HypergraphSystem.complete(2, 2, 1, 4)
    sub = HypergraphSystem.complete(2, 2, 1, 2)
    e1 = find_transversal_factor(sub, K2)
    composed = compose_global_embedding(
        big,
        K2,
        [
            (e1, [0, 1, 2, 3], [0, 1]),
            (e1, [4, 5, 6, 7], [2, 3]),
        ],
    )
    validate_embedding(big, K2, composed)


def test_compose_detects_overlap():
    S = HypergraphSystem.complete(2, 2, 1, 2)
    emb = find_transversal_factor(HypergraphSystem.complete(2, 2, 1, 1), K2)
    with pytest.raises(AssertionError):
        compose_global_embedding(
            S, K2, [(emb, [0, 1], [0]), (emb, [1, 2], [1])]
        )
