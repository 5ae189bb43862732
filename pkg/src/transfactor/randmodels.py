"""Random sparsification of hypergraphs and systems, and binomial random
k-graphs.

Edge retention draws are hash-derived from (seed, stream, edge), not from a
sequential generator, so a sparsification at p1 < p2 with the same stream
keeps a nested subset of edges.  Threshold sweeps evaluate one trial at many
retention probabilities through that coupling.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import ParameterError
from .hypergraph import Hypergraph, HypergraphSystem
from .patterns import FactorComplex, Pattern, f_complex
from .rng import RngSpec


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class SparsifiedSystem:
    base: HypergraphSystem
    p: float
    system: HypergraphSystem

    @property
    def kept_edges(self) -> tuple[frozenset, ...]:
        return tuple(g.edges for g in self.system.colors)


def sparsify(H: Hypergraph, p: float, rng: RngSpec) -> Hypergraph:
    """Keep each edge independently with probability p."""
    _check_probability(p)
    if p == 1.0:
        return H
    kept = frozenset(e for e in H.edges if rng.edge_draw(e) < p)
    return Hypergraph(H.k, H.n, kept)


def sparsify_system(S: HypergraphSystem, p: float, rng: RngSpec) -> SparsifiedSystem:
    """Sparsify every color graph with its own independent stream."""
    _check_probability(p)
    colors = tuple(
        sparsify(g, p, rng.split(c)) for c, g in enumerate(S.colors)
    )
    return SparsifiedSystem(base=S, p=p, system=HypergraphSystem(S.k, S.s, S.t, S.n, colors))


def random_k_graph(n: int, k: int, p: float, rng: RngSpec) -> Hypergraph:
    """Binomial random k-graph: each of the C(n, k) edges appears with
    probability p."""
    if k > n:
        raise ParameterError(f"uniformity {k} exceeds vertex count {n}")
    _check_probability(p)
    if p == 1.0:
        return Hypergraph.complete(k, n)
    edges = frozenset(e for e in combinations(range(n), k) if rng.edge_draw(e) < p)
    return Hypergraph(k, n, edges)


def coupled_complex_sample(
    n: int, k: int, p: float, F: Pattern, rng: RngSpec
) -> tuple[Hypergraph, FactorComplex]:
    """Sample a binomial k-graph and return it with its pattern complex:
    the complex holds exactly the pattern copies present in the sample."""
    G = random_k_graph(n, k, p, rng)
    return G, f_complex(G, F)


def thin_to_degree_floor(
    H: Hypergraph, d: int, floor: int, keep_fraction: float, rng: RngSpec
) -> Hypergraph:
    """Delete random edges, rejecting any deletion that would push some
    d-subset's degree below the floor.  Deletion stops once at most
    keep_fraction of the edges remain (or nothing more can go)."""
    from itertools import combinations as combos

    _check_probability(keep_fraction)
    deg: dict[tuple[int, ...], int] = {}
    for e in H.edges:
        for sub in combos(e, d):
            deg[sub] = deg.get(sub, 0) + 1
    order = H.sorted_edges()
    rng.generator().shuffle(order)
    target = int(len(order) * keep_fraction)
    kept = set(H.edges)
    for e in order:
        if len(kept) <= target:
            break
        subs = list(combos(e, d))
        if all(deg[sub] - 1 >= floor for sub in subs):
            kept.discard(e)
            for sub in subs:
                deg[sub] -= 1
    return Hypergraph(H.k, H.n, frozenset(kept))


def random_system_with_degree_floor(
    k: int, s: int, t: int, n: int, d: int, floor: int, keep_fraction: float, rng: RngSpec
) -> HypergraphSystem:
    """Dense random system: every color starts complete and is thinned
    independently while respecting the degree floor, so the system's
    minimum d-degree hypothesis holds by construction."""
    full = Hypergraph.complete(k, s * n)
    colors = tuple(
        thin_to_degree_floor(full, d, floor, keep_fraction, rng.split(c))
        for c in range(t * n)
    )
    return HypergraphSystem(k, s, t, n, colors)


def random_bipartite_with_degree_sum_floor(
    n: int, floor_sum: int, keep_fraction: float, rng: RngSpec
):
    """Balanced bipartite host thinned from complete while keeping
    min-left-degree + min-right-degree at or above the floor."""
    from .bipartite import BipartiteGraph

    _check_probability(keep_fraction)
    edges = {(a, b) for a in range(n) for b in range(n)}
    left = [n] * n
    right = [n] * n
    order = sorted(edges)
    rng.generator().shuffle(order)
    target = int(n * n * keep_fraction)
    for a, b in order:
        if len(edges) <= target:
            break
        left[a] -= 1
        right[b] -= 1
        if min(left) + min(right) >= floor_sum:
            edges.discard((a, b))
        else:
            left[a] += 1
            right[b] += 1
    return BipartiteGraph.from_edges(n, n, edges)
