"""Analysis of small fixed patterns: densities, balance certificates,
edge expansions, and copy complexes.

Density comparisons are exact (``fractions.Fraction``); strict inequalities
between subgraph densities decide balance certificates, so floating point is
never used here.  Subgraphs are read as nonempty edge subsets whose vertex
set is the union of the chosen edges; isolated vertices would only lower a
density, so this is the conservative reading.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .errors import CapacityError, ParameterError
from .hypergraph import Hypergraph

MAX_PATTERN_VERTICES = 8
MAX_PATTERN_EDGES = 12


def one_density(H: Hypergraph) -> Fraction:
    """|E| / (|V| - 1) as an exact rational."""
    if H.n < 2:
        raise ParameterError("1-density needs at least two vertices")
    return Fraction(H.edge_count, H.n - 1)


def _subset_density(edges: Sequence[tuple[int, ...]], picked: int) -> Optional[Fraction]:
    """Density of the subgraph formed by the edge subset encoded in ``picked``.

    Returns None for subsets spanning fewer than two vertices.
    """
    verts: set[int] = set()
    count = 0
    for i, e in enumerate(edges):
        if picked >> i & 1:
            verts.update(e)
            count += 1
    if len(verts) < 2:
        return None
    return Fraction(count, len(verts) - 1)


def m_one(H: Hypergraph) -> Fraction:
    """Maximum 1-density over subgraphs spanned by nonempty edge subsets."""
    if H.n < 2:
        raise ParameterError("m_1 needs at least two vertices")
    if not H.edges:
        raise ParameterError("m_1 is undefined for edgeless graphs")
    edges = H.sorted_edges()
    if len(edges) > MAX_PATTERN_EDGES:
        raise CapacityError(f"subset enumeration capped at {MAX_PATTERN_EDGES} edges")
    best: Optional[Fraction] = None
    for picked in range(1, 1 << len(edges)):
        d = _subset_density(edges, picked)
        if d is not None and (best is None or d > best):
            best = d
    assert best is not None  # every single edge spans >= 2 vertices
    return best


def is_strictly_one_balanced(H: Hypergraph) -> tuple[bool, Optional[Hypergraph]]:
    """True iff every proper edge-subset subgraph has strictly smaller
    1-density than the whole graph.  On failure, returns a violating
    subgraph as witness."""
    if H.n < 2 or not H.edges:
        raise ParameterError("balance needs >= 2 vertices and >= 1 edge")
    edges = H.sorted_edges()
    if len(edges) > MAX_PATTERN_EDGES:
        raise CapacityError(f"subset enumeration capped at {MAX_PATTERN_EDGES} edges")
    whole = one_density(H)
    full = (1 << len(edges)) - 1
    for picked in range(1, full):
        d = _subset_density(edges, picked)
        if d is not None and d >= whole:
            sub = [e for i, e in enumerate(edges) if picked >> i & 1]
            verts = sorted({v for e in sub for v in e})
            relabel = {v: i for i, v in enumerate(verts)}
            witness = Hypergraph.from_edges(
                H.k, len(verts), [tuple(relabel[v] for v in e) for e in sub]
            )
            return False, witness
    return True, None


@dataclass(frozen=True)
class Pattern:
    """A fixed small pattern with its derived invariants."""

    graph: Hypergraph
    s: int
    t: int
    d1: Fraction
    m1: Fraction
    strictly_one_balanced: bool

    @staticmethod
    def from_graph(H: Hypergraph) -> "Pattern":
        if H.n < 2 or H.edge_count < 1:
            raise ParameterError("a pattern needs >= 2 vertices and >= 1 edge")
        if H.n > MAX_PATTERN_VERTICES or H.edge_count > MAX_PATTERN_EDGES:
            raise CapacityError(
                f"patterns capped at {MAX_PATTERN_VERTICES} vertices / {MAX_PATTERN_EDGES} edges"
            )
        balanced, _ = is_strictly_one_balanced(H)
        return Pattern(
            graph=H,
            s=H.n,
            t=H.edge_count,
            d1=one_density(H),
            m1=m_one(H),
            strictly_one_balanced=balanced,
        )

    @property
    def k(self) -> int:
        return self.graph.k


@dataclass(frozen=True)
class ExpandedPattern:
    """(k+1)-graph obtained by giving every edge its own fresh vertex."""

    graph: Hypergraph
    color_vertices: tuple[int, ...]

    @property
    def s_plus_t(self) -> int:
        return self.graph.n


def expand(F: Pattern) -> ExpandedPattern:
    s, t = F.s, F.t
    edges = []
    for i, e in enumerate(F.graph.sorted_edges()):
        edges.append(e + (s + i,))
    g = Hypergraph.from_edges(F.k + 1, s + t, edges)
    return ExpandedPattern(graph=g, color_vertices=tuple(range(s, s + t)))


@dataclass(frozen=True)
class ExpansionReport:
    base_strictly_balanced: bool
    expansion_strictly_balanced: bool
    balance_inherited: bool  # vacuously true when the base is unbalanced
    d1_expansion: Fraction
    d1_formula_holds: bool
    m1_base: Fraction
    m1_expansion: Fraction
    m1_identity_holds: bool

    @property
    def all_hold(self) -> bool:
        return self.balance_inherited and self.d1_formula_holds and self.m1_identity_holds


def verify_expansion_claims(F: Pattern) -> ExpansionReport:
    """Brute-force confirmation of the two structural facts about the
    expansion: balance is inherited, and m1 transforms as m1/(1+m1)."""
    star = expand(F)
    star_balanced, _ = is_strictly_one_balanced(star.graph)
    d1_star = one_density(star.graph)
    m1_star = m_one(star.graph)
    return ExpansionReport(
        base_strictly_balanced=F.strictly_one_balanced,
        expansion_strictly_balanced=star_balanced,
        balance_inherited=(not F.strictly_one_balanced) or star_balanced,
        d1_expansion=d1_star,
        d1_formula_holds=d1_star == Fraction(F.t, F.s + F.t - 1),
        m1_base=F.m1,
        m1_expansion=m1_star,
        m1_identity_holds=m1_star == F.m1 / (1 + F.m1),
    )


# ---------------------------------------------------------------------------
# Copy enumeration.
# ---------------------------------------------------------------------------


def _search_order(F: Hypergraph) -> list[int]:
    """Vertex order for injection search: grow along shared edges so edge
    checks fire as early as possible."""
    deg = Counter(v for e in F.edges for v in e)
    order = [max(range(F.n), key=lambda v: (deg[v], -v))]
    placed = set(order)
    while len(order) < F.n:
        def attach(v):
            return sum(1 for e in F.edges if v in e and any(u in placed for u in e))
        rest = [v for v in range(F.n) if v not in placed]
        nxt = max(rest, key=lambda v: (attach(v), deg[v], -v))
        order.append(nxt)
        placed.add(nxt)
    return order


def edge_preserving_injections(
    F: Hypergraph,
    H: Hypergraph,
    allowed: Optional[Iterable[int]] = None,
    require: Optional[dict[int, int]] = None,
):
    """Yield injections phi: V(F) -> V(H) (as dicts) with every edge of F
    mapped to an edge of H.  ``allowed`` restricts the image; ``require``
    pins pattern vertices to host vertices."""
    if F.k != H.k:
        raise ParameterError(f"uniformity mismatch: {F.k} vs {H.k}")
    pool = sorted(allowed) if allowed is not None else list(range(H.n))
    order = _search_order(F)
    if require:
        pinned = sorted(require, key=order.index)
        order = pinned + [v for v in order if v not in require]
    # edges whose vertices are all placed once order[:i+1] is assigned
    ready: list[list[tuple[int, ...]]] = [[] for _ in order]
    pos = {v: i for i, v in enumerate(order)}
    for e in F.edges:
        ready[max(pos[v] for v in e)].append(e)

    phi: dict[int, int] = {}
    used: set[int] = set()

    def place(i: int):
        if i == len(order):
            yield dict(phi)
            return
        v = order[i]
        candidates = [require[v]] if require and v in require else pool
        for w in candidates:
            if w in used:
                continue
            phi[v] = w
            used.add(w)
            if all(H.has_edge(phi[u] for u in e) for e in ready[i]):
                yield from place(i + 1)
            used.discard(w)
            del phi[v]

    yield from place(0)


def automorphism_count(F: Hypergraph) -> int:
    if F.n > MAX_PATTERN_VERTICES:
        raise CapacityError(f"automorphism search capped at {MAX_PATTERN_VERTICES} vertices")
    count = 0
    for perm in permutations(range(F.n)):
        if all(F.has_edge(perm[v] for v in e) for e in F.edges):
            count += 1
    return count


def distinct_copies(
    F: Hypergraph,
    H: Hypergraph,
    allowed: Optional[Iterable[int]] = None,
    require: Optional[dict[int, int]] = None,
) -> list[tuple[tuple[int, ...], frozenset[tuple[int, ...]]]]:
    """All distinct F-subgraphs of H as (vertex tuple, image edge set) pairs.

    Injections related by an automorphism of F give the same subgraph, so
    results are deduplicated on the image edge set.
    """
    seen: set[frozenset[tuple[int, ...]]] = set()
    out = []
    for phi in edge_preserving_injections(F, H, allowed=allowed, require=require):
        image = frozenset(tuple(sorted(phi[v] for v in e)) for e in F.edges)
        if image not in seen:
            seen.add(image)
            out.append((tuple(sorted(phi.values())), image))
    return out


@dataclass(frozen=True)
class FactorComplex:
    """Multiset of the copies of a pattern inside a host: one entry per
    distinct subgraph, keyed by its spanned vertex set."""

    base_vertices: int
    arity: int
    copies: tuple[tuple[tuple[int, ...], frozenset[tuple[int, ...]]], ...]

    @property
    def copy_count(self) -> int:
        return len(self.copies)

    def multiset(self) -> Counter:
        return Counter(verts for verts, _ in self.copies)

    def perfect_matching_count(self) -> int:
        """Number of ways to pick disjoint copies covering every base vertex.

        Exhaustive; intended for tiny hosts only.
        """
        by_min: dict[int, list[tuple[frozenset[int], int]]] = {}
        for idx, (verts, _) in enumerate(self.copies):
            by_min.setdefault(min(verts), []).append((frozenset(verts), idx))

        def count(uncovered: frozenset[int]) -> int:
            if not uncovered:
                return 1
            v = min(uncovered)
            total = 0
            for vs, _ in by_min.get(v, []):
                if vs <= uncovered:
                    total += count(uncovered - vs)
            return total

        return count(frozenset(range(self.base_vertices)))


def f_complex(H: Hypergraph, F: Pattern) -> FactorComplex:
    if F.k != H.k:
        raise ParameterError("pattern and host must have the same uniformity")
    copies = tuple(sorted(distinct_copies(F.graph, H), key=lambda c: (c[0], sorted(c[1]))))
    return FactorComplex(base_vertices=H.n, arity=F.s, copies=copies)


# ---------------------------------------------------------------------------
# A small corpus of named patterns used by demos and tests.
# ---------------------------------------------------------------------------


def standard_patterns() -> dict[str, Pattern]:
    mk = Hypergraph.from_edges
    graphs = {
        "single_edge": mk(2, 2, [(0, 1)]),
        "path_2": mk(2, 3, [(0, 1), (1, 2)]),
        "triangle": mk(2, 3, [(0, 1), (0, 2), (1, 2)]),
        "cycle_4": mk(2, 4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
        "two_disjoint_edges": mk(2, 4, [(0, 1), (2, 3)]),
        "k4": Hypergraph.complete(2, 4),
        "k4_minus_edge": mk(2, 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
        "star_3": mk(2, 4, [(0, 1), (0, 2), (0, 3)]),
        "single_3edge": mk(3, 3, [(0, 1, 2)]),
        "tight_path_3": mk(3, 4, [(0, 1, 2), (1, 2, 3)]),
        "complete_3uniform_4": Hypergraph.complete(3, 4),
        "loose_path_3": mk(3, 5, [(0, 1, 2), (2, 3, 4)]),
    }
    return {name: Pattern.from_graph(g) for name, g in graphs.items()}
