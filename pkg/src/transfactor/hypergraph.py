"""Uniform hypergraphs, colored hypergraph systems, and degree functionals.

Vertices and colors are dense integer ids.  Edges are canonical sorted
tuples held in frozensets, so membership is O(1) and iteration order is
deterministic after sorting.  All containers here are immutable once built
and safe to share across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParameterError


def canonical_edge(edge: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(edge))


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph on vertices 0..n-1."""

    k: int
    n: int
    edges: frozenset[tuple[int, ...]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"uniformity must be >= 1, got {self.k}")
        if self.n < 0:
            raise ParameterError("vertex count must be nonnegative")
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise ParameterError(f"edge {e} does not have {self.k} distinct vertices")
            if e != tuple(sorted(e)):
                raise ParameterError(f"edge {e} is not in canonical sorted form")
            if e[0] < 0 or e[-1] >= self.n:
                raise ParameterError(f"edge {e} has vertices outside [0, {self.n})")

    @staticmethod
    def from_edges(k: int, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(k, n, frozenset(canonical_edge(e) for e in edges))

    @staticmethod
    def complete(k: int, n: int) -> "Hypergraph":
        return Hypergraph(k, n, frozenset(combinations(range(n), k)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    def has_edge(self, edge: Iterable[int]) -> bool:
        return canonical_edge(edge) in self.edges

    def add_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.k, self.n, self.edges | {canonical_edge(e) for e in extra})

    @cached_property
    def edge_masks(self) -> list[int]:
        """Edges as vertex bitmasks, in sorted edge order."""
        return [_mask(e) for e in self.sorted_edges()]

    @cached_property
    def neighbor_masks(self) -> list[int]:
        """For k=2 only: per-vertex adjacency bitmask."""
        if self.k != 2:
            raise ParameterError("neighbor_masks is only defined for 2-graphs")
        masks = [0] * self.n
        for a, b in self.edges:
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        return masks

    def min_degree_within(self, window_mask: int, d: int, verts: Sequence[int] | None = None) -> int:
        """delta_d of the subgraph induced on the vertices set in window_mask.

        ``verts`` may repeat the mask's members to skip the bit decode in
        hot loops.
        """
        if verts is None:
            verts = _bits(window_mask)
        if len(verts) < d:
            raise ParameterError("window smaller than d")
        if self.k == 2 and d == 1:
            nb = self.neighbor_masks
            return min((nb[v] & window_mask).bit_count() for v in verts)
        counts: dict[tuple[int, ...], int] = {}
        for e in self.edge_masks_with_subs(d):
            emask, subs = e
            if emask & ~window_mask:
                continue
            for sub in subs:
                counts[sub] = counts.get(sub, 0) + 1
        return min((counts.get(sub, 0) for sub in combinations(sorted(verts), d)), default=0)

    def edge_masks_with_subs(self, d: int) -> list[tuple[int, tuple[tuple[int, ...], ...]]]:
        cache = getattr(self, "_subs_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_subs_cache", cache)
        if d not in cache:
            cache[d] = [
                (_mask(e), tuple(combinations(e, d))) for e in self.sorted_edges()
            ]
        return cache[d]


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def min_d_degree(H: Hypergraph, d: int) -> int:
    """Minimum, over d-subsets of the vertex set, of the number of edges
    containing the subset."""
    if H.n == 0:
        raise ParameterError("hypergraph has no vertices")
    if not 1 <= d <= H.k - 1:
        raise ParameterError(f"d must be in [1, {H.k - 1}], got {d}")
    counts: dict[tuple[int, ...], int] = {}
    for e in H.edges:
        for sub in combinations(e, d):
            counts[sub] = counts.get(sub, 0) + 1
    return min(
        (counts.get(sub, 0) for sub in combinations(range(H.n), d)),
        default=0,
    )


@dataclass(frozen=True)
class HypergraphSystem:
    """t*n colored k-graphs sharing one set of s*n vertices."""

    k: int
    s: int
    t: int
    n: int
    colors: tuple[Hypergraph, ...]

    def __post_init__(self):
        if len(self.colors) != self.t * self.n:
            raise ParameterError(
                f"expected {self.t * self.n} color graphs, got {len(self.colors)}"
            )
        for i, g in enumerate(self.colors):
            if g.n != self.s * self.n:
                raise ParameterError(f"color {i} has {g.n} vertices, expected {self.s * self.n}")
            if g.k != self.k:
                raise ParameterError(f"color {i} has uniformity {g.k}, expected {self.k}")

    @property
    def vertex_count(self) -> int:
        return self.s * self.n

    @property
    def color_count(self) -> int:
        return self.t * self.n

    @staticmethod
    def uniform(k: int, s: int, t: int, n: int, graph: Hypergraph) -> "HypergraphSystem":
        return HypergraphSystem(k, s, t, n, (graph,) * (t * n))

    @staticmethod
    def complete(k: int, s: int, t: int, n: int) -> "HypergraphSystem":
        return HypergraphSystem.uniform(k, s, t, n, Hypergraph.complete(k, s * n))


def system_min_degree(S: HypergraphSystem, d: int) -> int:
    if not S.colors:
        raise ParameterError("system has no color graphs")
    return min(min_d_degree(g, d) for g in S.colors)


@dataclass(frozen=True)
class ColoredExpansionGraph:
    """(k+1)-graph encoding of a system: each edge is k vertex ids plus one
    color id, present iff the k-set is an edge of that color's graph."""

    base_k: int
    vertex_count: int
    color_count: int
    edges: frozenset[tuple[tuple[int, ...], int]]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, vertices: Iterable[int], color: int) -> bool:
        return (canonical_edge(vertices), color) in self.edges


def build_colored_expansion(S: HypergraphSystem) -> ColoredExpansionGraph:
    edges = set()
    for c, g in enumerate(S.colors):
        for e in g.edges:
            edges.add((e, c))
    return ColoredExpansionGraph(
        base_k=S.k,
        vertex_count=S.vertex_count,
        color_count=S.color_count,
        edges=frozenset(edges),
    )


def decode_colored_expansion(E: ColoredExpansionGraph, s: int, t: int, n: int) -> HypergraphSystem:
    """Inverse of :func:`build_colored_expansion` (bijective round trip)."""
    per_color: list[set[tuple[int, ...]]] = [set() for _ in range(E.color_count)]
    for verts, c in E.edges:
        per_color[c].add(verts)
    colors = tuple(
        Hypergraph(E.base_k, E.vertex_count, frozenset(es)) for es in per_color
    )
    return HypergraphSystem(E.base_k, s, t, n, colors)


# ---------------------------------------------------------------------------
# Text formats.
#
# Hypergraph file: first line "k n m", then m lines of k vertex ids.
# System file: first line "k s t n", then t*n blocks, each starting with
# "color c m_c" followed by m_c edge lines.
# ---------------------------------------------------------------------------


def parse_hypergraph(text: str) -> tuple[Hypergraph, int]:
    """Returns (graph, duplicate_count); duplicate edges are dropped."""
    lines = [ln for ln in (l.strip() for l in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError("empty hypergraph file")
    head = lines[0].split()
    if len(head) != 3:
        raise ParameterError(f"expected header 'k n m', got {lines[0]!r}")
    k, n, m = (int(x) for x in head)
    if len(lines) - 1 != m:
        raise ParameterError(f"header promises {m} edges, file has {len(lines) - 1}")
    edges: set[tuple[int, ...]] = set()
    dupes = 0
    for ln in lines[1:]:
        e = canonical_edge(int(x) for x in ln.split())
        if len(e) != k:
            raise ParameterError(f"edge line {ln!r} does not have {k} vertices")
        if e in edges:
            dupes += 1
        else:
            edges.add(e)
    return Hypergraph(k, n, frozenset(edges)), dupes


def format_hypergraph(H: Hypergraph) -> str:
    lines = [f"{H.k} {H.n} {H.edge_count}"]
    lines.extend(" ".join(str(v) for v in e) for e in H.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_system(text: str) -> tuple[HypergraphSystem, int]:
    lines = [ln for ln in (l.strip() for l in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError("empty system file")
    head = lines[0].split()
    if len(head) != 4:
        raise ParameterError(f"expected header 'k s t n', got {lines[0]!r}")
    k, s, t, n = (int(x) for x in head)
    colors: list[Hypergraph | None] = [None] * (t * n)
    dupes = 0
    i = 1
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] != "color" or len(parts) != 3:
            raise ParameterError(f"expected 'color c m_c' block header, got {lines[i]!r}")
        c, mc = int(parts[1]), int(parts[2])
        if not 0 <= c < t * n:
            raise ParameterError(f"color id {c} out of range")
        block = lines[i + 1 : i + 1 + mc]
        if len(block) != mc:
            raise ParameterError(f"color {c} promises {mc} edges, block has {len(block)}")
        edges: set[tuple[int, ...]] = set()
        for ln in block:
            e = canonical_edge(int(x) for x in ln.split())
            if e in edges:
                dupes += 1
            else:
                edges.add(e)
        colors[c] = Hypergraph(k, s * n, frozenset(edges))
        i += 1 + mc
    missing = [c for c, g in enumerate(colors) if g is None]
    if missing:
        raise ParameterError(f"system file missing blocks for colors {missing[:5]}")
    return HypergraphSystem(k, s, t, n, tuple(colors)), dupes  # type: ignore[arg-type]


def format_system(S: HypergraphSystem) -> str:
    lines = [f"{S.k} {S.s} {S.t} {S.n}"]
    for c, g in enumerate(S.colors):
        lines.append(f"color {c} {g.edge_count}")
        lines.extend(" ".join(str(v) for v in e) for e in g.sorted_edges())
    return "\n".join(lines) + "\n"


def vertex_mask(vertices: Iterable[int]) -> int:
    return _mask(vertices)


def mask_vertices(mask: int) -> list[int]:
    return _bits(mask)
