"""Exact search for transversal factors at cluster scale.

A factor places n disjoint pattern copies on the s*n host vertices and
assigns every copy edge its own color, using each of the t*n colors exactly
once.  The search anchors on the least uncovered vertex, enumerates the
distinct pattern copies through it (edges drawn from any still-available
color), then assigns colors per copy edge, backtracking exhaustively.  A
live-edge count per color prunes branches where some color can no longer
contribute an edge.

Everything here is exponential by design and guarded by hard size caps;
cluster sub-problems are constant-size, which is the whole point of the
clustering reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import CapacityError, ParameterError, PipelineFailureError
from .hypergraph import ColoredExpansionGraph, Hypergraph, HypergraphSystem
from .patterns import ExpandedPattern, Pattern, _search_order
from .rng import RngSpec

FIND_VERTEX_CAP = 40
ENUMERATE_VERTEX_CAP = 12
DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class Embedding:
    """Labeled embedding of an n-copy factor template.

    Slot conventions: copy c of the pattern occupies vertex slots
    [c*s, (c+1)*s) in pattern-vertex order and color slots [c*t, (c+1)*t)
    in sorted pattern-edge order.
    """

    n: int
    s: int
    t: int
    vertex_map: tuple[int, ...]
    color_map: tuple[int, ...]

    def copy_vertices(self, c: int) -> tuple[int, ...]:
        return self.vertex_map[c * self.s : (c + 1) * self.s]

    def copy_colors(self, c: int) -> tuple[int, ...]:
        return self.color_map[c * self.t : (c + 1) * self.t]

    def to_dict(self) -> dict:
        return {"vertexMap": list(self.vertex_map), "colorMap": list(self.color_map)}


def validate_embedding(S: HypergraphSystem, F: Pattern, emb: Embedding):
    """Independent validity check: spanning, injective, one edge per color."""
    if emb.s != F.s or emb.t != F.t or emb.n * F.s != S.vertex_count:
        raise AssertionError("embedding shape does not match system and pattern")
    if sorted(emb.vertex_map) != list(range(S.vertex_count)):
        raise AssertionError("vertex map is not a bijection onto the host vertices")
    if sorted(emb.color_map) != list(range(S.color_count)):
        raise AssertionError("color map is not a bijection onto the colors")
    f_edges = F.graph.sorted_edges()
    for c in range(emb.n):
        verts = emb.copy_vertices(c)
        for j, e in enumerate(f_edges):
            image = tuple(sorted(verts[v] for v in e))
            color = emb.color_map[c * F.t + j]
            if image not in S.colors[color].edges:
                raise AssertionError(
                    f"copy {c} edge {image} is missing from color {color}"
                )


# ---------------------------------------------------------------------------
# Search machinery.
# ---------------------------------------------------------------------------

# a placed copy: (vertex image tuple, map image-edge -> host color)
Copy = tuple[tuple[int, ...], tuple[tuple[tuple[int, ...], int], ...]]


def _is_connected(F: Hypergraph) -> bool:
    if F.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for e in F.edges:
            if v in e:
                for u in e:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
    return len(seen) == F.n


def _vertex_orbit_reps(F: Hypergraph) -> list[int]:
    """One representative per orbit of the automorphism action on vertices.

    Pinning the anchor only to representatives avoids re-finding every copy
    |orbit| times; the dedupe on image edge sets keeps correctness anyway.
    """
    from itertools import permutations

    parent = list(range(F.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in permutations(range(F.n)):
        if all(F.has_edge(perm[v] for v in e) for e in F.edges):
            for v in range(F.n):
                a, b = find(v), find(perm[v])
                if a != b:
                    parent[a] = b
    return sorted({find(v) for v in range(F.n)})


class _Context:
    """Mutable search state shared by find / count / enumerate.

    Tracked structures:
      live[c]       edges of color c with every endpoint uncovered
      avail[e]      available colors still containing edge e
      union_deg[v]  uncovered-endpoint edges at v backed by >= 1 color
    A branch dies as soon as some leftover color has no live edge or some
    uncovered vertex falls below the pattern's minimum degree.
    """

    def __init__(self, S: HypergraphSystem, F: Pattern, node_budget: int):
        if S.k != F.k:
            raise ParameterError("pattern and system uniformity differ")
        if S.s != F.s or S.t != F.t:
            raise ParameterError(
                f"system built for (s={S.s}, t={S.t}), pattern has (s={F.s}, t={F.t})"
            )
        self.S = S
        self.F = F
        self.node_budget = node_budget
        self.nodes = 0
        self.edge_colors: dict[tuple[int, ...], list[int]] = {}
        for c, g in enumerate(S.colors):
            for e in g.edges:
                self.edge_colors.setdefault(e, []).append(c)
        self.incident: list[list[tuple[int, tuple[int, ...]]]] = [
            [] for _ in range(S.vertex_count)
        ]
        for c, g in enumerate(S.colors):
            for e in g.edges:
                for v in e:
                    self.incident[v].append((c, e))
        self.live = [g.edge_count for g in S.colors]
        self.avail = {e: len(cs) for e, cs in self.edge_colors.items()}
        self.covered = {e: 0 for e in self.edge_colors}
        self.union_deg = [0] * S.vertex_count
        self.edge_at: list[list[tuple[int, ...]]] = [[] for _ in range(S.vertex_count)]
        for e in self.edge_colors:
            for v in e:
                self.union_deg[v] += 1
                self.edge_at[v].append(e)
        self.uncovered = set(range(S.vertex_count))
        self.colors_left = set(range(S.color_count))
        self.min_pattern_degree = min(
            sum(1 for e in F.graph.edges if v in e) for v in range(F.s)
        )
        self.pattern_connected = _is_connected(F.graph)
        self.orbit_reps = _vertex_orbit_reps(F.graph)
        self.order = _search_order(F.graph)
        self.ready: list[list[tuple[int, ...]]] = [[] for _ in self.order]
        pos = {v: i for i, v in enumerate(self.order)}
        for e in F.graph.edges:
            self.ready[max(pos[v] for v in e)].append(e)

    def tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise CapacityError(f"search exceeded node budget of {self.node_budget}")

    # -- state updates ------------------------------------------------

    def cover(self, verts: Sequence[int]):
        for v in verts:
            for c, e in self.incident[v]:
                if self.covered[e] == 0:
                    self.live[c] -= 1
            for e in self.edge_at[v]:
                if self.covered[e] == 0 and self.avail[e] > 0:
                    for u in e:
                        self.union_deg[u] -= 1
                self.covered[e] += 1
            self.uncovered.discard(v)

    def uncover(self, verts: Sequence[int]):
        for v in reversed(list(verts)):
            self.uncovered.add(v)
            for e in self.edge_at[v]:
                self.covered[e] -= 1
                if self.covered[e] == 0 and self.avail[e] > 0:
                    for u in e:
                        self.union_deg[u] += 1
            for c, e in self.incident[v]:
                if self.covered[e] == 0:
                    self.live[c] += 1

    def consume(self, colors: Sequence[int]):
        for c in colors:
            self.colors_left.discard(c)
            for e in self.S.colors[c].edges:
                self.avail[e] -= 1
                if self.avail[e] == 0 and self.covered[e] == 0:
                    for u in e:
                        self.union_deg[u] -= 1

    def release(self, colors: Sequence[int]):
        for c in colors:
            self.colors_left.add(c)
            for e in self.S.colors[c].edges:
                if self.avail[e] == 0 and self.covered[e] == 0:
                    for u in e:
                        self.union_deg[u] += 1
                self.avail[e] += 1

    # -- pruning ------------------------------------------------------

    def dead_color(self) -> bool:
        return any(self.live[c] == 0 for c in self.colors_left)

    def starved_vertex(self) -> bool:
        need = self.min_pattern_degree
        return any(self.union_deg[v] < need for v in self.uncovered)

    def pruned(self) -> bool:
        return (
            self.dead_color()
            or self.starved_vertex()
            or self.colors_unmatchable()
            or self.bad_components()
        )

    def colors_unmatchable(self) -> bool:
        """Any completion assigns every leftover color its own live edge,
        all distinct (copies are vertex-disjoint and copy edges differ), so
        a failed color -> live-edge bipartite matching kills the branch."""
        matched: dict[tuple[int, ...], int] = {}
        colors = sorted(self.colors_left, key=lambda c: self.live[c])

        def augment(c: int, seen: set) -> bool:
            for e in self.S.colors[c].sorted_edges():
                if self.covered[e] or e in seen:
                    continue
                seen.add(e)
                holder = matched.get(e)
                if holder is None or augment(holder, seen):
                    matched[e] = c
                    return True
            return False

        for c in colors:
            if not augment(c, set()):
                return True
        return False

    def bad_components(self) -> bool:
        """For connected patterns every union-graph component must have
        size divisible by s; copies cannot straddle components."""
        if not self.pattern_connected:
            return False
        s = self.F.s
        seen: set[int] = set()
        for v0 in self.uncovered:
            if v0 in seen:
                continue
            seen.add(v0)
            stack = [v0]
            size = 0
            while stack:
                v = stack.pop()
                size += 1
                for e in self.edge_at[v]:
                    if self.covered[e] == 0 and self.avail[e] > 0:
                        for u in e:
                            if u not in seen:
                                seen.add(u)
                                stack.append(u)
            if size % s:
                return True
        return False

    # -- copy enumeration ----------------------------------------------

    def anchored_copies(self, anchor: int) -> list[tuple[tuple[int, ...], frozenset]]:
        """Distinct copies through the anchor on uncovered vertices, edges
        backed by available colors.  Pinning the anchor to one orbit
        representative per automorphism orbit reaches every copy: any image
        can be re-rooted through an automorphism, and the dedupe on image
        edge sets collapses the rest."""
        F = self.F.graph
        found: dict[frozenset, tuple[int, ...]] = {}
        phi: dict[int, int] = {}
        used: set[int] = set()
        pool = sorted(self.uncovered)
        order, ready = self.order, self.ready

        def usable(image: tuple[int, ...]) -> bool:
            return self.avail.get(image, 0) > 0

        def place(i: int, pinned: int):
            if i == len(order):
                image = frozenset(tuple(sorted(phi[u] for u in e)) for e in F.edges)
                if image not in found:
                    found[image] = tuple(sorted(phi.values()))
                return
            v = order[i]
            candidates = (anchor,) if v == pinned else pool
            for w in candidates:
                if w in used or (w == anchor and v != pinned):
                    continue
                phi[v] = w
                used.add(w)
                if all(usable(tuple(sorted(phi[u] for u in e))) for e in ready[i]):
                    place(i + 1, pinned)
                used.discard(w)
                del phi[v]

        for pinned in self.orbit_reps:
            place(0, pinned)
        return [(found[img], img) for img in sorted(found, key=sorted)]

    def color_sets(self, image: frozenset) -> list[tuple[frozenset, tuple]]:
        """Distinct available color SETS serving a copy, each with one
        concrete edge -> color pairing.  Branching on sets is enough for
        decision search: the rest of the search only sees which colors are
        gone."""
        edges = sorted(image)
        cand = [
            [c for c in self.edge_colors.get(e, ()) if c in self.colors_left]
            for e in edges
        ]
        seen: set[frozenset] = set()
        out: list[tuple[frozenset, tuple]] = []
        chosen: list[int] = []

        def go(i: int):
            if i == len(edges):
                key = frozenset(chosen)
                if key not in seen:
                    seen.add(key)
                    out.append((key, tuple(zip(edges, chosen))))
                return
            for c in cand[i]:
                if c not in chosen:
                    chosen.append(c)
                    go(i + 1)
                    chosen.pop()

        go(0)
        return out

    def color_assignments(self, image: frozenset):
        """Every injective edge -> color map for one copy (counting path)."""
        edges = sorted(image)
        cand = {
            e: [c for c in self.edge_colors.get(e, ()) if c in self.colors_left]
            for e in edges
        }
        edges.sort(key=lambda e: len(cand[e]))
        chosen: dict[tuple[int, ...], int] = {}
        taken: set[int] = set()

        def go(i: int):
            if i == len(edges):
                yield dict(chosen)
                return
            e = edges[i]
            for c in cand[e]:
                if c not in taken:
                    chosen[e] = c
                    taken.add(c)
                    yield from go(i + 1)
                    taken.discard(c)
                    del chosen[e]

        yield from go(0)



# ---------------------------------------------------------------------------
# Exact-cover route for sparse instances.
#
# A factor is an exact cover of (vertices + colors) by options
# (copy vertex set, color set): literally a perfect matching in the
# expanded pattern's copy complex.  Algorithm-X-style search with
# fewest-options item selection can branch on a scarce color just as well
# as on a scarce vertex, which the copy-by-copy backtracking cannot; near
# the satisfiability edge colors are exactly what runs scarce.
# ---------------------------------------------------------------------------


OPTION_BUILD_CAP = 30_000


def _build_cover_options(ctx: _Context) -> Optional[list[tuple[tuple, tuple[int, ...], tuple]]]:
    """All (items, verts, pairing) options, or None if the instance is too
    dense for an explicit option list."""
    options = []
    for anchor in sorted(ctx.uncovered):
        for verts, image in ctx.anchored_copies(anchor):
            if verts[0] != anchor:
                continue  # counted once, under its least vertex
            for color_set, pairing in ctx.color_sets(image):
                items = tuple(("v", v) for v in verts) + tuple(
                    ("c", c) for c in sorted(color_set)
                )
                options.append((items, verts, pairing))
                if len(options) > OPTION_BUILD_CAP:
                    return None
    return options


def _exact_cover_decide(
    ctx: _Context, options: list, shuffle: Optional[RngSpec]
) -> Optional[list[Copy]]:
    """Iterative-deepening-free Algorithm X over bitmask columns.

    Columns are immutable ints (option-id masks), so descending a branch is
    one AND with the option's precomputed kill mask and backtracking costs
    nothing.  Item selection picks the fewest-candidates item, vertex or
    color alike.
    """
    item_ids: dict = {}
    for it in [("v", v) for v in sorted(ctx.uncovered)] + [
        ("c", c) for c in sorted(ctx.colors_left)
    ]:
        item_ids[it] = len(item_ids)
    n_items = len(item_ids)
    cols = [0] * n_items
    opt_items: list[tuple[int, ...]] = []
    for oid, (items, _, _) in enumerate(options):
        ids = tuple(item_ids[it] for it in items)
        opt_items.append(ids)
        bit = 1 << oid
        for i in ids:
            cols[i] |= bit
    kill: dict[int, int] = {}

    def kill_mask(oid: int) -> int:
        m = kill.get(oid)
        if m is None:
            m = 0
            for i in opt_items[oid]:
                m |= cols[i]
            kill[oid] = m
        return m

    active_items: set[int] = set(range(n_items))
    chosen: list[int] = []
    rng_gen = shuffle.generator() if shuffle is not None else None
    tick = ctx.tick

    def go(active_opts: int) -> bool:
        if not active_items:
            return True
        best_cands = -1
        best_cnt = -1
        for i in active_items:
            cands = cols[i] & active_opts
            cnt = cands.bit_count()
            if cnt == 0:
                return False
            if best_cnt < 0 or cnt < best_cnt:
                best_cnt, best_cands = cnt, cands
                if cnt == 1:
                    break
        order = []
        m = best_cands
        while m:
            b = m & -m
            order.append(b.bit_length() - 1)
            m ^= b
        if rng_gen is not None:
            rng_gen.shuffle(order)
        for oid in order:
            tick()
            ids = opt_items[oid]
            active_items.difference_update(ids)
            chosen.append(oid)
            if go(active_opts & ~kill_mask(oid)):
                return True
            chosen.pop()
            active_items.update(ids)
        return False

    if not go((1 << len(options)) - 1):
        return None
    out: list[Copy] = []
    for oid in chosen:
        _, verts, pairing = options[oid]
        out.append((verts, tuple(sorted(pairing))))
    return out


def _decide(ctx: _Context, partial: list[Copy], shuffle: Optional[RngSpec]) -> Optional[list[Copy]]:
    """Decision search: most-constrained anchor, color-set branching."""
    if not ctx.uncovered:
        return list(partial)
    anchor = min(ctx.uncovered, key=lambda v: (ctx.union_deg[v], v))
    copies = ctx.anchored_copies(anchor)
    if shuffle is not None:
        shuffle.split(len(partial)).generator().shuffle(copies)
    for verts, image in copies:
        ctx.tick()
        sets = ctx.color_sets(image)
        if shuffle is not None:
            shuffle.split(1000 + ctx.nodes).generator().shuffle(sets)
        if not sets:
            continue
        ctx.cover(verts)
        for color_set, pairing in sets:
            ctx.consume(color_set)
            if not ctx.pruned():
                partial.append((verts, tuple(sorted((e, c) for e, c in pairing))))
                hit = _decide(ctx, partial, shuffle)
                if hit is not None:
                    ctx.release(color_set)
                    ctx.uncover(verts)
                    return hit
                partial.pop()
            ctx.release(color_set)
        ctx.uncover(verts)
    return None


def _enumerate(ctx: _Context, partial: list[Copy], on_factor: Callable[[list[Copy]], bool]) -> bool:
    """Exhaustive enumeration with canonical (least-vertex) anchoring, one
    visit per (copy, coloring) factor."""
    if not ctx.uncovered:
        return on_factor(partial)
    anchor = min(ctx.uncovered)
    for verts, image in ctx.anchored_copies(anchor):
        ctx.tick()
        ctx.cover(verts)
        for assignment in ctx.color_assignments(image):
            colors = list(assignment.values())
            ctx.consume(colors)
            if not ctx.pruned():
                partial.append((verts, tuple(sorted(assignment.items()))))
                if _enumerate(ctx, partial, on_factor):
                    ctx.release(colors)
                    ctx.uncover(verts)
                    return True
                partial.pop()
            ctx.release(colors)
        ctx.uncover(verts)
    return False


def _check_instance(S: HypergraphSystem, F: Pattern, cap: int):
    if S.vertex_count > cap:
        raise CapacityError(f"instance has {S.vertex_count} vertices, cap is {cap}")


def _copies_to_embedding(copies: list[Copy], F: Pattern) -> Embedding:
    """Canonical labeling of a factor: per copy, the first isomorphism (in
    search order) onto the image."""
    n = len(copies)
    vertex_map: list[int] = []
    color_map: list[int] = []
    f_edges = F.graph.sorted_edges()
    for verts, colored in copies:
        edge_color = dict(colored)
        iso_map = _first_iso(F.graph, verts, set(edge_color.keys()))
        vertex_map.extend(iso_map[v] for v in range(F.s))
        for e in f_edges:
            image = tuple(sorted(iso_map[v] for v in e))
            color_map.append(edge_color[image])
    return Embedding(n=n, s=F.s, t=F.t, vertex_map=tuple(vertex_map), color_map=tuple(color_map))


def _first_iso(F: Hypergraph, verts: tuple[int, ...], image_edges: set) -> dict[int, int]:
    """An isomorphism from F onto the copy (vertex set + exact edge set)."""
    from itertools import permutations

    for perm in permutations(verts):
        phi = {v: perm[v] for v in range(F.n)}
        if {tuple(sorted(phi[v] for v in e)) for e in F.edges} == image_edges:
            return phi
    raise AssertionError("copy does not carry the pattern")  # unreachable by construction


def find_transversal_factor(
    S: HypergraphSystem,
    F: Pattern,
    rng: Optional[RngSpec] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Optional[Embedding]:
    """First factor found, or None when provably none exists.

    Runs randomized restarts with growing node budgets before the final
    unbounded exhaustive pass; search times near the satisfiability edge
    are heavy-tailed, and a fresh value order usually cracks an instance
    that one fixed order grinds on.  A search that completes within its
    budget is already exhaustive, so its answer is definitive.
    """
    _check_instance(S, F, FIND_VERTEX_CAP)
    base = rng if rng is not None else RngSpec(0x7F4C7)
    ctx = _Context(S, F, node_budget)
    if ctx.pruned():
        return None
    options = _build_cover_options(ctx)
    if options is not None:
        copies = _exact_cover_decide(ctx, options, base if rng is not None else None)
        return _finish_embedding(S, F, copies)
    schedule = [s for s in (4_000, 16_000, 64_000, 256_000) if s < node_budget]
    for i, budget in enumerate(schedule):
        ctx = _Context(S, F, budget)
        try:
            copies = _decide(ctx, [], base.split(i))
        except CapacityError:
            continue
        return _finish_embedding(S, F, copies)
    ctx = _Context(S, F, node_budget)
    copies = _decide(ctx, [], base.split(len(schedule)))
    return _finish_embedding(S, F, copies)


def _finish_embedding(S, F, copies) -> Optional[Embedding]:
    if copies is None:
        return None
    emb = _copies_to_embedding(copies, F)
    validate_embedding(S, F, emb)
    return emb


def count_transversal_factors(
    S: HypergraphSystem, F: Pattern, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """Exact count of unordered factors: sets of (copy, coloring) pairs."""
    _check_instance(S, F, ENUMERATE_VERTEX_CAP)
    ctx = _Context(S, F, node_budget)
    if ctx.pruned():
        return 0
    total = 0

    def bump(_: list[Copy]) -> bool:
        nonlocal total
        total += 1
        return False

    _enumerate(ctx, [], bump)
    return total


def enumerate_factors(
    S: HypergraphSystem, F: Pattern, node_budget: int = DEFAULT_NODE_BUDGET
) -> list[tuple[Copy, ...]]:
    _check_instance(S, F, ENUMERATE_VERTEX_CAP)
    ctx = _Context(S, F, node_budget)
    out: list[tuple[Copy, ...]] = []
    if ctx.pruned():
        return out

    def keep(copies: list[Copy]) -> bool:
        out.append(tuple(copies))
        return False

    _enumerate(ctx, [], keep)
    return out


class FactorSampler:
    """Exactly uniform sampling over all labeled embeddings of factors.

    Every factor carries the same number of labelings (n! slot orders times
    |Aut(F)| isomorphisms per copy), so a uniform factor plus an independent
    uniform labeling is uniform over labeled embeddings.  Enumeration
    happens once at construction; sampling is cheap afterwards.
    """

    def __init__(self, S: HypergraphSystem, F: Pattern, node_budget: int = DEFAULT_NODE_BUDGET):
        self.S = S
        self.F = F
        self.factors = enumerate_factors(S, F, node_budget)

    def __len__(self) -> int:
        return len(self.factors)

    def sample(self, rng: RngSpec) -> Embedding:
        if not self.factors:
            raise PipelineFailureError("instance has no transversal factor")
        F = self.F
        gen = rng.generator()
        factor = self.factors[gen.randrange(len(self.factors))]
        n = len(factor)
        slots = list(range(n))
        gen.shuffle(slots)  # slot -> copy
        f_edges = F.graph.sorted_edges()
        vertex_map = [0] * (n * F.s)
        color_map = [0] * (n * F.t)
        for slot in range(n):
            verts, colored = factor[slots[slot]]
            edge_color = dict(colored)
            isos = _all_isos(F.graph, verts, set(edge_color.keys()))
            phi = isos[gen.randrange(len(isos))]
            for v in range(F.s):
                vertex_map[slot * F.s + v] = phi[v]
            for j, e in enumerate(f_edges):
                image = tuple(sorted(phi[v] for v in e))
                color_map[slot * F.t + j] = edge_color[image]
        emb = Embedding(
            n=n, s=F.s, t=F.t, vertex_map=tuple(vertex_map), color_map=tuple(color_map)
        )
        validate_embedding(self.S, F, emb)
        return emb


def uniform_random_factor(S: HypergraphSystem, F: Pattern, rng: RngSpec) -> Embedding:
    """One-shot wrapper around :class:`FactorSampler`."""
    return FactorSampler(S, F).sample(rng)


def _all_isos(F: Hypergraph, verts: tuple[int, ...], image_edges: set) -> list[dict[int, int]]:
    from itertools import permutations

    out = []
    for perm in permutations(verts):
        phi = {v: perm[v] for v in range(F.n)}
        if {tuple(sorted(phi[v] for v in e)) for e in F.edges} == image_edges:
            out.append(phi)
    return out


# ---------------------------------------------------------------------------
# Expansion-graph route.
# ---------------------------------------------------------------------------


def _flatten_expansion(E: ColoredExpansionGraph) -> Hypergraph:
    offset = E.vertex_count
    edges = [verts + (offset + c,) for verts, c in E.edges]
    return Hypergraph.from_edges(E.base_k + 1, E.vertex_count + E.color_count, edges)


def find_factor_in_expansion(
    E: ColoredExpansionGraph,
    Fstar: ExpandedPattern,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Optional[list[tuple[tuple[int, ...], frozenset]]]:
    """Search for a factor of the expanded pattern directly in the colored
    (k+1)-graph.  Returns the copies (flat ids; colors offset by the vertex
    count) or None.  Independent of the system-side solver."""
    flat = _flatten_expansion(E)
    P = Fstar.graph
    if flat.n > FIND_VERTEX_CAP + ENUMERATE_VERTEX_CAP:
        raise CapacityError("expansion instance too large for exact search")
    if flat.n % P.n != 0:
        raise ParameterError("expansion size is not a multiple of the pattern size")

    nodes = 0

    def go(uncovered: frozenset) -> Optional[list]:
        nonlocal nodes
        if not uncovered:
            return []
        anchor = min(uncovered)
        seen: set[frozenset] = set()
        for pv in range(P.n):
            for phi in _injections_with_pin(P, flat, uncovered, pv, anchor):
                image = frozenset(tuple(sorted(phi[u] for u in e)) for e in P.edges)
                if image in seen:
                    continue
                seen.add(image)
                nodes += 1
                if nodes > node_budget:
                    raise CapacityError(f"search exceeded node budget of {node_budget}")
                verts = frozenset(phi.values())
                rest = go(uncovered - verts)
                if rest is not None:
                    return [(tuple(sorted(verts)), image)] + rest
        return None

    return go(frozenset(range(flat.n)))


def _injections_with_pin(P: Hypergraph, host: Hypergraph, allowed: frozenset, pin_v: int, pin_w: int):
    order = _search_order(P)
    order = [pin_v] + [v for v in order if v != pin_v]
    ready: list[list[tuple[int, ...]]] = [[] for _ in order]
    pos = {v: i for i, v in enumerate(order)}
    for e in P.edges:
        ready[max(pos[v] for v in e)].append(e)
    pool = sorted(allowed)
    phi: dict[int, int] = {}
    used: set[int] = set()

    def place(i: int):
        if i == len(order):
            yield dict(phi)
            return
        v = order[i]
        candidates = (pin_w,) if i == 0 else pool
        for w in candidates:
            if w in used or (i > 0 and w == pin_w):
                continue
            phi[v] = w
            used.add(w)
            if all(host.has_edge(phi[u] for u in e) for e in ready[i]):
                yield from place(i + 1)
            used.discard(w)
            del phi[v]

    yield from place(0)


def expansion_factor_exists(E: ColoredExpansionGraph, Fstar: ExpandedPattern) -> bool:
    return find_factor_in_expansion(E, Fstar) is not None


# ---------------------------------------------------------------------------
# Composition.
# ---------------------------------------------------------------------------


def compose_global_embedding(
    S: HypergraphSystem,
    F: Pattern,
    pieces: Sequence[tuple[Embedding, Sequence[int], Sequence[int]]],
) -> Embedding:
    """Glue per-cluster embeddings into one global embedding.

    Each piece is (embedding, vertex_ids, color_ids) where the id arrays
    translate the cluster's local ids to global ones.  Overlapping images
    raise an integrity error; the result is re-validated from scratch.
    """
    vertex_map: list[int] = []
    color_map: list[int] = []
    for emb, vertex_ids, color_ids in pieces:
        vertex_map.extend(vertex_ids[v] for v in emb.vertex_map)
        color_map.extend(color_ids[c] for c in emb.color_map)
    if len(set(vertex_map)) != len(vertex_map) or len(set(color_map)) != len(color_map):
        raise AssertionError("cluster images overlap; partition is inconsistent")
    total = Embedding(
        n=len(vertex_map) // F.s,
        s=F.s,
        t=F.t,
        vertex_map=tuple(vertex_map),
        color_map=tuple(color_map),
    )
    validate_embedding(S, F, total)
    return total
