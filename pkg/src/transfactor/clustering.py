"""Random clustering with spread redistribution.

Both pipelines follow the same arc: split into random constant-size raw
clusters via uniform permutations, detect clusters that failed to inherit
the degree condition, then hand the defective clusters' material back out
to the good clusters through perfect matchings in auxiliary hosts, so that
every final cluster carries a degree certificate.  The system pipeline uses
one (s+t+1)-partite auxiliary hypergraph solved by chained gluing; the
bipartite pipeline uses two rounds of bipartite matchings.

Desk-scale caveat: the concentration bounds behind "few clusters go bad"
need cluster sizes far beyond what exact per-cluster solvers can digest, so
attempts can fail here.  Failures are retried up to a cap and counted in
the audit; every partition actually returned satisfies its certificates
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .bipartite import BipartiteGraph, uniform_pm_dense
from .errors import NoPerfectMatchingError, ParameterError, PipelineFailureError
from .gluing import pikhurko_glue
from .hypergraph import Hypergraph, HypergraphSystem, system_min_degree, vertex_mask
from .partite import PartiteHypergraph
from .rng import RngSpec

DEFAULT_RETRY_CAP = 50
AUGMENT_SAMPLES = 500


# ---------------------------------------------------------------------------
# Plans and result containers.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemClusterPlan:
    """Block arithmetic for the system pipeline."""

    s: int
    t: int
    n: int
    C: int
    r1: int
    r2: int
    m_prime: int
    m: int

    @staticmethod
    def create(s: int, t: int, n: int, C: int) -> "SystemClusterPlan":
        if C < 2:
            raise ParameterError("cluster parameter C must be at least 2")
        unit_v = s * C * (C - 1)
        unit_c = t * C * (C - 1)
        r1 = unit_v + (s * n) % unit_v
        r2 = unit_c + (t * n) % unit_c
        if s * n < r1:
            raise ParameterError(f"need n >= C(C-1), got n={n}, C={C}")
        m_prime = (s * n - r1) // (s * (C - 1)) + 1
        if m_prime < 3:
            raise ParameterError(f"need at least 3 raw clusters, got m'={m_prime}")
        assert t * r1 == s * r2
        good = (m_prime - 1) * (C - 1) // C
        assert good * C == (m_prime - 1) * (C - 1)
        return SystemClusterPlan(s, t, n, C, r1, r2, m_prime, good + 1)

    def vertex_blocks(self) -> list[tuple[int, int]]:
        unit = self.s * (self.C - 1)
        blocks = [(0, self.r1)]
        start = self.r1
        while start < self.s * self.n:
            blocks.append((start, start + unit))
            start += unit
        return blocks

    def color_blocks(self) -> list[tuple[int, int]]:
        unit = self.t * (self.C - 1)
        blocks = [(0, self.r2)]
        start = self.r2
        while start < self.t * self.n:
            blocks.append((start, start + unit))
            start += unit
        return blocks


@dataclass(frozen=True)
class ClusterCertificate:
    index: int
    size: int
    min_degree: int
    threshold: float

    @property
    def passes(self) -> bool:
        return self.min_degree >= self.threshold


@dataclass(frozen=True)
class ClusterPartition:
    vertex_clusters: tuple[tuple[int, ...], ...]
    color_clusters: tuple[tuple[int, ...], ...]
    certificates: tuple[ClusterCertificate, ...]

    @property
    def m(self) -> int:
        return len(self.vertex_clusters)

    def to_dict(self) -> dict:
        return {
            "U": [list(u) for u in self.vertex_clusters],
            "W": [list(w) for w in self.color_clusters],
            "certificates": [
                {
                    "index": c.index,
                    "size": c.size,
                    "min_degree": c.min_degree,
                    "threshold": c.threshold,
                    "passes": c.passes,
                }
                for c in self.certificates
            ],
        }


@dataclass(frozen=True)
class BadClusterFamily:
    """Raw clusters earmarked for redistribution, with the reason each one
    was included.  Padded with good clusters to the exact size the
    redistribution needs."""

    member_indices: tuple[int, ...]
    reasons: dict[int, str]

    def __len__(self) -> int:
        return len(self.member_indices)


# ---------------------------------------------------------------------------
# Degree checks.
# ---------------------------------------------------------------------------


def degree_inheritance_check(
    S: HypergraphSystem,
    cluster_vertices: Sequence[int],
    cluster_colors: Sequence[int],
    augment_vertices: Sequence[int] = (),
    augment_colors: Sequence[int] = (),
    *,
    delta: float,
    alpha: float,
    d: int,
    window_size: Optional[int] = None,
) -> bool:
    """Exact evaluation of the inherited degree condition on an augmented
    cluster.  An empty color set passes vacuously (min over nothing)."""
    window = set(cluster_vertices) | set(augment_vertices)
    colors = set(cluster_colors) | set(augment_colors)
    if not colors:
        return True
    size = window_size if window_size is not None else len(window)
    threshold = (delta + alpha / 2) * math.comb(size - d, S.k - d)
    mask = vertex_mask(window)
    wlist = list(window)
    return all(
        S.colors[c].min_degree_within(mask, d, wlist) >= threshold for c in colors
    )


def _cluster_min_degree(S: HypergraphSystem, verts: Sequence[int], colors: Sequence[int], d: int) -> int:
    mask = vertex_mask(verts)
    vlist = list(verts)
    return min(
        (S.colors[c].min_degree_within(mask, d, vlist) for c in colors),
        default=10**9,
    )


def cluster_subsystem(
    S: HypergraphSystem, vertices: Sequence[int], colors: Sequence[int]
) -> tuple[HypergraphSystem, tuple[int, ...], tuple[int, ...]]:
    """Induced sub-system on (vertices, colors) with local dense ids.

    Returns (subsystem, vertex_ids, color_ids): position -> global id.
    """
    vertex_ids = tuple(sorted(vertices))
    color_ids = tuple(sorted(colors))
    if len(vertex_ids) % S.s or len(color_ids) % S.t:
        raise ParameterError("cluster sizes are not multiples of (s, t)")
    n_local = len(vertex_ids) // S.s
    if len(color_ids) != S.t * n_local:
        raise ParameterError("cluster vertex and color counts disagree")
    relabel = {v: i for i, v in enumerate(vertex_ids)}
    vset = set(vertex_ids)
    local_colors = []
    for c in color_ids:
        edges = [
            tuple(sorted(relabel[v] for v in e))
            for e in S.colors[c].edges
            if all(v in vset for v in e)
        ]
        local_colors.append(Hypergraph.from_edges(S.k, len(vertex_ids), edges))
    sub = HypergraphSystem(S.k, S.s, S.t, n_local, tuple(local_colors))
    return sub, vertex_ids, color_ids


# ---------------------------------------------------------------------------
# System pipeline.
# ---------------------------------------------------------------------------


def sample_system_clusters(
    S: HypergraphSystem,
    C: int,
    delta: float,
    alpha: float,
    d: int,
    rng: RngSpec,
    retry_cap: int = DEFAULT_RETRY_CAP,
    augment_samples: int = AUGMENT_SAMPLES,
) -> tuple[ClusterPartition, BadClusterFamily, dict]:
    """Sample a certified cluster partition of the system.

    Executes the full pipeline: random permutations, defect detection,
    auxiliary (s+t+1)-partite matching via gluing, and redistribution.
    Retries with fresh permutations on the random failure modes.
    """
    plan = SystemClusterPlan.create(S.s, S.t, S.n, C)
    hypothesis = (delta + alpha) * math.comb(S.vertex_count - d, S.k - d)
    if system_min_degree(S, d) < hypothesis:
        raise ParameterError(
            f"system min {d}-degree below (delta+alpha) threshold {hypothesis:.2f}"
        )

    audit: dict = {"attempts": 0, "failures": []}
    for attempt in range(retry_cap + 1):
        audit["attempts"] = attempt + 1
        outcome = _system_attempt(S, plan, delta, alpha, d,
                                  rng.split(attempt), augment_samples, audit)
        if outcome is not None:
            partition, family = outcome
            _assert_system_partition(S, plan, partition, delta, alpha, d)
            return partition, family, audit
    raise PipelineFailureError(
        f"clustering failed after {retry_cap + 1} attempts", audit
    )


def _system_attempt(S, plan, delta, alpha, d, rng, augment_samples, audit):
    gen = rng.generator()
    sn, tn = S.vertex_count, S.color_count
    vshuf = list(range(sn))
    cshuf = list(range(tn))
    gen.shuffle(vshuf)
    gen.shuffle(cshuf)
    raw_v = [tuple(sorted(vshuf[a:b])) for a, b in plan.vertex_blocks()]
    raw_c = [tuple(sorted(cshuf[a:b])) for a, b in plan.color_blocks()]
    m_prime, m = plan.m_prime, plan.m
    threshold_final = (delta + alpha / 2) * math.comb(plan.s * plan.C - d, S.k - d)

    # first cluster keeps its raw material and must pass on its own
    first_deg = _cluster_min_degree(S, raw_v[0], raw_c[0], d)
    first_threshold = (delta + alpha / 2) * math.comb(plan.r1 - d, S.k - d)
    if first_deg < first_threshold:
        audit["failures"].append("first_cluster_degree")
        return None

    # defect detection on raw clusters 2..m'
    bad_reasons: dict[int, str] = {}
    frac_threshold = math.exp(-plan.s * plan.C * alpha**2 / 500)
    hoeffding = math.sqrt(math.log(40.0) / (2 * augment_samples))
    estimates = []
    for i in range(1, m_prime):
        deg = _cluster_min_degree(S, raw_v[i], raw_c[i], d)
        low = (delta + alpha / 2) * math.comb(len(raw_v[i]) - d, S.k - d)
        if deg < low:
            bad_reasons[i] = "low_degree"
            continue
        bad_frac = _estimate_bad_augments(
            S, raw_v[i], raw_c[i], delta, alpha, d, plan,
            rng.split(1000 + i), augment_samples,
        )
        estimates.append({"cluster": i, "bad_fraction": bad_frac, "margin": hoeffding,
                          "threshold": frac_threshold})
        if bad_frac >= frac_threshold:
            bad_reasons[i] = "many_bad_augments"
    audit["augment_estimates"] = estimates

    need = m_prime - m
    genuinely_bad = sorted(bad_reasons)
    if len(genuinely_bad) > need:
        audit["failures"].append(f"too_many_bad:{len(genuinely_bad)}>{need}")
        return None
    good_pool = [i for i in range(1, m_prime) if i not in bad_reasons]
    gen.shuffle(good_pool)
    padding = sorted(good_pool[: need - len(genuinely_bad)])
    for i in padding:
        bad_reasons[i] = "padding"
    family = BadClusterFamily(
        member_indices=tuple(sorted(bad_reasons)), reasons=dict(bad_reasons)
    )
    good = [i for i in range(1, m_prime) if i not in bad_reasons]
    assert len(good) == m - 1 and len(family) == need

    # split the redistributed material into balanced pools
    vpool = [v for i in family.member_indices for v in raw_v[i]]
    cpool = [c for i in family.member_indices for c in raw_c[i]]
    gen.shuffle(vpool)
    gen.shuffle(cpool)
    M = m - 1
    vparts = [sorted(vpool[j * M : (j + 1) * M]) for j in range(plan.s)]
    cparts = [sorted(cpool[j * M : (j + 1) * M]) for j in range(plan.t)]
    assert all(len(p) == M for p in vparts + cparts)

    aux = _build_auxiliary_host(
        S, plan, [(raw_v[i], raw_c[i]) for i in good], vparts, cparts,
        delta, alpha, d, threshold_final,
    )
    try:
        matching, glue_diag = pikhurko_glue(aux, [0], eps=alpha, rng=rng.split(2))
    except (ParameterError, PipelineFailureError) as exc:
        audit["failures"].append(f"auxiliary_matching:{exc}")
        return None
    audit["glue"] = glue_diag.to_dict()

    final_v = [raw_v[0]]
    final_c = [raw_c[0]]
    by_cluster = {edge[0]: edge for edge in matching}
    for pos, i in enumerate(good):
        edge = by_cluster[("cluster", pos)]
        extra_v = [v for kind, v in edge[1 : 1 + plan.s]]
        extra_c = [c for kind, c in edge[1 + plan.s :]]
        final_v.append(tuple(sorted(raw_v[i] + tuple(extra_v))))
        final_c.append(tuple(sorted(raw_c[i] + tuple(extra_c))))

    certs = []
    for idx, (verts, cols) in enumerate(zip(final_v, final_c)):
        deg = _cluster_min_degree(S, verts, cols, d)
        thr = (delta + alpha / 2) * math.comb(len(verts) - d, S.k - d)
        certs.append(ClusterCertificate(index=idx, size=len(verts), min_degree=deg, threshold=thr))
    partition = ClusterPartition(tuple(final_v), tuple(final_c), tuple(certs))
    return partition, family


def _estimate_bad_augments(S, verts, cols, delta, alpha, d, plan, rng, samples):
    gen = rng.generator()
    sn, tn = S.vertex_count, S.color_count
    bad = 0
    for _ in range(samples):
        aug_v = gen.sample(range(sn), plan.s)
        aug_c = gen.sample(range(tn), plan.t)
        ok = degree_inheritance_check(
            S, verts, cols, aug_v, aug_c,
            delta=delta, alpha=alpha, d=d, window_size=plan.s * plan.C,
        )
        if not ok:
            bad += 1
    return bad / samples


def _build_auxiliary_host(S, plan, good_clusters, vparts, cparts, delta, alpha, d, threshold):
    """Edge (cluster, v_1..v_s, c_1..c_t) present iff the augmented cluster
    keeps the degree condition.  Built from per-color pass flags so each
    exact degree evaluation happens once."""
    G = len(good_clusters)
    M = len(vparts[0])
    s, t, k = plan.s, plan.t, S.k
    s_combos = list(product(*[range(M)] * s))
    pool_colors = [c for part in cparts for c in part]

    ok_base = np.zeros((G, len(s_combos)), dtype=bool)
    ok_color = np.zeros((G, len(s_combos), len(pool_colors)), dtype=bool)
    for gi, (verts, cols) in enumerate(good_clusters):
        base_mask = vertex_mask(verts)
        for si, combo in enumerate(s_combos):
            aug = [vparts[j][combo[j]] for j in range(s)]
            window = list(set(verts) | set(aug))
            mask = base_mask | vertex_mask(aug)
            base_ok = all(
                S.colors[c].min_degree_within(mask, d, window) >= threshold for c in cols
            )
            ok_base[gi, si] = base_ok
            if base_ok:
                for ci, c in enumerate(pool_colors):
                    ok_color[gi, si, ci] = (
                        S.colors[c].min_degree_within(mask, d, window) >= threshold
                    )

    member = ok_base.reshape((G,) + (M,) * s + (1,) * t)
    for j in range(t):
        block = ok_color[:, :, j * M : (j + 1) * M]
        shape = (G,) + (M,) * s + (1,) * j + (M,) + (1,) * (t - j - 1)
        member = member & block.reshape(shape)

    parts: list[list] = [[("cluster", i) for i in range(G)]]
    parts.extend([("v", v) for v in vparts[j]] for j in range(s))
    parts.extend([("c", c) for c in cparts[j]] for j in range(t))
    return PartiteHypergraph(parts, member)


def _assert_system_partition(S, plan, partition, delta, alpha, d):
    all_v = [v for u in partition.vertex_clusters for v in u]
    all_c = [c for w in partition.color_clusters for c in w]
    assert sorted(all_v) == list(range(S.vertex_count)), "vertex partition broken"
    assert sorted(all_c) == list(range(S.color_count)), "color partition broken"
    assert len(partition.vertex_clusters[0]) == plan.r1
    assert len(partition.color_clusters[0]) == plan.r2
    for u in partition.vertex_clusters[1:]:
        assert len(u) == plan.s * plan.C
    for w in partition.color_clusters[1:]:
        assert len(w) == plan.t * plan.C
    for cert in partition.certificates:
        assert cert.passes, f"certificate failed on cluster {cert.index}"


# ---------------------------------------------------------------------------
# Bipartite pipeline.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartitePartition:
    """Clusters of a balanced bipartite host; vertices are ('L', i) / ('R', j)."""

    clusters: tuple[tuple[tuple[str, int], ...], ...]
    certificates: tuple[ClusterCertificate, ...]

    @property
    def m(self) -> int:
        return len(self.clusters)


def _bip_degree_sum(A: np.ndarray, left: Sequence[int], right: Sequence[int]) -> float:
    if not left or not right:
        return 0.0
    sub = A[np.ix_(sorted(left), sorted(right))]
    return float(sub.sum(axis=1).min() + sub.sum(axis=0).min())


def sample_bipartite_clusters(
    G: BipartiteGraph,
    C: int,
    eps: float,
    rng: RngSpec,
    retry_cap: int = DEFAULT_RETRY_CAP,
) -> tuple[BipartitePartition, dict]:
    """Two-round redistribution for balanced bipartite hosts."""
    if not G.balanced:
        raise ParameterError("host must be balanced")
    n = G.left_size
    if C < 2:
        raise ParameterError("C must be at least 2")
    dl, dr = G.min_degrees()
    if dl + dr < (1 + eps) * n:
        raise ParameterError("degree-sum hypothesis fails on the host")
    unit = C * (C - 1)
    r = unit + n % unit
    if n < r:
        raise ParameterError(f"need n >= C(C-1), got n={n}")
    m_prime = (n - r) // (C - 1) + 1
    if m_prime < 3:
        raise ParameterError(f"need at least 3 raw clusters, got m'={m_prime}")
    m_minus_1 = (m_prime - 1) * (C - 1) // C
    assert m_minus_1 * C == (m_prime - 1) * (C - 1)

    A = G.biadjacency()
    audit: dict = {"attempts": 0, "failures": []}
    for attempt in range(retry_cap + 1):
        audit["attempts"] = attempt + 1
        result = _bipartite_attempt(
            G, A, n, C, eps, r, m_prime, m_minus_1, rng.split(attempt), audit
        )
        if result is not None:
            return result, audit
    raise PipelineFailureError(
        f"bipartite clustering failed after {retry_cap + 1} attempts", audit
    )


def _bipartite_attempt(G, A, n, C, eps, r, m_prime, m_minus_1, rng, audit):
    gen = rng.generator()
    lshuf = list(range(n))
    rshuf = list(range(n))
    gen.shuffle(lshuf)
    gen.shuffle(rshuf)
    blocks = [(0, r)]
    start = r
    while start < n:
        blocks.append((start, start + C - 1))
        start += C - 1
    lefts = [sorted(lshuf[a:b]) for a, b in blocks]
    rights = [sorted(rshuf[a:b]) for a, b in blocks]

    if _bip_degree_sum(A, lefts[0], rights[0]) < (1 + eps / 2) * r:
        audit["failures"].append("first_cluster_degree")
        return None

    bad_t_threshold = 2 * math.exp(-C * eps**2 / 16) * n * n
    bad_reasons: dict[int, str] = {}
    for i in range(1, m_prime):
        if _bip_degree_sum(A, lefts[i], rights[i]) < (1 + eps / 2) * (C - 1):
            bad_reasons[i] = "low_degree"
            continue
        bad_t = _count_bad_augments_bip(A, lefts[i], rights[i], n, C, eps)
        if bad_t >= bad_t_threshold:
            bad_reasons[i] = "many_bad_augments"

    need = m_prime - m_minus_1 - 1
    if len(bad_reasons) > need:
        audit["failures"].append(f"too_many_bad:{len(bad_reasons)}>{need}")
        return None
    good_pool = [i for i in range(1, m_prime) if i not in bad_reasons]
    gen.shuffle(good_pool)
    for i in sorted(good_pool[: need - len(bad_reasons)]):
        bad_reasons[i] = "padding"
    good = [i for i in range(1, m_prime) if i not in bad_reasons]
    assert len(good) == m_minus_1

    pool_left = sorted(v for i in bad_reasons for v in lefts[i])
    pool_right = sorted(v for i in bad_reasons for v in rights[i])
    assert len(pool_left) == m_minus_1 and len(pool_right) == m_minus_1

    # round 1: place one left vertex into each good cluster
    good_count_needed = (1 - 2 * math.exp(-C * eps**2 / 16)) * n
    h1 = set()
    for ai, v1 in enumerate(pool_left):
        for bi, i in enumerate(good):
            if _bip_degree_sum(A, lefts[i] + [v1], rights[i]) < (1 + eps / 3) * C:
                continue
            extendable = sum(
                1
                for v2 in range(n)
                if _bip_degree_sum(A, lefts[i] + [v1], rights[i] + [v2])
                >= (1 + eps / 3) * C
            )
            if extendable >= good_count_needed:
                h1.add((ai, bi))
    try:
        m1 = uniform_pm_dense(
            BipartiteGraph.from_edges(m_minus_1, m_minus_1, h1), rng.split(1)
        )
    except NoPerfectMatchingError:
        audit["failures"].append("round1_no_matching")
        return None
    placed1 = {bi: pool_left[ai] for ai, bi in m1.pairs}

    # round 2: one right vertex into each once-augmented cluster
    h2 = set()
    for ai, v2 in enumerate(pool_right):
        for bi, i in enumerate(good):
            if (
                _bip_degree_sum(A, lefts[i] + [placed1[bi]], rights[i] + [v2])
                >= (1 + eps / 3) * C
            ):
                h2.add((ai, bi))
    try:
        m2 = uniform_pm_dense(
            BipartiteGraph.from_edges(m_minus_1, m_minus_1, h2), rng.split(2)
        )
    except NoPerfectMatchingError:
        audit["failures"].append("round2_no_matching")
        return None
    placed2 = {bi: pool_right[ai] for ai, bi in m2.pairs}

    clusters = [
        tuple(sorted(("L", v) for v in lefts[0]) + sorted(("R", v) for v in rights[0]))
    ]
    certs = []
    deg0 = _bip_degree_sum(A, lefts[0], rights[0])
    certs.append(
        ClusterCertificate(index=0, size=2 * r, min_degree=int(deg0), threshold=(1 + eps / 3) * r)
    )
    for bi, i in enumerate(good):
        l_full = lefts[i] + [placed1[bi]]
        r_full = rights[i] + [placed2[bi]]
        clusters.append(
            tuple(sorted(("L", v) for v in l_full) + sorted(("R", v) for v in r_full))
        )
        deg = _bip_degree_sum(A, l_full, r_full)
        certs.append(
            ClusterCertificate(
                index=bi + 1, size=2 * C, min_degree=int(deg), threshold=(1 + eps / 3) * C
            )
        )
    partition = BipartitePartition(tuple(clusters), tuple(certs))
    _assert_bipartite_partition(partition, n, r, C)
    if not all(c.passes for c in partition.certificates):
        audit["failures"].append("certificate_failure")
        return None
    return partition


def _count_bad_augments_bip(A, left, right, n, C, eps) -> int:
    bar = (1 + eps / 2) * C
    bad = 0
    for v1 in range(n):
        for v2 in range(n):
            if _bip_degree_sum(A, list(left) + [v1], list(right) + [v2]) < bar:
                bad += 1
    for v1 in range(n):
        if _bip_degree_sum(A, list(left) + [v1], list(right)) < bar:
            bad += 1
    for v2 in range(n):
        if _bip_degree_sum(A, list(left), list(right) + [v2]) < bar:
            bad += 1
    return bad


def _assert_bipartite_partition(partition: BipartitePartition, n: int, r: int, C: int):
    seen_l, seen_r = set(), set()
    for idx, cluster in enumerate(partition.clusters):
        ls = [v for side, v in cluster if side == "L"]
        rs = [v for side, v in cluster if side == "R"]
        assert len(ls) == len(rs), "cluster sides unbalanced"
        expected = r if idx == 0 else C
        assert len(ls) == expected
        seen_l.update(ls)
        seen_r.update(rs)
    assert seen_l == set(range(n)) and seen_r == set(range(n))


# ---------------------------------------------------------------------------
# Pin audits for the clustering distribution.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocationSpreadReport:
    probability: float
    bound: float
    ratio: float
    trials: int
    pins: tuple

    def to_dict(self) -> dict:
        return {
            "probability": self.probability,
            "bound": self.bound,
            "ratio": self.ratio,
            "trials": self.trials,
            "pins": [list(p) for p in self.pins],
        }


def location_spread_audit(
    cluster_sampler,
    vertex_pins: Sequence[tuple[int, int]],
    color_pins: Sequence[tuple[int, int]],
    trials: int,
    rng: RngSpec,
    c_prime: float,
    n: int,
) -> LocationSpreadReport:
    """Estimate P[pinned vertices and colors land in their target clusters]
    against (c_prime / n)^(r + l)."""
    if len(vertex_pins) + len(color_pins) > 3:
        raise ParameterError("at most 3 pins are audited")
    hits = 0
    for i in range(trials):
        partition = cluster_sampler(rng.split(i))
        ok = all(
            v in partition.vertex_clusters[target] for v, target in vertex_pins
        ) and all(c in partition.color_clusters[target] for c, target in color_pins)
        if ok:
            hits += 1
    prob = hits / trials
    bound = (c_prime / n) ** (len(vertex_pins) + len(color_pins))
    return LocationSpreadReport(
        probability=prob,
        bound=bound,
        ratio=prob / bound if bound > 0 else float("inf"),
        trials=trials,
        pins=tuple([("v",) + p for p in vertex_pins] + [("c",) + p for p in color_pins]),
    )
