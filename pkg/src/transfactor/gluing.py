"""Perfect matchings in balanced k-partite k-graphs by chained gluing.

The reduction works under the cooperative degree condition
``delta_L * n^l + delta_comp * n^(k-l) >= (1+eps) * n^k``:

1. chain uniform random bipartite matchings through the parts indexed by L,
   turning them into n glued |L|-tuples, and likewise through the remaining
   parts (in reverse);
2. after each chain stage, accept the matching only if every slice count
   |M ∩ F_X| stays within lambda = sqrt(257*k*n*log n) of its mean |F_X|/n,
   resampling up to a retry cap;
3. finish with an exactly uniform perfect matching in the auxiliary
   bipartite graph whose sides are the two tuple families and whose edges
   are the host edges they span.

At desk scale lambda >= n makes step 2 vacuously true (both quantities lie
in [0, n]); the observed deviations are still computed and reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bipartite import BipartiteGraph, uniform_pm_dense
from .errors import NoPerfectMatchingError, ParameterError, PipelineFailureError
from .partite import PartiteHypergraph, partite_degree
from .rng import RngSpec


@dataclass
class GlueDiagnostics:
    part_size: int
    lam: float
    goodness_vacuous: bool
    stage_retries: list[int] = field(default_factory=list)
    stage_max_deviation: list[float] = field(default_factory=list)
    aux_left_min_degree: int = 0
    aux_right_min_degree: int = 0
    aux_degree_sum: int = 0
    aux_degree_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "part_size": self.part_size,
            "lambda": self.lam,
            "goodness_vacuous": self.goodness_vacuous,
            "stage_retries": list(self.stage_retries),
            "stage_max_deviation": [float(x) for x in self.stage_max_deviation],
            "aux_left_min_degree": self.aux_left_min_degree,
            "aux_right_min_degree": self.aux_right_min_degree,
            "aux_degree_sum": self.aux_degree_sum,
            "aux_degree_bound": self.aux_degree_bound,
        }


def _chain(
    member: np.ndarray,
    length: int,
    n: int,
    lam: float,
    rng: RngSpec,
    retry_cap: int,
    diag_retries: list[int],
    diag_devs: list[float],
) -> list[tuple[int, ...]]:
    """Glue the first ``length`` axes of ``member`` into n disjoint tuples.

    Chains uniform permutations between consecutive axes; tuples are index
    tuples into the axes.  Rejects a stage matching whose slice counts
    deviate from |F_X|/n by more than lam.
    """
    tuples = [(a,) for a in range(n)]
    for stage in range(1, length):
        coords = [np.array([tp[axis] for tp in tuples]) for axis in range(stage)]
        # G[j, b, X...] = 1 iff (tuple_j, b, X) is a host edge
        G = member[tuple(coords)]
        f_counts = G.sum(axis=(0, 1))  # |F_X| over all legal X
        lasts = np.array([tp[-1] for tp in tuples])
        gen = rng.split(stage).generator()
        retries = 0
        while True:
            perm = list(range(n))
            gen.shuffle(perm)
            perm_arr = np.array(perm)
            # tuple j pairs with perm[last coordinate of tuple j]
            matched = G[np.arange(n), perm_arr[lasts]].sum(axis=0)  # |M ∩ F_X|
            deviation = float(np.abs(matched - f_counts / n).max()) if f_counts.size else 0.0
            if deviation <= lam:
                break
            retries += 1
            if retries > retry_cap:
                raise PipelineFailureError(
                    f"chain stage {stage} exhausted {retry_cap} goodness retries",
                    {"stage": stage, "deviation": deviation, "lambda": lam},
                )
        diag_retries.append(retries)
        diag_devs.append(deviation)
        new_tuples = [tp + (perm[tp[-1]],) for tp in tuples]
        # gluing extends tuples in place: restricting to earlier axes gives back T_i
        assert {tp[:-1] for tp in new_tuples} == set(tuples)
        tuples = new_tuples
    return tuples


def pikhurko_glue(
    P: PartiteHypergraph,
    L: Sequence[int],
    eps: float,
    rng: RngSpec,
    retry_cap: int = 100,
) -> tuple[list[tuple], GlueDiagnostics]:
    """Perfect matching of a balanced k-partite k-graph via chained gluing.

    Returns the matching as a list of edges (original vertex ids, one per
    part, in part order) plus stage diagnostics.
    """
    k = P.k
    L = sorted(set(L))
    if not L or len(L) >= k or any(i < 0 or i >= k for i in L):
        raise ParameterError("L must be a nonempty proper subset of the part indices")
    sizes = set(P.part_sizes)
    if len(sizes) != 1:
        raise ParameterError("gluing requires equal part sizes")
    n = sizes.pop()
    ell = len(L)
    comp = [i for i in range(k) if i not in L]

    d_L = partite_degree(P, L)
    d_comp = partite_degree(P, comp)
    if d_L * n**ell + d_comp * n ** (k - ell) < (1 + eps) * n**k:
        raise ParameterError(
            f"degree precondition fails: {d_L}*n^{ell} + {d_comp}*n^{k - ell} "
            f"< (1+{eps})*n^{k}"
        )

    lam = math.sqrt(257 * k * n * max(math.log(n), 1e-12)) if n > 1 else float("inf")
    diag = GlueDiagnostics(part_size=n, lam=lam, goodness_vacuous=lam >= n)

    order = L + comp
    member = np.transpose(P.membership, axes=order)

    fwd = _chain(member, ell, n, lam, rng.split(1), retry_cap,
                 diag.stage_retries, diag.stage_max_deviation)
    member_rev = np.transpose(member, axes=tuple(range(k - 1, -1, -1)))
    bwd = _chain(member_rev, k - ell, n, lam, rng.split(2), retry_cap,
                 diag.stage_retries, diag.stage_max_deviation)

    # auxiliary bipartite host: forward tuples vs (reversed) backward tuples
    left_idx = np.array([list(tp) for tp in fwd])  # (n, ell)
    right_idx = np.array([list(tp[::-1]) for tp in bwd])  # (n, k-ell)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        picker = tuple(left_idx[i]) + tuple(right_idx.T)
        adj[i] = member[picker]
    edges = {(int(a), int(b)) for a, b in zip(*np.nonzero(adj))}
    aux = BipartiteGraph.from_edges(n, n, edges)
    dmin_left, dmin_right = aux.min_degrees() if edges else (0, 0)
    diag.aux_left_min_degree = dmin_left
    diag.aux_right_min_degree = dmin_right
    diag.aux_degree_sum = dmin_left + dmin_right
    diag.aux_degree_bound = (1 + eps / 2) * n

    try:
        final = uniform_pm_dense(aux, rng.split(3))
    except NoPerfectMatchingError as exc:
        raise PipelineFailureError(
            "auxiliary bipartite graph has no perfect matching", diag.to_dict()
        ) from exc

    matching = []
    inverse = [0] * k
    for pos, axis in enumerate(order):
        inverse[axis] = pos
    for a, b in final.pairs:
        combined = fwd[a] + tuple(right_idx[b])  # indices along `order` axes
        assert member[combined]
        edge = tuple(P.parts[axis][combined[inverse[axis]]] for axis in range(k))
        matching.append(edge)

    _validate_partite_matching(P, matching)
    return matching, diag


def _validate_partite_matching(P: PartiteHypergraph, matching: list[tuple]):
    for axis in range(P.k):
        seen = {e[axis] for e in matching}
        if len(seen) != len(matching) or seen != set(P.parts[axis]):
            raise AssertionError(f"part {axis} is not covered exactly once")
    for e in matching:
        if not P.has_edge(e):
            raise AssertionError(f"{e} is not a host edge")
