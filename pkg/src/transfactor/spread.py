"""Empirical certification of spread and vertex-spread properties.

A sampler is audited against a target q: for each set size r the audit
estimates the worst-case probability that a fixed r-set of edges (or r pins
of an embedding) appears in a sample, and reports the ratio against q^r.
Ratios above 1 flag the sampler.  Candidate sets are enumerated exhaustively
when the host is small and otherwise grown adversarially from the most
frequent single events, so a concentrated sampler cannot hide.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import ParameterError
from .rng import RngSpec

EXHAUSTIVE_EDGE_LIMIT = 20
GREEDY_POOL = 12


@dataclass(frozen=True)
class SpreadRow:
    set_size: int
    max_probability: float
    bound: float
    ratio: float
    witness: tuple
    candidates: int


@dataclass(frozen=True)
class SpreadReport:
    q_target: float
    trials: int
    rows: tuple[SpreadRow, ...]

    def row(self, r: int) -> SpreadRow:
        for row in self.rows:
            if row.set_size == r:
                return row
        raise KeyError(r)

    @property
    def flagged(self) -> bool:
        return any(row.ratio > 1.0 for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "q": self.q_target,
            "trials": self.trials,
            "flagged": self.flagged,
            "by_set_size": {
                str(row.set_size): {
                    "max_probability": row.max_probability,
                    "bound": row.bound,
                    "ratio": row.ratio,
                    "witness": [list(w) if isinstance(w, tuple) else w for w in row.witness],
                    "candidates": row.candidates,
                }
                for row in self.rows
            },
        }


def _check_audit_params(trials: int, max_size: int):
    if trials < 1000:
        raise ParameterError("audits need at least 1000 trials")
    if not 1 <= max_size <= 3:
        raise ParameterError("set sizes above 3 are not audited")


def _containment_counts(
    samples: Iterable[frozenset],
    candidates: list[tuple],
) -> Counter:
    counts: Counter = Counter()
    for sample in samples:
        for cand in candidates:
            if all(x in sample for x in cand):
                counts[cand] += 1
    return counts


def spread_audit(
    sampler: Callable[[RngSpec], Iterable[Hashable]],
    host_edges: Sequence[Hashable],
    q: float,
    max_set_size: int,
    trials: int,
    rng: RngSpec,
) -> SpreadReport:
    """Estimate max_S P[sample contains S] for |S| = 1..max_set_size."""
    _check_audit_params(trials, max_set_size)
    singles: Counter = Counter()
    samples: list[frozenset] = []
    for i in range(trials):
        sample = frozenset(sampler(rng.split(i)))
        samples.append(sample)
        singles.update(sample)

    rows = []
    top_edge, top_count = singles.most_common(1)[0] if singles else (None, 0)
    rows.append(
        SpreadRow(
            set_size=1,
            max_probability=top_count / trials,
            bound=q,
            ratio=(top_count / trials) / q if q > 0 else float("inf"),
            witness=(top_edge,),
            candidates=len(host_edges),
        )
    )
    for r in range(2, max_set_size + 1):
        if len(host_edges) <= EXHAUSTIVE_EDGE_LIMIT:
            pool = list(host_edges)
        else:
            pool = [e for e, _ in singles.most_common(GREEDY_POOL)]
        candidates = list(combinations(pool, r))
        counts = _containment_counts(samples, candidates)
        best, best_count = (candidates[0], 0) if candidates else ((), 0)
        if counts:
            best, best_count = counts.most_common(1)[0]
        bound = q**r
        rows.append(
            SpreadRow(
                set_size=r,
                max_probability=best_count / trials,
                bound=bound,
                ratio=(best_count / trials) / bound if bound > 0 else float("inf"),
                witness=tuple(best),
                candidates=len(candidates),
            )
        )
    return SpreadReport(q_target=q, trials=trials, rows=tuple(rows))


def vertex_spread_audit(
    embedding_sampler: Callable[[RngSpec], Mapping[Hashable, Hashable]],
    q: float,
    max_seq_len: int,
    trials: int,
    rng: RngSpec,
) -> SpreadReport:
    """Estimate max over pin sequences ((x_1,y_1),..,(x_r,y_r)) of
    P[phi(x_i) = y_i for all i], for r = 1..max_seq_len.

    Pins are pairs of distinct sources and distinct targets.
    """
    _check_audit_params(trials, max_seq_len)
    pins: Counter = Counter()
    samples: list[dict] = []
    for i in range(trials):
        phi = dict(embedding_sampler(rng.split(i)))
        samples.append(phi)
        pins.update(phi.items())

    rows = []
    top_pin, top_count = pins.most_common(1)[0]
    rows.append(
        SpreadRow(
            set_size=1,
            max_probability=top_count / trials,
            bound=q,
            ratio=(top_count / trials) / q if q > 0 else float("inf"),
            witness=(top_pin,),
            candidates=len(pins),
        )
    )
    for r in range(2, max_seq_len + 1):
        pool = [p for p, _ in pins.most_common(GREEDY_POOL)]
        candidates = [
            cand
            for cand in combinations(pool, r)
            if len({x for x, _ in cand}) == r and len({y for _, y in cand}) == r
        ]
        counts: Counter = Counter()
        for phi in samples:
            for cand in candidates:
                if all(phi.get(x) == y for x, y in cand):
                    counts[cand] += 1
        best, best_count = (candidates[0], 0) if candidates else ((), 0)
        if counts:
            best, best_count = counts.most_common(1)[0]
        bound = q**r
        rows.append(
            SpreadRow(
                set_size=r,
                max_probability=best_count / trials,
                bound=bound,
                ratio=(best_count / trials) / bound if bound > 0 else float("inf"),
                witness=tuple(best),
                candidates=len(candidates),
            )
        )
    return SpreadReport(q_target=q, trials=trials, rows=tuple(rows))
