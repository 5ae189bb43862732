"""k-partite k-graphs backed by a dense boolean membership tensor.

Parts are lists of arbitrary hashable vertex ids; positions inside a part
index the tensor axes.  Dense storage keeps legal-tuple queries and degree
functionals as plain numpy reductions, which is what the gluing and
clustering pipelines lean on.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import ParameterError


class PartiteHypergraph:
    """Host with parts V_1..V_k; every edge takes one vertex per part."""

    def __init__(self, parts: Sequence[Sequence[Hashable]], membership: np.ndarray):
        self.parts = [list(p) for p in parts]
        self.k = len(self.parts)
        if self.k < 2:
            raise ParameterError("need at least 2 parts")
        seen: set[Hashable] = set()
        for p in self.parts:
            if not p:
                raise ParameterError("empty part")
            for v in p:
                if v in seen:
                    raise ParameterError(f"vertex {v!r} appears in two parts")
                seen.add(v)
        shape = tuple(len(p) for p in self.parts)
        if membership.shape != shape:
            raise ParameterError(f"membership tensor shape {membership.shape} != {shape}")
        self.membership = membership.astype(bool)
        self._index = [{v: i for i, v in enumerate(p)} for p in self.parts]

    @staticmethod
    def from_edges(
        parts: Sequence[Sequence[Hashable]], edges: Iterable[Sequence[Hashable]]
    ) -> "PartiteHypergraph":
        shape = tuple(len(p) for p in parts)
        member = np.zeros(shape, dtype=bool)
        index = [{v: i for i, v in enumerate(p)} for p in parts]
        for e in edges:
            if len(e) != len(parts):
                raise ParameterError(f"edge {e!r} does not span all parts")
            idx = tuple(index[axis][v] for axis, v in enumerate(e))
            member[idx] = True
        return PartiteHypergraph(parts, member)

    @staticmethod
    def complete(parts: Sequence[Sequence[Hashable]]) -> "PartiteHypergraph":
        shape = tuple(len(p) for p in parts)
        return PartiteHypergraph(parts, np.ones(shape, dtype=bool))

    @property
    def part_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @property
    def edge_count(self) -> int:
        return int(self.membership.sum())

    def has_edge(self, edge: Sequence[Hashable]) -> bool:
        idx = tuple(self._index[axis][v] for axis, v in enumerate(edge))
        return bool(self.membership[idx])

    def edges(self) -> list[tuple[Hashable, ...]]:
        out = []
        for idx in zip(*np.nonzero(self.membership)):
            out.append(tuple(self.parts[axis][i] for axis, i in enumerate(idx)))
        return out

    def index_of(self, axis: int, vertex: Hashable) -> int:
        return self._index[axis][vertex]


def partite_degree(P: PartiteHypergraph, L: Iterable[int]) -> int:
    """Minimum number of completions over legal |L|-sets with one vertex per
    part indexed by L.  Parts are 0-indexed here."""
    L = sorted(set(L))
    if not L or len(L) >= P.k:
        raise ParameterError("index set must be a nonempty proper subset of the parts")
    if any(i < 0 or i >= P.k for i in L):
        raise ParameterError(f"part indices out of range: {L}")
    others = tuple(i for i in range(P.k) if i not in L)
    counts = P.membership.sum(axis=others)
    return int(counts.min())
