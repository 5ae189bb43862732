"""Seeded randomness with named streams.

Every stochastic operation in the library takes an :class:`RngSpec`.  A spec
is a (seed, stream_id) pair; identical specs reproduce identical results
across runs.  Two kinds of draws are offered:

* ``generator()`` returns a stdlib ``random.Random`` seeded from the spec,
  for permutations / choices inside a single operation;
* ``edge_draw(edge)`` hashes (seed, stream, edge) to a uniform in [0, 1),
  independent of iteration order.  Keeping an edge iff its draw is below p
  makes sparsifications at p1 < p2 nested for free, which threshold sweeps
  rely on.
"""

from __future__ import annotations

import hashlib
import random
import struct
from dataclasses import dataclass
from typing import Iterable

import numpy as np

_U64 = float(1 << 64)


def _digest(*parts: int) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for p in parts:
        # struct packing keeps the hash input unambiguous and platform-fixed
        h.update(struct.pack("<q", p))
    return h.digest()


@dataclass(frozen=True)
class RngSpec:
    """Deterministic random stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int = 0

    def split(self, child: int) -> "RngSpec":
        """Derive an independent child stream; stable under nesting."""
        mixed = int.from_bytes(_digest(self.seed, self.stream_id, child)[:8], "little")
        return RngSpec(seed=self.seed, stream_id=mixed & 0x7FFFFFFFFFFFFFFF)

    def generator(self) -> random.Random:
        state = int.from_bytes(_digest(self.seed, self.stream_id, -1), "little")
        return random.Random(state)

    def numpy_generator(self) -> np.random.Generator:
        state = int.from_bytes(_digest(self.seed, self.stream_id, -2), "little")
        return np.random.default_rng(state)

    def edge_draw(self, edge: Iterable[int]) -> float:
        """Uniform [0,1) attached to a canonical edge tuple."""
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<qq", self.seed, self.stream_id))
        for v in edge:
            h.update(struct.pack("<q", v))
        return int.from_bytes(h.digest(), "little") / _U64
