"""Small helpers for Python ints used as bitsets."""
from __future__ import annotations

import numpy as np


def bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def rows_to_masks(table: np.ndarray) -> list:
    """Convert each row of a 2-D boolean array to an int bitset."""
    if table.shape[1] == 0:
        return [0] * table.shape[0]
    packed = np.packbits(np.asarray(table, dtype=bool), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class Budget:
    """Node counter shared by a recursive search; ``tick`` returns False once exhausted."""

    __slots__ = ("limit", "nodes", "exhausted", "deadline")

    def __init__(self, limit=None, deadline=None):
        self.limit = limit
        self.nodes = 0
        self.exhausted = False
        self.deadline = deadline

    def tick(self) -> bool:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes & 255 == 0:
            import time

            if time.monotonic() > self.deadline:
                self.exhausted = True
        return not self.exhausted


def max_clique(adj: list, budget: Budget | None = None, initial: list | None = None) -> list:
    """Maximum clique of an undirected graph given as neighbour bitsets.

    Branch and bound with a greedy colouring bound.  Vertices are explored
    in descending-degree order (ties by index) so the returned clique is
    deterministic.  If ``budget`` runs out the best clique found so far is
    returned and ``budget.exhausted`` is set.
    """
    n = len(adj)
    if n == 0:
        return []
    budget = budget or Budget()
    order = sorted(range(n), key=lambda v: (-adj[v].bit_count(), v))
    rank = {v: k for k, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        radj[rank[v]] = sum(1 << rank[u] for u in bits(adj[v]))
    best = [rank[v] for v in initial] if initial else [0]

    def colour_sort(pmask):
        out, bounds = [], []
        uncoloured = pmask
        colour = 0
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~radj[v] & ~(1 << v)
                uncoloured &= ~(1 << v)
                out.append(v)
                bounds.append(colour)
        return out, bounds

    def expand(clique, pmask):
        nonlocal best
        if not budget.tick():
            return
        verts, bounds = colour_sort(pmask)
        for k in range(len(verts) - 1, -1, -1):
            if len(clique) + bounds[k] <= len(best):
                return
            v = verts[k]
            newp = pmask & radj[v]
            if newp:
                expand(clique + [v], newp)
                if budget.exhausted:
                    return
            elif len(clique) + 1 > len(best):
                best = clique + [v]
            pmask &= ~(1 << v)

    expand([], (1 << n) - 1)
    return sorted(order[v] for v in best)


def count_cliques(adj: list, k: int) -> int:
    """Number of ``k``-cliques (``k >= 1``)."""

    def rec(pmask, depth):
        if depth == 1:
            return pmask.bit_count()
        total = 0
        for v in bits(pmask):
            higher = adj[v] & pmask & ~((2 << v) - 1)
            if higher.bit_count() >= depth - 1:
                total += rec(higher, depth - 1)
        return total

    return rec((1 << len(adj)) - 1, k)
