"""Exact dimension of bipartite posets with realizer certificates.

A family of linear extensions realizes ``P`` when every incomparable
pair ``(a, a')`` is reversed (``a`` above ``a'``) by some member.  A set
``S`` of incomparable pairs is reversible by one extension iff the
conflict digraph restricted to ``S`` is acyclic, where
``(a, a') -> (b, b')`` whenever ``a < b'`` in ``P``.  The dimension is
therefore the least number of parts in a partition of ``I_P`` into
acyclic-inducing sets (a dichromatic number), which is what
``exact_dimension`` computes.
"""
from __future__ import annotations

import heapq
import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._bitsets import Budget, bits, max_clique, rows_to_masks
from .errors import DomainError, InputError, IrreversibleError
from .metrics import min_maximal_matching
from .poset import BipartitePoset, element_label, incomparable_pairs

# element ids: a_i -> i, a'_j -> n + j


@dataclass(frozen=True)
class ConflictDigraph:
    pairs: tuple  # vertex k is the incomparable pair pairs[k]
    succ: tuple  # bitset of out-neighbours
    pred: tuple

    @property
    def num_arcs(self) -> int:
        return sum(m.bit_count() for m in self.succ)

    def arcs(self):
        for u, m in enumerate(self.succ):
            for v in bits(m):
                yield self.pairs[u], self.pairs[v]

    def mutual(self) -> list:
        """Undirected graph of 2-cycles (pairs that can never share a part)."""
        return [s & p for s, p in zip(self.succ, self.pred)]


def conflict_digraph(P: BipartitePoset) -> ConflictDigraph:
    ii, jj = np.nonzero(~P.rel)
    pairs = tuple(zip(ii.tolist(), jj.tolist()))
    if not pairs:
        return ConflictDigraph((), (), ())
    cross = P.rel[np.ix_(ii, jj)]  # cross[u, v] = a_u < b'_v
    return ConflictDigraph(pairs, tuple(rows_to_masks(cross)), tuple(rows_to_masks(cross.T)))


def _check_pairs(P: BipartitePoset, S) -> list:
    S = sorted(set(map(tuple, S)))
    for i, j in S:
        if not (0 <= i < P.n and 0 <= j < P.n):
            raise InputError(f"pair {(i, j)} out of range for n={P.n}")
        if P.less(i, j):
            raise InputError(f"pair {(i, j)} is comparable and cannot be reversed")
    return S


def _find_cycle(P: BipartitePoset, S: list) -> Optional[list]:
    """A directed cycle of the conflict digraph induced on ``S``, or None."""
    by_row = {}
    for k, (i, j) in enumerate(S):
        by_row.setdefault(i, []).append(k)

    def succ(k):
        i, _ = S[k]
        for v, (_, j2) in enumerate(S):
            if P.up[i] >> j2 & 1:
                yield v

    colour = [0] * len(S)  # 0 new, 1 on stack, 2 done
    for root in range(len(S)):
        if colour[root]:
            continue
        stack = [(root, succ(root))]
        path = [root]
        colour[root] = 1
        while stack:
            node, it = stack[-1]
            for v in it:
                if colour[v] == 1:
                    return [S[k] for k in path[path.index(v):]]
                if colour[v] == 0:
                    colour[v] = 1
                    path.append(v)
                    stack.append((v, succ(v)))
                    break
            else:
                colour[node] = 2
                stack.pop()
                path.pop()
    return None


def is_reversible(P: BipartitePoset, S) -> bool:
    """True iff one linear extension of ``P`` puts ``a`` above ``a'`` for every pair in ``S``."""
    return _find_cycle(P, _check_pairs(P, S)) is None


def is_linear_extension(P: BipartitePoset, order) -> bool:
    """``order`` lists element ids bottom to top."""
    n = P.n
    if sorted(order) != list(range(2 * n)):
        return False
    pos = np.empty(2 * n, dtype=np.int64)
    pos[list(order)] = np.arange(2 * n)
    below = pos[:n, None] < pos[None, n:]
    return bool(np.all(below[P.rel]))


def reversed_pairs(P: BipartitePoset, order) -> set:
    n = P.n
    pos = np.empty(2 * n, dtype=np.int64)
    pos[list(order)] = np.arange(2 * n)
    above = pos[:n, None] > pos[None, n:]
    ii, jj = np.nonzero(above & ~P.rel)
    return set(zip(ii.tolist(), jj.tolist()))


def linear_extension_reversing(P: BipartitePoset, S) -> list:
    """A linear extension (element ids, bottom to top) reversing every pair in ``S``.

    Raises :class:`IrreversibleError` carrying a conflict cycle when no
    such extension exists.
    """
    S = _check_pairs(P, S)
    cycle = _find_cycle(P, S)
    if cycle is not None:
        raise IrreversibleError(cycle)
    n = P.n
    out_edges = [[] for _ in range(2 * n)]
    indeg = [0] * (2 * n)
    for i in range(n):
        for j in bits(P.up[i]):
            out_edges[i].append(n + j)
            indeg[n + j] += 1
    for i, j in S:
        out_edges[n + j].append(i)
        indeg[i] += 1
    heap = [v for v in range(2 * n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in out_edges[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != 2 * n or not is_linear_extension(P, order) or not set(S) <= reversed_pairs(P, order):
        raise AssertionError("constructed extension failed validation")  # unreachable if the criterion holds
    return order


@dataclass
class Realizer:
    parts: list  # list of lists of (i, j)
    extensions: list  # element-id orders, bottom to top
    optimal: bool = True
    lower_bound: int = 1

    @property
    def d(self) -> int:
        return len(self.extensions)

    def validate(self, P: BipartitePoset) -> bool:
        inc = set(incomparable_pairs(P))
        seen = [p for part in self.parts for p in part]
        if len(seen) != len(set(seen)) or set(seen) != inc or len(self.parts) != len(self.extensions):
            return False
        for part, ext in zip(self.parts, self.extensions):
            if not is_linear_extension(P, ext) or not set(map(tuple, part)) <= reversed_pairs(P, ext):
                return False
        return True

    def to_dict(self, n: int) -> dict:
        def label(e):
            return element_label(0, e) if e < n else element_label(1, e - n)

        return {
            "d": self.d,
            "parts": [[[i + 1, j + 1] for i, j in part] for part in self.parts],
            "extensions": [[label(e) for e in ext] for ext in self.extensions],
        }

    def to_json(self, n: int) -> str:
        return json.dumps(self.to_dict(n))


class _Partition:
    """Parts of conflict-digraph vertices with incremental reachability."""

    def __init__(self, g: ConflictDigraph):
        self.g = g
        self.members = []  # bitset per part
        self.reach = {}  # vertex -> bitset of vertices reachable inside its part (incl. itself)

    def try_add(self, v: int, k: int):
        """Add ``v`` to part ``k`` if acyclicity survives; return an undo record or None."""
        pm = self.members[k]
        inn = self.g.pred[v] & pm
        reach_v = 1 << v
        for u in bits(self.g.succ[v] & pm):
            reach_v |= self.reach[u]
        if reach_v & inn:
            return None
        changed = []
        if inn:
            for w in bits(pm):
                rw = self.reach[w]
                if rw & inn:
                    changed.append((w, rw))
                    self.reach[w] = rw | reach_v
        self.reach[v] = reach_v
        self.members[k] = pm | 1 << v
        return k, v, changed

    def undo(self, rec):
        k, v, changed = rec
        for w, rw in changed:
            self.reach[w] = rw
        del self.reach[v]
        self.members[k] &= ~(1 << v)


def _vertex_order(g: ConflictDigraph, clique: list) -> list:
    deg = [s.bit_count() + p.bit_count() for s, p in zip(g.succ, g.pred)]
    in_clique = set(clique)
    rest = sorted((v for v in range(len(g.pairs)) if v not in in_clique), key=lambda v: (-deg[v], v))
    return list(clique) + rest


def _first_fit(g: ConflictDigraph, order: list) -> list:
    part = _Partition(g)
    assign = {}
    for v in order:
        for k in range(len(part.members)):
            if part.try_add(v, k) is not None:
                assign[v] = k
                break
        else:
            part.members.append(0)
            part.try_add(v, len(part.members) - 1)
            assign[v] = len(part.members) - 1
    return [[g.pairs[v] for v in bits(m)] for m in part.members]


def _search(g: ConflictDigraph, order: list, k: int, budget: Budget):
    part = _Partition(g)
    part.members = []
    assign = {}
    N = len(order)

    def rec(idx):
        if idx == N:
            return True
        if not budget.tick():
            return False
        v = order[idx]
        used = len(part.members)
        for j in range(used):
            undo = part.try_add(v, j)
            if undo is not None:
                assign[v] = j
                if rec(idx + 1):
                    return True
                part.undo(undo)
                if budget.exhausted:
                    return False
        if used < k:
            part.members.append(0)
            part.try_add(v, used)
            assign[v] = used
            if rec(idx + 1):
                return True
            part.undo((used, v, []))
            part.members.pop()
        return False

    if rec(0):
        return [[g.pairs[v] for v in bits(m)] for m in part.members]
    return None


def _realizer_from_parts(P: BipartitePoset, parts: list, optimal: bool, lower: int) -> Realizer:
    parts = [sorted(p) for p in parts]
    exts = [linear_extension_reversing(P, part) for part in parts]
    return Realizer(parts, exts, optimal=optimal, lower_bound=lower)


def exact_dimension(P: BipartitePoset, node_limit: Optional[int] = None, time_limit: Optional[float] = None):
    """Least ``d`` such that ``d`` linear extensions reverse all incomparable pairs.

    Returns ``(d, realizer)``.  If the node or time budget runs out, ``d``
    is the best upper bound found, ``realizer.optimal`` is False and
    ``realizer.lower_bound`` holds the clique bound in effect.
    """
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    budget = Budget(node_limit, deadline)
    g = conflict_digraph(P)
    if not g.pairs:
        return 1, Realizer([[]], [linear_extension_reversing(P, [])])
    clique = max_clique(g.mutual(), budget)
    lower = max(1, len(clique))
    order = _vertex_order(g, clique)
    best_parts = _first_fit(g, order)
    for k in range(lower, len(best_parts)):
        if budget.exhausted:
            break
        found = _search(g, order, k, budget)
        if found is not None:
            best_parts = found
            break
        if not budget.exhausted:
            lower = k + 1
    optimal = not budget.exhausted or lower == len(best_parts)
    if optimal:
        lower = len(best_parts)
    return len(best_parts), _realizer_from_parts(P, best_parts, optimal, lower)


# --- independent oracle ----------------------------------------------------------------

_PERM_CACHE = {}


def _positions(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        perms = np.array(list(itertools.permutations(range(2 * n))), dtype=np.int8)
        pos = np.empty_like(perms)
        rows = np.arange(perms.shape[0])[:, None]
        pos[rows, perms] = np.arange(2 * n, dtype=np.int8)
        _PERM_CACHE[n] = pos
    return _PERM_CACHE[n]


def brute_force_dimension(P: BipartitePoset) -> int:
    """Dimension by enumerating every permutation of the ``2n`` elements (``n <= 3``)."""
    n = P.n
    if n > 3:
        raise InputError("brute force is limited to n <= 3")
    inc_cells = ~P.rel
    if not inc_cells.any():
        return 1
    pos = _positions(n)
    below = pos[:, :n, None] < pos[:, None, n:]  # [perm, i, j]: a_i below a'_j
    is_ext = np.all(below[:, P.rel], axis=1)
    flipped = ~below[is_ext][:, inc_cells]  # reversed incomparable pairs per extension
    weights = 1 << np.arange(flipped.shape[1], dtype=np.int64)
    masks = sorted(set((flipped.astype(np.int64) @ weights).tolist()))
    target = (1 << flipped.shape[1]) - 1
    for d in range(1, flipped.shape[1] + 1):
        for combo in itertools.combinations(masks, d):
            acc = 0
            for m in combo:
                acc |= m
            if acc == target:
                return d
    raise AssertionError("every incomparable pair is reversible on its own")


def dim_upper_via_matching(P: BipartitePoset, trials: int = 64, mode: str = "exact", seed: int = 0) -> int:
    """Size of the smallest maximal matching found; never below the dimension."""
    if P.num_incomparable() == 0:
        raise DomainError("poset has no incomparable pairs")
    return min_maximal_matching(P, mode=mode, trials=trials, seed=seed).size
