"""Matchings, defect, balanced clique/independence numbers and se(P).

Throughout, a *matching* lives in the incomparability graph: its edges
are pairwise disjoint pairs ``(i, j)`` with ``a_i || a'_j``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from ._bitsets import Budget, bits, count_cliques, lowest, max_clique, rows_to_masks, to_mask
from .errors import DomainError, InputError
from .poset import BipartitePoset

DEFAULT_EXACT_EDGE_CAP = 64
WITNESS_KINDS = ("clique-pair", "independent-pair", "standard-example", "matching")


@dataclass(frozen=True)
class Matching:
    edges: tuple
    cover: Optional[tuple] = None  # (left indices, right indices) for maximum matchings
    optimal: bool = True

    @property
    def size(self) -> int:
        return len(self.edges)

    def __len__(self):
        return len(self.edges)

    def is_valid(self, P: BipartitePoset) -> bool:
        left = [i for i, _ in self.edges]
        right = [j for _, j in self.edges]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            return False
        return all(not P.less(i, j) for i, j in self.edges)

    def is_maximal(self, P: BipartitePoset) -> bool:
        used_l = to_mask(i for i, _ in self.edges)
        used_r = to_mask(j for _, j in self.edges)
        free_r = ((1 << P.n) - 1) & ~used_r
        return all(not (P.inc[i] & free_r) for i in range(P.n) if not used_l >> i & 1)

    def witness(self) -> "Witness":
        return Witness("matching", tuple(i for i, _ in self.edges), tuple(j for _, j in self.edges), self.size)


@dataclass(frozen=True)
class Witness:
    """Certificate for a structural value.  ``left``/``right`` are 0-based.

    For ``standard-example`` and ``matching`` the two tuples are aligned:
    ``left[k]`` is paired with ``right[k]``.
    """

    kind: str
    left: tuple
    right: tuple
    size: int
    exhausted: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.kind not in WITNESS_KINDS:
            raise InputError(f"unknown witness kind {self.kind!r}")

    def verify(self, P: BipartitePoset) -> bool:
        L, R = list(self.left), list(self.right)
        if len(set(L)) != len(L) or len(set(R)) != len(R):
            return False
        if self.kind in ("clique-pair", "independent-pair"):
            if len(L) != self.size or len(R) != self.size:
                return False
            want = self.kind == "clique-pair"
            return all(P.less(i, j) == want for i in L for j in R)
        if len(L) != self.size or len(R) != self.size:
            return False
        if self.kind == "matching":
            return all(not P.less(i, j) for i, j in zip(L, R))
        return all(P.less(i, j) == (x != y) for x, i in enumerate(L) for y, j in enumerate(R))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "left": [i + 1 for i in self.left],
                "right": [j + 1 for j in self.right], "size": self.size}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(d["kind"], tuple(i - 1 for i in d["left"]), tuple(j - 1 for j in d["right"]), d["size"])


# --- maximum matching ---------------------------------------------------------

def _kuhn(adj: list, left: list, right_mask: int):
    """Maximum matching by augmenting paths, lowest-index neighbour first.

    Returns ``match_l`` (left -> right) and ``match_r`` (right -> left).
    """
    match_l, match_r = {}, {}
    for u in left:  # greedy start
        free = adj[u] & right_mask
        while free:
            v = lowest(free)
            if v not in match_r:
                match_l[u], match_r[v] = v, u
                break
            free &= free - 1

    def augment(u, seen):
        cand = adj[u] & right_mask & ~seen[0]
        while cand:
            v = lowest(cand)
            cand &= cand - 1
            seen[0] |= 1 << v
            w = match_r.get(v)
            if w is None or augment(w, seen):
                match_l[u], match_r[v] = v, u
                return True
        return False

    for u in left:
        if u not in match_l:
            augment(u, [0])
    return match_l, match_r


def _konig_cover(adj, left, right_mask, match_l, match_r):
    matched_right = {v: u for u, v in match_l.items()}
    z_left = {u for u in left if u not in match_l}
    z_right = 0
    frontier = list(z_left)
    while frontier:
        u = frontier.pop()
        new = adj[u] & right_mask & ~z_right
        z_right |= new
        for v in bits(new):
            w = matched_right.get(v)
            if w is not None and w not in z_left:
                z_left.add(w)
                frontier.append(w)
    return tuple(u for u in left if u not in z_left), tuple(bits(z_right))


def max_incomparability_matching(P: BipartitePoset, S=None, S2=None) -> Matching:
    """Maximum matching between ``S ⊆ A`` and ``S2 ⊆ A'`` (default: all of each).

    The result carries a vertex cover of the same size (König) in ``cover``.
    """
    left = sorted(range(P.n) if S is None else set(S))
    right_mask = ((1 << P.n) - 1) if S2 is None else to_mask(S2)
    match_l, match_r = _kuhn(P.inc, left, right_mask)
    cover = _konig_cover(P.inc, left, right_mask, match_l, match_r)
    edges = tuple(sorted(match_l.items()))
    return Matching(edges, cover=cover)


def defect(P: BipartitePoset, S, S2) -> int:
    """``|S|`` minus the maximum matching size between ``S`` and ``S2``."""
    S, S2 = set(S), set(S2)
    if len(S) != len(S2) or not S:
        raise InputError(f"defect needs equal non-empty sides, got {len(S)} and {len(S2)}")
    return len(S) - max_incomparability_matching(P, S, S2).size


# --- minimum maximal matching -------------------------------------------------

def _greedy_maximal(P: BipartitePoset, edges: list) -> list:
    used_l = used_r = 0
    out = []
    for i, j in edges:
        if not (used_l >> i & 1 or used_r >> j & 1):
            out.append((i, j))
            used_l |= 1 << i
            used_r |= 1 << j
    return out


def _heuristic_mmm(P, trials, seed):
    edges = [(i, j) for i in range(P.n) for j in bits(P.inc[i])]
    best = _greedy_maximal(P, edges)
    rng = np.random.default_rng(seed)
    for _ in range(max(trials, 0)):
        perm = rng.permutation(len(edges))
        cand = _greedy_maximal(P, [edges[k] for k in perm])
        if len(cand) < len(best):
            best = cand
    return best


def _exact_mmm(P, upper, budget):
    full = (1 << P.n) - 1
    inc, inc_col = P.inc, P.inc_col
    best = list(upper)

    def rec(free_l, free_r, chosen):
        nonlocal best
        if not budget.tick():
            return
        # pick the uncovered edge with the fewest covering branches
        pick, pick_cost = None, None
        for u in bits(free_l):
            nb = inc[u] & free_r
            for v in bits(nb):
                cost = nb.bit_count() + (inc_col[v] & free_l).bit_count()
                if pick is None or cost < pick_cost:
                    pick, pick_cost = (u, v), cost
        if pick is None:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        left = [u for u in bits(free_l) if inc[u] & free_r]
        nu = len(_kuhn(inc, left, free_r)[0])
        if len(chosen) + (nu + 1) // 2 >= len(best):
            return
        u, v = pick
        for w in bits(inc[u] & free_r):
            chosen.append((u, w))
            rec(free_l & ~(1 << u), free_r & ~(1 << w), chosen)
            chosen.pop()
        for x in bits(inc_col[v] & free_l & ~(1 << u)):
            chosen.append((x, v))
            rec(free_l & ~(1 << x), free_r & ~(1 << v), chosen)
            chosen.pop()

    rec(full, full, [])
    return best


def min_maximal_matching(P: BipartitePoset, mode: str = "exact", trials: int = 64, seed: int = 0,
                         edge_cap: int = DEFAULT_EXACT_EDGE_CAP, node_limit: Optional[int] = None) -> Matching:
    """Smallest maximal matching of the incomparability graph.

    ``mode="exact"`` runs branch and bound (only when ``|I_P| <= edge_cap``;
    larger instances fall back to the heuristic and come back with
    ``optimal=False``).  ``mode="heuristic"`` keeps the best of ``trials``
    randomized greedy maximal matchings.
    """
    n_inc = P.num_incomparable()
    if n_inc == 0:
        raise DomainError("poset has no incomparable pairs; no matching is needed")
    if mode not in ("exact", "heuristic"):
        raise InputError(f"mode must be 'exact' or 'heuristic', got {mode!r}")
    upper = _heuristic_mmm(P, trials if mode == "heuristic" else min(trials, 16), seed)
    if mode == "heuristic" or n_inc > edge_cap:
        return Matching(tuple(sorted(upper)), optimal=False)
    budget = Budget(node_limit)
    best = _exact_mmm(P, upper, budget)
    return Matching(tuple(sorted(best)), optimal=not budget.exhausted)


# --- balanced bicliques -------------------------------------------------------

def _max_balanced_biclique(adj: list, n_right: int, budget: Budget):
    """Largest ``k`` with ``k`` left vertices sharing ``k`` common neighbours."""
    order = sorted(range(len(adj)), key=lambda v: (-adj[v].bit_count(), v))
    best_val, best_left, best_right = 0, (), 0

    def rec(chosen, common, cand):
        nonlocal best_val, best_left, best_right
        if not budget.tick():
            return
        for idx, v in enumerate(cand):
            if min(len(chosen) + len(cand) - idx, common.bit_count()) <= best_val:
                return
            c2 = common & adj[v]
            if c2.bit_count() <= best_val:
                continue
            new_chosen = chosen + [v]
            val = min(len(new_chosen), c2.bit_count())
            if val > best_val:
                best_val, best_left, best_right = val, tuple(new_chosen), c2
            rest = [w for w in cand[idx + 1:] if (c2 & adj[w]).bit_count() > best_val]
            if rest and min(len(new_chosen) + len(rest), c2.bit_count()) > best_val:
                rec(new_chosen, c2, rest)
                if budget.exhausted:
                    return

    rec([], (1 << n_right) - 1, order)
    right = tuple(list(bits(best_right))[:best_val])
    return best_val, tuple(sorted(best_left[:best_val])), right


def _greedy_balanced_biclique(adj: list, n_right: int):
    chosen, common = [], (1 << n_right) - 1
    best = (0, (), ())
    remaining = set(range(len(adj)))
    while remaining:
        v = max(sorted(remaining), key=lambda w: (common & adj[w]).bit_count())
        remaining.discard(v)
        common &= adj[v]
        chosen.append(v)
        val = min(len(chosen), common.bit_count())
        if val > best[0]:
            best = (val, tuple(sorted(chosen[:val])), tuple(list(bits(common))[:val]))
        if common.bit_count() <= best[0]:
            break
    return best


def _balanced(P, adj, kind, mode, node_limit):
    if mode not in ("exact", "greedy"):
        raise InputError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    if mode == "greedy":
        val, left, right = _greedy_balanced_biclique(adj, P.n)
        return val, Witness(kind, left, right, val, exhausted=True)
    budget = Budget(node_limit)
    val, left, right = _max_balanced_biclique(adj, P.n, budget)
    return val, Witness(kind, left, right, val, exhausted=budget.exhausted)


def balanced_clique_number(P: BipartitePoset, mode: str = "exact", node_limit: Optional[int] = None):
    """bcn(P): largest ``r`` with an ``r x r`` clique pair; 0 if nothing is comparable.

    In greedy mode (or when the node budget runs out) the witness is
    flagged ``exhausted`` and the value is only a lower bound.
    """
    return _balanced(P, P.up, "clique-pair", mode, node_limit)


def balanced_independence_number(P: BipartitePoset, mode: str = "exact", node_limit: Optional[int] = None):
    """bin(P): the same search on the incomparability graph."""
    return _balanced(P, P.inc, "independent-pair", mode, node_limit)


# --- standard examples ----------------------------------------------------------

def compatibility_graph(P: BipartitePoset):
    """Incomparable pairs and, for each, the bitset of pairs it can share an S_d with.

    Pairs ``(a, a')`` and ``(b, b')`` are compatible iff ``a < b'`` and
    ``b < a'``; this already forces ``a != b`` and ``a' != b'``.
    """
    ii, jj = np.nonzero(~P.rel)
    pairs = list(zip(ii.tolist(), jj.tolist()))
    if not pairs:
        return pairs, []
    cross = P.rel[np.ix_(ii, jj)]
    return pairs, rows_to_masks(cross & cross.T)


def standard_example_number(P: BipartitePoset, budget: Optional[int] = None):
    """se(P) with an aligned witness; 1 when P contains no S_2.

    ``budget`` caps the number of search nodes.  When it runs out the
    witness has ``exhausted=True`` and the value is a lower bound.
    """
    pairs, adj = compatibility_graph(P)
    b = Budget(budget)
    clique = max_clique(adj, b) if pairs else []
    if len(clique) < 2:
        return _se_trivial(pairs, b.exhausted)
    chosen = sorted(pairs[v] for v in clique)
    return len(chosen), Witness("standard-example", tuple(i for i, _ in chosen),
                                tuple(j for _, j in chosen), len(chosen), exhausted=b.exhausted)


def standard_example_greedy(P: BipartitePoset, restarts: int = 16, seed: int = 0):
    """Lower bound on se(P) from randomized greedy growth of an S_d.

    Each restart keeps the set of pairs still compatible with everything
    chosen and adds one of them at random until none is left.  Returns the
    same ``(value, witness)`` shape as :func:`standard_example_number`,
    with ``exhausted=True`` marking the value as a lower bound only.
    """
    rng = np.random.default_rng(seed)
    free = ~P.rel
    if not free.any():
        return 1, Witness("standard-example", (), (), 0, exhausted=True)
    best = []
    for _ in range(max(1, restarts)):
        cand = free.copy()
        chosen = []
        while True:
            ii, jj = np.nonzero(cand)
            if ii.size == 0:
                break
            k = int(rng.integers(ii.size))
            i, j = int(ii[k]), int(jj[k])
            chosen.append((i, j))
            cand &= P.rel[:, j][:, None] & P.rel[i, :][None, :]
        if len(chosen) > len(best):
            best = chosen
    best.sort()
    return len(best), Witness("standard-example", tuple(i for i, _ in best),
                              tuple(j for _, j in best), len(best), exhausted=True)


def _se_trivial(pairs, exhausted):
    # se = 1: a single incomparable pair is an S_1; with none, the witness is empty
    if pairs:
        i, j = pairs[0]
        return 1, Witness("standard-example", (i,), (j,), 1, exhausted=exhausted)
    return 1, Witness("standard-example", (), (), 0, exhausted=exhausted)


def count_standard_examples(P: BipartitePoset, d: int) -> int:
    """Number of induced copies of S_d (each copy has a unique matching)."""
    if d < 1:
        raise InputError("d must be positive")
    _, adj = compatibility_graph(P)
    return count_cliques(adj, d) if adj else 0


# --- counting ---------------------------------------------------------------------

def count_balanced_indep_pairs_size2(P: BipartitePoset) -> int:
    """Number of pairs ``(U, U')`` of 2-sets with all four cross pairs incomparable."""
    Q = (~P.rel).astype(np.int64)
    G = Q @ Q.T
    iu = np.triu_indices(P.n, 1)
    c = G[iu]
    return int((c * (c - 1) // 2).sum())


def count_balanced_clique_pairs(P: BipartitePoset, r: int = 2) -> int:
    """Number of ``r x r`` clique pairs ``(V, V')``."""
    if r < 1:
        raise InputError("r must be positive")
    if r == 2:
        C = P.rel.astype(np.int64)
        G = C @ C.T
        c = G[np.triu_indices(P.n, 1)]
        return int((c * (c - 1) // 2).sum())

    total = 0

    def rec(start, depth, common):
        nonlocal total
        if depth == r:
            total += comb(common.bit_count(), r)
            return
        for v in range(start, P.n):
            c2 = common & P.up[v]
            if c2.bit_count() >= r:
                rec(v + 1, depth + 1, c2)

    rec(0, 0, (1 << P.n) - 1)
    return total
