"""Slow, direct-from-definition reference implementations.

Nothing here imports the package's algorithms: each function enumerates
the objects its definition talks about.  Posets are plain ``n x n`` lists
of booleans, ``rel[i][j]`` meaning ``a_i < a'_j``.
"""
from collections import Counter
from itertools import combinations, permutations


def as_table(P):
    return [[bool(x) for x in row] for row in P.rel.tolist()]


def incomparable(rel):
    n = len(rel)
    return [(i, j) for i in range(n) for j in range(n) if not rel[i][j]]


def linear_extensions(rel):
    """All orders (bottom to top) of ``a_0..a_{n-1}, a'_0..`` (ids ``i`` and ``n + j``) extending ``rel``."""
    n = len(rel)
    out = []
    for perm in permutations(range(2 * n)):
        pos = {e: k for k, e in enumerate(perm)}
        if all(pos[i] < pos[n + j] for i in range(n) for j in range(n) if rel[i][j]):
            out.append(perm)
    return out


def reversed_by(rel, order):
    n = len(rel)
    pos = {e: k for k, e in enumerate(order)}
    return frozenset((i, j) for i, j in incomparable(rel) if pos[i] > pos[n + j])


def dimension(rel):
    """Least positive d such that d linear extensions reverse every incomparable pair."""
    target = frozenset(incomparable(rel))
    if not target:
        return 1
    sets = {reversed_by(rel, L) for L in linear_extensions(rel)}
    sets = [s for s in sets if not any(s < t for t in sets)]
    for d in range(1, len(target) + 1):
        for combo in combinations(sets, d):
            if frozenset().union(*combo) == target:
                return d
    raise AssertionError("unreachable")


def reversible(rel, S):
    S = set(S)
    return any(S <= reversed_by(rel, L) for L in linear_extensions(rel))


def matchings(rel, rows=None, cols=None):
    """Every matching (as a frozenset of edges) in the incomparability graph on rows x cols."""
    n = len(rel)
    rows = list(range(n)) if rows is None else list(rows)
    cols = set(range(n)) if cols is None else set(cols)
    edges = [(i, j) for i in rows for j in sorted(cols) if not rel[i][j]]
    out = [frozenset()]

    def grow(start, cur, used_i, used_j):
        for k in range(start, len(edges)):
            i, j = edges[k]
            if i not in used_i and j not in used_j:
                nxt = cur | {(i, j)}
                out.append(nxt)
                grow(k + 1, nxt, used_i | {i}, used_j | {j})

    grow(0, frozenset(), frozenset(), frozenset())
    return out, edges


def max_matching(rel, rows=None, cols=None):
    ms, _ = matchings(rel, rows, cols)
    return max(len(m) for m in ms)


def min_maximal_matching(rel):
    ms, edges = matchings(rel)
    best = None
    for m in ms:
        ui = {i for i, _ in m}
        uj = {j for _, j in m}
        if any(i not in ui and j not in uj for i, j in edges):
            continue
        best = len(m) if best is None else min(best, len(m))
    return best


def balanced(rel, want_less):
    n = len(rel)
    best = 0
    for r in range(1, n + 1):
        found = any(all(rel[i][j] == want_less for i in U for j in V)
                    for U in combinations(range(n), r) for V in combinations(range(n), r))
        if found:
            best = r
    return best


def bcn(rel):
    return balanced(rel, True)


def bin_(rel):
    return balanced(rel, False)


def standard_example_copies(rel, d):
    """Induced S_d copies as sets of d incomparable pairs (the matching determines the copy)."""
    count = 0
    for pairs in combinations(incomparable(rel), d):
        rows = [i for i, _ in pairs]
        cols = [j for _, j in pairs]
        if len(set(rows)) < d or len(set(cols)) < d:
            continue
        if all(rel[i][j2] for k, (i, _) in enumerate(pairs) for k2, (_, j2) in enumerate(pairs) if k != k2):
            count += 1
    return count


def se(rel):
    n = len(rel)
    best = 1
    for d in range(2, n + 1):
        if standard_example_copies(rel, d):
            best = d
    return best


def indep2(rel):
    n = len(rel)
    return sum(all(not rel[i][j] for i in U for j in V)
               for U in combinations(range(n), 2) for V in combinations(range(n), 2))


def clique_pairs(rel, r):
    n = len(rel)
    return sum(all(rel[i][j] for i in U for j in V)
               for U in combinations(range(n), r) for V in combinations(range(n), r))


def glr_conditions(rows, m):
    """Set of violated condition numbers of an array of symbols 1..m."""
    s, width = len(rows), len(rows[0])
    r = width // m
    bad = set()
    if any(Counter(row)[x] != r for row in rows for x in range(1, m + 1)):
        bad.add(1)
    cols = [[rows[k][c] for k in range(s)] for c in range(width)]
    if any(len(set(col)) < s for col in cols):
        bad.add(2)
    seen = Counter()
    for col in cols:
        pairs = {(col[b], col[a]) for a in range(s) for b in range(a + 1, s) if col[a] != col[b]}
        seen.update(pairs)
    if any(v > 1 for v in seen.values()):
        bad.add(3)
    return bad


def one_sided_failing(rel, sequences):
    """Incomparable (a, a') with no sequence holding a below only elements incomparable to a'."""
    out = []
    for a, b in incomparable(rel):
        ok = False
        for seq in sequences:
            if a in seq:
                above = seq[:seq.index(a)]
                if all(not rel[x][b] for x in above):
                    ok = True
                    break
        if not ok:
            out.append((a, b))
    return out


def short_failing(rel, pairs):
    """``pairs`` are (sigma top-first over A, sigma' lowest-first over A')."""
    out = []
    for a, b in incomparable(rel):
        ok = False
        for sig, sig2 in pairs:
            if a in sig and all(not rel[x][b] for x in sig[:sig.index(a)]):
                ok = True
            if b in sig2 and all(not rel[a][y] for y in sig2[:sig2.index(b)]):
                ok = True
        if not ok:
            out.append((a, b))
    return out
