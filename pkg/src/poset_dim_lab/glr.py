"""Generalized latin rectangles.

An ``(m, r, s)``-GLR is an ``s x (r*m)`` array over ``{1..m}`` where

1. every row holds each symbol exactly ``r`` times,
2. the entries of every column are distinct,
3. for symbols ``i != j`` at most one column has ``i`` below ``j``.

Row 0 is the top row; "below" means a larger row index.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._bitsets import Budget
from .errors import DomainError, InputError, PosetFormatError

CONDITIONS = {1: "row-multiplicity", 2: "column-distinct", 3: "below-pair-unique"}

EXAMPLE_GLR_9_2_3 = np.array([
    [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9],
    [8, 9, 9, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8],
    [3, 6, 4, 7, 5, 8, 6, 9, 7, 1, 8, 2, 9, 3, 1, 4, 2, 5],
])


@dataclass(frozen=True, eq=False)
class GLRArray:
    m: int
    r: int
    s: int
    entries: np.ndarray = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, GLRArray):
            return NotImplemented
        return (self.m, self.r, self.s) == (other.m, other.r, other.s) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.m, self.r, self.s, self.entries.tobytes()))

    @classmethod
    def from_entries(cls, entries, m: int) -> "GLRArray":
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] % m:
            raise InputError(f"expected an s x (r*{m}) array, got shape {arr.shape}")
        report = validate_glr(arr, m)
        if not report.ok:
            raise DomainError(f"not a GLR: {report.violations[0]}")
        arr.setflags(write=False)
        return cls(m, arr.shape[1] // m, arr.shape[0], arr)

    def below_pairs(self):
        """All ``(lower, upper)`` symbol pairs, one per column and row pair."""
        out = []
        for col in self.entries.T.tolist():
            out.extend((col[b], col[a]) for a in range(len(col)) for b in range(a + 1, len(col)))
        return out

    def is_resolvable(self) -> bool:
        blocks = self.entries.reshape(self.s, self.r, self.m)
        return bool(np.all(np.sort(blocks, axis=2) == np.arange(1, self.m + 1)))

    def to_csv(self) -> str:
        """First line ``m,r,s``, then the ``s`` rows of symbols."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.m, self.r, self.s])
        w.writerows(self.entries.tolist())
        return buf.getvalue()


def parse_glr_csv(text: str):
    """``(m, r, s, rows)`` from GLR CSV text, without checking the conditions.

    A leading line reading literally ``m,r,s`` is skipped, so files with a
    column-name line are accepted too.
    """
    rows = [row for row in csv.reader(io.StringIO(text))]
    start = 0
    if rows and [c.strip() for c in rows[0]] == ["m", "r", "s"]:
        start = 1
    if len(rows) <= start:
        raise PosetFormatError("expected a header line m,r,s", start + 1)
    try:
        m, r, s = (int(c) for c in rows[start])
    except ValueError:
        raise PosetFormatError("header must be three integers m,r,s", start + 1) from None
    if min(m, r, s) < 1:
        raise PosetFormatError("m, r and s must be positive", start + 1)
    body = [row for row in rows[start + 1:] if row]
    if len(body) != s:
        raise PosetFormatError(f"expected {s} rows, found {len(body)}", start + 2 + len(body))
    out = []
    for k, row in enumerate(body):
        try:
            vals = [int(c) for c in row]
        except ValueError:
            raise PosetFormatError("non-integer entry", start + 2 + k) from None
        if len(vals) != r * m:
            raise PosetFormatError(f"expected {r * m} entries, got {len(vals)}", start + 2 + k)
        out.append(vals)
    return m, r, s, out


def loads_glr_csv(text: str) -> GLRArray:
    """Parse GLR CSV text; raises DomainError if the array is not a GLR."""
    m, _, _, rows = parse_glr_csv(text)
    return GLRArray.from_entries(rows, m)


@dataclass(frozen=True)
class Violation:
    condition: int
    row: Optional[int] = None  # 0-based
    column: Optional[int] = None
    pair: Optional[tuple] = None  # (lower symbol, upper symbol)
    detail: str = ""

    @property
    def name(self) -> str:
        return CONDITIONS[self.condition]

    def __str__(self):
        return f"condition {self.condition} ({self.name}): {self.detail}"


@dataclass(frozen=True)
class GLRReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    @property
    def conditions(self) -> set:
        return {v.condition for v in self.violations}


def validate_glr(entries, m: int) -> GLRReport:
    """Check all three conditions and report every violation found.

    Violations are listed by condition number, then by position.
    """
    arr = np.asarray(entries)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError("GLR must be a non-empty 2-D array")
    if arr.shape[1] % m:
        raise InputError(f"width {arr.shape[1]} is not a multiple of m={m}")
    if arr.min() < 1 or arr.max() > m:
        raise InputError(f"entries must lie in 1..{m}")
    r = arr.shape[1] // m
    found = []
    for i, row in enumerate(arr.tolist()):
        counts = Counter(row)
        for sym in range(1, m + 1):
            if counts[sym] != r:
                found.append(Violation(1, row=i, pair=None,
                                       detail=f"row {i + 1} has symbol {sym} {counts[sym]} times, not {r}"))
    for c, col in enumerate(arr.T.tolist()):
        seen = {}
        for i, sym in enumerate(col):
            if sym in seen:
                found.append(Violation(2, row=i, column=c,
                                       detail=f"column {c + 1} repeats {sym} (rows {seen[sym] + 1} and {i + 1})"))
            else:
                seen[sym] = i
    first_col = {}
    for c, col in enumerate(arr.T.tolist()):
        for a in range(len(col)):
            for b in range(a + 1, len(col)):
                pair = (col[b], col[a])
                if pair[0] == pair[1]:
                    continue
                if pair in first_col and first_col[pair] != c:
                    found.append(Violation(3, column=c, pair=pair,
                                           detail=f"{pair[0]} below {pair[1]} in columns {first_col[pair] + 1} and {c + 1}"))
                else:
                    first_col.setdefault(pair, c)
    return GLRReport(tuple(found))


def glr_counting_feasible(m: int, r: int, s: int) -> bool:
    """False means no (m, r, s)-GLR can exist: each column spends s(s-1)/2 of the m(m-1) ordered pairs."""
    return r * s * (s - 1) <= 2 * (m - 1)


def counting_depth_cap(m: int, r: int) -> int:
    s = 1
    while glr_counting_feasible(m, r, s + 1):
        s += 1
    return s


def cell_size_bound(m: int, r: int, s: int) -> int:
    """Guaranteed number of allowable symbols per cell when adding row ``s``."""
    return m - (r - 1) * s * (s - 1) ** 2 // 2 - (s - 1) ** 2 * (s - 2) // 2 - 1


def _complete_block(allowed: np.ndarray, order: np.ndarray):
    """Perfect matching positions -> symbols; symbols tried in ``order``.

    ``allowed[c, x]`` says symbol index ``x`` may go in column ``c`` of the
    block.  Returns the symbol index per column, or None.
    """
    m = allowed.shape[0]
    rank = np.empty(m, dtype=np.int64)
    rank[order] = np.arange(m)
    adj = []
    for c in range(m):
        cand = np.nonzero(allowed[c])[0]
        adj.append(cand[np.argsort(rank[cand], kind="stable")].tolist())
    match_sym = [-1] * m
    match_col = [-1] * m
    for c in range(m):
        for x in adj[c]:
            if match_sym[x] < 0:
                match_sym[x], match_col[c] = c, x
                break

    def augment(c, seen):
        for x in adj[c]:
            if x in seen:
                continue
            seen.add(x)
            if match_sym[x] < 0 or augment(match_sym[x], seen):
                match_sym[x], match_col[c] = c, x
                return True
        return False

    for c in range(m):
        if match_col[c] < 0 and not augment(c, set()):
            return None
    return match_col


def _build(m: int, r: int, s: int, order: np.ndarray, check_cells: bool):
    arr = np.zeros((s, r * m), dtype=np.int64)  # 0-based symbols while building
    arr[0] = np.tile(order, r)
    used = np.zeros((m, m), dtype=bool)  # used[x, y]: x already below y somewhere
    for row in range(1, s):
        for blk in range(r):
            cols = slice(blk * m, (blk + 1) * m)
            above = arr[:row, cols]  # (row, m)
            allowed = ~used[:, above.T].any(axis=2).T  # [col, x]
            allowed[np.arange(m)[:, None], above.T] = False
            if check_cells:
                assert allowed.sum(axis=1).min() >= cell_size_bound(m, r, row + 1) >= m / 2, \
                    "allowable set smaller than the Hall bound"
            chosen = _complete_block(allowed, order)
            if chosen is None:
                return None
            arr[row, cols] = chosen
            for c in range(m):
                used[chosen[c], above[:, c]] = True
    return arr + 1


def construct_glr(m: int, r: int, s: int, retries: int = 32, seed: int = 0) -> GLRArray:
    """Build a resolvable (m, r, s)-GLR row by row, block by block.

    Each block of a new row is completed by a perfect matching between
    columns and allowable symbols.  When ``m > 2*r*s**3`` every cell has
    at least ``m/2`` allowable symbols (asserted) and the matching always
    exists.  Outside that regime the construction is retried with
    ``retries`` random symbol orders before giving up.
    """
    if min(m, r, s) < 1:
        raise InputError("m, r, s must be positive")
    if s > m:
        raise DomainError(f"columns cannot hold {s} distinct symbols from 1..{m}")
    guaranteed = s >= 2 and m > 2 * r * s ** 3
    arr = _build(m, r, s, np.arange(m), check_cells=guaranteed)
    rng = np.random.default_rng(seed)
    attempt = 0
    while arr is None and attempt < retries:
        attempt += 1
        arr = _build(m, r, s, rng.permutation(m), check_cells=False)
    if arr is None:
        raise DomainError(f"construction failed for (m, r, s) = ({m}, {r}, {s}) after {retries} retries")
    out = GLRArray(m, r, s, arr)
    out.entries.setflags(write=False)
    report = validate_glr(arr, m)
    if not report.ok:
        raise AssertionError(f"constructed array is not a GLR: {report.first}")
    return out


@dataclass(frozen=True)
class DepthResult:
    value: int
    witness: Optional[GLRArray]
    exhausted: bool = False
    counting_cap: int = 1


def _exists(m: int, r: int, s: int, budget: Budget):
    """Search for an (m, r, s)-GLR, or return None.

    Symmetry reductions: columns are permuted so the top row reads
    ``1..1 2..2 ... m..m``; columns sharing a top symbol are filled in
    non-decreasing order; symbols are relabelled so the first column is
    ``(1, 2, ..., s)``.  Among the next fillable column of each top-symbol
    group the one with the fewest legal completions is branched on first.
    """
    from itertools import permutations

    tuples = {t: [(t,) + rest for rest in permutations([x for x in range(m) if x != t], s - 1)]
              for t in range(m)}
    pairs_of = {tup: [(tup[b], tup[a]) for a in range(s) for b in range(a + 1, s)]
                for group in tuples.values() for tup in group}
    row_count = [[0] * m for _ in range(s)]
    groups = [[None] * r for _ in range(m)]

    def place(t, k, tup, sign):
        groups[t][k] = tup if sign > 0 else None
        for row, x in enumerate(tup):
            row_count[row][x] += sign

    def narrow(cands, tup):
        # candidates stay legal unless they reuse a pair of tup or a row symbol tup just saturated
        pairs = set(pairs_of[tup])
        full = {(row, x) for row, x in enumerate(tup) if row and row_count[row][x] >= r}
        out = {}
        for t, lst in cands.items():
            out[t] = [c for c in lst
                      if not any((row, c[row]) in full for row in range(1, s))
                      and pairs.isdisjoint(pairs_of[c])]
        return out

    def rec(filled, cands):
        if filled == r * m:
            return True
        if not budget.tick():
            return False
        choice = None
        for t in range(m):
            k = next((i for i, g in enumerate(groups[t]) if g is None), None)
            if k is None:
                continue
            floor = groups[t][k - 1] if k else None
            opts = cands[t] if floor is None else [c for c in cands[t] if c >= floor]
            if not opts:
                return False
            if choice is None or len(opts) < len(choice[2]):
                choice = (t, k, opts)
        t, k, opts = choice
        for tup in opts:
            place(t, k, tup, 1)
            if rec(filled + 1, narrow(cands, tup)):
                return True
            place(t, k, tup, -1)
            if budget.exhausted:
                return False
        return False

    first = tuple(range(s))
    place(0, 0, first, 1)
    if not rec(1, narrow(tuples, first)):
        return None
    cols = [g for t in range(m) for g in groups[t]]
    return np.array(cols, dtype=np.int64).T + 1


def max_glr_depth(m: int, r: int, budget: Optional[int] = 200_000, max_cells: int = 24) -> DepthResult:
    """Largest ``s`` admitting an (m, r, s)-GLR, by exhaustive backtracking.

    Each depth is first attempted with :func:`construct_glr`; only when
    that fails does the exhaustive search run.  Only for
    ``m * r <= max_cells``.  If the node budget runs out the result is a
    lower bound with ``exhausted=True``.
    """
    if m < 1 or r < 1:
        raise InputError("m and r must be positive")
    if m * r > max_cells:
        raise InputError(f"m*r = {m * r} exceeds the exhaustive-search cap {max_cells}")
    cap = counting_depth_cap(m, r)
    best = GLRArray(m, r, 1, np.tile(np.arange(1, m + 1), r)[None, :])
    b = Budget(budget)
    for s in range(2, min(cap, m) + 1):
        try:  # a quick constructive witness settles existence without search
            arr = construct_glr(m, r, s, retries=8).entries
        except DomainError:
            arr = _exists(m, r, s, b)
        if arr is None:
            return DepthResult(best.s, best, exhausted=b.exhausted, counting_cap=cap)
        best = GLRArray(m, r, s, arr)
    return DepthResult(best.s, best, exhausted=False, counting_cap=cap)
