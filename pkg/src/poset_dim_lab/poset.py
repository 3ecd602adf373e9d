"""Bipartite posets, the random model, and the posetb text format.

A bipartite poset on ``A = {a_0..a_{n-1}}`` (minimal) and
``A' = {a'_0..a'_{n-1}}`` (maximal) is fully described by an ``n x n``
boolean table ``rel`` with ``rel[i, j]`` true iff ``a_i < a'_j``.  Any
table is valid: two-level posets carry no transitivity constraint.

Besides the numpy table every poset keeps its rows and columns as Python
integers used as bitsets (bit ``j`` of ``up[i]`` is ``rel[i, j]``).  The
exact solvers work almost entirely on these words.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InputError, PosetFormatError

FORMAT_HEADER = "posetb v1"


@dataclass(frozen=True)
class SampleConfig:
    """Parameters of one draw from the random model (``q`` is ``1 - p``)."""

    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must be an unsigned 64-bit integer")

    @property
    def q(self) -> float:
        return 1.0 - self.p


def _mask_rows(table: np.ndarray) -> tuple:
    weights = [1 << j for j in range(table.shape[1])]
    return tuple(sum(w for w, bit in zip(weights, row) if bit) for row in table.tolist())


class BipartitePoset:
    """Immutable two-level poset; see the module docstring for conventions."""

    __slots__ = ("n", "rel", "up", "down", "inc", "inc_col", "source")

    def __init__(self, rel, source: Optional[SampleConfig] = None):
        table = np.array(rel, dtype=bool)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
            raise InputError(f"relation table must be a non-empty square array, got shape {table.shape}")
        table.setflags(write=False)
        n = table.shape[0]
        full = (1 << n) - 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rel", table)
        up = _mask_rows(table)
        down = _mask_rows(table.T)
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "inc", tuple(full & ~m for m in up))
        object.__setattr__(self, "inc_col", tuple(full & ~m for m in down))
        object.__setattr__(self, "source", source)

    def __setattr__(self, name, value):
        raise AttributeError("BipartitePoset is immutable")

    def __eq__(self, other):
        if not isinstance(other, BipartitePoset):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.rel, other.rel)

    def __hash__(self):
        return hash((self.n, self.rel.tobytes()))

    def __repr__(self):
        return f"BipartitePoset(n={self.n}, comparabilities={self.num_comparable()})"

    def less(self, i: int, j: int) -> bool:
        """True iff ``a_i < a'_j``."""
        return bool(self.up[i] >> j & 1)

    def num_comparable(self) -> int:
        return int(self.rel.sum())

    def num_incomparable(self) -> int:
        return self.n * self.n - self.num_comparable()

    def restrict(self, rows: Iterable[int], cols: Iterable[int]) -> "BipartitePoset":
        """Subposet on ``{a_i : i in rows} | {a'_j : j in cols}``, re-indexed in the given order."""
        rows, cols = list(rows), list(cols)
        if len(rows) != len(cols):
            raise InputError("restriction must keep both sides the same size")
        return BipartitePoset(self.rel[np.ix_(rows, cols)])


def make_poset(n: int, rel) -> BipartitePoset:
    table = np.asarray(rel, dtype=bool)
    if table.shape != (n, n):
        raise InputError(f"expected a {n}x{n} table, got shape {table.shape}")
    return BipartitePoset(table)


def uniform_draws(seed: int, count: int) -> np.ndarray:
    """The first ``count`` doubles in [0, 1) of the Philox4x64 stream keyed by ``seed``.

    Draw ``k`` is ``(raw_k >> 11) * 2**-53`` where ``raw_k`` is the ``k``-th
    64-bit output, so draw ``k`` never depends on how many draws precede it
    in a call.
    """
    gen = np.random.Philox(key=int(seed))
    raw = gen.random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def sample_poset(cfg: SampleConfig) -> BipartitePoset:
    """Draw from the random model: cell ``(i, j)`` uses draw ``i*n + j``."""
    u = uniform_draws(cfg.seed, cfg.n * cfg.n).reshape(cfg.n, cfg.n)
    return BipartitePoset(u < cfg.p, source=cfg)


def standard_example(d: int) -> BipartitePoset:
    if d < 2:
        raise InputError(f"standard examples need d >= 2, got {d}")
    return BipartitePoset(~np.eye(d, dtype=bool))


def empty_order(n: int) -> BipartitePoset:
    return BipartitePoset(np.zeros((n, n), dtype=bool))


def full_order(n: int) -> BipartitePoset:
    return BipartitePoset(np.ones((n, n), dtype=bool))


def incomparable_pairs(P: BipartitePoset) -> list:
    """All ``(i, j)`` with ``a_i || a'_j``, in row-major order."""
    ii, jj = np.nonzero(~P.rel)
    return list(zip(ii.tolist(), jj.tolist()))


def all_posets(n: int):
    """Yield every bipartite poset with sides of size ``n`` (``2**(n*n)`` of them)."""
    cells = n * n
    shifts = np.arange(cells, dtype=np.int64)
    for code in range(1 << cells):
        yield BipartitePoset(((code >> shifts) & 1).astype(bool).reshape(n, n))


# --- posetb v1 --------------------------------------------------------------

def dumps_posetb(P: BipartitePoset, p: Optional[float] = None, seed: Optional[int] = None) -> str:
    if p is None and seed is None and P.source is not None:
        p, seed = P.source.p, P.source.seed
    lines = [FORMAT_HEADER, f"n={P.n}"]
    if p is not None or seed is not None:
        lines.append(f"# p={p!r} seed={seed}")
    lines.extend("".join("1" if b else "0" for b in row) for row in P.rel.tolist())
    return "\n".join(lines) + "\n"


def loads_posetb(text: str) -> BipartitePoset:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise PosetFormatError(f"expected header {FORMAT_HEADER!r}", 1)
    if len(lines) < 2 or not lines[1].startswith("n="):
        raise PosetFormatError("expected 'n=<int>'", 2)
    try:
        n = int(lines[1][2:])
    except ValueError:
        raise PosetFormatError(f"bad size {lines[1][2:]!r}", 2) from None
    if n < 1:
        raise PosetFormatError("n must be positive", 2)
    start = 2
    source = None
    if len(lines) > 2 and lines[2].startswith("#"):
        meta = _parse_comment(lines[2])
        if meta is not None:
            try:
                source = SampleConfig(n, *meta)
            except InputError:
                raise PosetFormatError("invalid p or seed in comment", 3) from None
        start = 3
    body = [ln for ln in lines[start:]]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != n:
        raise PosetFormatError(f"expected {n} relation rows, found {len(body)}", start + min(len(body), n) + 1)
    table = np.zeros((n, n), dtype=bool)
    for k, row in enumerate(body):
        lineno = start + k + 1
        row = row.strip()
        if len(row) != n or set(row) - {"0", "1"}:
            raise PosetFormatError(f"row must be {n} characters of 0/1, got {row!r}", lineno)
        table[k] = [c == "1" for c in row]
    return BipartitePoset(table, source=source)


def _parse_comment(line: str):
    fields = dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)
    try:
        p = float(fields["p"])
        seed = int(fields["seed"])
    except (KeyError, ValueError):
        return None
    return p, seed


def write_posetb(P: BipartitePoset, path, **meta) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_posetb(P, **meta))


def read_posetb(path) -> BipartitePoset:
    with open(path) as fh:
        return loads_posetb(fh.read())


def roundtrip_file(P: BipartitePoset) -> BipartitePoset:
    return loads_posetb(dumps_posetb(P))


def element_label(side: int, index: int) -> str:
    """1-based label: side 0 is A (``a3``), side 1 is A' (``a'3``)."""
    return f"a{index + 1}" if side == 0 else f"a'{index + 1}"
