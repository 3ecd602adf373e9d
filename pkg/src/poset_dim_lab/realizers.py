"""One-sided and short realizer families, weights, and the closed forms tied to them.

Orders over ``A`` are stored top first, so position ``k`` is height ``k``.
Orders over ``A'`` (the second half of a short pair) are stored lowest
first for the same reason.  An element missing from an order has
infinite height and contributes nothing.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import DomainError, InputError
from .glr import GLRArray
from .poset import BipartitePoset, element_label

DEFAULT_DPS = 50


def _check_order(seq, n, what):
    seq = tuple(int(x) for x in seq)
    if not seq:
        raise InputError(f"{what} must be non-empty")
    if len(set(seq)) != len(seq):
        raise InputError(f"{what} repeats an element: {seq}")
    if n is not None and not all(0 <= x < n for x in seq):
        raise InputError(f"{what} has an index outside 0..{n - 1}")
    return seq


@dataclass(frozen=True)
class OneSidedFamily:
    sequences: tuple  # orders over A, top first

    def __post_init__(self):
        object.__setattr__(self, "sequences",
                           tuple(_check_order(s, None, "sequence") for s in self.sequences))
        if not self.sequences:
            raise InputError("a family needs at least one sequence")

    @property
    def d(self) -> int:
        return len(self.sequences)

    def height(self, j: int, x: int) -> Optional[int]:
        """Number of elements above ``x`` in sequence ``j``; None stands for infinity."""
        seq = self.sequences[j]
        return seq.index(x) if x in seq else None

    def tops(self) -> set:
        return {s[0] for s in self.sequences}

    def a_orders(self):
        return self.sequences

    def to_json(self) -> str:
        return json.dumps([[element_label(0, x) for x in s] for s in self.sequences])


@dataclass(frozen=True)
class ShortFamily:
    pairs: tuple  # ((sigma over A, top first), (sigma' over A', lowest first)), ...
    capped: bool = False  # lengths were cut to n because t - 1 > n

    def __post_init__(self):
        cleaned = tuple((_check_order(a, None, "sigma"), _check_order(b, None, "sigma'"))
                        for a, b in self.pairs)
        if not cleaned:
            raise InputError("a short family needs at least one pair")
        lengths = {len(x) for pr in cleaned for x in pr}
        if len(lengths) != 1:
            raise InputError(f"short pairs must share one length, got {sorted(lengths)}")
        object.__setattr__(self, "pairs", cleaned)

    @property
    def d(self) -> int:
        return len(self.pairs)

    @property
    def length(self) -> int:
        return len(self.pairs[0][0])

    @property
    def t(self) -> int:
        return self.length + 1

    def a_orders(self):
        return tuple(a for a, _ in self.pairs)

    def a_prime_orders(self):
        return tuple(b for _, b in self.pairs)

    def to_json(self) -> str:
        # both orders written top to bottom
        return json.dumps([[[element_label(0, x) for x in a], [element_label(1, x) for x in reversed(b)]]
                           for a, b in self.pairs])


def family_from_glr(R: GLRArray, n: int) -> OneSidedFamily:
    """Sequence ``j`` is ``a_j`` followed by ``x_{R[0][j]}, ..., x_{R[s-1][j]}``.

    ``T = {a_0..a_{d-1}}`` with ``d = r*m`` and ``x_k = a_{d+k-1}``.
    """
    d = R.r * R.m
    if n != d + R.m:
        raise InputError(f"n must equal r*m + m = {d + R.m}, got {n}")
    cols = R.entries.T.tolist()
    return OneSidedFamily(tuple((j,) + tuple(d + v - 1 for v in cols[j]) for j in range(d)))


def _prefix_realized(P: BipartitePoset, orders, inc_rows, n):
    """For each element, the bitset of partners it is realized against via some order."""
    realized = [0] * n
    full = (1 << P.n) - 1
    for seq in orders:
        prefix = full
        for x in seq:
            realized[x] |= prefix
            prefix &= inc_rows[x]
    return realized


def _check_indices(P, orders, what):
    for seq in orders:
        if not all(0 <= x < P.n for x in seq):
            raise InputError(f"{what} refers to an element outside 0..{P.n - 1}")


def evaluate_one_sided(P: BipartitePoset, F: OneSidedFamily):
    """Return ``(is_realizer, failing)`` with ``failing`` the unrealized incomparable pairs."""
    _check_indices(P, F.sequences, "family")
    realized = _prefix_realized(P, F.sequences, P.inc, P.n)
    failing = [(a, b) for a in range(P.n) for b in range(P.n)
               if P.inc[a] >> b & 1 and not realized[a] >> b & 1]
    return not failing, failing


def evaluate_short(P: BipartitePoset, S: ShortFamily):
    """Return ``(is_short_realizer, failing)``.

    A pair is realized when ``a < a'``, or some ``R_j(a, a')`` holds (``a``
    in ``sigma_j`` and everything above it incomparable to ``a'``), or
    some ``R'_j(a, a')`` holds (the dual condition below ``a'``).
    """
    _check_indices(P, S.a_orders(), "sigma")
    _check_indices(P, S.a_prime_orders(), "sigma'")
    rows = _prefix_realized(P, S.a_orders(), P.inc, P.n)
    cols = _prefix_realized(P, S.a_prime_orders(), P.inc_col, P.n)
    failing = [(a, b) for a in range(P.n) for b in range(P.n)
               if P.inc[a] >> b & 1 and not rows[a] >> b & 1 and not cols[b] >> a & 1]
    return not failing, failing


def truncate_realizer(P: BipartitePoset, extensions, t: int) -> ShortFamily:
    """Keep the top ``t-1`` elements of ``A`` and the bottom ``t-1`` of ``A'`` in each extension."""
    n = P.n
    keep = t - 1
    capped = keep > n
    keep = min(max(keep, 1), n)
    pairs = []
    for ext in extensions:
        a_side = [e for e in reversed(ext) if e < n][:keep]
        b_side = [e - n for e in ext if e >= n][:keep]
        pairs.append((tuple(a_side), tuple(b_side)))
    return ShortFamily(tuple(pairs), capped=capped)


def multiplicities(family, x: int, side: int = 0, s: Optional[int] = None) -> dict:
    """``mu_i(x)``: number of orders where ``x`` sits at height ``i``, for ``i = 1..s``."""
    orders = family.a_orders() if side == 0 else family.a_prime_orders()
    if s is None:
        s = max(len(o) for o in orders) - 1
    mu = {i: 0 for i in range(1, s + 1)}
    for seq in orders:
        if x in seq:
            h = seq.index(x)
            if h == 0:
                raise DomainError(f"element {x} is a top element (in T), its weight is undefined")
            if h <= s:
                mu[h] += 1
    return mu


def weight(family, x: int, side: int = 0, s: Optional[int] = None) -> float:
    """``w(x) = sum_i mu_i(x) * 2**(1-i)``."""
    return math.fsum(c * 2.0 ** (1 - i) for i, c in multiplicities(family, x, side, s).items())


def top_elements(family, side: int = 0) -> set:
    orders = family.a_orders() if side == 0 else family.a_prime_orders()
    return {o[0] for o in orders}


# --- closed forms -------------------------------------------------------------------

def _ctx(precision):
    return mpmath.workdps(precision) if precision else _Null()


class _Null:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def expected_failures(n: int, m: int, q, r: int, s: int, precision: Optional[int] = None):
    """Expected number of unrealized pairs for a GLR family: ``n*m*q*(prod_{i<=s} (1-q^i))**r``."""
    if not 0 <= q <= 1:
        raise InputError("q must lie in [0, 1]")
    if precision:
        with mpmath.workdps(precision):
            q = mpmath.mpf(q)
            part = mpmath.fprod(1 - q ** i for i in range(1, s + 1))
            return n * m * q * part ** r
    part = math.prod(1.0 - q ** i for i in range(1, s + 1))
    return n * m * q * part ** r


def t_value(n, q) -> int:
    """``ceil((2 ln n + ln ln n) / ln(1/q))``."""
    if not 0 < q < 1:
        raise InputError(f"q must lie in (0, 1), got {q}")
    if n < 3:
        raise InputError("n must be at least 3")
    return math.ceil((2 * math.log(n) + math.log(math.log(n))) / math.log(1 / q))


@dataclass(frozen=True)
class EulerEval:
    q: float
    value: object  # partial product at truncation_depth (float or mpf)
    truncation_depth: int
    tolerance: float

    @property
    def lower(self):
        """``(1 - q^s) * partial(s)``: below the infinite product whenever ``q <= 1/2``."""
        return (1 - self.q ** self.truncation_depth) * self.value if self.truncation_depth else self.value


def euler_phi(q, tol=None, precision: Optional[int] = None) -> EulerEval:
    """Euler's function ``prod_{i>=1} (1 - q^i)`` by partial products.

    Stops once a factor differs from 1 by less than ``tol`` (default
    ``1e-15``, or ``10**-(precision+5)`` in high precision).  With
    ``precision`` (decimal digits) the product is formed in mpmath.
    """
    if not 0 <= q < 1:
        raise InputError(f"q must lie in [0, 1), got {q}")
    if tol is None:
        tol = mpmath.mpf(10) ** -(precision + 5) if precision else 1e-15
    if tol <= 0:
        raise InputError("tol must be positive")
    if precision:
        with mpmath.workdps(precision):
            qq = mpmath.mpf(q)
            val, i, term = mpmath.mpf(1), 0, qq
            while term >= tol:
                i += 1
                val *= 1 - term
                term *= qq
            return EulerEval(qq, +val, i, tol)
    val, i, term = 1.0, 0, q
    while term >= tol:
        i += 1
        val *= 1.0 - term
        term *= q
    return EulerEval(q, val, i, tol)


def pair_survival_bound(q, n, m) -> float:
    """``1 - q * (1-q)**(8n/m)``."""
    if not 0 < m <= n:
        raise InputError("need 0 < m <= n")
    return 1.0 - q * (1.0 - q) ** (8.0 * n / m)


def weight_shift_holds(q, i: int) -> bool:
    """Exact rational check of ``1 - q^i < (1 - q^(i+1))^2``."""
    q = Fraction(q)
    return 1 - q ** i < (1 - q ** (i + 1)) ** 2
