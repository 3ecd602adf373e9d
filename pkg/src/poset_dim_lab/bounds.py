"""Closed-form dimension bounds for the random bipartite poset model.

Every bound is evaluated at ``(n, q)`` whether or not ``q`` lies in the
range where it is proved; ``hypothesis_satisfied`` records that.  The
comprehensive upper and lower bounds pick one branch per ``q``; a ``q``
sitting exactly on a boundary goes to the lower-numbered branch.

All logarithms are natural except in the ``f(2, n)`` estimate, which uses
base 2.  Pass ``precision`` (decimal digits) to evaluate in mpmath.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .errors import InputError
from .realizers import euler_phi

SCHEMA = "pdl-report-v1"
DEFAULT_EPS = 0.1
DEFAULT_LB_CONSTANT = 32  # boundary constant between New LB (2) and (3); 16 is the other reading


@dataclass
class BoundEntry:
    name: str
    value: object
    hypothesis_satisfied: bool
    regime: Optional[int] = None
    quantitative: bool = True  # False when unquantified constants were set to placeholders
    note: str = ""

    def to_dict(self, digits=None) -> dict:
        return {
            "name": self.name,
            "regime": self.regime,
            "value": _num(self.value, digits),
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "quantitative": self.quantitative,
            "note": self.note,
        }


def _num(v, digits=None):
    if v is None:
        return None
    if isinstance(v, mpmath.mpf):
        if not mpmath.isfinite(v):
            return None
        return mpmath.nstr(v, digits or 20) if digits else float(v)
    v = float(v)
    return v if math.isfinite(v) else None


@dataclass
class BoundReport:
    n: int
    p: object
    q: object
    eps: float
    entries: list = field(default_factory=list)
    precision: Optional[int] = None

    def __getitem__(self, name) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self):
        return [e.name for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "bounds",
            "n": self.n,
            "p": _num(self.p, self.precision),
            "q": _num(self.q, self.precision),
            "eps": self.eps,
            "precision": self.precision,
            "entries": [e.to_dict(self.precision) for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "q", "name", "regime", "value", "hypothesis_satisfied", "quantitative"])
        for e in self.entries:
            d = e.to_dict(self.precision)
            w.writerow([self.n, _num(self.p, self.precision), _num(self.q, self.precision), d["name"],
                        d["regime"], d["value"], d["hypothesis_satisfied"], d["quantitative"]])
        return buf.getvalue()


class _Num:
    """Arithmetic backend: math floats or mpmath at a chosen precision."""

    def __init__(self, precision):
        self.mp = bool(precision)

    def f(self, x):
        return mpmath.mpf(x) if self.mp else float(x)

    def log(self, x):
        if x <= 0:
            return self.f("nan")
        return mpmath.log(x) if self.mp else math.log(x)

    def sqrt(self, x):
        return mpmath.sqrt(x) if self.mp else math.sqrt(x)

    def nan(self):
        return self.f("nan")


def _within(lo, x, hi, left_open=False, right_open=False):
    left = lo < x if left_open else lo <= x
    right = x < hi if right_open else x <= hi
    return bool(left and right)


def _in_branch(x, cuts, k):
    """Is ``x`` in branch ``k`` (1-based) of ``cuts = [lo, h1, ..., top]``?

    Branch 1 is ``[lo, h1]``, branch ``k > 1`` is ``(h_{k-1}, h_k]``, each
    clipped to the global range ``[lo, top]``.
    """
    lo, top = cuts[0], cuts[-1]
    if not lo <= x <= top:
        return False
    if k == 1:
        return x <= cuts[1]
    return cuts[k - 1] < x <= cuts[k]


def _pick(x, cuts):
    """The first branch containing ``x``, or None."""
    for k in range(1, len(cuts)):
        if _in_branch(x, cuts, k):
            return k
    return None


def upper_bound_formulas(n, q, eps=DEFAULT_EPS, precision=None):
    """``{1: value, 2: value, 3: value}`` for New Upper Bounds (1)-(3)."""
    with (mpmath.workdps(precision) if precision else _nullctx()):
        N = _Num(precision)
        n, q = N.f(n), N.f(q)
        lqn = N.log(q * n)
        phi = euler_phi(q, tol=None if precision else 1e-17, precision=precision).value
        lphi = N.log(1 / phi)
        z = n * n * q * lphi
        return {
            1: n - (2 - eps) * lqn / q,
            2: n - q * n / (2 * lqn),
            3: n - n * lphi / N.log(z),
        }


def lower_bound_formulas(n, q, eps=DEFAULT_EPS, precision=None):
    """``{1..4: value}`` for New Lower Bounds (1)-(4); (4) is NaN when its ``z <= 0``."""
    with (mpmath.workdps(precision) if precision else _nullctx()):
        N = _Num(precision)
        n, q = N.f(n), N.f(q)
        ln = N.log(n)
        z = ln + 4 * N.log(q) - 8 * N.log(ln)
        return {
            1: n - (2 + eps) * N.log(q * n) / q,
            2: n - 32 * N.sqrt(n * ln / q),
            3: n - 8 * q * n,
            4: n - 24 * q * n / z if z > 0 else N.nan(),
        }


class _nullctx:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def upper_cuts(n):
    ln = math.log(n)
    return [ln ** 2 / n, ln / math.sqrt(n), n ** (-1 / 3), 0.5]


def lower_cuts(n, lb_constant=DEFAULT_LB_CONSTANT):
    ln = math.log(n)
    return [ln ** 2 / n, n ** -0.8, lb_constant ** (1 / 3) * n ** (-1 / 3) * ln ** (1 / 3),
            n ** -0.25 * ln ** 3 / 8, 0.5]


def f2n_estimate(n):
    """``lg lg n + (1/2) lg lg lg n`` (the o(1) term dropped)."""
    return math.log2(math.log2(n)) + 0.5 * math.log2(math.log2(math.log2(n)))


def fdn_lower_bound(d, n):
    """``n^(1 - (2d-1)/(d(d-1))) / (8 ln n)``."""
    if d < 3:
        raise InputError("d must be at least 3")
    return n ** (1 - (2 * d - 1) / (d * (d - 1))) / (8 * math.log(n))


def eval_bounds(n, p=None, q=None, eps=DEFAULT_EPS, precision=None,
                lb_constant=DEFAULT_LB_CONSTANT, delta=1.0, deltas=None) -> BoundReport:
    """Evaluate every bound at ``(n, p)``; give exactly one of ``p`` and ``q``.

    ``delta`` and ``deltas`` stand in for constants that are only known to
    exist; entries using them are marked ``quantitative=False``.  Without
    ``deltas`` the ``old_lb_general`` entry keeps its regime but no value.
    """
    if (p is None) == (q is None):
        raise InputError("give exactly one of p and q")
    if n < 3:
        raise InputError("n must be at least 3")
    if precision:
        with mpmath.workdps(precision):
            q = 1 - mpmath.mpf(p) if q is None else mpmath.mpf(q)
            p = 1 - q
    else:
        q = 1.0 - p if q is None else float(q)
        p = 1.0 - q
    if not 0 < float(q) < 1:
        raise InputError("p must lie strictly between 0 and 1")
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")

    qf, pf = float(q), float(p)
    ln = math.log(n)
    report = BoundReport(n=n, p=p, q=q, eps=eps, precision=precision)
    add = report.entries.append

    ucuts = upper_cuts(n)
    ub = upper_bound_formulas(n, q, eps, precision)
    for k in (1, 2, 3):
        hyp = _in_branch(qf, ucuts, k)
        add(BoundEntry(f"new_ub_{k}", ub[k], hyp, regime=k))
    k = _pick(qf, ucuts)
    add(BoundEntry("new_ub", ub[k] if k else None, k is not None, regime=k))

    lcuts = lower_cuts(n, lb_constant)
    lb = lower_bound_formulas(n, q, eps, precision)
    for k in (1, 2, 3, 4):
        hyp = _in_branch(qf, lcuts, k)
        note = ""
        if k == 4:
            hyp = hyp and qf >= n ** -0.25 * ln ** 3
            note = "z = ln n + 4 ln q - 8 ln ln n defined for q >= n^(-1/4) ln^3 n"
        add(BoundEntry(f"new_lb_{k}", lb[k], hyp, regime=k, note=note))
    k = _pick(qf, lcuts)
    add(BoundEntry("new_lb", lb[k] if k else None, k is not None, regime=k,
                   note=f"branch 2/3 boundary constant {lb_constant}^(1/3)"))

    with (mpmath.workdps(precision) if precision else _nullctx()):
        N = _Num(precision)
        nn, P, LN = N.f(n), p, N.log(n)
        lp = N.log(1 / P)
        add(BoundEntry("old_ub", nn - nn * lp / (2 * LN), _within(0.5, pf, 1, right_open=True)))
        add(BoundEntry("old_ub_general", nn - nn * lp / ((2 + eps) * LN), _within(1 / ln, pf, 1, right_open=True)))
        lo_hyp = _within(0.5, pf, 1 - n ** (-1 + eps), right_open=True)
        add(BoundEntry("old_lb", nn - delta * nn / LN, lo_hyp, quantitative=False,
                       note=f"delta unquantified; placeholder {delta}"))
        d1, d2, d3 = deltas if deltas is not None else (None, None, None)
        if _within(n ** (-1 + eps), pf, 1 / ln, left_open=True):
            regime = 1
            old_general = None if d1 is None else d1 * P * nn * N.log(P * nn)
        elif _within(1 / ln, pf, 1 - n ** (-1 + eps), right_open=True):
            regime = 2
            old_general = None if d2 is None else max(d2 * nn, nn - d3 * nn / (P * LN))
        else:
            old_general, regime = None, None
        note = ("delta_1..3 unquantified; pass deltas to evaluate" if deltas is None
                else f"delta_1..3 unquantified; supplied {list(deltas)}")
        add(BoundEntry("old_lb_general", old_general, regime is not None, regime=regime, quantitative=False,
                       note=note))
        u = P * nn
        add(BoundEntry("furedi_kahn", 1 + 2 * (u + 1) * N.log(2 * nn), True,
                       note="u = pn (expected up-degree), |P| = 2n"))
        add(BoundEntry("scott_wood", u * N.log(u) if u > 1 else None, True, quantitative=False,
                       note="k log^(1+o(1)) k with k = pn and the o(1) dropped"))
    add(BoundEntry("f2n_estimate", f2n_estimate(n), True, quantitative=False,
                   note="lg lg n + (1/2) lg lg lg n, o(1) dropped"))
    return report


def ub_coefficient(n, q, precision=None):
    """``(n - New UB (3)) * ln(n) / n``: tends to ``ln(1/phi(q))/2``."""
    ub3 = upper_bound_formulas(n, q, precision=precision)[3]
    with (mpmath.workdps(precision) if precision else _nullctx()):
        N = _Num(precision)
        return (N.f(n) - ub3) * N.log(N.f(n)) / N.f(n)
