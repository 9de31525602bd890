"""Near-optimal ancestry labels built on the folded forest.

Each node stores its own interval in the folded forest plus enough to rebuild
the interval of its apex: the apex level, the apex width, and the offset ``t``
between the apex's start and the node's start measured in apex-level units.
A node v is an ancestor of u iff I(u) lies inside I(v), or I(u) lies inside
I(apex(v)) strictly after I(v).

Layout (uniform length for a given n)::

    flag (1 = apex) | k'-1 | b'-1 | t | interval body

The interval body uses the fixed (n, d=3) layout of the bounded scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bounded import body_length, decode_interval, encode_many
from .decomposition import APEX, FoldedForest, fold
from .errors import LabelError
from .forest import RootedForest
from .intervals import IntervalAssignment, ParamTable, assign_forest, build_params
from .labels import BitReader, Context, Label, ceil_log2

# spine length bound on folded forests
FOLDED_D = 3


@dataclass(frozen=True)
class OptimalLayout:
    params: ParamTable
    w_level: int
    w_width: int
    w_offset: int
    w_body: int

    @property
    def length(self) -> int:
        return 1 + self.w_level + self.w_width + self.w_offset + self.w_body


@lru_cache(maxsize=256)
def optimal_layout(n: int) -> OptimalLayout:
    p = build_params(n, FOLDED_D)
    bmax = p.B_max
    return OptimalLayout(p, ceil_log2(p.K), ceil_log2(bmax), ceil_log2(bmax + 1), body_length(n, FOLDED_D))


def label_length(n: int) -> int:
    return optimal_layout(n).length


@dataclass(frozen=True)
class OptimalLabeling:
    context: Context
    labels: list
    assignment: IntervalAssignment
    folded: FoldedForest


def label_forest_optimal(forest: RootedForest, n: int | None = None) -> OptimalLabeling:
    n = forest.n if n is None else n
    if forest.n > n:
        raise ValueError(f"forest has {forest.n} nodes but n={n}")
    lay = optimal_layout(n)
    params = lay.params
    folded = fold(forest)
    assignment = assign_forest(params, folded.children, folded.weight)
    iv = assignment.interval
    x = params.x
    bodies = encode_many(params, iv[1:], lay.w_body)
    length = lay.length
    w_off, w_wid, w_body = lay.w_offset, lay.w_width, lay.w_body
    apex_flag = 1 << (length - 1)
    cls, apex_of = folded.node_class, folded.apex_of
    labels: list = [None]
    for v, body in enumerate(bodies, start=1):
        if cls[v] == APEX:
            labels.append(Label(apex_flag | body, length))
            continue
        kp, ap, bp = iv[apex_of[v]]
        k, a, _ = iv[v]
        t = (a * x[k]) // x[kp] - ap
        if not 0 <= t < bp:
            raise LabelError(f"apex offset {t} outside apex width {bp} at node {v}")
        head = (((kp - 1) << w_wid | (bp - 1)) << w_off) | t
        labels.append(Label((head << w_body) | body, length))
    return OptimalLabeling(Context("optimal", n=n), labels, assignment, folded)


def decode_optimal_uncached(label: Label, n: int) -> tuple[int, int, int, int]:
    """Return (lo, hi, apex_lo, apex_hi) for a label of the family for n."""
    lay = optimal_layout(n)
    if label.length != lay.length:
        raise LabelError(f"optimal labels for n={n} have {lay.length} bits, got {label.length}")
    p = lay.params
    r = BitReader(label)
    is_apex = r.take(1)
    kp = r.take(lay.w_level) + 1
    bp = r.take(lay.w_width) + 1
    t = r.take(lay.w_offset)
    k, a, b = decode_interval(p, r.rest())
    x = p.x
    lo, hi = a * x[k], (a + b) * x[k]
    if is_apex:
        if (kp, bp, t) != (1, 1, 0):
            raise LabelError("apex label with nonzero apex fields")
        return lo, hi, lo, hi
    if kp > p.K or bp > p.B[kp]:
        raise LabelError("apex fields out of range")
    ap = lo // x[kp] - t
    if not 1 <= ap <= p.A[kp]:
        raise LabelError("apex offset out of range")
    return lo, hi, ap * x[kp], (ap + bp) * x[kp]


decode_optimal = lru_cache(maxsize=1 << 16)(decode_optimal_uncached)


def decide(v, u) -> bool:
    """D on decoded tuples: v is an ancestor of u."""
    vlo, vhi, valo, vahi = v
    ulo, uhi, _, _ = u
    if vlo <= ulo and uhi <= vhi:
        return True
    return valo <= ulo and uhi <= vahi and (ulo, uhi) != (valo, vahi) and vhi <= ulo


def decide_consistent(v, u) -> bool:
    """D' on decoded tuples of two distinct labels."""
    vlo, vhi, valo, vahi = v
    ulo, uhi, ualo, uahi = u
    if vlo <= ulo and uhi <= vhi and (ulo, uhi) != (vlo, vhi) and vlo <= ualo and uahi <= vhi:
        return True
    return (valo <= ulo and uhi <= vahi and (ulo, uhi) != (valo, vahi)
            and vhi <= ulo and valo <= ualo and uahi <= vahi)


def is_ancestor_optimal(l1: Label, l2: Label, n: int) -> bool:
    """Decoder D: is the node labeled l1 an ancestor of the node labeled l2?"""
    return decide(decode_optimal(l1, n), decode_optimal(l2, n))


def is_ancestor_consistent(l1: Label, l2: Label, n: int) -> bool:
    """Decoder D': like D, but a partial order on every set of labels."""
    return l1 == l2 or decide_consistent(decode_optimal(l1, n), decode_optimal(l2, n))


class BatchDecoder:
    """Vectorized D and D' over labels decoded once into arrays.

    Labels are given as a flat list (no placeholder slot); indices into the
    query arrays refer to that list.
    """

    def __init__(self, labels, n: int):
        rows = [decode_optimal(lab, n) for lab in labels]
        arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
        self.lo, self.hi, self.alo, self.ahi = arr.T
        ids: dict = {}
        self.ident = np.array([ids.setdefault(lab, len(ids)) for lab in labels], dtype=np.int64)

    def _inside(self, olo, ohi, ilo, ihi):
        return (olo <= ilo) & (ihi <= ohi)

    def _strict(self, olo, ohi, ilo, ihi):
        return self._inside(olo, ohi, ilo, ihi) & ((olo != ilo) | (ohi != ihi))

    def decide(self, vs, us) -> np.ndarray:
        lo, hi, alo, ahi = self.lo, self.hi, self.alo, self.ahi
        c1 = self._inside(lo[vs], hi[vs], lo[us], hi[us])
        c2 = self._strict(alo[vs], ahi[vs], lo[us], hi[us]) & (hi[vs] <= lo[us])
        return c1 | c2

    def decide_consistent(self, vs, us) -> np.ndarray:
        lo, hi, alo, ahi = self.lo, self.hi, self.alo, self.ahi
        d0 = self.ident[vs] == self.ident[us]
        d1 = (self._strict(lo[vs], hi[vs], lo[us], hi[us])
              & self._inside(lo[vs], hi[vs], alo[us], ahi[us]))
        d2 = (self._strict(alo[vs], ahi[vs], lo[us], hi[us]) & (hi[vs] <= lo[us])
              & self._inside(alo[vs], ahi[vs], alo[us], ahi[us]))
        return d0 | d1 | d2
