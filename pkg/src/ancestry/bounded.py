"""Interval-containment labels for forests of bounded spine-decomposition depth.

Three label families share one body layout:

* ``fixed_nd``: the decoder knows n and d; every label has length L(n, d).
* ``fixed_n``: the decoder knows n; d is rounded up to a power of two and
  recovered from the label length.
* ``universal``: the decoder knows nothing; a 6-bit field carries log2 of the
  rounded d, and the rounded n is recovered from the remaining length.

Body layout for an interval (k, a, b) at level k, with h = ceil(log2 k)::

    0^h 1 | k-1 (h bits) | b-1 (ceil log2 B[k] bits) | a-1 (ceil log2 A[k] bits) | 1 0...0

Parenthood labels append depth-1 in ceil(log2 d) bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .decomposition import spine_decomposition_depth
from .errors import DepthBoundError, LabelError
from .forest import RootedForest, compute_stats
from .intervals import IntervalAssignment, Interval, ParamTable, assign_rooted_forest, build_params
from .labels import BitReader, BitWriter, Context, Label, ceil_log2

FIXED_ND = "fixed_nd"
FIXED_N = "fixed_n"
UNIVERSAL = "universal"
MODES = (FIXED_ND, FIXED_N, UNIVERSAL)

D_FIELD_BITS = 6
MAX_LOG = 62


def field_widths(params: ParamTable, k: int) -> tuple[int, int, int]:
    """(h, w_b, w_a) for level k."""
    return ceil_log2(k), ceil_log2(params.B[k]), ceil_log2(params.A[k])


@lru_cache(maxsize=1024)
def body_length(n: int, d: int) -> int:
    """L(n, d): the longest level's fields plus the one-bit end marker."""
    p = build_params(n, d)
    best = 0
    for k in range(1, p.K + 1):
        h, wb, wa = field_widths(p, k)
        best = max(best, 2 * h + 1 + wb + wa + 1)
    return best


@lru_cache(maxsize=1024)
def level_layout(n: int, d: int, length: int) -> tuple:
    """Per level k: (header value, w_b, w_a, pad), for fast bulk encoding."""
    p = build_params(n, d)
    out = [None]
    for k in range(1, p.K + 1):
        h, wb, wa = field_widths(p, k)
        pad = length - (2 * h + 1 + wb + wa)
        if pad < 1:
            raise LabelError(f"length {length} too short for level {k}")
        out.append(((1 << h) | (k - 1), wb, wa, pad))
    return tuple(out)


def encode_many(params: ParamTable, intervals, length: int) -> list[int]:
    """Body values (all of the given length) for a list of intervals."""
    lay = level_layout(params.n, params.d, length)
    A, B = params.A, params.B
    out = []
    for k, a, b in intervals:
        if a > A[k] or b > B[k] or a < 1 or b < 1:
            raise LabelError(f"interval {(k, a, b)} out of range for n={params.n}, d={params.d}")
        head, wb, wa, pad = lay[k]
        out.append((((((head << wb) | (b - 1)) << wa) | (a - 1)) << pad) | (1 << (pad - 1)))
    return out


def encode_interval(params: ParamTable, iv: Interval, length: int) -> Label:
    k, a, b = iv
    if not (1 <= k <= params.K and 1 <= a <= params.A[k] and 1 <= b <= params.B[k]):
        raise LabelError(f"interval {iv} out of range for n={params.n}, d={params.d}")
    h, wb, wa = field_widths(params, k)
    w = BitWriter().put(0, h).put(1, 1).put(k - 1, h).put(b - 1, wb).put(a - 1, wa)
    pad = length - w.length
    if pad < 1:
        raise LabelError(f"length {length} too short for interval {iv}")
    return w.put(1 << (pad - 1), pad).label()


def decode_interval(params: ParamTable, label: Label) -> Interval:
    value, length = label
    h = length - value.bit_length()
    if h < 0 or 2 * h + 1 > length:
        raise LabelError("malformed level header")
    r = BitReader(label)
    r.take(h + 1)
    k = r.take(h) + 1
    if ceil_log2(k) != h or k > params.K:
        raise LabelError(f"level {k} not valid here")
    _, wb, wa = field_widths(params, k)
    b = r.take(wb) + 1
    a = r.take(wa) + 1
    if b > params.B[k] or a > params.A[k]:
        raise LabelError("field exceeds its range")
    if r.left < 1 or r.rest().value != 1 << (r.left - 1):
        raise LabelError("bad end marker")
    return Interval(k, a, b)


# --- length tables for the modes that infer parameters from length ----------

@lru_cache(maxsize=4096)
def fixed_n_length(n: int, log_d: int) -> int:
    """Body length for d-hat = 2**log_d, forced strictly increasing in log_d."""
    own = body_length(n, 1 << log_d)
    if log_d == 0:
        return own
    return max(own, fixed_n_length(n, log_d - 1) + 1)


@lru_cache(maxsize=4096)
def universal_length(log_n: int, log_d: int) -> int:
    """Body length for n-hat = 2**log_n, forced strictly increasing in log_n."""
    own = body_length(1 << log_n, 1 << log_d)
    if log_n == 0:
        return own
    return max(own, universal_length(log_n - 1, log_d) + 1)


def _invert(table, length: int) -> int:
    for j in range(MAX_LOG + 1):
        got = table(j)
        if got == length:
            return j
        if got > length:
            break
    raise LabelError(f"no parameters produce labels of length {length}")


@dataclass(frozen=True)
class BoundedLabeling:
    context: Context
    labels: list
    assignment: IntervalAssignment
    params: ParamTable


def _family(forest: RootedForest, mode: str, n: int | None, d: int | None, parenthood: bool):
    """Resolve (params, context, body length, depth-field width)."""
    stats = compute_stats(forest)
    need_d = stats.forest_depth if parenthood else spine_decomposition_depth(forest)
    scheme = "parenthood" if parenthood else "bounded"
    if mode == FIXED_ND:
        if n is None or d is None:
            raise ValueError("fixed_nd mode needs both n and d")
        if forest.n > n:
            raise ValueError(f"forest has {forest.n} nodes but n={n}")
        if need_d > d:
            what = "depth" if parenthood else "spine-decomposition depth"
            raise DepthBoundError(f"forest {what} {need_d} exceeds d={d}")
        params = build_params(n, d)
        return params, Context(scheme, mode, n, d), body_length(n, d), ceil_log2(d), stats
    log_d = ceil_log2(need_d)
    if mode == FIXED_N:
        n = forest.n if n is None else n
        if forest.n > n:
            raise ValueError(f"forest has {forest.n} nodes but n={n}")
        params = build_params(n, 1 << log_d)
        return params, Context(scheme, mode, n), fixed_n_length(n, log_d), log_d, stats
    if mode == UNIVERSAL:
        log_n = ceil_log2(forest.n)
        params = build_params(1 << log_n, 1 << log_d)
        return params, Context(scheme, mode), universal_length(log_n, log_d), log_d, stats
    raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")


def _label(forest, mode, n, d, parenthood) -> BoundedLabeling:
    params, ctx, length, depth_bits, stats = _family(forest, mode, n, d, parenthood)
    assignment = assign_rooted_forest(forest, params)
    bodies = encode_many(params, assignment.interval[1:], length)
    total = length
    prefix = 0
    if mode == UNIVERSAL:
        total += D_FIELD_BITS
        prefix = ceil_log2(params.d) << length
    if parenthood:
        total += depth_bits
        depth = stats.depth
        labels = [None] + [Label(((prefix | body) << depth_bits) | (depth[v] - 1), total)
                           for v, body in enumerate(bodies, start=1)]
    else:
        labels = [None] + [Label(prefix | body, total) for body in bodies]
    return BoundedLabeling(ctx, labels, assignment, params)


def label_forest_bounded(forest: RootedForest, mode: str = FIXED_N,
                         n: int | None = None, d: int | None = None) -> BoundedLabeling:
    return _label(forest, mode, n, d, parenthood=False)


def label_forest_parenthood(forest: RootedForest, mode: str = FIXED_N,
                            n: int | None = None, d: int | None = None) -> BoundedLabeling:
    return _label(forest, mode, n, d, parenthood=True)


@lru_cache(maxsize=1 << 16)
def decode_bounded(label: Label, context: Context) -> tuple[int, int, int]:
    """Return (lo, hi, depth) for a label; depth is 0 for ancestry labels."""
    parenthood = context.scheme == "parenthood"
    mode = context.mode
    if mode == FIXED_ND:
        params = build_params(context.n, context.d)
        depth_bits = ceil_log2(context.d) if parenthood else 0
        if label.length != body_length(context.n, context.d) + depth_bits:
            raise LabelError("label length does not match (n, d)")
    elif mode == FIXED_N:
        n = context.n
        if parenthood:
            log_d = _invert(lambda j: fixed_n_length(n, j) + j, label.length)
        else:
            log_d = _invert(lambda j: fixed_n_length(n, j), label.length)
        params = build_params(n, 1 << log_d)
        depth_bits = log_d if parenthood else 0
    elif mode == UNIVERSAL:
        if label.length < D_FIELD_BITS:
            raise LabelError("label too short")
        log_d = BitReader(label).take(D_FIELD_BITS)
        if log_d > MAX_LOG:
            raise LabelError("d field out of range")
        depth_bits = log_d if parenthood else 0
        rest = label.length - D_FIELD_BITS - depth_bits
        log_n = _invert(lambda i: universal_length(i, log_d), rest)
        params = build_params(1 << log_n, 1 << log_d)
        label = Label(label.value & ((1 << (label.length - D_FIELD_BITS)) - 1),
                      label.length - D_FIELD_BITS)
    else:
        raise LabelError(f"unknown mode {mode!r}")
    depth = 0
    if parenthood:
        depth = (label.value & ((1 << depth_bits) - 1)) + 1
        label = Label(label.value >> depth_bits, label.length - depth_bits)
    k, a, b = decode_interval(params, label)
    x = params.x[k]
    return a * x, (a + b) * x, depth


def is_ancestor_bounded(l1: Label, l2: Label, context: Context) -> bool:
    """True iff the node labeled l1 is an ancestor of (or equal to) the node labeled l2."""
    lo1, hi1, _ = decode_bounded(l1, context)
    lo2, hi2, _ = decode_bounded(l2, context)
    return lo1 <= lo2 and hi2 <= hi1


def is_parent(l1: Label, l2: Label, context: Context) -> bool:
    lo1, hi1, dep1 = decode_bounded(l1, context)
    lo2, hi2, dep2 = decode_bounded(l2, context)
    return lo1 <= lo2 and hi2 <= hi1 and dep1 == dep2 - 1


class BatchDecoder:
    """Decodes each label once into arrays so many queries run vectorized."""

    def __init__(self, labels, context: Context):
        rows = [decode_bounded(lab, context) for lab in labels[1:]]
        arr = np.array([(0, 0, 0)] + rows, dtype=np.int64)
        self.lo, self.hi, self.depth = arr[:, 0], arr[:, 1], arr[:, 2]

    def is_ancestor(self, us, vs) -> np.ndarray:
        return (self.lo[us] <= self.lo[vs]) & (self.hi[vs] <= self.hi[us])

    def is_parent(self, us, vs) -> np.ndarray:
        return self.is_ancestor(us, vs) & (self.depth[us] == self.depth[vs] - 1)
