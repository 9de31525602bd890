"""Interval families and the recursive legal-containment assignment.

An interval at level k with integer coordinates (a, b) covers the integer
range [a*x[k], (a+b)*x[k]).  The assignment packs every tree into a bin
whose size is floor(c[k] * |T|), so all intervals stay below N.

The c[k] constants are kept as 64-bit fixed-point integers: ``floor(c*m)``
is then an exact integer operation and never depends on float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from .errors import BinOverflowError, DepthBoundError
from .forest import RootedForest, compute_stats, is_ancestor_oracle

FRAC_BITS = 64
ONE = 1 << FRAC_BITS

# partial sum cutoff for the constant bounding every c[k]
_GAMMA_CUTOFF = 1 << 20


def _log2sq(k: int) -> float:
    lg = math.log2(k)
    return lg * lg


def _gamma_fixed() -> int:
    total = ONE
    for j in range(2, _GAMMA_CUTOFF + 1):
        total += int(ONE / (j * _log2sq(j)))
    # sum_{j > M} 1/(j log2^2 j) <= integral_M^inf = ln^2(2) / ln(M)
    tail = math.log(2) ** 2 / math.log(_GAMMA_CUTOFF)
    return total + int(tail * ONE) + (1 << 32)


@lru_cache(maxsize=1)
def gamma_fixed() -> int:
    return _gamma_fixed()


class Interval(NamedTuple):
    k: int
    a: int
    b: int


@dataclass(frozen=True)
class Bin:
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError(f"bad bin [{self.lo}, {self.hi})")

    def __len__(self):
        return self.hi - self.lo


@dataclass(frozen=True)
class ParamTable:
    n: int
    d: int
    K: int
    x: tuple[int, ...]        # index 0 unused
    c_fixed: tuple[int, ...]  # c[k] * 2^64, index 0 unused
    A: tuple[int, ...]
    B: tuple[int, ...]
    gamma_fixed: int
    N: int

    @property
    def gamma(self) -> float:
        return self.gamma_fixed / ONE

    def c(self, k: int) -> float:
        return self.c_fixed[k] / ONE

    def scaled(self, k: int, m: int) -> int:
        """floor(c[k] * m), exactly."""
        return (self.c_fixed[k] * m) >> FRAC_BITS

    @property
    def top_bin(self) -> Bin:
        return Bin(1, self.scaled(self.K, self.n) + 1)

    @property
    def B_max(self) -> int:
        return max(self.B[1:])


def level_of(m: int) -> int:
    """Smallest level k >= 1 with m <= 2^k."""
    return max(1, (m - 1).bit_length())


@lru_cache(maxsize=256)
def build_params(n: int, d: int) -> ParamTable:
    if n < 1 or d < 1:
        raise ValueError("build_params needs n >= 1 and d >= 1")
    K = level_of(n)
    g = gamma_fixed()
    N = -((-g * n) >> FRAC_BITS)  # ceil(gamma * n)
    x = [0, 1]
    cf = [0, ONE]
    A = [0, N]
    B = [0, 2]
    for k in range(2, K + 1):
        klog = k * _log2sq(k)
        x.append(max(1, math.ceil(2 ** (k - 1) / ((d + 1) * klog))))
        cf.append(cf[-1] + int(ONE / klog))
        ck = cf[-1] / ONE
        A.append(max(1 + math.ceil(N * (d + 1) * klog / 2 ** (k - 1)), 1 + -(-N // x[k])))
        B.append(max(math.ceil(2 * ck * (d + 1) * klog), math.ceil(ck * 2**k / x[k])))
    if cf[K] >= g:
        raise AssertionError("c[K] exceeds the precomputed upper bound")
    return ParamTable(n, d, K, tuple(x), tuple(cf), tuple(A), tuple(B), g, N)


def interval_bounds(params: ParamTable, iv: Interval) -> tuple[int, int]:
    k, a, b = iv
    if not 1 <= k <= params.K:
        raise ValueError(f"level {k} outside [1, {params.K}]")
    if not 1 <= a <= params.A[k]:
        raise ValueError(f"a={a} outside [1, {params.A[k]}] at level {k}")
    if not 1 <= b <= params.B[k]:
        raise ValueError(f"b={b} outside [1, {params.B[k]}] at level {k}")
    x = params.x[k]
    return a * x, (a + b) * x


def contains(outer: tuple[int, int], inner: tuple[int, int]) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def strictly_contains(outer: tuple[int, int], inner: tuple[int, int]) -> bool:
    return contains(outer, inner) and outer != inner


def precedes(first: tuple[int, int], second: tuple[int, int]) -> bool:
    return first[1] <= second[0]


@dataclass
class IntervalAssignment:
    params: ParamTable
    interval: list  # node -> Interval (index 0 unused)

    def bounds(self, v: int) -> tuple[int, int]:
        k, a, b = self.interval[v]
        x = self.params.x[k]
        return a * x, (a + b) * x

    def all_bounds(self) -> list[tuple[int, int]]:
        x = self.params.x
        out = [(0, 0)]
        for k, a, b in self.interval[1:]:
            out.append((a * x[k], (a + b) * x[k]))
        return out


def assign_forest(params: ParamTable, children: Sequence[Sequence[int]], weight: Sequence[int],
                  roots: Sequence[int] | None = None, bin: Bin | None = None) -> IntervalAssignment:
    """Assign intervals to every node reachable from ``roots``.

    ``children[v]`` must list v's children in the order their subtrees should
    be laid out; ``weight[v]`` is the size of v's subtree.  Spines follow the
    weight rule: a child continues the spine iff it holds more than half the
    weight of the spine's top node.  Trees are packed left to right, so
    earlier trees get intervals strictly preceding those of later trees.
    """
    n = len(weight) - 1
    if roots is None:
        roots = children[0]
    if bin is None:
        bin = params.top_bin
    out: list = [None] * (n + 1)
    x = params.x
    A = params.A
    B = params.B
    d = params.d
    scaled = params.scaled

    # tasks are trees with their bin and level; forests are expanded eagerly
    tasks: list[tuple[int, int, int, int]] = []

    def pack(trees, lo, hi):
        for r in reversed(_pack_offsets(trees, lo, hi)):
            tasks.append(r)

    def _pack_offsets(trees, lo, hi):
        placed = []
        for r in trees:
            m = weight[r]
            lv = level_of(m)
            size = scaled(lv, m)
            placed.append((r, lo, lo + size, lv))
            lo += size
        if lo > hi:
            raise BinOverflowError(f"forest needs up to {lo}, bin ends at {hi}")
        return placed

    pack(roots, bin.lo, bin.hi)
    while tasks:
        r, lo, hi, k = tasks.pop()
        m = weight[r]
        if k == 1:
            if m == 1:
                out[r] = Interval(1, lo, 1)
            else:
                (c,) = children[r]
                out[r] = Interval(1, lo, 2)
                out[c] = Interval(1, lo + 1, 1)
            continue
        xk = x[k]
        a = -(-lo // xk)
        top = weight[r]
        spine = []
        starts = []
        v = r
        while v:
            heavy = 0
            for c in children[v]:
                if 2 * weight[c] > top:
                    heavy = c
                    break
            rest = [c for c in children[v] if c != heavy]
            size = scaled(k - 1, weight[v] - 1 - (weight[heavy] if heavy else 0))
            pack(rest, a * xk, a * xk + size)
            spine.append(v)
            starts.append(a)
            a += size // xk + 1
            v = heavy
        if len(spine) > d:
            raise DepthBoundError(f"spine of length {len(spine)} exceeds d={d}")
        if a * xk > hi:
            raise BinOverflowError(f"tree at node {r} ends at {a * xk}, bin ends at {hi}")
        if starts[-1] > A[k] or a - starts[0] > B[k]:
            raise BinOverflowError(f"spine interval of node {r} outside level-{k} ranges")
        for v, ai in zip(spine, starts):
            out[v] = Interval(k, ai, a - ai)
    return IntervalAssignment(params, out)


def assign_rooted_forest(forest: RootedForest, params: ParamTable | None = None,
                         d: int | None = None) -> IntervalAssignment:
    """Intervals for a plain forest, trees and children in id order."""
    stats = compute_stats(forest)
    if params is None:
        from .decomposition import spine_decomposition_depth
        params = build_params(forest.n, d or spine_decomposition_depth(forest))
    if forest.n > params.n:
        raise ValueError(f"forest has {forest.n} nodes, table built for {params.n}")
    return assign_forest(params, forest.children, stats.weight)


def verify_legal_containment(forest: RootedForest, assignment: IntervalAssignment):
    """Return (True, None) or (False, counterexample) by checking every pair
    against the brute-force oracle."""
    n = forest.n
    bounds = assignment.all_bounds()
    seen = {}
    for v in range(1, n + 1):
        if assignment.interval[v] is None:
            return False, ("unassigned", v)
        if bounds[v] in seen:
            return False, ("duplicate", seen[bounds[v]], v)
        seen[bounds[v]] = v
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if is_ancestor_oracle(forest, u, v) != contains(bounds[u], bounds[v]):
                return False, ("mismatch", u, v)
    return True, None
