"""Reference schemes: plain DFS intervals and randomized DFS numbers."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

from .forest import RootedForest, compute_stats
from .labels import BitReader, BitWriter, Label, ceil_log2


def dfs_numbers(forest: RootedForest, children: Sequence[Sequence[int]] | None = None) -> list[int]:
    """Preorder numbers (1-based), roots and children visited in the given order."""
    ch = forest.children if children is None else children
    num = [0] * (forest.n + 1)
    counter = 0
    stack = list(reversed(ch[0]))
    while stack:
        v = stack.pop()
        counter += 1
        num[v] = counter
        stack.extend(reversed(ch[v]))
    return num


def knr_label(forest: RootedForest) -> list:
    """[dfs(u), dfs(last descendant of u)] packed into two fields of ceil(log2 n) bits."""
    num = dfs_numbers(forest)
    weight = compute_stats(forest).weight
    w = ceil_log2(forest.n)
    out: list = [None]
    for v in range(1, forest.n + 1):
        lo = num[v]
        hi = lo + weight[v] - 1
        out.append(BitWriter().put(lo - 1, w).put(hi - 1, w).label())
    return out


def knr_decode(label: Label) -> tuple[int, int]:
    w = label.length // 2
    r = BitReader(label)
    return r.take(w) + 1, r.take(w) + 1


def knr_is_ancestor(l1: Label, l2: Label) -> bool:
    lo1, hi1 = knr_decode(l1)
    lo2, hi2 = knr_decode(l2)
    return lo1 <= lo2 and hi2 <= hi1


def _shuffled_children(forest: RootedForest, rng: random.Random) -> list[list[int]]:
    ch = [list(c) for c in forest.children]
    for c in ch:
        rng.shuffle(c)
    return ch


def rand_label(forest: RootedForest, seed: int) -> list[int]:
    """DFS numbers with every node's children (and the roots) in uniformly random order."""
    return dfs_numbers(forest, _shuffled_children(forest, random.Random(seed)))


def rand_decide(i: int, j: int) -> bool:
    """Accept ``i`` as an ancestor of ``j`` iff it was visited no later."""
    return i <= j


def rand_label_bits(forest: RootedForest, seed: int) -> list:
    w = ceil_log2(forest.n)
    return [None] + [Label(x - 1, w) for x in rand_label(forest, seed)[1:]]


def all_child_orders(forest: RootedForest) -> Iterator[list[int]]:
    """DFS numberings for every combination of child permutations."""
    ch = forest.children
    slots = [v for v in range(forest.n + 1) if len(ch[v]) > 1]
    perms = [list(itertools.permutations(ch[v])) for v in slots]
    for combo in itertools.product(*perms):
        order = list(ch)
        for v, p in zip(slots, combo):
            order[v] = p
        yield dfs_numbers(forest, order)


def exact_wrong_frequency(forest: RootedForest, u: int, v: int) -> Fraction:
    """Fraction of child orderings under which rand_decide claims u is an ancestor of v.

    For an incomparable pair every such claim is wrong.
    """
    total = hits = 0
    for num in all_child_orders(forest):
        total += 1
        hits += rand_decide(num[u], num[v])
    return Fraction(hits, total)
