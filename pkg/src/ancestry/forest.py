"""Rooted forests in parent-array form, plus generators and ground-truth oracles.

Node ids are dense integers ``1..n``.  ``parent[v] == ROOT`` (0) marks a root;
``parent[0]`` is a placeholder so that arrays can be indexed by node id.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import ForestFormatError, InvalidNodeError

ROOT = 0

KINDS = (
    "path",
    "star",
    "complete_binary",
    "caterpillar",
    "random_recursive",
    "random_bounded_depth",
    "skewed_binary",
)


@dataclass(frozen=True)
class RootedForest:
    n: int
    parent: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a forest needs at least one node")
        if len(self.parent) != self.n + 1:
            raise ValueError(f"parent array must have n+1={self.n + 1} slots")
        for v in range(1, self.n + 1):
            p = self.parent[v]
            if not 0 <= p <= self.n or p == v:
                raise ValueError(f"node {v} has invalid parent {p}")
        if len(self.order) != self.n:
            raise ValueError(f"parent relation has a cycle through node {find_cycle_node(self.parent)}")

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "RootedForest":
        """Build from a 1-based parent list given without the placeholder slot."""
        return cls(len(parents), (0, *parents))

    @cached_property
    def roots(self) -> list[int]:
        return [v for v in range(1, self.n + 1) if self.parent[v] == ROOT]

    @cached_property
    def children(self) -> list[list[int]]:
        """Children of every node, in increasing id order (index 0 lists the roots)."""
        ch: list[list[int]] = [[] for _ in range(self.n + 1)]
        par = self.parent
        for v in range(1, self.n + 1):
            ch[par[v]].append(v)
        return ch

    @cached_property
    def order(self) -> list[int]:
        """Breadth-first order: every node appears after its parent."""
        ch = self.children
        out = list(ch[0])
        i = 0
        while i < len(out):
            out.extend(ch[out[i]])
            i += 1
        return out

    def check_node(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise InvalidNodeError(f"node id {v} outside [1, {self.n}]")

    def __len__(self):
        return self.n


def find_cycle_node(parent: Sequence[int]) -> int | None:
    """Return some node lying on a parent cycle, or None."""
    n = len(parent) - 1
    state = [0] * (n + 1)  # 0 unseen, 1 on current walk, 2 known to reach a root
    for s in range(1, n + 1):
        walk = []
        v = s
        while v != ROOT and state[v] == 0:
            state[v] = 1
            walk.append(v)
            p = parent[v]
            v = p if 0 <= p <= n else ROOT
        if v != ROOT and state[v] == 1:
            return v
        for w in walk:
            state[w] = 2
    return None


@dataclass(frozen=True)
class TreeStats:
    weight: list[int]
    depth: list[int]
    forest_depth: int


def compute_stats(forest: RootedForest) -> TreeStats:
    n = forest.n
    par = forest.parent
    order = forest.order
    depth = [0] * (n + 1)
    for v in order:
        depth[v] = depth[par[v]] + 1
    weight = [1] * (n + 1)
    weight[0] = 0
    for v in reversed(order):
        p = par[v]
        if p:
            weight[p] += weight[v]
    weight[0] = n
    return TreeStats(weight, depth, max(depth))


def is_ancestor_oracle(forest: RootedForest, u: int, v: int) -> bool:
    """Brute force: walk up from ``v`` looking for ``u``."""
    forest.check_node(u)
    forest.check_node(v)
    par = forest.parent
    while v != ROOT:
        if v == u:
            return True
        v = par[v]
    return False


def ancestor_matrix(forest: RootedForest) -> np.ndarray:
    """``M[u, v]`` is True iff u is an ancestor of v (0-based rows/cols = id-1)."""
    n = forest.n
    par = forest.parent
    m = np.zeros((n, n), dtype=bool)
    for v in range(1, n + 1):
        w = v
        while w != ROOT:
            m[w - 1, v - 1] = True
            w = par[w]
    return m


class AncestorOracle:
    """Batch ancestor queries via binary lifting, for forests too large for
    the quadratic matrix.  Deliberately shares nothing with the labeling code."""

    def __init__(self, forest: RootedForest):
        n = forest.n
        par = np.asarray(forest.parent, dtype=np.int64)
        stats = compute_stats(forest)
        self.depth = np.asarray(stats.depth, dtype=np.int64)
        levels = max(1, int(stats.forest_depth).bit_length())
        up = [par]
        for _ in range(1, levels):
            up.append(up[-1][up[-1]])
        self.up = up
        self.n = n

    def query(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        diff = self.depth[vs] - self.depth[us]
        ok = diff >= 0
        w = vs.copy()
        diff = np.where(ok, diff, 0)
        for j, table in enumerate(self.up):
            bit = (diff >> j) & 1
            w = np.where(bit == 1, table[w], w)
        return ok & (w == us)


# ----------------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------------

def parse_forest(text: str) -> RootedForest:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s:
            rows.append((lineno, s))
    if not rows:
        raise ForestFormatError("empty input")
    lineno, head = rows[0]
    try:
        n = int(head)
    except ValueError:
        raise ForestFormatError(f"expected node count, got {head!r}", lineno) from None
    if n < 1:
        raise ForestFormatError(f"node count must be positive, got {n}", lineno)
    body = rows[1:]
    if len(body) < n:
        last = rows[-1][0]
        raise ForestFormatError(f"expected {n} parent lines, found {len(body)}", last)
    if len(body) > n:
        raise ForestFormatError("trailing data after the last parent line", body[n][0])
    parent = [0] * (n + 1)
    line_of = [0] * (n + 1)
    for v, (lineno, s) in enumerate(body, start=1):
        try:
            p = int(s)
        except ValueError:
            raise ForestFormatError(f"parent of node {v} is not an integer: {s!r}", lineno) from None
        if not 0 <= p <= n:
            raise ForestFormatError(f"node {v} refers to missing parent {p}", lineno)
        if p == v:
            raise ForestFormatError(f"cycle: node {v} is its own parent", lineno)
        parent[v] = p
        line_of[v] = lineno
    bad = find_cycle_node(parent)
    if bad is not None:
        raise ForestFormatError(f"cycle through node {bad}", line_of[bad])
    return RootedForest(n, tuple(parent))


def serialize_forest(forest: RootedForest) -> str:
    return "\n".join([str(forest.n), *map(str, forest.parent[1:])])


# ----------------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------------

def path(n: int) -> RootedForest:
    return RootedForest.from_parents([0] + list(range(1, n)))


def star(n: int) -> RootedForest:
    return RootedForest.from_parents([0] + [1] * (n - 1))


def complete_binary(n: int) -> RootedForest:
    """Heap-ordered complete binary tree: parent(i) = i // 2."""
    return RootedForest.from_parents([i // 2 for i in range(1, n + 1)])


def caterpillar(n: int) -> RootedForest:
    """A backbone path of ceil(n/2) nodes; the remaining nodes hang as leaves
    off the first backbone nodes, one each."""
    s = (n + 1) // 2
    parents = [0] + list(range(1, s))
    parents += list(range(1, n - s + 1))
    return RootedForest.from_parents(parents)


def random_recursive(n: int, seed: int | None = None) -> RootedForest:
    rng = random.Random(seed)
    return RootedForest.from_parents([0] + [rng.randint(1, i - 1) for i in range(2, n + 1)])


def random_bounded_depth(n: int, d: int, seed: int | None = None) -> RootedForest:
    """Random tree whose depth never exceeds ``d``; with d == 1 every node is a root."""
    if d < 1:
        raise ValueError("depth bound must be >= 1")
    rng = random.Random(seed)
    parents = [0]
    depth = [0, 1]
    open_nodes = [1] if d > 1 else []
    for i in range(2, n + 1):
        if not open_nodes:
            parents.append(0)
            depth.append(1)
            continue
        p = open_nodes[rng.randrange(len(open_nodes))]
        parents.append(p)
        depth.append(depth[p] + 1)
        if depth[i] < d:
            open_nodes.append(i)
    return RootedForest.from_parents(parents)


def skewed_binary(h: int) -> RootedForest:
    """Perfect binary tree of height ``h`` plus one extra leaf under the leftmost leaf.

    The extra leaf breaks every weight tie along the left edge, so the heavy
    path runs the full height while every spine stays short.
    """
    if h < 1:
        raise ValueError("height must be >= 1")
    size = (1 << h) - 1
    parents = [i // 2 for i in range(1, size + 1)]
    parents.append(1 << (h - 1))
    return RootedForest.from_parents(parents)


def generate(kind: str, n: int | None = None, *, d: int | None = None,
             h: int | None = None, seed: int | None = None) -> RootedForest:
    if kind == "skewed_binary":
        if h is None:
            raise ValueError("skewed_binary needs h")
        return skewed_binary(h)
    if n is None or n < 1:
        raise ValueError(f"{kind} needs a size n >= 1")
    if kind == "path":
        return path(n)
    if kind == "star":
        return star(n)
    if kind == "complete_binary":
        return complete_binary(n)
    if kind == "caterpillar":
        return caterpillar(n)
    if kind == "random_recursive":
        return random_recursive(n, seed)
    if kind == "random_bounded_depth":
        if d is None:
            raise ValueError("random_bounded_depth needs d")
        return random_bounded_depth(n, d, seed)
    raise ValueError(f"unknown forest kind {kind!r}; choose from {', '.join(KINDS)}")


def enumerate_increasing_trees(n: int) -> Iterator[RootedForest]:
    """All parent arrays with parent(i) in [1, i-1]: (n-1)! labeled trees."""
    if not 1 <= n <= 9:
        raise ValueError("n must be in [1, 9]")
    choices = [range(1, i) for i in range(2, n + 1)]
    for combo in itertools.product(*choices):
        yield RootedForest(n, (0, 0, *combo))
