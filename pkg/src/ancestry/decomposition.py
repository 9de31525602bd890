"""Spine decomposition, folding decomposition and apex-first DFS numbering.

Every recursion tree of the spine decomposition is the full subtree of its
root, so the whole recursive decomposition falls out of one pass over the
subtree weights: a non-root node is HEAVY exactly when its parent lies on a
spine and its weight exceeds half the weight of that spine's apex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .forest import ROOT, RootedForest, TreeStats, compute_stats

APEX = 0
HEAVY = 1


@dataclass(frozen=True)
class SpineDecomposition:
    forest: RootedForest
    weight: list[int]
    node_class: list[int]
    apex_of: list[int]
    heavy_child: list[int]  # 0 when the node ends its spine

    def spine(self, apex: int) -> list[int]:
        out = [apex]
        v = self.heavy_child[apex]
        while v:
            out.append(v)
            v = self.heavy_child[v]
        return out

    def spine_forests(self, apex: int) -> list[list[int]]:
        """Roots of the forests F_1..F_s hanging off each spine node."""
        ch = self.forest.children
        return [[c for c in ch[v] if self.node_class[c] == APEX] for v in self.spine(apex)]

    @cached_property
    def spine_end(self) -> list[int]:
        """For every node, the last node of the spine it lies on."""
        end = list(range(self.forest.n + 1))
        for v in reversed(self.forest.order):
            h = self.heavy_child[v]
            if h:
                end[v] = end[h]
        return end

    @cached_property
    def depth(self) -> int:
        pos = [0] * (self.forest.n + 1)
        best = 0
        par = self.forest.parent
        for v in self.forest.order:
            pos[v] = pos[par[v]] + 1 if self.node_class[v] == HEAVY else 1
            if pos[v] > best:
                best = pos[v]
        return best


def spine_decomposition(forest: RootedForest, stats: TreeStats | None = None) -> SpineDecomposition:
    if stats is None:
        stats = compute_stats(forest)
    n = forest.n
    par = forest.parent
    w = stats.weight
    cls = [APEX] * (n + 1)
    apex_of = list(range(n + 1))
    heavy_child = [0] * (n + 1)
    for v in forest.order:
        p = par[v]
        if p == ROOT:
            continue
        # every node lies on some spine, so only the weight test matters;
        # at most one child can pass it
        a = apex_of[p]
        if 2 * w[v] > w[a]:
            cls[v] = HEAVY
            apex_of[v] = a
            heavy_child[p] = v
    return SpineDecomposition(forest, w, cls, apex_of, heavy_child)


def compute_spine(forest: RootedForest, root: int, stats: TreeStats | None = None):
    """One level of the decomposition for the tree rooted at ``root``.

    Applies the iterative rule directly (not the cached recursive pass) and
    returns ``(spine, forests)`` where ``forests[i]`` lists the roots of F_i.
    """
    if stats is None:
        stats = compute_stats(forest)
    w = stats.weight
    ch = forest.children
    spine = [root]
    forests = []
    v = root
    while True:
        nxt = 0
        for c in ch[v]:
            if 2 * w[c] > w[root]:
                nxt = c
                break
        forests.append([c for c in ch[v] if c != nxt])
        if not nxt:
            return spine, forests
        spine.append(nxt)
        v = nxt


def spine_decomposition_depth(forest: RootedForest) -> int:
    return spine_decomposition(forest).depth


@dataclass(frozen=True)
class FoldedForest:
    """T*: every heavy node re-hung directly under its apex."""

    decomposition: SpineDecomposition
    fold_parent: list[int]
    apex_of: list[int]
    dfs_num: list[int]

    @property
    def node_class(self) -> list[int]:
        return self.decomposition.node_class

    @cached_property
    def by_dfs(self) -> list[int]:
        order = [0] * (len(self.dfs_num))
        for v in range(1, len(self.dfs_num)):
            order[self.dfs_num[v]] = v
        return order

    @cached_property
    def children(self) -> list[list[int]]:
        """T* children of every node in increasing DFS order (index 0: roots)."""
        ch: list[list[int]] = [[] for _ in range(len(self.fold_parent))]
        fp = self.fold_parent
        for v in self.by_dfs[1:]:
            ch[fp[v]].append(v)
        return ch

    @cached_property
    def weight(self) -> list[int]:
        """Subtree sizes in T*."""
        dec = self.decomposition
        w = dec.weight
        hc = dec.heavy_child
        # the T* subtree of a heavy node v is v plus its apex children's subtrees
        out = [0] * len(w)
        for v in range(1, len(w)):
            h = hc[v]
            if dec.node_class[v] == HEAVY:
                out[v] = w[v] - (w[h] if h else 0)
            else:
                out[v] = w[v]
        return out

    def as_forest(self) -> RootedForest:
        return RootedForest(len(self.fold_parent) - 1, tuple(self.fold_parent))


def dfs_apex_first(forest: RootedForest, decomposition: SpineDecomposition) -> list[int]:
    """DFS numbers (1-based, continuing across roots in id order), visiting apex
    children in id order before the heavy child."""
    n = forest.n
    ch = forest.children
    hc = decomposition.heavy_child
    num = [0] * (n + 1)
    counter = 0
    stack = list(reversed(ch[0]))
    while stack:
        v = stack.pop()
        counter += 1
        num[v] = counter
        h = hc[v]
        if h:
            stack.append(h)
        kids = ch[v]
        for i in range(len(kids) - 1, -1, -1):
            c = kids[i]
            if c != h:
                stack.append(c)
    return num


def fold(forest: RootedForest, decomposition: SpineDecomposition | None = None) -> FoldedForest:
    if decomposition is None:
        decomposition = spine_decomposition(forest)
    par = forest.parent
    cls = decomposition.node_class
    apex_of = decomposition.apex_of
    fold_parent = list(par)
    for v in range(1, forest.n + 1):
        if cls[v] == HEAVY:
            fold_parent[v] = apex_of[v]
    return FoldedForest(decomposition, fold_parent, apex_of, dfs_apex_first(forest, decomposition))
