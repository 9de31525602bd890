"""Posets of bounded tree-dimension and their embedding into the label domain.

Convention: x <= y iff x is an ancestor of y in every forest, so roots are
minimal.  Labels of the consistent decoder order the same way.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .forest import RootedForest, ancestor_matrix, random_recursive
from .labels import Label
from .optimal import is_ancestor_consistent, label_forest_optimal, label_length


@dataclass(frozen=True)
class Poset:
    m: int
    leq: np.ndarray  # leq[x-1, y-1]

    def check_axioms(self) -> tuple[bool, str | None]:
        r = self.leq
        if not r.diagonal().all():
            return False, "not reflexive"
        off = r & r.T
        np.fill_diagonal(off, False)
        if off.any():
            return False, "not anti-symmetric"
        ri = r.astype(np.int64)
        if ((ri @ ri > 0) & ~r).any():
            return False, "not transitive"
        return True, None


@dataclass(frozen=True)
class TreeExtensionSet:
    forests: tuple[RootedForest, ...]

    def __post_init__(self):
        if not self.forests:
            raise ValueError("need at least one forest")
        if len({f.n for f in self.forests}) != 1:
            raise ValueError("forests must share one ground set")

    @property
    def m(self) -> int:
        return self.forests[0].n

    @property
    def k(self) -> int:
        return len(self.forests)


def _relabel(forest: RootedForest, perm: list[int]) -> RootedForest:
    parent = [0] * (forest.n + 1)
    for v in range(1, forest.n + 1):
        p = forest.parent[v]
        parent[perm[v]] = perm[p] if p else 0
    return RootedForest(forest.n, tuple(parent))


def random_extension_set(m: int, k: int, seed: int | None = None) -> TreeExtensionSet:
    """k random forests on [1, m]: shuffled random recursive trees, some cut into several trees."""
    rng = random.Random(seed)
    forests = []
    for _ in range(k):
        base = random_recursive(m, rng.randrange(1 << 30))
        parent = list(base.parent)
        for v in range(2, m + 1):
            if rng.random() < 0.1:
                parent[v] = 0
        perm = [0] + rng.sample(range(1, m + 1), m)
        forests.append(_relabel(RootedForest(m, tuple(parent)), perm))
    return TreeExtensionSet(tuple(forests))


def intersect_forests(ext: TreeExtensionSet) -> Poset:
    leq = np.ones((ext.m, ext.m), dtype=bool)
    for f in ext.forests:
        leq &= ancestor_matrix(f)
    return Poset(ext.m, leq)


@dataclass(frozen=True)
class PosetEmbedding:
    n: int
    tuples: list  # element -> tuple of labels, index 0 unused


def embed_poset(ext: TreeExtensionSet, n: int | None = None) -> PosetEmbedding:
    n = ext.m if n is None else n
    if ext.m > n:
        raise ValueError(f"poset has {ext.m} elements but n={n}")
    per_forest = [label_forest_optimal(f, n).labels for f in ext.forests]
    tuples: list = [None] + [tuple(ls[x] for ls in per_forest) for x in range(1, ext.m + 1)]
    return PosetEmbedding(n, tuples)


def poset_leq(t1: tuple[Label, ...], t2: tuple[Label, ...], n: int) -> bool:
    if len(t1) != len(t2):
        raise ValueError("label tuples of different arity")
    return all(is_ancestor_consistent(a, b, n) for a, b in zip(t1, t2))


def verify_embedding(poset: Poset, emb: PosetEmbedding):
    """(True, None), or (False, reason) with the first offending pair."""
    tuples = emb.tuples
    seen = {}
    for x in range(1, poset.m + 1):
        if tuples[x] in seen:
            return False, ("not injective", seen[tuples[x]], x)
        seen[tuples[x]] = x
    for x in range(1, poset.m + 1):
        for y in range(1, poset.m + 1):
            try:
                got = poset_leq(tuples[x], tuples[y], emb.n)
            except ValueError:
                return False, ("undecodable", x, y)
            if got != bool(poset.leq[x - 1, y - 1]):
                return False, ("order mismatch", x, y)
    return True, None


def universal_domain_size(n: int, k: int) -> int:
    """|U| = 2^(k * label length): every k-tuple of labels is a point of U."""
    return 1 << (k * label_length(n))
