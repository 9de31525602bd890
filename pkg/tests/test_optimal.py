import math
import random

import numpy as np
import pytest
from hypothesis import given, settings

from ancestry.decomposition import APEX
from ancestry.errors import LabelError
from ancestry.forest import AncestorOracle, ancestor_matrix, enumerate_increasing_trees, generate, path, star
from ancestry.intervals import contains, precedes, strictly_contains
from ancestry.labels import Label
from ancestry.optimal import (
    BatchDecoder, decode_optimal, is_ancestor_consistent, is_ancestor_optimal,
    label_forest_optimal, label_length,
)
from conftest import forests, deep_folded_tree


def test_path5():
    lab = label_forest_optimal(path(5))
    ls = lab.labels
    lo, hi, alo, ahi = decode_optimal(ls[2], 5)
    assert (alo, ahi) == lab.assignment.bounds(1)
    assert strictly_contains((alo, ahi), (lo, hi))
    assert is_ancestor_optimal(ls[2], ls[4], 5)
    # node 4 is not inside I(2) in the folded forest, so only the apex test can accept it
    assert not contains(lab.assignment.bounds(2), lab.assignment.bounds(4))


def test_star_siblings_and_reflexive():
    ls = label_forest_optimal(star(6)).labels
    assert not is_ancestor_optimal(ls[2], ls[3], 6)
    assert not is_ancestor_optimal(ls[3], ls[2], 6)
    assert is_ancestor_optimal(ls[4], ls[4], 6)
    assert is_ancestor_consistent(ls[4], ls[4], 6)


def test_uniform_length():
    for n in (1, 2, 17, 1000):
        f = generate("random_recursive", n, seed=n)
        assert {x.length for x in label_forest_optimal(f).labels[1:]} == {label_length(n)}


def test_apex_decoding_corpus():
    for n in range(1, 9):
        for f in enumerate_increasing_trees(n):
            lab = label_forest_optimal(f)
            fo = lab.folded
            for v in range(1, n + 1):
                lo, hi, alo, ahi = decode_optimal(lab.labels[v], n)
                assert (lo, hi) == lab.assignment.bounds(v)
                assert (alo, ahi) == lab.assignment.bounds(fo.apex_of[v])
                if fo.node_class[v] == APEX:
                    assert (alo, ahi) == (lo, hi)


def test_decoders_corpus():
    for n in range(1, 8):
        for f in enumerate_increasing_trees(n):
            m = ancestor_matrix(f)
            ls = label_forest_optimal(f).labels
            for u in range(1, n + 1):
                for v in range(1, n + 1):
                    assert is_ancestor_optimal(ls[u], ls[v], n) == m[u - 1, v - 1]
                    assert is_ancestor_consistent(ls[u], ls[v], n) == m[u - 1, v - 1]


def test_two_conditions_against_oracle():
    # the ancestor relation splits exactly into "inside" and "inside the apex, after"
    for seed in range(10):
        f = generate("random_recursive", 80, seed=seed)
        lab = label_forest_optimal(f)
        b = lab.assignment.all_bounds()
        apex = lab.folded.apex_of
        m = ancestor_matrix(f)
        for v in range(1, f.n + 1):
            for u in range(1, f.n + 1):
                c1 = contains(b[v], b[u])
                c2 = strictly_contains(b[apex[v]], b[u]) and precedes(b[v], b[u])
                assert (c1 or c2) == m[v - 1, u - 1]


def test_three_node_spine_forest():
    f = deep_folded_tree()
    m = ancestor_matrix(f)
    ls = label_forest_optimal(f).labels
    for u in range(1, f.n + 1):
        for v in range(1, f.n + 1):
            assert is_ancestor_optimal(ls[u], ls[v], f.n) == m[u - 1, v - 1]


@given(forests(max_n=40))
@settings(max_examples=50)
def test_random_forests(f):
    n = f.n + 3
    m = ancestor_matrix(f)
    ls = label_forest_optimal(f, n).labels
    for u in range(1, f.n + 1):
        for v in range(1, f.n + 1):
            assert is_ancestor_consistent(ls[u], ls[v], n) == m[u - 1, v - 1]


def test_batch_matches_scalar():
    f = generate("caterpillar", 400)
    ls = label_forest_optimal(f).labels
    bd = BatchDecoder(ls[1:], 400)
    rng = np.random.default_rng(3)
    vs, us = rng.integers(0, 400, 2000), rng.integers(0, 400, 2000)
    d, dc = bd.decide(vs, us), bd.decide_consistent(vs, us)
    for i in range(2000):
        assert d[i] == is_ancestor_optimal(ls[vs[i] + 1], ls[us[i] + 1], 400)
        assert dc[i] == is_ancestor_consistent(ls[vs[i] + 1], ls[us[i] + 1], 400)


def test_large_forest_sampled():
    f = generate("random_recursive", 20000, seed=7)
    ls = label_forest_optimal(f).labels
    bd = BatchDecoder(ls[1:], f.n)
    rng = np.random.default_rng(1)
    us = rng.integers(1, f.n + 1, 50000)
    par = np.asarray(f.parent)
    vs = us.copy()
    for _ in range(3):  # mix in true ancestors
        step = rng.random(vs.size) < 0.5
        vs = np.where(step & (par[vs] > 0), par[vs], vs)
    vs = np.concatenate([vs, rng.integers(1, f.n + 1, 50000)])
    us = np.concatenate([us, rng.integers(1, f.n + 1, 50000)])
    truth = AncestorOracle(f).query(vs, us)
    assert (bd.decide(vs - 1, us - 1) == truth).all()
    assert (bd.decide_consistent(vs - 1, us - 1) == truth).all()


def test_consistency_cross_forest_sample():
    n = 64
    pool = []
    for seed in range(20):
        kind = random.Random(seed).choice(["random_recursive", "path", "star", "caterpillar"])
        pool.extend(label_forest_optimal(generate(kind, n, seed=seed)).labels[1:])
    rng = random.Random(0)
    for _ in range(20000):
        x, y, z = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        xy = is_ancestor_consistent(x, y, n)
        if xy and x != y:
            assert not is_ancestor_consistent(y, x, n)
        if xy and is_ancestor_consistent(y, z, n):
            assert is_ancestor_consistent(x, z, n)


def test_malformed():
    with pytest.raises(LabelError):
        decode_optimal(Label(0, label_length(10) - 1), 10)
    ls = label_forest_optimal(star(10)).labels
    lab = ls[1]  # an apex label: the apex fields must be zero
    bad = Label(lab.value | (1 << (lab.length - 3)), lab.length)
    with pytest.raises(LabelError):
        decode_optimal(bad, 10)


def test_size_overhead_stable():
    over = []
    for e in range(10, 21, 2):
        n = 1 << e
        over.append(label_length(n) - e - 3 * math.ceil(math.log2(e)))
    assert max(over) - min(over) <= 4
