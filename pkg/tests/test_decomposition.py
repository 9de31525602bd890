import random

from hypothesis import given, settings

from ancestry.decomposition import (
    APEX, HEAVY, compute_spine, dfs_apex_first, fold, spine_decomposition,
    spine_decomposition_depth,
)
from ancestry.forest import (
    compute_stats, complete_binary, enumerate_increasing_trees, generate, is_ancestor_oracle,
    path, star,
)
from conftest import forests, deep_folded_tree


def test_path_spine():
    spine, fs = compute_spine(path(5), 1)
    assert spine == [1, 2, 3]
    assert fs == [[], [], [4]]


def test_complete_binary_spine_is_root():
    assert compute_spine(complete_binary(7), 1)[0] == [1]


def test_singleton_spine():
    assert compute_spine(path(1), 1) == ([1], [[]])


def test_depths():
    assert spine_decomposition_depth(path(5)) == 3
    for n in (1, 3, 7, 15, 31, 1023):
        assert spine_decomposition_depth(complete_binary(n)) == 1
    assert spine_decomposition_depth(star(50)) == 1


def test_fold_path():
    fo = fold(path(5))
    assert fo.fold_parent[1:] == [0, 1, 1, 3, 4]
    assert [fo.node_class[v] for v in range(1, 6)] == [APEX, HEAVY, HEAVY, APEX, APEX]
    # node 5 heads its own one-node recursion tree, so it is its own apex
    assert fo.apex_of[1:] == [1, 1, 1, 4, 5]
    assert fo.dfs_num[1:] == [1, 2, 3, 4, 5]


def test_fold_star_unchanged():
    f = star(9)
    fo = fold(f)
    assert tuple(fo.fold_parent) == f.parent
    assert all(fo.node_class[v] == APEX for v in range(1, 10))


@given(forests(max_n=60))
def test_spine_properties(f):
    st = compute_stats(f)
    dec = spine_decomposition(f, st)
    for r in range(1, f.n + 1):
        if dec.node_class[r] != APEX:
            continue
        spine = dec.spine(r)
        spine2, fs = compute_spine(f, r, st)
        assert spine == spine2
        for i in range(1, len(spine)):
            assert f.parent[spine[i]] == spine[i - 1]
            assert 2 * st.weight[spine[i]] > st.weight[r]
        for roots in fs:
            for c in roots:
                assert 2 * st.weight[c] <= st.weight[r]
    assert spine_decomposition_depth(f) <= st.forest_depth


@given(forests(max_n=60))
def test_apex_of_is_nearest_apex_ancestor(f):
    fo = fold(f)
    for v in range(1, f.n + 1):
        w = v
        while fo.node_class[w] != APEX:
            w = f.parent[w]
        assert fo.apex_of[v] == w
        assert (fo.apex_of[v] == v) == (fo.node_class[v] == APEX)


def _folded_ancestor(fo, v, u):
    while u:
        if u == v:
            return True
        u = fo.fold_parent[u]
    return False


def _check_fold(f):
    fo = fold(f)
    tstar = fo.as_forest()
    assert sum(1 for v in range(1, f.n + 1) if tstar.parent[v]) == f.n - len(f.roots)
    for v in range(1, f.n + 1):
        for u in range(1, f.n + 1):
            in_star = _folded_ancestor(fo, v, u)
            if in_star:
                assert is_ancestor_oracle(f, v, u)
                if v != u:
                    assert _folded_ancestor(fo, v, fo.apex_of[u])
            a = fo.apex_of[v]
            via_apex = a != u and _folded_ancestor(fo, a, u) and fo.dfs_num[v] < fo.dfs_num[u]
            assert is_ancestor_oracle(f, v, u) == (in_star or via_apex)


def test_fold_ancestry_exhaustive():
    for n in range(1, 8):
        for f in enumerate_increasing_trees(n):
            _check_fold(f)


def test_fold_ancestry_random():
    rng = random.Random(2)
    for i in range(20):
        kind = rng.choice(["random_recursive", "caterpillar", "random_bounded_depth"])
        _check_fold(generate(kind, rng.randint(20, 90), d=4, seed=i))


@given(forests(max_n=80))
@settings(max_examples=60)
def test_dfs_visits_apex_children_before_heavy(f):
    fo = fold(f)
    dec = fo.decomposition
    num = fo.dfs_num
    assert sorted(num[1:]) == list(range(1, f.n + 1))
    for v in range(1, f.n + 1):
        h = dec.heavy_child[v]
        apex_kids = [c for c in f.children[v] if c != h]
        assert [num[c] for c in apex_kids] == sorted(num[c] for c in apex_kids)
        if h and apex_kids:
            assert max(num[c] for c in apex_kids) < num[h]


@given(forests(max_n=80))
@settings(max_examples=60)
def test_folded_children_in_dfs_order(f):
    fo = fold(f)
    for kids in fo.children:
        assert [fo.dfs_num[c] for c in kids] == sorted(fo.dfs_num[c] for c in kids)
    w = compute_stats(fo.as_forest()).weight
    assert list(fo.weight[1:]) == w[1:]


def test_folded_spine_depth_can_reach_three():
    # the folded forest's own spines are at most three nodes long, and three is reached
    f = deep_folded_tree()
    tstar = fold(f).as_forest()
    assert spine_decomposition_depth(tstar) == 3
    assert compute_spine(tstar, 2)[0] == [2, 12, 13]


@given(forests(max_n=120))
@settings(max_examples=80)
def test_folded_spine_depth_at_most_three(f):
    assert spine_decomposition_depth(fold(f).as_forest()) <= 3


def test_folded_nodes_have_at_most_one_spine_child():
    for n in range(1, 8):
        for f in enumerate_increasing_trees(n):
            tstar = fold(f).as_forest()
            dec = spine_decomposition(tstar)
            for v in range(1, n + 1):
                assert sum(dec.node_class[c] == HEAVY for c in tstar.children[v]) <= 1


def test_dfs_singleton():
    f = path(1)
    assert dfs_apex_first(f, spine_decomposition(f)) == [0, 1]
