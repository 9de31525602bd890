import numpy as np
import pytest
from hypothesis import given, settings

from ancestry.errors import ForestFormatError, InvalidNodeError
from ancestry.forest import (
    AncestorOracle, RootedForest, ancestor_matrix, compute_stats, enumerate_increasing_trees,
    generate, is_ancestor_oracle, parse_forest, path, serialize_forest, skewed_binary, star,
)
from conftest import forests


def test_parse_path():
    f = parse_forest("5\n0\n1\n2\n3\n4\n")
    assert f.parent == (0, 0, 1, 2, 3, 4)
    assert f.roots == [1]


def test_parse_tolerates_crlf_and_blank_lines():
    f = parse_forest("3\r\n0\r\n\r\n1\r\n  1  \r\n")
    assert f.children[1] == [2, 3]


@pytest.mark.parametrize("text, line, fragment", [
    ("", None, "empty"),
    ("x\n", 1, "node count"),
    ("3\n0\n1\n", 3, "expected 3"),
    ("2\n0\n1\n7\n", 4, "trailing"),
    ("2\n0\nq\n", 3, "not an integer"),
    ("2\n0\n5\n", 3, "missing parent"),
    ("2\n0\n2\n", 3, "own parent"),
    ("3\n3\n1\n2\n", 2, "cycle"),
])
def test_parse_errors(text, line, fragment):
    with pytest.raises(ForestFormatError) as exc:
        parse_forest(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)


def test_serialize_round_trip():
    f = generate("random_recursive", 50, seed=3)
    assert parse_forest(serialize_forest(f)) == f


def test_constructor_rejects_cycle():
    with pytest.raises(ValueError):
        RootedForest(2, (0, 2, 1))


def test_stats_path():
    st = compute_stats(path(5))
    assert st.weight[1:] == [5, 4, 3, 2, 1]
    assert st.depth[1:] == [1, 2, 3, 4, 5]
    assert st.forest_depth == 5


@given(forests())
def test_weights_sum(f):
    st = compute_stats(f)
    assert sum(st.weight[r] for r in f.roots) == f.n
    for v in range(1, f.n + 1):
        assert st.weight[v] == 1 + sum(st.weight[c] for c in f.children[v])


def test_oracle_axioms_exhaustive():
    for n in range(1, 7):
        for f in enumerate_increasing_trees(n):
            m = ancestor_matrix(f)
            assert m.diagonal().all()
            off = m & m.T
            np.fill_diagonal(off, False)
            assert not off.any()
            mi = m.astype(int)
            assert not ((mi @ mi > 0) & ~m).any()


def test_oracle_star_siblings():
    f = star(5)
    assert is_ancestor_oracle(f, 1, 3)
    assert not is_ancestor_oracle(f, 2, 3)
    with pytest.raises(InvalidNodeError):
        is_ancestor_oracle(f, 0, 1)


@given(forests(max_n=60))
@settings(max_examples=50)
def test_binary_lifting_matches_walk(f):
    o = AncestorOracle(f)
    us, vs = np.meshgrid(np.arange(1, f.n + 1), np.arange(1, f.n + 1), indexing="ij")
    got = o.query(us.ravel(), vs.ravel()).reshape(f.n, f.n)
    assert (got == ancestor_matrix(f)).all()


def test_enumeration_counts():
    import math
    for n in range(1, 9):
        assert sum(1 for _ in enumerate_increasing_trees(n)) == math.factorial(n - 1)


@pytest.mark.parametrize("d", [1, 2, 4, 8])
def test_bounded_depth_generator(d):
    for seed in range(5):
        f = generate("random_bounded_depth", 300, d=d, seed=seed)
        assert compute_stats(f).forest_depth <= d


def test_generators_deterministic_and_sized():
    for kind in ("path", "star", "complete_binary", "caterpillar", "random_recursive"):
        a = generate(kind, 37, seed=9)
        assert a.n == 37
        assert a == generate(kind, 37, seed=9)
    assert skewed_binary(4).n == 16
    with pytest.raises(ValueError):
        generate("banana", 3)


def _heavy_path_length(f, root):
    st = compute_stats(f)
    length, v = 1, root
    while f.children[v]:
        v = max(f.children[v], key=lambda c: st.weight[c])
        length += 1
    return length


def test_skewed_binary_long_heavy_path_short_spines():
    from ancestry.decomposition import spine_decomposition_depth
    for h in range(2, 10):
        f = skewed_binary(h)
        assert _heavy_path_length(f, 1) == h + 1
        assert spine_decomposition_depth(f) <= 2
