import random

from hypothesis import strategies as st

from ancestry.forest import RootedForest


@st.composite
def forests(draw, max_n=40, min_n=1):
    """Random forests with shuffled ids, so parents need not precede children."""
    n = draw(st.integers(min_n, max_n))
    raw = [0] + [draw(st.integers(0, i - 1)) for i in range(2, n + 1)]
    perm = list(range(1, n + 1))
    random.Random(draw(st.integers(0, 2**32))).shuffle(perm)
    parent = [0] * (n + 1)
    for i, p in enumerate(raw, start=1):
        parent[perm[i - 1]] = perm[p - 1] if p else 0
    return RootedForest(n, tuple(parent))


def deep_folded_tree():
    """17 nodes whose folded forest has a spine of three nodes.

    Spine 1 -> 2 -> 3 with eight leaves under 3; node 2 also carries 12, which
    has a leaf 14 and a heavy child 13 with three leaves.  In the folded
    forest node 2 heads the subtree {2, 12, 13, 14, 15, 16, 17} whose spine
    is 2 -> 12 -> 13."""
    parents = [0, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 2, 12, 12, 13, 13, 13]
    return RootedForest.from_parents(parents)


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
