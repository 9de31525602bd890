"""Command-line entry point: ``python3 -m ancestry <command> ...``."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass

from . import baselines, bounded, optimal
from .decomposition import HEAVY, fold, spine_decomposition_depth
from .errors import BinOverflowError, DepthBoundError, ForestFormatError, InvalidNodeError, LabelError
from .forest import KINDS, RootedForest, compute_stats, enumerate_increasing_trees, generate, parse_forest, serialize_forest
from .intervals import assign_rooted_forest
from .labels import Context, Label, read_label_file, write_label_file

SCHEMES = ("bounded", "parenthood", "optimal", "knr", "rand")


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# scheme dispatch shared by label / query / verify / bench
# ---------------------------------------------------------------------------

def label_with(scheme: str, forest: RootedForest, mode: str | None = None,
               n: int | None = None, d: int | None = None, seed: int | None = None):
    """Return (context, labels) with labels[0] unused."""
    if scheme in ("bounded", "parenthood"):
        mode = mode or bounded.FIXED_N
        fn = bounded.label_forest_bounded if scheme == "bounded" else bounded.label_forest_parenthood
        res = fn(forest, mode, n=n, d=d)
        return res.context, res.labels
    if mode is not None:
        raise CliError(f"--mode applies only to bounded and parenthood, not {scheme}")
    if scheme == "optimal":
        res = optimal.label_forest_optimal(forest, n)
        return res.context, res.labels
    if scheme == "knr":
        return Context("knr"), baselines.knr_label(forest)
    if scheme == "rand":
        if seed is None:
            raise CliError("rand needs --seed")
        return Context("rand", seed=seed), baselines.rand_label_bits(forest, seed)
    raise CliError(f"unknown scheme {scheme!r}")


def decide(context: Context, l1: Label, l2: Label) -> bool:
    s = context.scheme
    if s == "bounded":
        return bounded.is_ancestor_bounded(l1, l2, context)
    if s == "parenthood":
        return bounded.is_parent(l1, l2, context)
    if s == "optimal":
        return optimal.is_ancestor_consistent(l1, l2, context.n)
    if s == "knr":
        return baselines.knr_is_ancestor(l1, l2)
    if s == "rand":
        return baselines.rand_decide(l1.value, l2.value)
    raise CliError(f"unknown scheme {s!r}")


def truth_for(scheme: str, forest: RootedForest):
    """Ground-truth predicate matching what the scheme's decoder answers."""
    from .forest import is_ancestor_oracle

    if scheme == "parenthood":
        return lambda u, v: forest.parent[v] == u
    return lambda u, v: is_ancestor_oracle(forest, u, v)


def find_mismatch(scheme, forest, context, labels):
    truth = truth_for(scheme, forest)
    n = forest.n
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            try:
                got = decide(context, labels[u], labels[v])
            except LabelError:
                return u, v
            if got != truth(u, v):
                if scheme == "rand" and not truth(u, v):
                    continue  # one-sided error is allowed
                return u, v
    return None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read_forest(path: str) -> RootedForest:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_forest(text)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    f = generate(args.kind, args.n, d=args.d, h=args.h, seed=args.seed)
    _write(args.out, serialize_forest(f) + "\n")
    return 0


def cmd_label(args) -> int:
    forest = _read_forest(args.inp)
    ctx, labels = label_with(args.scheme, forest, args.mode, args.n, args.d, args.seed)
    _write(args.out, write_label_file(ctx, labels))
    return 0


def cmd_query(args) -> int:
    ctx, labels = read_label_file(open(args.labels).read())
    for node in (args.u, args.v):
        if node not in labels:
            raise InvalidNodeError(f"node {node} has no label in {args.labels}")
    yes = decide(ctx, labels[args.u], labels[args.v])
    word = "parent" if ctx.scheme == "parenthood" else "ancestor"
    print(word if yes else f"not-{word}")
    return 0


def cmd_verify(args) -> int:
    schemes = SCHEMES if args.scheme == "all" else (args.scheme,)
    if args.corpus is not None:
        if args.labels:
            raise CliError("--labels needs --in, not --corpus")
        count = 0
        for n in range(1, args.corpus + 1):
            for forest in enumerate_increasing_trees(n):
                for scheme in schemes:
                    modes = bounded.MODES if scheme in ("bounded", "parenthood") and args.mode is None else (args.mode,)
                    for mode in modes:
                        kw = dict(n=args.corpus, d=args.corpus) if mode == bounded.FIXED_ND else {}
                        ctx, labels = label_with(scheme, forest, mode, seed=args.seed if scheme == "rand" else None, **kw)
                        bad = find_mismatch(scheme, forest, ctx, labels)
                        if bad:
                            print(f"FAIL {scheme} {mode or ''} parents={list(forest.parent[1:])} pair={bad}")
                            return 1
                count += 1
        print(f"PASS {count} trees, schemes: {', '.join(schemes)}")
        return 0
    if args.inp is None:
        raise CliError("verify needs --in FILE or --corpus NMAX")
    forest = _read_forest(args.inp)
    if args.labels:
        ctx, given = read_label_file(open(args.labels).read())
        labels = [None] + [given.get(v) for v in range(1, forest.n + 1)]
        if None in labels[1:]:
            raise CliError("label file does not cover every node")
        targets = [(ctx.scheme, ctx, labels)]
    else:
        targets = []
        for scheme in schemes:
            ctx, labels = label_with(scheme, forest, args.mode if scheme in ("bounded", "parenthood") else None,
                                     args.n, args.d, args.seed if scheme == "rand" else None)
            targets.append((scheme, ctx, labels))
    for scheme, ctx, labels in targets:
        bad = find_mismatch(scheme, forest, ctx, labels)
        if bad:
            print(f"FAIL {scheme}: pair {bad[0]} {bad[1]}")
            return 1
    print(f"PASS {forest.n} nodes, schemes: {', '.join(t[0] for t in targets)}")
    return 0


def parse_sizes(text: str) -> list[int]:
    """'2^10..2^20' (powers of two), or a comma list of ints / 2^k terms."""
    def one(tok):
        tok = tok.strip()
        if "^" in tok:
            base, exp = tok.split("^")
            return int(base) ** int(exp)
        return int(tok)

    if ".." in text:
        lo, hi = text.split("..")
        lo_v, hi_v = one(lo), one(hi)
        if "^" in lo and "^" in hi:
            return [1 << e for e in range(lo_v.bit_length() - 1, hi_v.bit_length())]
        return list(range(lo_v, hi_v + 1))
    return [one(t) for t in text.split(",") if t.strip()]


@dataclass
class BenchReport:
    scheme: str
    n: int
    d: int | None
    max_label_bits: int
    mean_label_bits: float
    build_ns: int | None
    queries_per_sec: float | None
    seed: int
    shape: str


def bench_one(scheme, shape, n, seed, queries, timing=True, mode=None) -> BenchReport:
    forest = generate(shape, n if shape != "skewed_binary" else None, d=8,
                      h=max(1, (n.bit_length() - 1)), seed=seed)
    t0 = time.perf_counter_ns()
    ctx, labels = label_with(scheme, forest, mode, seed=seed if scheme == "rand" else None)
    build = time.perf_counter_ns() - t0
    lens = [lab.length for lab in labels[1:]]
    d = None
    if scheme == "bounded":
        d = spine_decomposition_depth(forest)
    elif scheme == "parenthood":
        d = compute_stats(forest).forest_depth
    elif scheme == "optimal":
        d = optimal.FOLDED_D
    qps = None
    if timing:
        rng = random.Random(seed)
        pairs = [(labels[rng.randint(1, forest.n)], labels[rng.randint(1, forest.n)]) for _ in range(queries)]
        t0 = time.perf_counter()
        for a, b in pairs:
            decide(ctx, a, b)
        qps = queries / max(time.perf_counter() - t0, 1e-9)
    return BenchReport(scheme, forest.n, d, max(lens), sum(lens) / len(lens),
                       build if timing else None, qps, seed, shape)


def cmd_bench(args) -> int:
    sizes = parse_sizes(args.sizes)
    out = []
    for scheme in args.scheme.split(","):
        for n in sizes:
            for shape in args.shapes.split(","):
                rep = bench_one(scheme, shape, n, args.seed, args.queries, timing=not args.no_timing)
                out.append(json.dumps(asdict(rep), sort_keys=True))
    _write(args.json, "\n".join(out) + "\n")
    return 0


def cmd_poset_demo(args) -> int:
    from .poset import embed_poset, intersect_forests, random_extension_set, universal_domain_size, verify_embedding

    n = args.m if args.n is None else args.n
    if args.m > n:
        raise CliError(f"--m {args.m} exceeds --n {n}")
    ext = random_extension_set(args.m, args.k, args.seed)
    poset = intersect_forests(ext)
    emb = embed_poset(ext, n)
    ok, bad = verify_embedding(poset, emb)
    ell = optimal.label_length(n)
    size_u = universal_domain_size(n, args.k)
    print(f"elements: {args.m}")
    print(f"relations: {int(poset.leq.sum())}")
    print(f"label bits: {ell}")
    print(f"|U| = 2^{args.k * ell} = {size_u}")
    print(f"n^(2k) = {n ** (2 * args.k)}")
    print("verified" if ok else f"FAILED: {bad}")
    return 0 if ok else 1


def cmd_decompose(args) -> int:
    forest = _read_forest(args.inp)
    fo = fold(forest)
    lines = []
    for v in range(1, forest.n + 1):
        cls = "HEAVY" if fo.node_class[v] == HEAVY else "APEX"
        lines.append(f"{v} {cls} {fo.apex_of[v]} {fo.fold_parent[v]} {fo.dfs_num[v]}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_intervals(args) -> int:
    forest = _read_forest(args.inp)
    asg = assign_rooted_forest(forest, d=args.d)
    lines = [f"# n={asg.params.n} d={asg.params.d} N={asg.params.N}"]
    for v in range(1, forest.n + 1):
        k, a, b = asg.interval[v]
        lo, hi = asg.bounds(v)
        lines.append(f"{v} {k} {a} {b} {lo} {hi}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ancestry", description="Ancestry labeling schemes for rooted forests.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a forest in parent-array format")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int, help="depth bound for random_bounded_depth")
    g.add_argument("--h", type=int, help="height for skewed_binary")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    lab = sub.add_parser("label", help="label every node of a forest")
    lab.add_argument("--scheme", choices=SCHEMES, required=True)
    lab.add_argument("--mode", choices=bounded.MODES)
    lab.add_argument("--in", dest="inp", required=True)
    lab.add_argument("--out")
    lab.add_argument("--n", type=int)
    lab.add_argument("--d", type=int)
    lab.add_argument("--seed", type=int)
    lab.set_defaults(func=cmd_label)

    q = sub.add_parser("query", help="decide ancestry from two labels alone")
    q.add_argument("--labels", required=True)
    q.add_argument("u", type=int)
    q.add_argument("v", type=int)
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="compare decoders with brute force on every pair")
    v.add_argument("--scheme", choices=SCHEMES + ("all",), default="all")
    v.add_argument("--mode", choices=bounded.MODES)
    src = v.add_mutually_exclusive_group()
    src.add_argument("--in", dest="inp")
    src.add_argument("--corpus", type=int, metavar="NMAX")
    v.add_argument("--labels", help="check this label file instead of freshly computed labels")
    v.add_argument("--n", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="label sizes and timings as JSON lines")
    b.add_argument("--scheme", default="optimal", help="comma list of schemes")
    b.add_argument("--sizes", default="2^10..2^14")
    b.add_argument("--shapes", default="random_recursive", help="comma list of forest kinds")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--queries", type=int, default=10000)
    b.add_argument("--json", help="output file (default stdout)")
    b.add_argument("--no-timing", action="store_true", help="null the timing fields so output is reproducible")
    b.set_defaults(func=cmd_bench)

    pd = sub.add_parser("poset-demo", help="embed a random low-dimension poset into the label domain")
    pd.add_argument("--m", type=int, default=20)
    pd.add_argument("--k", type=int, default=2)
    pd.add_argument("--n", type=int, help="label family size (default m)")
    pd.add_argument("--seed", type=int, default=0)
    pd.set_defaults(func=cmd_poset_demo)

    dc = sub.add_parser("decompose", help="dump class, apex, folded parent and DFS number per node")
    dc.add_argument("--in", dest="inp", required=True)
    dc.add_argument("--out")
    dc.set_defaults(func=cmd_decompose)

    iv = sub.add_parser("intervals", help="dump the interval of every node")
    iv.add_argument("--in", dest="inp", required=True)
    iv.add_argument("--dump", action="store_true", help="print one line per node (the default output)")
    iv.add_argument("--d", type=int, help="spine depth bound (default: the forest's own)")
    iv.add_argument("--out")
    iv.set_defaults(func=cmd_intervals)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ForestFormatError, InvalidNodeError, LabelError, DepthBoundError,
            BinOverflowError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
