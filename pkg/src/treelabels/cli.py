"""Command-line front end.

Subcommands: ``gen`` writes a tree file, ``encode`` turns a tree file into a
label file, ``query`` answers distance queries from labels alone, ``verify``
sweeps decoder output against the oracle, and ``bench`` prints measured
label sizes next to their budgets.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .bitcodec import CodecError
from .errors import SchemeError
from .families import expand_unweighted, gen_hard_caterpillar, gen_hwa_tree
from .labelfile import SCHEMES, encode_tree, load_labels, save_labels
from .tree_model import (
    TreeError,
    gen_random_caterpillar,
    gen_random_tree,
    gen_weighted_path,
    parse_tree,
    serialize_tree,
)
from .verify import verify_labels

FAMILIES = (
    "random-tree",
    "caterpillar",
    "path",
    "hwa",
    "hwa-unweighted",
    "hard-caterpillar",
)


class UsageError(Exception):
    pass


def _need(args: argparse.Namespace, flag: str) -> int:
    val = getattr(args, flag.lstrip("-").replace("-", "_"))
    if val is None:
        raise UsageError(f"family {args.family!r} requires {flag}")
    return val


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "random-tree":
        t = gen_random_tree(_need(args, "--n"), args.seed)
    elif args.family == "caterpillar":
        t = gen_random_caterpillar(_need(args, "--n"), args.seed)
    elif args.family == "path":
        max_w = 1000 if args.W is None else args.W
        t = gen_weighted_path(_need(args, "--k"), max_w, args.seed)
    elif args.family == "hard-caterpillar":
        t = gen_hard_caterpillar(_need(args, "--n"), args.seed)
    else:
        hwa = gen_hwa_tree(_need(args, "--h"), _need(args, "--W"), args.a, seed=args.seed)
        t = hwa.tree
        if args.family == "hwa-unweighted":
            t, _ = expand_unweighted(t)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_tree(t))
    print(f"wrote {args.family} tree with {t.n} nodes to {args.out}")
    return 0


def _read_tree(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tree(fh.read())


def _cmd_encode(args: argparse.Namespace) -> int:
    t = _read_tree(args.tree)
    ls = encode_tree(t, args.scheme, eps=args.eps)
    save_labels(ls, args.out)
    sizes = ls.bit_sizes()
    print(
        f"wrote {ls.n} {ls.scheme} labels to {args.out} "
        f"(max {int(sizes.max())} bits, mean {float(sizes.mean()):.1f})"
    )
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    ls = load_labels(args.labels)
    print(ls.decode(args.u, args.v))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    t = _read_tree(args.tree)
    ls = load_labels(args.labels)
    report = verify_labels(t, ls, sample=args.sample, seed=args.seed)
    print(report.summary())
    return 0 if report.ok else 2


_PERF_CHILD = (
    "import json, sys; from treelabels.bench import perf_workload; "
    "json.dump(perf_workload(sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), "
    "int(sys.argv[4]), int(sys.argv[5])), sys.stdout)"
)


def _cmd_perf(args: argparse.Namespace) -> int:
    # the backend is pinned at import time, so each one runs in a fresh
    # subprocess with the env flag flipped
    import os
    import subprocess

    results = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, TREELABELS_BACKEND=backend)
        argv = [
            sys.executable,
            "-c",
            _PERF_CHILD,
            args.scheme,
            str(args.n),
            str(args.pairs),
            str(args.seed),
            str(args.reps),
        ]
        proc = subprocess.run(argv, env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"error: {backend} backend run failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        results.append(json.loads(proc.stdout))
    if args.json:
        print(json.dumps({"results": results}, indent=2))
    else:
        print(bench.perf_to_table(results))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    schemes = {args.scheme} if args.scheme else None
    families = {args.family} if args.family else None
    rows = bench.run_bench(args.seed, schemes=schemes, families=families)
    doc = bench.rows_to_json(rows, args.seed)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(bench.rows_to_table(rows))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return 0 if all(r.passed for r in rows) else 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="treelabels",
        description="Distance labels for trees: generate, encode, query, verify, benchmark.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a tree file")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, help="node count (random-tree, caterpillar, hard-caterpillar)")
    g.add_argument("--k", type=int, help="edge count (path)")
    g.add_argument("--h", type=int, help="recursion height (hwa)")
    g.add_argument("--W", type=int, help="top-level weight (hwa) or max edge weight (path)")
    g.add_argument("--a", type=int, default=2, help="per-level weight divisor (hwa)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    e = sub.add_parser("encode", help="encode a tree file into a label file")
    e.add_argument("tree")
    e.add_argument("--scheme", required=True, choices=SCHEMES)
    e.add_argument("--eps", type=float, help="stretch parameter (approx scheme)")
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_encode)

    q = sub.add_parser("query", help="decode one distance from a label file alone")
    q.add_argument("labels")
    q.add_argument("u", type=int)
    q.add_argument("v", type=int)
    q.set_defaults(func=_cmd_query)

    v = sub.add_parser("verify", help="check decoded distances against the tree")
    v.add_argument("tree")
    v.add_argument("labels")
    v.add_argument("--sample", type=int, help="check N random pairs instead of all pairs")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("bench", help="measured label sizes vs budgets")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--scheme", choices=SCHEMES, help="restrict to one scheme")
    b.add_argument("--family", help="restrict to one family")
    b.add_argument("--json", action="store_true", help="machine-readable output")
    b.add_argument("--out", help="also write the JSON report here")
    b.set_defaults(func=_cmd_bench)

    f = sub.add_parser("perf", help="time the numba and numpy kernel backends on one workload")
    f.add_argument("--scheme", choices=SCHEMES, default="exact")
    f.add_argument("--n", type=int, default=2048, help="tree size (path clamps to 64 nodes)")
    f.add_argument("--pairs", type=int, default=10_000, help="decoded pairs per repetition")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--reps", type=int, default=3, help="timed repetitions after warmup")
    f.add_argument("--json", action="store_true", help="machine-readable output")
    f.set_defaults(func=_cmd_perf)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TreeError, SchemeError, CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
