"""Benchmark grid: measured label sizes against the frozen budgets.

Every row encodes a few seeded instances of one (family, scheme) cell and
compares the worst label against the scheme's budget.  Rows are pure
functions of the seed, so reports are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import budgets
from .approx_scheme import s_lengths
from .families import expand_unweighted, gen_hard_caterpillar, gen_hwa_tree
from .hld import decompose
from .labelfile import encode_tree
from .tree_model import gen_random_caterpillar, gen_random_tree, gen_weighted_path


@dataclass(frozen=True)
class BenchRow:
    family: str
    params: str
    scheme: str
    n: int
    max_bits: int
    mean_bits: float
    budget: float
    passed: bool
    note: str = ""


def _size_stats(sets) -> tuple[int, float]:
    sizes = np.concatenate([ls.bit_sizes() for ls in sets])
    return int(sizes.max()), float(sizes.mean())


def _distlist_max(trees) -> int:
    worst = 0
    for t in trees:
        w = budgets.ceil_log2(max(2, t.n))
        m = decompose(t).light_depth.astype(np.int64)
        worst = max(worst, int((m * w - m * (m - 1) // 2).max()))
    return worst


def _exact_rows(seed: int, cal: dict) -> list[BenchRow]:
    rows = []
    for n, reps in ((2**8, 5), (2**12, 3), (2**16, 2)):
        trees = [gen_random_tree(n, seed + 101 * r) for r in range(reps)]
        sets = [encode_tree(t, "exact") for t in trees]
        max_bits, mean_bits = _size_stats(sets)
        budget = budgets.exact_budget(n, cal["exact_C"])
        dl = _distlist_max(trees)
        dl_budget = budgets.exact_distlist_budget(n)
        rows.append(
            BenchRow(
                family="random-tree",
                params=f"n={n}",
                scheme="exact",
                n=n,
                max_bits=max_bits,
                mean_bits=round(mean_bits, 1),
                budget=budget,
                passed=max_bits <= budget and dl <= dl_budget,
                note=f"dist-list max {dl} <= {dl_budget}",
            )
        )
    return rows


def _exact_family_row(seed: int, cal: dict) -> BenchRow:
    hwa = gen_hwa_tree(5, 32, 2, seed=seed + 7)
    t, _ = expand_unweighted(hwa.tree)
    ls = encode_tree(t, "exact")
    sizes = ls.bit_sizes()
    budget = budgets.exact_budget(t.n, cal["exact_C"])
    max_bits = int(sizes.max())
    return BenchRow(
        family="hwa-unweighted",
        params="h=5 W=32 a=2",
        scheme="exact",
        n=t.n,
        max_bits=max_bits,
        mean_bits=round(float(sizes.mean()), 1),
        budget=budget,
        passed=max_bits <= budget,
    )


def _approx_row(seed: int) -> BenchRow:
    n = 2**16
    eps = 1.0
    smax = 0
    total_max = 0
    means = []
    for r in range(3):
        t = gen_random_tree(n, seed + 211 * r)
        ls = encode_tree(t, "approx", eps=eps)
        sizes = ls.bit_sizes()
        total_max = max(total_max, int(sizes.max()))
        means.append(float(sizes.mean()))
        smax = max(smax, int(s_lengths(t, eps).max()))
    budget = budgets.approx_s_budget(n)
    return BenchRow(
        family="random-tree",
        params=f"n={n} eps={eps}",
        scheme="approx",
        n=n,
        max_bits=smax,
        mean_bits=round(sum(means) / len(means), 1),
        budget=budget,
        passed=smax <= budget,
        note=f"sketch bits vs budget; whole label max {total_max}",
    )


def _path_rows(seed: int) -> list[BenchRow]:
    rows = []
    for k in (4, 16, 64):
        for max_w in (10, 10**6):
            max_bits = 0
            budget = 0
            diameter = 1
            means = []
            for r in range(5):
                t = gen_weighted_path(k, max_w, seed + 17 * r)
                ls = encode_tree(t, "path")
                sizes = ls.bit_sizes()
                max_bits = max(max_bits, int(sizes.max()))
                means.append(float(sizes.mean()))
                budget = max(budget, budgets.path_budget(ls._plan()))
                diameter = max(diameter, int(t.distroot_all.max()))
            floor = budgets.path_floor(k, 2 * diameter)
            rows.append(
                BenchRow(
                    family="weighted-path",
                    params=f"k={k} max_w={max_w}",
                    scheme="path",
                    n=k,
                    max_bits=max_bits,
                    mean_bits=round(sum(means) / len(means), 1),
                    budget=budget,
                    passed=max_bits <= budget,
                    note=f"value-space floor {floor:.1f} bits",
                )
            )
    return rows


def _cat_rows(seed: int, cal: dict) -> list[BenchRow]:
    c, cp = cal["cat_c"], cal["cat_c_prime"]
    rows = []
    n = 2**16
    trees = [gen_random_caterpillar(n, seed + 31 * r) for r in range(3)]
    sets = [encode_tree(t, "caterpillar") for t in trees]
    max_bits, mean_bits = _size_stats(sets)
    budget = budgets.cat_budget(n, c, cp)
    rows.append(
        BenchRow(
            family="random-caterpillar",
            params=f"n={n}",
            scheme="caterpillar",
            n=n,
            max_bits=max_bits,
            mean_bits=round(mean_bits, 1),
            budget=budget,
            passed=max_bits <= budget,
        )
    )
    t = gen_hard_caterpillar(2**14, seed + 5)
    ls = encode_tree(t, "caterpillar")
    sizes = ls.bit_sizes()
    budget = budgets.cat_budget(t.n, c, cp)
    max_bits = int(sizes.max())
    rows.append(
        BenchRow(
            family="hard-caterpillar",
            params=f"n={2**14}",
            scheme="caterpillar",
            n=t.n,
            max_bits=max_bits,
            mean_bits=round(float(sizes.mean()), 1),
            budget=budget,
            passed=max_bits <= budget,
        )
    )
    return rows


def run_bench(seed: int = 0, schemes=None, families=None) -> list[BenchRow]:
    """Build the default grid, filtered by scheme/family names if given."""
    cal = budgets.load_calibration()
    rows = []
    rows.extend(_exact_rows(seed, cal))
    rows.append(_exact_family_row(seed, cal))
    rows.append(_approx_row(seed))
    rows.extend(_path_rows(seed))
    rows.extend(_cat_rows(seed, cal))
    if schemes is not None:
        rows = [r for r in rows if r.scheme in schemes]
    if families is not None:
        rows = [r for r in rows if r.family in families]
    return rows


def rows_to_json(rows, seed: int) -> dict:
    return {"seed": seed, "rows": [asdict(r) for r in rows]}


def rows_to_table(rows) -> str:
    headers = ("family", "params", "scheme", "n", "max", "mean", "budget", "pass", "note")
    table = [headers]
    for r in rows:
        table.append(
            (
                r.family,
                r.params,
                r.scheme,
                str(r.n),
                str(r.max_bits),
                f"{r.mean_bits:.1f}",
                f"{r.budget:.1f}",
                "pass" if r.passed else "FAIL",
                r.note,
            )
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def perf_workload(scheme: str, n: int, pairs: int, seed: int, reps: int) -> dict:
    """Encode + pair-decode timings for one scheme under the active backend.

    Steady-state numbers: the first encode and decode are warmups so numba's
    compile/cache-load cost never lands in a timed repetition.
    """
    import time

    from ._backend import BACKEND

    rng = np.random.default_rng(seed)
    if scheme == "path":
        n = min(n, 64)  # plan width caps the node count
        t = gen_weighted_path(n, 10**6, seed=seed)
    elif scheme == "caterpillar":
        t = gen_random_caterpillar(n, seed)
    else:
        t = gen_random_tree(n, seed=seed)
    eps = 0.5 if scheme == "approx" else None
    us = rng.integers(0, t.n, pairs)
    vs = rng.integers(0, t.n, pairs)

    ls = encode_tree(t, scheme, eps=eps)
    start = time.perf_counter()
    for _ in range(reps):
        ls = encode_tree(t, scheme, eps=eps)
    encode_s = (time.perf_counter() - start) / reps

    batch = ls.batch()
    batch.decode_pairs(us[:1], vs[:1])
    start = time.perf_counter()
    for _ in range(reps):
        batch.decode_pairs(us, vs)
    decode_s = (time.perf_counter() - start) / reps

    return {
        "backend": BACKEND,
        "scheme": scheme,
        "n": t.n,
        "pairs": pairs,
        "encode_s": encode_s,
        "decode_s": decode_s,
        "pairs_per_s": pairs / decode_s if decode_s > 0 else float("inf"),
    }


def perf_to_table(results) -> str:
    headers = ("backend", "scheme", "n", "pairs", "encode", "decode", "pairs/s")
    table = [headers]
    for r in results:
        table.append(
            (
                r["backend"],
                r["scheme"],
                str(r["n"]),
                str(r["pairs"]),
                f"{r['encode_s'] * 1e3:.1f} ms",
                f"{r['decode_s'] * 1e3:.1f} ms",
                f"{r['pairs_per_s']:,.0f}",
            )
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    if len(results) == 2 and results[1]["decode_s"] > 0:
        enc = results[1]["encode_s"] / max(results[0]["encode_s"], 1e-12)
        dec = results[1]["decode_s"] / max(results[0]["decode_s"], 1e-12)
        lines.append(f"{results[0]['backend']} speedup: encode {enc:.1f}x, decode {dec:.1f}x")
    return "\n".join(lines)
