"""Decoder-versus-oracle verification over pair sweeps.

Pairs stream through in chunks so exhaustive sweeps over 10^8 pairs never
materialize the full index arrays.  Chunks reuse one buffer; consumers must
finish with a chunk before pulling the next.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approx_scheme import EPS_FRAC_BITS
from .labelfile import LabelSet
from .tree_model import DistOracle, Tree

PAIR_CHUNK = 1 << 21


def pair_chunks(n, sample=None, seed=0, chunk=PAIR_CHUNK):
    """Yield (us, vs) arrays covering pairs of [0, n).

    With ``sample=None`` every unordered pair u < v appears exactly once;
    otherwise ``sample`` pairs are drawn uniformly with replacement (u == v
    allowed; distance 0 is as checkable as any other).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if sample is not None:
        rng = np.random.default_rng(seed)
        left = int(sample)
        while left > 0:
            take = min(left, chunk)
            yield rng.integers(0, n, take), rng.integers(0, n, take)
            left -= take
        return
    us = np.empty(chunk, dtype=np.int64)
    vs = np.empty(chunk, dtype=np.int64)
    fill = 0
    for u in range(n - 1):
        lo = u + 1
        while lo < n:
            take = min(chunk - fill, n - lo)
            us[fill : fill + take] = u
            vs[fill : fill + take] = np.arange(lo, lo + take)
            fill += take
            lo += take
            if fill == chunk:
                yield us, vs
                fill = 0
    if fill:
        yield us[:fill], vs[:fill]


def pair_count(n: int, sample=None) -> int:
    return int(sample) if sample is not None else n * (n - 1) // 2


@dataclass(frozen=True)
class VerifyReport:
    scheme: str
    n: int
    pairs: int
    violations: int
    max_stretch: float
    max_bits: int
    mean_bits: float

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def summary(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        return (
            f"{verdict} scheme={self.scheme} n={self.n} pairs={self.pairs} "
            f"violations={self.violations} max_stretch={self.max_stretch:.6f} "
            f"label_bits(max={self.max_bits}, mean={self.mean_bits:.1f})"
        )


def verify_labels(
    t: Tree, ls: LabelSet, sample=None, seed: int = 0, oracle: DistOracle | None = None
) -> VerifyReport:
    """Compare ``ls``'s decoder to the tree oracle over a pair sweep.

    Exact-answer schemes must match the oracle everywhere.  The approx
    scheme must satisfy d <= decoded <= (1 + eps) * d, checked in exact
    integer arithmetic against the quantized eps stored in the labels.
    """
    if t.n != ls.n:
        raise ValueError(f"tree has {t.n} nodes but label set has {ls.n}")
    if oracle is None:
        oracle = DistOracle(t)
    batch = ls.batch()
    scale = 1 << EPS_FRAC_BITS
    eps_fp = int(ls.params["eps_fp"]) if ls.scheme == "approx" else 0
    violations = 0
    checked = 0
    max_stretch = 0.0
    for us, vs in pair_chunks(t.n, sample=sample, seed=seed):
        got = batch.decode_pairs(us, vs)
        want = oracle.pairs(us, vs)
        if ls.scheme == "approx":
            bad = (got < want) | (got * scale > want * (scale + eps_fp))
        else:
            bad = got != want
        violations += int(bad.sum())
        checked += len(us)
        pos = want > 0
        if pos.any():
            r = got[pos] / want[pos]
            max_stretch = max(max_stretch, float(r.max()))
    sizes = ls.bit_sizes()
    max_bits = int(sizes.max()) if len(sizes) else 0
    mean_bits = float(sizes.mean()) if len(sizes) else 0.0
    return VerifyReport(
        scheme=ls.scheme,
        n=t.n,
        pairs=checked,
        violations=violations,
        max_stretch=max_stretch,
        max_bits=max_bits,
        mean_bits=mean_bits,
    )
