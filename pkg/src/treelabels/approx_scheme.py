"""(1+eps)-stretch distance labels for unweighted trees.

Labels replace the exact scheme's distance list with a bit stream S of
threshold crossings.  Fix eps' = eps/2 and thresholds t_0 = 1 < t_1 < ...
where t_j is the j-th distinct value of ceil((1+eps')^i).  Walking the
node's proper light ancestors bottom-up with their true distances
d_1 < d_2 < ..., the encoder emits a 1 every time the next threshold is
still below the current d and a 0 when the ancestor is reached, so the
number of 1s before the k-th 0 gives t_j >= d_k with t_j <= (1+eps')d_k
(a distance landing exactly on t_j emits j ones).

Decoding mirrors the exact scheme but substitutes alpha = t_j + 1 for the
true dist(w, v); the halved eps' absorbs the doubling in
dist = distroot(u) - distroot(v) + 2 dist(w, v), giving an estimate
d~ with dist <= d~ <= (1+eps) dist.  Ancestor pairs decode exactly.

Label layout: eps in 16-bit Q4.12 fixed point | uint(distroot) |
NCA sublabel | S until the label ends.  eps is floored onto the grid so
the realized stretch never exceeds the requested one.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitcodec import BitCursor, BitString, LabelBuffer
from .errors import SchemeError
from .hld import decompose
from .nca_core import (
    EQUAL,
    U_ANCESTOR,
    V_ANCESTOR,
    NcaSublabel,
    decode_nca,
)
from .tree_model import Tree

__all__ = [
    "ApproxLabel",
    "EPS_FRAC_BITS",
    "eps_to_fp",
    "fp_to_eps",
    "thresholds_upto",
    "encode_approx",
    "encode_approx_buffer",
    "decode_approx",
    "ApproxBatch",
]

EPS_FRAC_BITS = 12


def eps_to_fp(eps: float) -> int:
    """Quantize eps onto the Q4.12 grid, flooring.

    Raises:
        SchemeError: outside [2^-12, 16).
    """
    fp = math.floor(eps * (1 << EPS_FRAC_BITS))
    if not 1 <= fp < (1 << 16):
        raise SchemeError(
            f"eps {eps} outside [{2**-EPS_FRAC_BITS}, 16) after quantization"
        )
    return fp


def fp_to_eps(fp: int) -> float:
    return fp / (1 << EPS_FRAC_BITS)


def thresholds_upto(eps_fp: int, need: int) -> np.ndarray:
    """Threshold values t_0..t_k with t_k >= need (eps' = eps/2 grid)."""
    cap = 1024
    while True:
        out = np.empty(cap, dtype=np.int64)
        cnt = kernels.threshold_fill(eps_fp, out)
        if out[cnt - 1] >= need or cnt < cap:
            return out[:cnt]
        cap *= 4


def thresholds_count(eps_fp: int, count: int) -> np.ndarray:
    """At least ``count`` threshold entries (padded past any stored index)."""
    cap = max(1024, count + 1)
    while True:
        out = np.empty(cap, dtype=np.int64)
        cnt = kernels.threshold_fill(eps_fp, out)
        if cnt >= count or cnt < cap:
            return out[:cnt]
        cap *= 4


@dataclass(frozen=True)
class ApproxLabel:
    bits: BitString


def encode_approx_buffer(t: Tree, eps: float) -> LabelBuffer:
    if not t.unweighted:
        raise SchemeError("approx scheme requires an unweighted tree")
    idx = decompose(t)
    n = t.n
    eps_fp = eps_to_fp(eps)
    thresholds = thresholds_upto(eps_fp, max(1, int(t.depth.max())))
    bits = np.empty(n, dtype=np.int64)
    kernels.approx_sizes(
        n, t.parent, t.depth, idx.apex, idx.pos_len, idx.light_rank,
        thresholds, bits,
    )
    wstart = np.zeros(n + 1, dtype=np.int64)
    np.cumsum((bits + 31) >> 5, out=wstart[1:])
    starts = wstart[:-1] * 32
    words = np.zeros(int(wstart[-1]), dtype=np.int64)
    ends = kernels.approx_fill(
        n,
        eps_fp,
        t.parent,
        t.depth,
        idx.apex,
        idx.pos_val,
        idx.pos_len,
        idx.light_rank,
        thresholds,
        starts,
        words,
    )
    if not np.array_equal(ends - starts, bits):
        raise SchemeError("encoder size accounting mismatch")
    return LabelBuffer(words, starts, bits)


def encode_approx(t: Tree, eps: float) -> list[ApproxLabel]:
    buf = encode_approx_buffer(t, eps)
    return [ApproxLabel(buf[v]) for v in range(t.n)]


def s_lengths(t: Tree, eps: float) -> np.ndarray:
    """Per-node bit length of the trailing distance-sketch stream alone."""
    if not t.unweighted:
        raise SchemeError("approx scheme requires an unweighted tree")
    idx = decompose(t)
    eps_fp = eps_to_fp(eps)
    thresholds = thresholds_upto(eps_fp, max(1, int(t.depth.max())))
    out = np.empty(t.n, dtype=np.int64)
    kernels.s_bits_fill(t.n, t.parent, t.depth, idx.apex, thresholds, out)
    return out


def _parse(bits: BitString):
    cur = BitCursor(bits)
    eps_fp = cur.read_fixed(16)
    dr = cur.read_uint()
    sub = NcaSublabel.read(cur)
    ones_before = []
    ones = 0
    while cur.remaining():
        if cur.read_fixed(1):
            ones += 1
        else:
            ones_before.append(ones)
    return eps_fp, dr, sub, ones_before


def _alpha(ones_before, idx: int, thresholds) -> int:
    # bottom-up rank of chain entry idx among the proper light ancestors;
    # rank 0 is the node itself, where the distance is exactly 0
    r = len(ones_before) - idx + 1
    if r <= 0:
        return 0
    return int(thresholds[ones_before[r - 1]])


def decode_approx(a: ApproxLabel, b: ApproxLabel) -> int:
    """Distance estimate d~ with dist <= d~ <= (1+eps) dist."""
    eps_a, dr_a, sub_a, ones_a = _parse(a.bits)
    eps_b, dr_b, sub_b, ones_b = _parse(b.bits)
    if eps_a != eps_b:
        raise SchemeError("labels carry different eps; not from one labeling")
    info = decode_nca(sub_a, sub_b)
    if info.relation == EQUAL:
        return 0
    if info.relation == U_ANCESTOR:
        return dr_b - dr_a
    if info.relation == V_ANCESTOR:
        return dr_a - dr_b
    need = max(ones_a[-1] if ones_a else 0, ones_b[-1] if ones_b else 0)
    thresholds = thresholds_count(eps_a, need + 1)
    idx = info.lights_root_to_w + 1
    if info.light_side == "u":
        return dr_b - dr_a + 2 * (_alpha(ones_a, idx, thresholds) + 1)
    if info.light_side == "v":
        return dr_a - dr_b + 2 * (_alpha(ones_b, idx, thresholds) + 1)
    return (
        _alpha(ones_a, idx, thresholds) + _alpha(ones_b, idx, thresholds) + 2
    )


class ApproxBatch:
    """Parse a label batch once, then decode pair sweeps via kernels."""

    def __init__(self, buf: LabelBuffer):
        k = len(buf)
        self.n_labels = k
        self.lab_eps = np.empty(k, dtype=np.int64)
        self.lab_dr = np.empty(k, dtype=np.int64)
        self.lab_m = np.empty(k, dtype=np.int64)
        self.lab_z = np.empty(k, dtype=np.int64)
        max_ones = kernels.approx_parse_counts(
            buf.words, buf.starts, buf.nbits, self.lab_eps, self.lab_dr,
            self.lab_m, self.lab_z,
        )
        if k and not np.all(self.lab_eps == self.lab_eps[0]):
            raise SchemeError("labels carry different eps; not from one labeling")
        self.eps_fp = int(self.lab_eps[0]) if k else 0
        self.seg_ptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(self.lab_m - 1, out=self.seg_ptr[1:])
        self.zero_ptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(self.lab_z, out=self.zero_ptr[1:])
        nseg = int(self.seg_ptr[-1])
        self.off_val = np.empty(nseg, dtype=np.int64)
        self.off_len = np.empty(nseg, dtype=np.int64)
        self.rank = np.empty(nseg, dtype=np.int64)
        self.tr_val = np.empty(k, dtype=np.int64)
        self.tr_len = np.empty(k, dtype=np.int64)
        self.ones_before = np.empty(int(self.zero_ptr[-1]), dtype=np.int64)
        kernels.approx_parse_fill(
            buf.words,
            buf.starts,
            buf.nbits,
            self.seg_ptr,
            self.off_val,
            self.off_len,
            self.rank,
            self.tr_val,
            self.tr_len,
            self.zero_ptr,
            self.ones_before,
        )
        self.thresholds = thresholds_count(self.eps_fp, int(max_ones) + 1)

    def decode_pairs(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        out = np.empty(us.shape[0], dtype=np.int64)
        kernels.approx_combine(
            self.lab_dr,
            self.lab_m,
            self.lab_z,
            self.seg_ptr,
            self.off_val,
            self.off_len,
            self.rank,
            self.tr_val,
            self.tr_len,
            self.zero_ptr,
            self.ones_before,
            self.thresholds,
            us,
            vs,
            out,
        )
        return out
