"""Exact distance labels for unweighted trees.

Label layout:

    uint(n) | distroot in width_for(n) bits | NCA sublabel |
    dist(v, a_i) for i = 1..m, entry i in width_for(n) - (i-1) bits

where a_1..a_m are v's light ancestors top-down.  Entry widths shrink
because a_i roots a subtree of size at most n/2^(i-1), so the distance
fits; the last width may legitimately be 0 when the entry is forced to 0.
The whole list costs at most W(W+1)/2 bits for W = width_for(n), and the
NCA sublabel adds O(log n loglog n).

Decoding: locate the NCA w via the sublabels.  If one node is an ancestor
of the other the answer is the distroot difference; otherwise

    dist(u, v) = distroot(u) - distroot(v) + 2 dist(w, v)

with dist(w, v) read off the distance list of whichever side departed w
on a light edge (its chain entry just below w, plus 1 for the light
edge), or from both lists when u and v both departed light.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitcodec import (
    BitCursor,
    BitString,
    BitWriter,
    LabelBuffer,
    width_for,
)
from .errors import SchemeError
from .hld import decompose
from .nca_core import (
    EQUAL,
    U_ANCESTOR,
    V_ANCESTOR,
    NcaSublabel,
    decode_nca,
    encode_nca,
)
from .tree_model import Tree

__all__ = [
    "ExactLabel",
    "encode_exact",
    "encode_exact_buffer",
    "decode_exact",
    "ExactBatch",
]


@dataclass(frozen=True)
class ExactLabel:
    """Self-contained label; all scheme parameters ride inside the bits."""

    bits: BitString


def _prep(t: Tree):
    if not t.unweighted:
        raise SchemeError("exact scheme requires an unweighted tree")
    return decompose(t)


def encode_exact_buffer(t: Tree) -> LabelBuffer:
    """All labels of one tree, packed; the hot-path encoder."""
    idx = _prep(t)
    n = t.n
    W = width_for(n)
    bits = np.empty(n, dtype=np.int64)
    kernels.exact_sizes(
        n, W, t.parent, idx.apex, idx.pos_len, idx.light_rank, bits
    )
    wstart = np.zeros(n + 1, dtype=np.int64)
    np.cumsum((bits + 31) >> 5, out=wstart[1:])
    starts = wstart[:-1] * 32
    words = np.zeros(int(wstart[-1]), dtype=np.int64)
    ends = kernels.exact_fill(
        n,
        W,
        t.parent,
        t.depth,
        idx.apex,
        idx.pos_val,
        idx.pos_len,
        idx.light_rank,
        starts,
        words,
    )
    if not np.array_equal(ends - starts, bits):
        raise SchemeError("encoder size accounting mismatch")
    return LabelBuffer(words, starts, bits)


def encode_exact(t: Tree) -> list[ExactLabel]:
    buf = encode_exact_buffer(t)
    return [ExactLabel(buf[v]) for v in range(t.n)]


def encode_exact_one(t: Tree, v: int) -> ExactLabel:
    """Reference encoder for a single node, written field by field.

    Mirrors the buffer encoder exactly; kept as the readable route and
    parity-checked against it in the tests.
    """
    idx = _prep(t)
    n = t.n
    W = width_for(n)
    chain = idx.light_ancestors(v)
    w = BitWriter()
    w.write_uint(n)
    w.write_fixed(int(t.depth[v]), W)
    encode_nca(idx, v).write(w)
    for i, a in enumerate(chain):
        w.write_fixed(int(t.depth[v] - t.depth[a]), W - i)
    return ExactLabel(w.freeze())


def _parse(bits: BitString):
    cur = BitCursor(bits)
    n = cur.read_uint()
    W = width_for(n)
    dr = cur.read_fixed(W)
    sub = NcaSublabel.read(cur)
    dists = [cur.read_fixed(W - i) for i in range(sub.m)]
    if cur.remaining():
        raise SchemeError(f"{cur.remaining()} unread bits after the label")
    return n, dr, sub, dists


def decode_exact(a: ExactLabel, b: ExactLabel) -> int:
    """Exact tree distance from two labels alone."""
    n_a, dr_a, sub_a, dist_a = _parse(a.bits)
    n_b, dr_b, sub_b, dist_b = _parse(b.bits)
    if n_a != n_b:
        raise SchemeError("labels disagree on n; not from one labeling")
    info = decode_nca(sub_a, sub_b)
    if info.relation == EQUAL:
        return 0
    if info.relation == U_ANCESTOR:
        return dr_b - dr_a
    if info.relation == V_ANCESTOR:
        return dr_a - dr_b
    c = info.lights_root_to_w - 1
    if info.light_side == "u":
        return dr_b - dr_a + 2 * (dist_a[c + 1] + 1)
    if info.light_side == "v":
        return dr_a - dr_b + 2 * (dist_b[c + 1] + 1)
    return dist_a[c + 1] + dist_b[c + 1] + 2


class ExactBatch:
    """Parse a label batch once, then decode pair sweeps via kernels."""

    def __init__(self, buf: LabelBuffer):
        k = len(buf)
        self.n_labels = k
        self.lab_n = np.empty(k, dtype=np.int64)
        self.lab_dr = np.empty(k, dtype=np.int64)
        self.lab_m = np.empty(k, dtype=np.int64)
        kernels.exact_parse_counts(
            buf.words, buf.starts, self.lab_n, self.lab_dr, self.lab_m
        )
        self.seg_ptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(self.lab_m - 1, out=self.seg_ptr[1:])
        self.dist_ptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(self.lab_m, out=self.dist_ptr[1:])
        nseg = int(self.seg_ptr[-1])
        self.off_val = np.empty(nseg, dtype=np.int64)
        self.off_len = np.empty(nseg, dtype=np.int64)
        self.rank = np.empty(nseg, dtype=np.int64)
        self.tr_val = np.empty(k, dtype=np.int64)
        self.tr_len = np.empty(k, dtype=np.int64)
        self.dists = np.empty(int(self.dist_ptr[-1]), dtype=np.int64)
        kernels.exact_parse_fill(
            buf.words,
            buf.starts,
            self.seg_ptr,
            self.off_val,
            self.off_len,
            self.rank,
            self.tr_val,
            self.tr_len,
            self.dist_ptr,
            self.dists,
        )

    def decode_pairs(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        out = np.empty(us.shape[0], dtype=np.int64)
        kernels.exact_combine(
            self.lab_dr,
            self.lab_m,
            self.seg_ptr,
            self.off_val,
            self.off_len,
            self.rank,
            self.tr_val,
            self.tr_len,
            self.dist_ptr,
            self.dists,
            us,
            vs,
            out,
        )
        return out
