"""Distance labels for weighted paths via a shared offset.

Root the path at one end and let d_0 = 0 < d_1 < ... < d_{k-1} be the
node distances from that end.  Split an L-bit value into k segments of
ell bits (plus one overflow bit on top).  There is a single offset x such
that for every i, segment i of d_i + x is all zeros: build it greedily,

    x_0 = 0;  x += zero_segment(i, d_i + x)   for i = 1..k-1

where zero_segment(i, y) is the smallest multiple of 2^(i*ell) clearing
segment i of y.  Later summands only carry upward, so cleared segments
stay cleared.  Node i's label then stores i and d_i + x with its own
zeroed segment dropped: (k-1) * ell + 1 bits of payload instead of the
full distance.  The decoder reinserts the zeros and subtracts:
dist(i, j) = |(d_i + x) - (d_j + x)|.

The plan uses ell = ceil(log2(2 max(D,1)) / k) with D the path diameter,
so x < 2^(k*ell) and every stored value fits L = k*ell + 1 bits.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bitcodec import BitCursor, BitString, BitWriter, LabelBuffer, width_for
from .errors import SchemeError
from .tree_model import Tree

__all__ = [
    "SegmentPlan",
    "PathLabel",
    "build_path_plan",
    "zero_segment",
    "compute_shared_offset",
    "encode_path",
    "decode_path",
    "PathBatch",
    "MAX_PLAN_BITS",
]

# values are rebuilt in two 62-bit limbs; plans beyond that are rejected
MAX_PLAN_BITS = 124


@dataclass(frozen=True)
class SegmentPlan:
    k: int  # segment count = number of labeled positions
    ell: int  # bits per segment
    L: int  # total value width


def build_path_plan(k: int, diameter: int) -> SegmentPlan:
    """The ceil plan: ell = ceil(log2(2 max(D,1)) / k), L = k*ell + 1."""
    if k < 1:
        raise SchemeError(f"k must be >= 1, got {k}")
    if diameter < 0:
        raise SchemeError(f"negative diameter {diameter}")
    # ceil(log2(2D) / k) == ceil(ceil(log2(2D)) / k) since k*ell is integral
    a = (2 * max(diameter, 1) - 1).bit_length()
    ell = (a + k - 1) // k
    plan = SegmentPlan(k, ell, k * ell + 1)
    if plan.L > MAX_PLAN_BITS:
        raise SchemeError(
            f"plan needs {plan.L} bits, beyond the {MAX_PLAN_BITS}-bit limit"
        )
    return plan


def zero_segment(i: int, y: int, plan: SegmentPlan) -> int:
    """Smallest multiple of 2^(i*ell) whose addition clears segment i of y.

    Pre: 0 <= i < k and segments below i of y are already clear; the
    result never disturbs segments below i.
    """
    if not 0 <= i < plan.k:
        raise SchemeError(f"segment {i} out of range [0, {plan.k})")
    ell = plan.ell
    s = (y >> (i * ell)) & ((1 << ell) - 1)
    return (((1 << ell) - s) % (1 << ell)) << (i * ell)


def compute_shared_offset(ds, plan: SegmentPlan) -> int:
    """The offset x clearing segment i of d_i + x for every position i.

    Pre: ds sorted ascending with ds[0] == 0, len(ds) == plan.k.
    """
    if len(ds) != plan.k:
        raise SchemeError("distance list length differs from the plan's k")
    x = 0
    for i in range(1, plan.k):
        x += zero_segment(i, int(ds[i]) + x, plan)
    if x >> (plan.k * plan.ell):
        raise SchemeError("shared offset exceeded its bound")
    for i in range(plan.k):
        if zero_segment(i, int(ds[i]) + x, plan):
            raise SchemeError(f"segment {i} failed to clear")
    return x


@dataclass(frozen=True)
class PathLabel:
    bits: BitString
    plan: SegmentPlan


def _path_order(t: Tree) -> np.ndarray:
    order = np.empty(t.n, dtype=np.int64)
    v = t.root
    for i in range(t.n):
        order[i] = v
        ch = t.children(v)
        if len(ch) > 1:
            raise SchemeError(f"node {v} has {len(ch)} children; not a path")
        v = int(ch[0]) if len(ch) else -1
    if v != -1:
        raise SchemeError("tree is not a path rooted at an end")
    return order


def _drop_segment(full: int, i: int, plan: SegmentPlan) -> int:
    ell = plan.ell
    hi = full >> ((i + 1) * ell)
    lo = full & ((1 << (i * ell)) - 1)
    return (hi << (i * ell)) | lo


def _insert_segment(packed: int, i: int, plan: SegmentPlan) -> int:
    ell = plan.ell
    hi = packed >> (i * ell)
    lo = packed & ((1 << (i * ell)) - 1)
    return (hi << ((i + 1) * ell)) | lo


def encode_path(t: Tree) -> list[PathLabel]:
    """Labels in node-id order for a weighted path rooted at an end."""
    order = _path_order(t)
    ds = t.distroot_all[order]
    if t.n > 1 and np.any(np.diff(ds) <= 0):
        raise SchemeError("path weights must be positive")
    plan = build_path_plan(t.n, int(ds[-1]))
    x = compute_shared_offset(ds, plan)
    wi = width_for(plan.k)
    out: list[PathLabel | None] = [None] * t.n
    for i in range(t.n):
        w = BitWriter()
        w.write_unary_header(plan.k)
        w.write_fixed(i, wi)
        w.write_fixed(_drop_segment(int(ds[i]) + x, i, plan), plan.L - plan.ell)
        out[int(order[i])] = PathLabel(w.freeze(), plan)
    return out


def _parse_value(label: PathLabel) -> int:
    cur = BitCursor(label.bits)
    wi = cur.read_unary_header()
    i = cur.read_fixed(wi)
    packed = cur.read_fixed(label.plan.L - label.plan.ell)
    if cur.remaining():
        raise SchemeError(f"{cur.remaining()} unread bits after the label")
    if i >= label.plan.k:
        raise SchemeError(f"segment index {i} out of range")
    return _insert_segment(packed, i, label.plan)


def decode_path(a: PathLabel, b: PathLabel) -> int:
    if a.plan != b.plan:
        raise SchemeError("labels carry different plans; not from one labeling")
    return abs(_parse_value(a) - _parse_value(b))


class PathBatch:
    """Kernel-backed pair decoding over a packed label batch."""

    def __init__(self, buf: LabelBuffer, plan: SegmentPlan):
        self.buf = buf
        self.plan = plan

    def decode_pairs(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        out = np.empty(us.shape[0], dtype=np.int64)
        kernels.path_combine(
            self.buf.words,
            self.buf.starts,
            self.plan.ell,
            self.plan.L,
            us,
            vs,
            out,
        )
        return out
