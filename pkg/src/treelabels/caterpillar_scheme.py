"""Distance labels for caterpillars (trees whose non-leaves form a path).

Re-root at the spine end with the smaller id and give every node a spine
coordinate: a spine node its position t, a leaf its neighbor's position.
Distances collapse to |t_u - t_v| plus one hop per leaf endpoint, with
the single correction that two leaves sharing a coordinate are either the
same node or siblings at distance 2; a sibling id settles which.

All labels store the coordinate as D = t + x against a shared offset x
over the g "group 1" positions: those with more than n/k leaves, plus
the root (k is a slowly-growing clamp, and any n < 16 uses just the
root).  A group-1 leaf stores its coordinate shared-offset style, i.e.
its group index plus D with the index'd segment dropped, which is what
keeps the label under roughly 2 log n bits when one spine node carries
almost all leaves; every other node stores D verbatim.  Unlike the path
scheme's ceil plan, the plan here floors ell so that D's field width
stays bit_length(diameter) + O(1); a ceil plan could inflate every D
field by up to g - 1 bits.

Label layout, after a (kind, group) flag pair:

    spine:        D in w_d bits
    group-1 leaf: header | group index j | D minus segment j | sibling
                  id in width_for(n) bits
    group-2 leaf: D in w_d bits | sibling id in w_sib2 bits

Plan scalars (n, k, g, ell, L, widths) travel in the label file's params
block, not in each label.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .bitcodec import BitCursor, BitString, BitWriter, LabelBuffer, width_for
from .errors import SchemeError
from .path_scheme import (
    SegmentPlan,
    _drop_segment,
    _insert_segment,
    compute_shared_offset,
)
from .tree_model import Tree

__all__ = [
    "CatParams",
    "CaterpillarLabel",
    "find_spine",
    "encode_caterpillar",
    "decode_caterpillar",
    "CatBatch",
]


@dataclass(frozen=True)
class CatParams:
    n: int
    k: int  # leaf-count threshold divisor
    g: int  # group-1 positions
    ell: int
    L: int
    w_d: int
    w_sib1: int
    w_sib2: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CatParams":
        try:
            return cls(**{f: int(d[f]) for f in cls.__dataclass_fields__})
        except KeyError as e:
            raise SchemeError(f"missing caterpillar parameter {e}") from None

    @property
    def plan(self) -> SegmentPlan:
        return SegmentPlan(self.g, self.ell, self.L)


@dataclass(frozen=True)
class CaterpillarLabel:
    bits: BitString
    params: CatParams


def _adjacency(t: Tree):
    deg = np.zeros(t.n, dtype=np.int64)
    nonroot = np.flatnonzero(t.parent >= 0)
    np.add.at(deg, t.parent[nonroot], 1)
    deg[nonroot] += 1
    return deg


def find_spine(t: Tree) -> list[int]:
    """Spine node ids ordered from the smaller-id end.

    The spine is the path left after removing leaves; degenerate trees
    (n <= 2, stars, single nodes) get the smallest eligible node.

    Raises:
        SchemeError: when the non-leaf nodes do not form a path.
    """
    n = t.n
    if n <= 2:
        return [0]
    deg = _adjacency(t)
    spine_mask = deg >= 2
    spine_nodes = np.flatnonzero(spine_mask)
    if len(spine_nodes) == 0:
        raise SchemeError("no internal node")  # unreachable for n > 2
    # neighbors within the spine
    nbr: dict[int, list[int]] = {int(v): [] for v in spine_nodes}
    for v in np.flatnonzero(t.parent >= 0):
        p = int(t.parent[v])
        if spine_mask[v] and spine_mask[p]:
            nbr[int(v)].append(p)
            nbr[p].append(int(v))
    ends = [v for v in nbr if len(nbr[v]) <= 1]
    if len(spine_nodes) == 1:
        return [int(spine_nodes[0])]
    if any(len(x) > 2 for x in nbr.values()) or len(ends) != 2:
        raise SchemeError("internal nodes do not form a path; not a caterpillar")
    start = min(ends)
    order = [start]
    prev = -1
    while True:
        nxt = [w for w in nbr[order[-1]] if w != prev]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    if len(order) != len(spine_nodes):
        raise SchemeError("internal nodes do not form a path; not a caterpillar")
    return order


def _positions(t: Tree, spine: list[int]) -> np.ndarray:
    """Spine coordinate per node; a leaf sits at its unique neighbor."""
    pos = np.full(t.n, -1, dtype=np.int64)
    for i, s in enumerate(spine):
        pos[s] = i
    for v in range(t.n):
        if pos[v] >= 0:
            continue
        p = int(t.parent[v])
        if p >= 0 and pos[p] >= 0:
            pos[v] = pos[p]
            continue
        # the neighbor may be a child when the original root was a leaf
        ch = [int(c) for c in t.children(v) if pos[c] >= 0]
        if len(ch) != 1:
            raise SchemeError(f"node {v} is not attached to the spine")
        pos[v] = pos[ch[0]]
    return pos


def _group_count(n: int) -> int:
    lg = math.log2(n)
    return round(lg / (2 * math.log2(max(2.0, lg))))


def encode_caterpillar(t: Tree) -> list[CaterpillarLabel]:
    if not t.unweighted:
        raise SchemeError("caterpillar scheme requires an unweighted tree")
    n = t.n
    spine = find_spine(t)
    s = len(spine)
    pos = _positions(t, spine)
    is_leaf = np.ones(n, dtype=bool)
    is_leaf[spine] = False

    counts = np.zeros(s, dtype=np.int64)
    np.add.at(counts, pos[is_leaf], 1)

    if n < 16:
        k = 1
        group1 = np.zeros(s, dtype=bool)
    else:
        k = min(max(1, _group_count(n)), s)
        group1 = counts > n / k
    group1[0] = True  # the root position anchors the offset at 0
    pos1 = np.flatnonzero(group1)
    g = len(pos1)

    # floor plan: keep the D field at diameter width + O(1)
    d_plan = int(pos1[-1])
    l0 = max(1, d_plan.bit_length())
    ell = max(1, l0 // g)
    L = max(g * ell, l0) + 1
    plan = SegmentPlan(g, ell, L)
    if L > 62:
        raise SchemeError(f"plan needs {L} bits, beyond the 62-bit limit")
    x = compute_shared_offset(pos1, plan)

    group_index = np.full(s, -1, dtype=np.int64)
    group_index[pos1] = np.arange(g)

    # sibling rank = position of the leaf among its coordinate's leaves by id
    sib = np.full(n, -1, dtype=np.int64)
    leaf_ids = np.flatnonzero(is_leaf)
    if len(leaf_ids):
        srt = np.lexsort((leaf_ids, pos[leaf_ids]))
        sl = leaf_ids[srt]
        sp = pos[leaf_ids][srt]
        idx = np.arange(len(sl), dtype=np.int64)
        first = np.empty(len(sl), dtype=bool)
        first[0] = True
        first[1:] = sp[1:] != sp[:-1]
        sib[sl] = idx - np.maximum.accumulate(np.where(first, idx, 0))
    g2 = ~group1
    c2_max = int(counts[g2].max()) if g2.any() else 0

    w_d = width_for(s + x)  # D values run up to (s - 1) + x
    w_sib1 = width_for(n)
    w_sib2 = width_for(max(c2_max, 1))
    params = CatParams(n, k, g, ell, L, w_d, w_sib1, w_sib2)
    wg = width_for(g)

    out = []
    for v in range(n):
        w = BitWriter()
        p = int(pos[v])
        j = int(group_index[p])
        if not is_leaf[v]:
            w.write_fixed(0, 1)
            w.write_fixed(0 if j >= 0 else 1, 1)
            w.write_fixed(p + x, w_d)
        elif j >= 0:
            w.write_fixed(1, 1)
            w.write_fixed(0, 1)
            w.write_unary_header(g)
            w.write_fixed(j, wg)
            w.write_fixed(_drop_segment(p + x, j, plan), L - ell)
            w.write_fixed(int(sib[v]), w_sib1)
        else:
            w.write_fixed(1, 1)
            w.write_fixed(1, 1)
            w.write_fixed(p + x, w_d)
            w.write_fixed(int(sib[v]), w_sib2)
        out.append(CaterpillarLabel(w.freeze(), params))
    return out


def _parse(label: CaterpillarLabel):
    """Returns (kind, coordinate, sibling id)."""
    pr = label.params
    cur = BitCursor(label.bits)
    kind = cur.read_fixed(1)
    grp = cur.read_fixed(1)
    if kind == 0:
        d = cur.read_fixed(pr.w_d)
        sb = -1
    elif grp == 0:
        wi = cur.read_unary_header()
        j = cur.read_fixed(wi)
        if j >= pr.g:
            raise SchemeError(f"group index {j} out of range")
        packed = cur.read_fixed(pr.L - pr.ell)
        d = _insert_segment(packed, j, pr.plan)
        sb = cur.read_fixed(pr.w_sib1)
    else:
        d = cur.read_fixed(pr.w_d)
        sb = cur.read_fixed(pr.w_sib2)
    if cur.remaining():
        raise SchemeError(f"{cur.remaining()} unread bits after the label")
    return kind, d, sb


def decode_caterpillar(a: CaterpillarLabel, b: CaterpillarLabel) -> int:
    if a.params != b.params:
        raise SchemeError("labels carry different plans; not from one labeling")
    kind_a, da, sa = _parse(a)
    kind_b, db, sb = _parse(b)
    delta = abs(da - db)
    hops = kind_a + kind_b
    if delta == 0:
        if hops == 2:
            return 0 if sa == sb else 2
        return hops
    return delta + hops


class CatBatch:
    """Kernel-backed pair decoding over a packed label batch."""

    def __init__(self, buf: LabelBuffer, params: CatParams):
        k = len(buf)
        self.params = params
        self.kind = np.empty(k, dtype=np.int64)
        self.d = np.empty(k, dtype=np.int64)
        self.sib = np.empty(k, dtype=np.int64)
        kernels.cat_parse(
            buf.words,
            buf.starts,
            params.g,
            params.ell,
            params.L,
            params.w_d,
            params.w_sib1,
            params.w_sib2,
            self.kind,
            self.d,
            self.sib,
        )

    def decode_pairs(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        out = np.empty(us.shape[0], dtype=np.int64)
        kernels.cat_combine(self.kind, self.d, self.sib, us, vs, out)
        return out
