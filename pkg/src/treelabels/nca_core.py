"""Nearest-common-ancestor sublabels.

The exact and approximate schemes share one mechanism for locating the
NCA of two nodes from their labels alone.  A node's sublabel walks its
light ancestors top-down: a branching record per light step (position
codeword of the departure node on the current heavy path, plus the rank
of the light child taken) and a trailer codeword for the node's own
position on its final heavy path.

Comparing two sublabels finds the longest common branching prefix and
then compares position codewords on the first heavy path where the walks
part ways; that pins down the NCA's position and which side left it by a
light edge.  Codeword comparisons are order comparisons (the codes are
order-preserving per path); numeric offsets never appear.

Wire format: uint(m), then m-1 records [uint(len) | code | uint(rank)],
then uint(len) | trailer code.
"""

from dataclasses import dataclass

from .bitcodec import BitCursor, BitWriter, uint_cost
from .hld import HldIndex

__all__ = [
    "EQUAL",
    "U_ANCESTOR",
    "V_ANCESTOR",
    "DIVERGENT",
    "NcaSegment",
    "NcaSublabel",
    "NcaInfo",
    "encode_nca",
    "decode_nca",
]

EQUAL = "equal"
U_ANCESTOR = "u_ancestor"
V_ANCESTOR = "v_ancestor"
DIVERGENT = "divergent"


@dataclass(frozen=True)
class NcaSegment:
    off_val: int
    off_len: int
    rank: int


@dataclass(frozen=True)
class NcaSublabel:
    m: int  # light ancestors on root..node, node included if light
    segments: tuple  # m-1 NcaSegment records, top-down
    trail_val: int
    trail_len: int

    def write(self, w: BitWriter) -> None:
        w.write_uint(self.m)
        for s in self.segments:
            w.write_uint(s.off_len)
            w.write_fixed(s.off_val, s.off_len)
            w.write_uint(s.rank)
        w.write_uint(self.trail_len)
        w.write_fixed(self.trail_val, self.trail_len)

    @classmethod
    def read(cls, cur: BitCursor) -> "NcaSublabel":
        m = cur.read_uint()
        segs = []
        for _ in range(m - 1):
            ln = cur.read_uint()
            val = cur.read_fixed(ln)
            rank = cur.read_uint()
            segs.append(NcaSegment(val, ln, rank))
        tl = cur.read_uint()
        tv = cur.read_fixed(tl)
        return cls(m, tuple(segs), tv, tl)

    def bit_cost(self) -> int:
        bits = uint_cost(self.m) + uint_cost(self.trail_len) + self.trail_len
        for s in self.segments:
            bits += uint_cost(s.off_len) + s.off_len + uint_cost(s.rank)
        return bits


@dataclass(frozen=True)
class NcaInfo:
    relation: str
    light_side: str | None  # divergent only: "u", "v", or "both"
    lights_root_to_w: int
    lights_w_to_u: int
    lights_w_to_v: int


def encode_nca(idx: HldIndex, v: int) -> NcaSublabel:
    chain = idx.light_ancestors(v)
    segs = []
    for j in range(1, len(chain)):
        lc = chain[j]
        dep = int(idx.tree.parent[lc])
        segs.append(
            NcaSegment(
                int(idx.pos_val[dep]),
                int(idx.pos_len[dep]),
                int(idx.light_rank[lc]),
            )
        )
    return NcaSublabel(
        len(chain), tuple(segs), int(idx.pos_val[v]), int(idx.pos_len[v])
    )


def _cmp(va: int, la: int, vb: int, lb: int) -> int:
    L = max(la, lb)
    a = va << (L - la)
    b = vb << (L - lb)
    if a != b:
        return -1 if a < b else 1
    if la == lb:
        return 0
    raise ValueError("one position code is a proper prefix of another")


def decode_nca(a: NcaSublabel, b: NcaSublabel) -> NcaInfo:
    """Stateless NCA classification from two sublabels of one tree."""
    na = a.m - 1
    nb = b.m - 1
    c = 0
    while c < na and c < nb and a.segments[c] == b.segments[c]:
        c += 1

    def info(relation, side, root_w):
        return NcaInfo(relation, side, root_w, a.m - root_w, b.m - root_w)

    if c == na and c == nb:
        cc = _cmp(a.trail_val, a.trail_len, b.trail_val, b.trail_len)
        if cc == 0:
            return NcaInfo(EQUAL, None, a.m, 0, 0)
        if cc < 0:
            return NcaInfo(U_ANCESTOR, None, a.m, 0, b.m - a.m)
        return NcaInfo(V_ANCESTOR, None, b.m, a.m - b.m, 0)
    if c == na:
        s = b.segments[c]
        cc = _cmp(a.trail_val, a.trail_len, s.off_val, s.off_len)
        if cc <= 0:
            return NcaInfo(U_ANCESTOR, None, a.m, 0, b.m - a.m)
        return info(DIVERGENT, "v", c + 1)
    if c == nb:
        s = a.segments[c]
        cc = _cmp(s.off_val, s.off_len, b.trail_val, b.trail_len)
        if cc >= 0:
            return NcaInfo(V_ANCESTOR, None, b.m, a.m - b.m, 0)
        return info(DIVERGENT, "u", c + 1)
    sa = a.segments[c]
    sb = b.segments[c]
    cc = _cmp(sa.off_val, sa.off_len, sb.off_val, sb.off_len)
    if cc < 0:
        return info(DIVERGENT, "u", c + 1)
    if cc > 0:
        return info(DIVERGENT, "v", c + 1)
    return info(DIVERGENT, "both", c + 1)
