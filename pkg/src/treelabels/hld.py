"""Heavy-light decomposition with order-preserving heavy-path position codes.

Every node picks the child with the largest subtree (smallest id on ties)
as heavy; the root and every non-heavy child are light.  Heavy edges chain
into heavy paths headed by their apex, which is the node's nearest light
ancestor.  Walking root to v touches at most ``floor(log2 n) + 1`` light
nodes, since each light step at least halves the subtree size.

Each node also gets a codeword for its position on its own heavy path,
built Shannon-Fano-Elias style from the position weights

    w_j = subtree_size(node_j) - subtree_size(heavy_child(node_j))

which telescope to subtree_size(apex).  The codewords are prefix-free and
strictly increasing along the path, so two positions on one path compare
by comparing codewords (align to a common length by left shift); no
decoder ever needs the numeric offset.  Position j costs
``ceil(log2(total / w_j)) + 1`` bits, which telescopes to O(log n) over a
label's light ancestors instead of the Theta(log^2 n) a fixed-width
offset field would cost.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .tree_model import Tree, TreeError

__all__ = ["HldIndex", "decompose", "light_count_to"]


@dataclass
class HldIndex:
    """Read-only decomposition of one tree; arrays are per-node int64."""

    tree: Tree
    subtree_size: np.ndarray
    heavy_child: np.ndarray  # -1 at leaves
    is_light: np.ndarray  # 0/1
    apex: np.ndarray  # nearest light ancestor; a light node is its own
    heavy_offset: np.ndarray  # hops from apex along the heavy path
    light_depth: np.ndarray  # light nodes on root..v inclusive
    light_rank: np.ndarray  # rank among parent's light children, -1 if heavy
    pos_val: np.ndarray  # heavy-path position codeword
    pos_len: np.ndarray

    def light_ancestors(self, v: int) -> list[int]:
        """Light ancestors of v in root-to-node order, v included if light."""
        out = []
        a = int(self.apex[v])
        while True:
            out.append(a)
            p = int(self.tree.parent[a])
            if p < 0:
                break
            a = int(self.apex[p])
        out.reverse()
        return out


def decompose(t: Tree) -> HldIndex:
    n = t.n
    cs, cf = t.children_csr

    size = np.ones(n, dtype=np.int64)
    kernels.subtree_sizes(t.bfs_order, t.parent, size)

    heavy = np.empty(n, dtype=np.int64)
    kernels.heavy_children(cs, cf, size, heavy)

    is_light = np.ones(n, dtype=np.int64)
    nonroot = np.flatnonzero(t.parent >= 0)
    is_light[nonroot[heavy[t.parent[nonroot]] == nonroot]] = 0

    apex = np.empty(n, dtype=np.int64)
    light_depth = np.empty(n, dtype=np.int64)
    kernels.apex_fill(t.bfs_order, t.parent, is_light, apex, light_depth)
    heavy_offset = t.depth - t.depth[apex]

    light_rank = _light_ranks(t, size, is_light, nonroot)
    pos_val, pos_len = _position_codes(n, size, heavy, is_light, apex)

    return HldIndex(
        tree=t,
        subtree_size=size,
        heavy_child=heavy,
        is_light=is_light,
        apex=apex,
        heavy_offset=heavy_offset,
        light_depth=light_depth,
        light_rank=light_rank,
        pos_val=pos_val,
        pos_len=pos_len,
    )


def _light_ranks(t, size, is_light, nonroot):
    # per parent, light children ranked by (subtree size desc, id asc)
    rank = np.full(t.n, -1, dtype=np.int64)
    lights = nonroot[is_light[nonroot] == 1]
    if len(lights) == 0:
        return rank
    par = t.parent[lights]
    srt = np.lexsort((lights, -size[lights], par))
    sl = lights[srt]
    sp = par[srt]
    idx = np.arange(len(sl), dtype=np.int64)
    first = np.empty(len(sl), dtype=bool)
    first[0] = True
    first[1:] = sp[1:] != sp[:-1]
    group_start = np.maximum.accumulate(np.where(first, idx, 0))
    rank[sl] = idx - group_start
    return rank


def _position_codes(n, size, heavy, is_light, apex):
    """Shannon-Fano-Elias codeword per node over its heavy path."""
    pos_val = np.empty(n, dtype=np.int64)
    pos_len = np.empty(n, dtype=np.int64)
    for a in range(n):
        if not is_light[a]:
            continue
        total = int(size[a])
        prefix = 0
        v = a
        while v >= 0:
            h = int(heavy[v])
            w = int(size[v]) - (int(size[h]) if h >= 0 else 0)
            # ceil(log2(total / w)) via integer ceil-division
            e = ((total + w - 1) // w - 1).bit_length()
            ln = e + 1
            pos_val[v] = ((2 * prefix + w) << ln) // (2 * total)
            pos_len[v] = ln
            prefix += w
            v = h
        if prefix != total:
            raise TreeError("heavy path weights fail to telescope")
    return pos_val, pos_len


def light_count_to(idx: HldIndex, v: int, a: int) -> int:
    """Number of light nodes on the root-to-a path, a an ancestor of v.

    Raises:
        TreeError: when a is not an ancestor of v (v itself allowed).
    """
    if not idx.tree.is_ancestor(a, v):
        raise TreeError(f"node {a} is not an ancestor of node {v}")
    return int(idx.light_depth[a])
