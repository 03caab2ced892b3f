"""Rooted trees over dense node ids 0..n-1.

A tree is a parent array plus optional positive edge weights (weight[v]
belongs to the edge from v up to parent[v]).  The JSON wire format is

    {"n": 5, "root": 0, "parent": [null, 0, 0, 1, 1], "weight": [...]}

with ``weight`` omitted when every edge weighs 1.  Serialization is
canonical: fixed key order, compact separators, one trailing newline.
"""

import json

import numpy as np

from . import kernels

__all__ = [
    "Tree",
    "TreeError",
    "parse_tree",
    "serialize_tree",
    "oracle_dist",
    "oracle_dist_pairs",
    "DistOracle",
    "gen_random_tree",
    "gen_random_caterpillar",
    "gen_weighted_path",
]


class TreeError(ValueError):
    """Structural problem: cycle, orphan, bad id, bad weight."""


class Tree:
    """Immutable rooted tree.

    Attributes:
        n: node count.
        root: root id.
        parent: int64 array, parent[root] == -1.
        weight: int64 array of per-edge weights (weight[root] == 0), or
            None for a unit-weight tree.
    """

    __slots__ = (
        "n",
        "root",
        "parent",
        "weight",
        "_children_start",
        "_children_flat",
        "_order",
        "_depth",
        "_distroot",
    )

    def __init__(self, parent, weight=None, allow_zero_weight: bool = False):
        parent = np.asarray(
            [(-1 if p is None else p) for p in parent], dtype=np.int64
        )
        n = parent.shape[0]
        if n == 0:
            raise TreeError("empty tree")
        roots = np.flatnonzero(parent < 0)
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, found {len(roots)}")
        root = int(roots[0])
        if parent.max() >= n:
            bad = int(np.flatnonzero(parent >= n)[0])
            raise TreeError(f"node {bad}: parent {int(parent[bad])} out of range")
        if weight is not None:
            weight = np.asarray(weight, dtype=np.int64)
            if weight.shape[0] != n:
                raise TreeError("weight array length mismatch")
            low = 0 if allow_zero_weight else 1
            mask = np.arange(n) != root
            bad = np.flatnonzero(mask & (weight < low))
            if len(bad):
                v = int(bad[0])
                raise TreeError(
                    f"node {v}: edge weight {int(weight[v])} below {low}"
                )
            wt = weight.copy()
            wt[root] = 0
            # all-unit weights normalize to the unweighted representation
            weight = None if bool(np.all(wt[mask] == 1)) else wt
        self.n = n
        self.root = root
        self.parent = parent
        self.weight = weight

        # children in id order: stable sort by parent puts the root first
        idx = np.argsort(parent, kind="stable")
        counts = np.bincount(parent[parent >= 0], minlength=n)
        self._children_start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self._children_start[1:])
        self._children_flat = idx[1:].astype(np.int64)

        order = np.empty(n, dtype=np.int64)
        depth = np.empty(n, dtype=np.int64)
        distroot = np.empty(n, dtype=np.int64)
        wt = self.weight if self.weight is not None else np.ones(n, dtype=np.int64)
        reached = kernels.bfs_fill(
            self._children_start, self._children_flat, root, wt, order,
            depth, distroot,
        )
        if reached != n:
            seen = np.zeros(n, dtype=bool)
            seen[order[:reached]] = True
            bad = int(np.flatnonzero(~seen)[0])
            raise TreeError(f"node {bad} is unreachable from the root")
        self._order = order
        self._depth = depth
        self._distroot = distroot

    @property
    def unweighted(self) -> bool:
        return self.weight is None

    @property
    def depth(self) -> np.ndarray:
        """Hop count from the root, per node."""
        return self._depth

    @property
    def distroot_all(self) -> np.ndarray:
        """Weighted distance from the root, per node."""
        return self._distroot

    @property
    def bfs_order(self) -> np.ndarray:
        return self._order

    def children(self, v: int) -> np.ndarray:
        s, e = self._children_start[v], self._children_start[v + 1]
        return self._children_flat[s:e]

    @property
    def children_csr(self):
        return self._children_start, self._children_flat

    def distroot(self, v: int) -> int:
        return int(self._distroot[v])

    def is_ancestor(self, a: int, v: int) -> bool:
        """True when a lies on the root-to-v path (a == v counts)."""
        while self._depth[v] > self._depth[a]:
            v = int(self.parent[v])
        return v == a

    def __repr__(self):
        kind = "unit" if self.unweighted else "weighted"
        return f"Tree(n={self.n}, root={self.root}, {kind})"


def parse_tree(text: str) -> Tree:
    """Parse the JSON wire format; errors name the offending node."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise TreeError(f"bad JSON: {e}") from None
    if not isinstance(obj, dict):
        raise TreeError("tree document must be a JSON object")
    for key in ("n", "root", "parent"):
        if key not in obj:
            raise TreeError(f"missing field {key!r}")
    n = obj["n"]
    parent = obj["parent"]
    if not isinstance(parent, list) or len(parent) != n:
        raise TreeError("parent array length does not match n")
    for v, p in enumerate(parent):
        if p is not None and (not isinstance(p, int) or not 0 <= p < n):
            raise TreeError(f"node {v}: bad parent {p!r}")
    root = obj["root"]
    if not isinstance(root, int) or not 0 <= root < n:
        raise TreeError(f"bad root {root!r}")
    if parent[root] is not None:
        raise TreeError(f"node {root}: declared root has a parent")
    weight = obj.get("weight")
    t = Tree(parent, weight, allow_zero_weight=True)
    if t.root != root:
        raise TreeError(f"node {t.root}: parent is null but root says {root}")
    return t


def serialize_tree(t: Tree) -> str:
    doc = {
        "n": t.n,
        "root": t.root,
        "parent": [None if v == t.root else int(p) for v, p in enumerate(t.parent)],
    }
    if not t.unweighted:
        doc["weight"] = [int(w) for w in t.weight]
    return json.dumps(doc, separators=(",", ":")) + "\n"


# ------------------------------------------------------------------ oracles


def oracle_dist(t: Tree, u: int, v: int) -> int:
    """Reference distance by parent-pointer walking."""
    depth = t._depth
    dr = t._distroot
    s = int(dr[u] + dr[v])
    while depth[u] > depth[v]:
        u = int(t.parent[u])
    while depth[v] > depth[u]:
        v = int(t.parent[v])
    while u != v:
        u = int(t.parent[u])
        v = int(t.parent[v])
    return s - 2 * int(dr[u])


def oracle_dist_pairs(t: Tree, us, vs) -> np.ndarray:
    """Batched reference distances (kernel-backed parent walks)."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    out = np.empty(us.shape[0], dtype=np.int64)
    kernels.walk_dist_pairs(t.parent, t._depth, t._distroot, us, vs, out)
    return out


class DistOracle:
    """Euler-tour + sparse-table LCA oracle for large pair sweeps.

    O(n log n) build, O(1) per query, fully vectorized over pair batches.
    Cross-checked against oracle_dist in the test suite; use this one when
    the number of queries makes walking too slow.
    """

    def __init__(self, t: Tree):
        n = t.n
        cs, cf = t.children_csr
        tour = np.empty(2 * n - 1, dtype=np.int64)
        tdepth = np.empty(2 * n - 1, dtype=np.int64)
        first = np.empty(n, dtype=np.int64)
        cnt = kernels.euler_tour(cs, cf, t.root, tour, tdepth, first)
        if cnt != 2 * n - 1:
            raise TreeError("euler tour length mismatch")
        self._tour = tour
        self._tdepth = tdepth
        self._first = first
        self._dr = t._distroot
        m = tour.shape[0]
        levels = max(1, int(m - 1).bit_length())
        sp = np.empty((levels, m), dtype=np.int64)
        sp[0] = np.arange(m)
        for k in range(1, levels):
            half = 1 << (k - 1)
            span = m - (1 << k) + 1
            a = sp[k - 1, :span]
            b = sp[k - 1, half : half + span]
            sp[k, :span] = np.where(tdepth[a] <= tdepth[b], a, b)
        self._sp = sp

    def nca(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        f = self._first
        lo = np.minimum(f[us], f[vs])
        hi = np.maximum(f[us], f[vs])
        span = hi - lo + 1
        k = np.frexp(span.astype(np.float64))[1] - 1
        a = self._sp[k, lo]
        b = self._sp[k, hi - (1 << k) + 1]
        pos = np.where(self._tdepth[a] <= self._tdepth[b], a, b)
        return self._tour[pos]

    def pairs(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        w = self.nca(us, vs)
        return self._dr[us] + self._dr[vs] - 2 * self._dr[w]


# --------------------------------------------------------------- generators


def gen_random_tree(n: int, seed) -> Tree:
    """Uniform-attachment random tree: parent[i] uniform over [0, i)."""
    if n < 1:
        raise TreeError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    parent = np.full(n, -1, dtype=np.int64)
    if n > 1:
        parent[1:] = rng.integers(0, np.arange(1, n))
    return Tree(parent)


def gen_random_caterpillar(n: int, seed, spine_len: int | None = None) -> Tree:
    """Random caterpillar: a spine path plus leaves on random spine nodes."""
    if n < 2:
        raise TreeError(f"n must be >= 2, got {n}")
    rng = np.random.default_rng(seed)
    if spine_len is None:
        spine_len = int(rng.integers(1, n))
    if not 1 <= spine_len < n:
        raise TreeError(f"spine_len {spine_len} out of range [1, {n})")
    parent = np.full(n, -1, dtype=np.int64)
    parent[1:spine_len] = np.arange(spine_len - 1)
    parent[spine_len:] = rng.integers(0, spine_len, size=n - spine_len)
    return Tree(parent)


def gen_weighted_path(k: int, max_weight: int, seed) -> Tree:
    """Path on k nodes rooted at one end, weights uniform in [1, max_weight]."""
    if k < 1:
        raise TreeError(f"k must be >= 1, got {k}")
    if max_weight < 1:
        raise TreeError(f"max_weight must be >= 1, got {max_weight}")
    rng = np.random.default_rng(seed)
    parent = np.arange(-1, k - 1, dtype=np.int64)
    weight = np.zeros(k, dtype=np.int64)
    if k > 1:
        weight[1:] = rng.integers(1, max_weight + 1, size=k - 1)
    return Tree(parent, weight if k > 1 else None)
