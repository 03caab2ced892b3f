"""Hard-instance tree families for lower-bound experiments.

The core family is the recursive claw tree with parameters (h, W, a): a
height-0 tree is a single node; at height h the root r reaches a center
c by an edge of weight W - x, and c reaches the roots of two (h-1,
W/a, a)-subtrees by edges of weight x each, where x < W/a^level is a
per-claw choice.  Leaf-to-root distances are independent of every x
(each claw contributes exactly its level weight W/a^level), while
leaf-to-leaf distances leak the x of the claw where the leaf paths
separate:

    dist(u, v) = 2 * (sum_{j=1..h_lev-1} W_lev / a^j  +  x_lev)

for leaves splitting at a level-lev claw with weight W_lev = W/a^lev.
The evaluation keeps the sum as an integer loop, which is also the
correct a = 1 limit of the closed geometric form.

A (h, W^2, a^2)-tree splits into two (h, W, a)-trees by writing each
claw weight y < (W/a^lev)^2 in base V_lev = W/a^lev as y = y0 + y1 *
V_lev and routing digit 0 and digit 1 into separate trees.  Distances in
the squared tree reassemble from the split trees' distances at the
separating level via the family's level constants; see the tests for
both reassembly identities.

Leaves are indexed 0..2^h-1; the bits of the index MSB-first spell the
path of claw-side choices from the top (0 = first subtree).
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import SchemeError
from .tree_model import Tree, TreeError

__all__ = [
    "HwaTree",
    "gen_hwa_tree",
    "hwa_leaf_distance",
    "hwa_level_weight",
    "hwa_cross_constant",
    "expand_unweighted",
    "phi_split",
    "gen_hard_caterpillar",
]


@dataclass(frozen=True)
class HwaTree:
    """A claw tree plus the bookkeeping the distance formulas need."""

    h: int
    W: int
    a: int
    x_choices: tuple  # per level, a tuple of 2^level claw choices
    tree: Tree
    leaves: np.ndarray  # node id per leaf index

    @property
    def n(self) -> int:
        return self.tree.n


def _validate_params(h: int, W: int, a: int) -> None:
    if h < 0:
        raise SchemeError(f"height must be >= 0, got {h}")
    if a < 1:
        raise SchemeError(f"branch divisor must be >= 1, got {a}")
    if h > 0:
        for lev in range(h):
            q = a**lev
            if W % q or W // q < 1:
                raise SchemeError(
                    f"W={W} is not divisible down to level {lev} (a={a})"
                )


def hwa_level_weight(W: int, a: int, lev: int) -> int:
    return W // a**lev


def gen_hwa_tree(h: int, W: int, a: int, seed=None, x_choices=None) -> HwaTree:
    """Build a (h, W, a) claw tree; random claw choices unless given."""
    _validate_params(h, W, a)
    if x_choices is None:
        rng = np.random.default_rng(seed)
        x_choices = tuple(
            tuple(
                int(x)
                for x in rng.integers(0, hwa_level_weight(W, a, lev), 2**lev)
            )
            for lev in range(h)
        )
    else:
        x_choices = tuple(tuple(int(x) for x in lev_xs) for lev_xs in x_choices)
        if len(x_choices) != h:
            raise SchemeError(f"expected {h} levels of claw choices")
        for lev, xs in enumerate(x_choices):
            cap = hwa_level_weight(W, a, lev)
            if len(xs) != 2**lev or any(not 0 <= x < cap for x in xs):
                raise SchemeError(f"bad claw choices at level {lev}")

    parent = []
    weight = []
    leaves = np.empty(2**h, dtype=np.int64)
    leaf_count = [0]

    def rec(hh, ww, lev, claw, up, up_w):
        rid = len(parent)
        parent.append(up)
        weight.append(up_w)
        if hh == 0:
            leaves[leaf_count[0]] = rid
            leaf_count[0] += 1
            return
        x = x_choices[lev][claw]
        cid = len(parent)
        parent.append(rid)
        weight.append(ww - x)
        rec(hh - 1, ww // a, lev + 1, 2 * claw, cid, x)
        rec(hh - 1, ww // a, lev + 1, 2 * claw + 1, cid, x)

    rec(h, W, 0, 0, -1, 0)
    t = Tree(parent, weight if h > 0 else None, allow_zero_weight=True)
    return HwaTree(h, W, a, x_choices, t, leaves)


def _split_level(h: int, i: int, j: int) -> int:
    """Level of the claw where leaf paths i and j separate."""
    diff = i ^ j
    return h - diff.bit_length()


def hwa_cross_constant(h: int, W: int, a: int, lev: int) -> int:
    """Leaf-to-leaf distance through a level-lev claw, before the 2x term."""
    wl = hwa_level_weight(W, a, lev)
    return 2 * sum(wl // a**jj for jj in range(1, h - lev))


def hwa_leaf_distance(hwa: HwaTree, i: int, j: int) -> int:
    """Distance between leaf indices i and j by the claw formula."""
    top = 2**hwa.h
    if not (0 <= i < top and 0 <= j < top):
        raise SchemeError(f"leaf index out of range [0, {top})")
    if i == j:
        return 0
    lev = _split_level(hwa.h, i, j)
    claw = i >> (hwa.h - lev)
    x = hwa.x_choices[lev][claw]
    return hwa_cross_constant(hwa.h, hwa.W, hwa.a, lev) + 2 * x


def expand_unweighted(t: Tree):
    """Subdivide weighted edges into unit chains; contract weight-0 edges.

    Returns (unweighted tree, node map original -> new id).
    """
    if t.unweighted:
        return Tree(t.parent.copy()), np.arange(t.n, dtype=np.int64)
    node_map = np.full(t.n, -1, dtype=np.int64)
    new_parent = []

    def fresh(p):
        new_parent.append(p)
        return len(new_parent) - 1

    node_map[t.root] = fresh(-1)
    for v in t.bfs_order[1:]:
        w = int(t.weight[v])
        up = int(node_map[t.parent[v]])
        if w == 0:
            node_map[v] = up
            continue
        for _ in range(w - 1):
            up = fresh(up)
        node_map[v] = fresh(up)
    return Tree(new_parent), node_map


def phi_split(hwa: HwaTree, side: int) -> HwaTree:
    """Digit ``side`` of the base-V split of a (h, V^2, a^2) claw tree."""
    if side not in (0, 1):
        raise SchemeError(f"side must be 0 or 1, got {side}")
    V = isqrt(hwa.W)
    A = isqrt(hwa.a)
    if V * V != hwa.W or A * A != hwa.a:
        raise SchemeError(
            f"(h={hwa.h}, W={hwa.W}, a={hwa.a}) is not a squared family member"
        )
    digits = []
    for lev, xs in enumerate(hwa.x_choices):
        vl = hwa_level_weight(V, A, lev)
        if side == 0:
            digits.append(tuple(x % vl for x in xs))
        else:
            digits.append(tuple(x // vl for x in xs))
    return gen_hwa_tree(hwa.h, V, A, x_choices=tuple(digits))


def gen_hard_caterpillar(n: int, seed) -> Tree:
    """Caterpillar stressing the leaf-group structure of the labeling.

    k = floor(log2 n) leaf groups of floor(2^k / (2k)) leaves each sit at
    spine positions i_1 = 1 and i_2..i_k drawn uniformly from the
    2^(k-1)-node spine, so group distances |i_s - i_t| + 2 span the whole
    spine.
    """
    if n < 4:
        raise TreeError(f"n must be >= 4, got {n}")
    rng = np.random.default_rng(seed)
    k = n.bit_length() - 1
    m = 1 << k
    s = m // 2
    per = m // (2 * k)
    positions = np.empty(k, dtype=np.int64)
    positions[0] = 1
    positions[1:] = rng.integers(1, s + 1, size=k - 1)
    parent = np.full(s + k * per, -1, dtype=np.int64)
    parent[1:s] = np.arange(s - 1)
    nxt = s
    for p in positions:
        parent[nxt : nxt + per] = p - 1  # 1-based position to spine id
        nxt += per
    return Tree(parent)
