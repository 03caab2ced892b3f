import numpy as np

from conftest import all_parent_arrays, complete_binary, make_tree, star
from treelabels.bitcodec import BitCursor, BitWriter
from treelabels.hld import decompose
from treelabels.nca_core import (
    DIVERGENT,
    EQUAL,
    U_ANCESTOR,
    V_ANCESTOR,
    decode_nca,
    encode_nca,
)
from treelabels.tree_model import DistOracle, gen_random_tree


def true_info(t, idx, oracle, u, v):
    """Relation, divergence side, and NCA light depth straight from the tree."""
    w = int(oracle.nca(np.array([u]), np.array([v]))[0])
    if u == v:
        return EQUAL, None, int(idx.light_depth[w])
    if w == u:
        return U_ANCESTOR, None, int(idx.light_depth[w])
    if w == v:
        return V_ANCESTOR, None, int(idx.light_depth[w])

    def child_toward(x):
        c = x
        while int(t.parent[c]) != w:
            c = int(t.parent[c])
        return c

    cu, cv = child_toward(u), child_toward(v)
    lu, lv = bool(idx.is_light[cu]), bool(idx.is_light[cv])
    side = "both" if lu and lv else ("u" if lu else "v")
    return DIVERGENT, side, int(idx.light_depth[w])


def assert_tree_decodes(t):
    idx = decompose(t)
    oracle = DistOracle(t)
    subs = [encode_nca(idx, v) for v in range(t.n)]
    for u in range(t.n):
        for v in range(t.n):
            got = decode_nca(subs[u], subs[v])
            relation, side, lights_w = true_info(t, idx, oracle, u, v)
            assert got.relation == relation, (u, v)
            assert got.lights_root_to_w == lights_w, (u, v)
            if relation == DIVERGENT:
                assert got.light_side == side, (u, v)
            assert got.lights_w_to_u == idx.light_depth[u] - lights_w
            assert got.lights_w_to_v == idx.light_depth[v] - lights_w


def test_exhaustive_small_trees():
    for parents in all_parent_arrays(6):
        assert_tree_decodes(make_tree(parents))


def test_named_shapes():
    assert_tree_decodes(star(9))
    assert_tree_decodes(complete_binary(4))


def test_random_trees(rng):
    for _ in range(12):
        n = int(rng.integers(2, 250))
        assert_tree_decodes(gen_random_tree(n, int(rng.integers(1 << 30))))


def test_self_compare_is_equal(rng):
    t = gen_random_tree(80, 5)
    idx = decompose(t)
    for v in range(t.n):
        sub = encode_nca(idx, v)
        info = decode_nca(sub, sub)
        assert info.relation == EQUAL
        assert info.lights_w_to_u == 0 and info.lights_w_to_v == 0


def test_wire_roundtrip_and_cost(rng):
    for _ in range(8):
        n = int(rng.integers(1, 300))
        t = gen_random_tree(n, int(rng.integers(1 << 30)))
        idx = decompose(t)
        for v in rng.integers(0, n, 25):
            sub = encode_nca(idx, int(v))
            w = BitWriter()
            sub.write(w)
            bs = w.freeze()
            assert bs.nbits == sub.bit_cost()
            cur = BitCursor(bs)
            back = type(sub).read(cur)
            assert cur.remaining() == 0
            assert back == sub
