import numpy as np
import pytest

from conftest import all_parent_arrays, complete_binary, make_tree, path, star
from treelabels.approx_scheme import (
    ApproxBatch,
    ApproxLabel,
    decode_approx,
    encode_approx,
    encode_approx_buffer,
    eps_to_fp,
    fp_to_eps,
    s_lengths,
    thresholds_upto,
)
from treelabels.budgets import approx_s_budget
from treelabels.errors import SchemeError
from treelabels.tree_model import DistOracle, Tree, gen_random_tree, oracle_dist

EPS_GRID = (0.1, 0.5, 1.0, 5.0)


def sandwich_ok(d, dhat, fp):
    scale = 1 << 12
    return d <= dhat and dhat * scale <= d * (scale + fp)


def test_eps_quantization():
    assert eps_to_fp(1.0) == 4096
    assert eps_to_fp(0.5) == 2048
    assert fp_to_eps(4096) == 1.0
    # floor: the realized stretch never exceeds the request
    assert eps_to_fp(0.3) == int(0.3 * 4096)
    with pytest.raises(SchemeError):
        eps_to_fp(0.0001)
    with pytest.raises(SchemeError):
        eps_to_fp(16.0)
    with pytest.raises(SchemeError):
        eps_to_fp(-1.0)


def test_thresholds_shape():
    for eps in EPS_GRID:
        th = thresholds_upto(eps_to_fp(eps), 10**6)
        assert th[0] == 1
        assert np.all(np.diff(th) > 0)
        assert th[-1] >= 10**6


def test_exhaustive_small_sandwich():
    for eps in EPS_GRID:
        fp = eps_to_fp(eps)
        for parents in all_parent_arrays(6):
            t = make_tree(parents)
            labs = encode_approx(t, eps)
            for u in range(t.n):
                for v in range(t.n):
                    d = oracle_dist(t, u, v)
                    dhat = decode_approx(labs[u], labs[v])
                    assert sandwich_ok(d, dhat, fp), (parents, u, v, eps)


def test_ancestor_pairs_decode_exactly(rng):
    for _ in range(8):
        n = int(rng.integers(2, 400))
        t = gen_random_tree(n, int(rng.integers(1 << 30)))
        labs = encode_approx(t, 1.0)
        for v in rng.integers(1, n, 50):
            v = int(v)
            a = int(t.parent[v])
            hops = 1
            while a > 0 and rng.integers(2):
                a = int(t.parent[a])
                hops += 1
            assert decode_approx(labs[a], labs[v]) == hops
            assert decode_approx(labs[v], labs[a]) == hops
        assert decode_approx(labs[0], labs[0]) == 0


def test_random_trees_batch_matches_python(rng):
    for eps in (0.25, 1.0):
        for _ in range(5):
            n = int(rng.integers(2, 250))
            t = gen_random_tree(n, int(rng.integers(1 << 30)))
            buf = encode_approx_buffer(t, eps)
            labs = [ApproxLabel(buf[v]) for v in range(n)]
            us = rng.integers(0, n, 300)
            vs = rng.integers(0, n, 300)
            got = ApproxBatch(buf).decode_pairs(us, vs)
            for i in range(len(us)):
                assert got[i] == decode_approx(labs[us[i]], labs[vs[i]])


def test_random_sandwich_batch(rng):
    oracle_cache = {}
    for eps in EPS_GRID:
        fp = eps_to_fp(eps)
        scale = 1 << 12
        for seed in (3, 4):
            t = gen_random_tree(1200, seed)
            oracle = oracle_cache.setdefault(seed, DistOracle(t))
            buf = encode_approx_buffer(t, eps)
            us = rng.integers(0, t.n, 4000)
            vs = rng.integers(0, t.n, 4000)
            dhat = ApproxBatch(buf).decode_pairs(us, vs)
            d = oracle.pairs(us, vs)
            assert np.all(d <= dhat)
            assert np.all(dhat * scale <= d * (scale + fp))


def test_eps_mismatch_rejected():
    t = path(6)
    a = encode_approx(t, 0.5)[0]
    b = encode_approx(t, 1.0)[3]
    with pytest.raises(SchemeError, match="eps"):
        decode_approx(a, b)


def test_rejects_weighted_tree():
    t = Tree(np.array([-1, 0], dtype=np.int64), np.array([0, 4], dtype=np.int64))
    with pytest.raises(SchemeError, match="unweighted"):
        encode_approx(t, 1.0)


def test_s_lengths_match_labels(rng):
    # the sketch stream is the label tail: total minus the parsed front
    from treelabels.bitcodec import BitCursor
    from treelabels.nca_core import NcaSublabel

    t = gen_random_tree(300, 21)
    buf = encode_approx_buffer(t, 1.0)
    lens = s_lengths(t, 1.0)
    assert lens[0] == 0
    for v in range(t.n):
        bits = buf[v]
        cur = BitCursor(bits)
        cur.read_fixed(16)
        cur.read_uint()
        NcaSublabel.read(cur)
        assert cur.remaining() == lens[v], v


def test_s_budget_random_trees(rng):
    for seed in range(3):
        t = gen_random_tree(4096, seed)
        assert int(s_lengths(t, 1.0).max()) <= approx_s_budget(4096)


def test_deep_shapes_sandwich():
    # long path and complete tree push the threshold table hardest
    for t in (path(3000), complete_binary(11)):
        for eps in (0.1, 1.0):
            fp = eps_to_fp(eps)
            buf = encode_approx_buffer(t, eps)
            oracle = DistOracle(t)
            rng = np.random.default_rng(7)
            us = rng.integers(0, t.n, 3000)
            vs = rng.integers(0, t.n, 3000)
            dhat = ApproxBatch(buf).decode_pairs(us, vs)
            d = oracle.pairs(us, vs)
            scale = 1 << 12
            assert np.all(d <= dhat)
            assert np.all(dhat * scale <= d * (scale + fp))
