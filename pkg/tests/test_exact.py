import numpy as np
import pytest

from conftest import all_parent_arrays, check_all_pairs, complete_binary, make_tree, path, star
from treelabels.budgets import exact_budget, exact_distlist_budget
from treelabels.errors import SchemeError
from treelabels.exact_scheme import (
    ExactBatch,
    ExactLabel,
    decode_exact,
    encode_exact,
    encode_exact_buffer,
    encode_exact_one,
)
from treelabels.bitcodec import BitString, CodecError
from treelabels.hld import decompose
from treelabels.labelfile import encode_tree
from treelabels.tree_model import DistOracle, Tree, gen_random_tree, oracle_dist


def test_single_node():
    t = make_tree(())
    labs = encode_exact(t)
    assert decode_exact(labs[0], labs[0]) == 0


def test_wire_format_frozen():
    # locks the emitted bytes; any codec or layout change must show up here
    expect = {
        "star4": [(21, "343720"), (22, "3477f4"), (30, "345ce6e8"), (30, "345ce7e8")],
        "path4": [(22, "343790"), (22, "3477b4"), (22, "34b7d8"), (22, "34f7fc")],
    }
    for name, t in (("star4", star(4)), ("path4", path(4))):
        labs = encode_exact(t)
        got = [(lab.bits.nbits, lab.bits.to_hex()) for lab in labs]
        assert got == expect[name], name


def test_exhaustive_small_trees():
    for parents in all_parent_arrays(6):
        t = make_tree(parents)
        labs = encode_exact(t)
        for u in range(t.n):
            for v in range(t.n):
                assert decode_exact(labs[u], labs[v]) == oracle_dist(t, u, v)


def test_named_shapes_all_pairs():
    for t in (star(17), path(23), complete_binary(5)):
        check_all_pairs(t, encode_tree(t, "exact"))


def test_random_trees_batch_matches_python(rng):
    for _ in range(10):
        n = int(rng.integers(2, 300))
        t = gen_random_tree(n, int(rng.integers(1 << 30)))
        buf = encode_exact_buffer(t)
        labs = [ExactLabel(buf[v]) for v in range(n)]
        batch = ExactBatch(buf)
        us = rng.integers(0, n, 400)
        vs = rng.integers(0, n, 400)
        got = batch.decode_pairs(us, vs)
        for i in range(len(us)):
            assert got[i] == decode_exact(labs[us[i]], labs[vs[i]])


def test_decode_is_symmetric(rng):
    t = gen_random_tree(150, 11)
    labs = encode_exact(t)
    for _ in range(300):
        u, v = int(rng.integers(150)), int(rng.integers(150))
        assert decode_exact(labs[u], labs[v]) == decode_exact(labs[v], labs[u])


def test_encode_one_matches_bulk(rng):
    t = gen_random_tree(120, 13)
    buf = encode_exact_buffer(t)
    for v in rng.integers(0, 120, 30):
        assert encode_exact_one(t, int(v)).bits == buf[int(v)]


def test_rejects_weighted_tree():
    t = Tree(np.array([-1, 0], dtype=np.int64), np.array([0, 4], dtype=np.int64))
    with pytest.raises(SchemeError, match="unweighted"):
        encode_exact(t)


def test_labels_from_different_trees_rejected():
    a = encode_exact(path(5))[2]
    b = encode_exact(path(9))[2]
    with pytest.raises(SchemeError):
        decode_exact(a, b)


def test_size_budget_random(rng):
    for n in (256, 1500):
        for _ in range(5):
            t = gen_random_tree(n, int(rng.integers(1 << 30)))
            buf = encode_exact_buffer(t)
            assert int(buf.nbits.max()) <= exact_budget(n, 6.0)


def test_distlist_budget_worst_shape():
    # complete binary trees maximize light depth for their size
    t = complete_binary(8)
    w = (t.n - 1).bit_length()
    m = decompose(t).light_depth.astype(np.int64)
    worst = int((m * w - m * (m - 1) // 2).max())
    assert worst <= exact_distlist_budget(t.n)


def test_truncated_label_rejected():
    lab = encode_exact(path(6))[3]
    clipped = BitString.from01(lab.bits.to01()[:-4])
    with pytest.raises((SchemeError, CodecError)):
        decode_exact(ExactLabel(clipped), lab)
