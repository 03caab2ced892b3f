import numpy as np
import pytest

from treelabels.errors import SchemeError
from treelabels.labelfile import encode_tree, from_doc, load_labels, save_labels, to_doc
from treelabels.tree_model import (
    DistOracle,
    gen_random_caterpillar,
    gen_random_tree,
    gen_weighted_path,
)

from conftest import check_all_pairs


def test_encode_dispatch_errors():
    t = gen_random_tree(10, seed=0)
    with pytest.raises(SchemeError, match="unknown scheme"):
        encode_tree(t, "fancy")
    with pytest.raises(SchemeError, match="eps"):
        encode_tree(t, "exact", eps=0.5)
    with pytest.raises(SchemeError, match="eps"):
        encode_tree(t, "approx")


def test_roundtrip_all_schemes(tmp_path, rng):
    rand = gen_random_tree(60, seed=int(rng.integers(1 << 30)))
    wpath = gen_weighted_path(9, 500, seed=3)
    cat = gen_random_caterpillar(40, seed=5)
    cases = [
        (rand, "exact", None),
        (rand, "approx", 0.5),
        (wpath, "path", None),
        (cat, "caterpillar", None),
    ]
    for t, scheme, eps in cases:
        ls = encode_tree(t, scheme, eps=eps)
        f = tmp_path / f"{scheme}.labels.json"
        save_labels(ls, f)
        back = load_labels(f)
        assert back.scheme == scheme
        assert back.n == t.n
        assert back.params == ls.params
        assert [b.to01() for b in back.labels] == [b.to01() for b in ls.labels]
        oracle = None if scheme == "approx" else DistOracle(t)
        if scheme == "approx":
            d = DistOracle(t)
            us, vs = np.triu_indices(t.n, k=1)
            got = back.batch().decode_pairs(us.astype(np.int64), vs.astype(np.int64))
            want = d.pairs(us, vs)
            fp = back.params["eps_fp"]
            assert np.all(got >= want)
            assert np.all(got * 4096 <= want * (4096 + fp))
        else:
            check_all_pairs(t, back, oracle)


def test_batch_matches_python_decode(rng):
    t = gen_random_tree(30, seed=int(rng.integers(1 << 30)))
    ls = encode_tree(t, "exact")
    us, vs = np.triu_indices(t.n, k=1)
    got = ls.batch().decode_pairs(us.astype(np.int64), vs.astype(np.int64))
    for a, b, d in zip(us.tolist(), vs.tolist(), got.tolist()):
        assert ls.decode(a, b) == d
        assert ls.decode(b, a) == d


def test_decode_checks_node_range():
    ls = encode_tree(gen_random_tree(5, seed=0), "exact")
    with pytest.raises(SchemeError, match="out of range"):
        ls.decode(0, 5)
    with pytest.raises(SchemeError, match="out of range"):
        ls.decode(-1, 0)


def test_bit_sizes():
    ls = encode_tree(gen_random_tree(20, seed=0), "exact")
    sizes = ls.bit_sizes()
    assert sizes.tolist() == [len(b) for b in ls.labels]


def test_from_doc_rejects_malformed(tmp_path):
    ls = encode_tree(gen_random_tree(6, seed=0), "exact")
    doc = to_doc(ls)

    bad = dict(doc)
    bad["scheme"] = "nope"
    with pytest.raises(SchemeError, match="unknown scheme"):
        from_doc(bad)

    bad = dict(doc)
    del bad["labels"]
    with pytest.raises(SchemeError):
        from_doc(bad)

    bad = dict(doc)
    bad["labels"] = [{"bits": 3, "hex": "zz"}] + doc["labels"][1:]
    with pytest.raises(SchemeError, match="label 0"):
        from_doc(bad)

    with pytest.raises(SchemeError):
        from_doc(["not", "a", "mapping"])

    f = tmp_path / "junk.json"
    f.write_text("{ not json", encoding="ascii")
    with pytest.raises(SchemeError):
        load_labels(f)


def test_decode_without_tree(tmp_path):
    # the decoder input is two labels plus the stored params, nothing else
    t = gen_random_tree(25, seed=9)
    oracle = DistOracle(t)
    f = tmp_path / "x.json"
    save_labels(encode_tree(t, "exact"), f)
    del t
    back = load_labels(f)
    assert back.decode(3, 17) == int(oracle.pairs(np.array([3]), np.array([17]))[0])
