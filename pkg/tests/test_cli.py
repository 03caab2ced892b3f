import json
import os

import numpy as np
import pytest

from treelabels.cli import main
from treelabels.tree_model import DistOracle, parse_tree


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def gen_encode(capsys, tmp_path, family, scheme, extra_gen=(), extra_enc=()):
    tree = str(tmp_path / "t.tree")
    labels = str(tmp_path / "t.labels.json")
    code, out, err = run(capsys, "gen", "--family", family, *extra_gen, "--out", tree)
    assert code == 0, err
    code, out, err = run(
        capsys, "encode", tree, "--scheme", scheme, *extra_enc, "--out", labels
    )
    assert code == 0, err
    return tree, labels


SCHEME_CASES = [
    ("random-tree", "exact", ("--n", "80", "--seed", "4"), ()),
    ("random-tree", "approx", ("--n", "80", "--seed", "4"), ("--eps", "0.25")),
    ("path", "path", ("--k", "12", "--W", "900", "--seed", "4"), ()),
    ("caterpillar", "caterpillar", ("--n", "70", "--seed", "4"), ()),
]


@pytest.mark.parametrize("family,scheme,gen_args,enc_args", SCHEME_CASES)
def test_gen_encode_verify_roundtrip(capsys, tmp_path, family, scheme, gen_args, enc_args):
    tree, labels = gen_encode(capsys, tmp_path, family, scheme, gen_args, enc_args)
    code, out, err = run(capsys, "verify", tree, labels)
    assert code == 0, out + err
    assert out.startswith("pass")
    assert f"scheme={scheme}" in out


def test_query_without_tree_file(capsys, tmp_path):
    tree, labels = gen_encode(
        capsys, tmp_path, "random-tree", "exact", ("--n", "40", "--seed", "2"), ()
    )
    t = parse_tree(open(tree).read())
    want = int(DistOracle(t).pairs(np.array([5]), np.array([23]))[0])
    os.unlink(tree)
    code, out, err = run(capsys, "query", labels, "5", "23")
    assert code == 0
    assert int(out.strip()) == want


def test_query_self_is_zero(capsys, tmp_path):
    _, labels = gen_encode(
        capsys, tmp_path, "random-tree", "exact", ("--n", "10", "--seed", "2"), ()
    )
    code, out, _ = run(capsys, "query", labels, "7", "7")
    assert code == 0 and out.strip() == "0"


def test_verify_sample_mode(capsys, tmp_path):
    tree, labels = gen_encode(
        capsys, tmp_path, "random-tree", "approx",
        ("--n", "500", "--seed", "9"), ("--eps", "1.0"),
    )
    code, out, _ = run(capsys, "verify", tree, labels, "--sample", "2000", "--seed", "5")
    assert code == 0
    assert "pairs=2000" in out


def test_hwa_families(capsys, tmp_path):
    tree = str(tmp_path / "h.tree")
    code, out, _ = run(
        capsys, "gen", "--family", "hwa", "--h", "3", "--W", "8", "--a", "2",
        "--seed", "1", "--out", tree,
    )
    assert code == 0
    assert "22 nodes" in out  # 3 * 2**3 - 2
    code, out, _ = run(
        capsys, "gen", "--family", "hwa-unweighted", "--h", "3", "--W", "8",
        "--a", "2", "--seed", "1", "--out", tree,
    )
    assert code == 0
    t = parse_tree(open(tree).read())
    assert t.unweighted
    assert t.n <= 2 * 8 * 3 + 1

    labels = str(tmp_path / "h.labels.json")
    assert run(capsys, "encode", tree, "--scheme", "exact", "--out", labels)[0] == 0
    assert run(capsys, "verify", tree, labels)[0] == 0


def test_hard_caterpillar_family(capsys, tmp_path):
    tree = str(tmp_path / "c.tree")
    labels = str(tmp_path / "c.labels.json")
    assert run(
        capsys, "gen", "--family", "hard-caterpillar", "--n", "256",
        "--seed", "3", "--out", tree,
    )[0] == 0
    assert run(capsys, "encode", tree, "--scheme", "caterpillar", "--out", labels)[0] == 0
    assert run(capsys, "verify", tree, labels)[0] == 0


def test_usage_errors_exit_1(capsys, tmp_path):
    tree = str(tmp_path / "t.tree")
    # missing required family parameter
    code, _, err = run(capsys, "gen", "--family", "path", "--out", tree)
    assert code == 1
    assert "requires --k" in err
    # unknown subcommand / flag come back as argparse failures
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "gen", "--family", "no-such", "--out", tree)[0] == 1
    # missing input file
    code, _, err = run(capsys, "encode", str(tmp_path / "nope.tree"),
                       "--scheme", "exact", "--out", str(tmp_path / "x.json"))
    assert code == 1
    assert "error:" in err


def test_scheme_tree_mismatch_exits_1(capsys, tmp_path):
    tree = str(tmp_path / "w.tree")
    labels = str(tmp_path / "w.labels.json")
    assert run(
        capsys, "gen", "--family", "path", "--k", "6", "--W", "50",
        "--seed", "0", "--out", tree,
    )[0] == 0
    code, _, err = run(capsys, "encode", tree, "--scheme", "exact", "--out", labels)
    assert code == 1
    assert "unweighted" in err


def test_query_bad_node_exits_1(capsys, tmp_path):
    _, labels = gen_encode(
        capsys, tmp_path, "random-tree", "exact", ("--n", "6", "--seed", "0"), ()
    )
    code, _, err = run(capsys, "query", labels, "0", "6")
    assert code == 1
    assert "out of range" in err


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "gen", "--help")[0] == 0


def test_bench_json_and_filters(capsys, tmp_path):
    out_file = str(tmp_path / "bench.json")
    code, out, _ = run(
        capsys, "bench", "--scheme", "path", "--seed", "7", "--json", "--out", out_file
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 7
    assert doc["rows"] and all(r["scheme"] == "path" for r in doc["rows"])
    assert all(r["passed"] for r in doc["rows"])
    on_disk = json.load(open(out_file))
    assert on_disk == doc
    # same seed, same report
    code2, out2, _ = run(capsys, "bench", "--scheme", "path", "--seed", "7", "--json")
    assert code2 == 0 and json.loads(out2) == doc


def test_perf_compares_backends(capsys):
    code, out, err = run(
        capsys, "perf", "--scheme", "exact", "--n", "256", "--pairs", "500",
        "--reps", "1", "--json",
    )
    assert code == 0, err
    doc = json.loads(out)
    backends = [r["backend"] for r in doc["results"]]
    assert backends == ["numba", "numpy"]
    assert all(r["pairs"] == 500 and r["decode_s"] > 0 for r in doc["results"])


def test_bench_table_and_empty_filter(capsys):
    code, out, _ = run(capsys, "bench", "--scheme", "caterpillar", "--family", "random")
    assert code == 0
    assert "budget" in out
    code, out, _ = run(capsys, "bench", "--family", "no-such-family")
    assert code == 0  # nothing selected, nothing failed
