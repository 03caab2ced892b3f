"""Shared helpers: small-tree enumeration and decoded-vs-oracle sweeps."""

import itertools

import numpy as np
import pytest

from treelabels.tree_model import DistOracle, Tree


def all_parent_arrays(n):
    """Every rooted tree on nodes 0..n-1 with parent[i] < i; (n-1)! of them."""
    return itertools.product(*(range(i) for i in range(1, n)))


def make_tree(parents) -> Tree:
    return Tree(np.array((-1,) + tuple(parents), dtype=np.int64))


def star(n: int) -> Tree:
    return Tree(np.array([-1] + [0] * (n - 1), dtype=np.int64))


def path(n: int) -> Tree:
    return Tree(np.arange(-1, n - 1, dtype=np.int64))


def complete_binary(levels: int) -> Tree:
    n = 2**levels - 1
    par = np.concatenate(([-1], (np.arange(1, n) - 1) // 2))
    return Tree(par.astype(np.int64))


def check_all_pairs(t: Tree, labelset, oracle: DistOracle | None = None) -> None:
    """Assert batch decode equals the oracle on every unordered pair."""
    if oracle is None:
        oracle = DistOracle(t)
    n = t.n
    if n < 2:
        return
    us, vs = np.triu_indices(n, k=1)
    got = labelset.batch().decode_pairs(us.astype(np.int64), vs.astype(np.int64))
    want = oracle.pairs(us, vs)
    bad = np.flatnonzero(got != want)
    assert len(bad) == 0, (
        f"pair ({us[bad[0]]},{vs[bad[0]]}): decoded {got[bad[0]]}, oracle {want[bad[0]]}"
    )


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
