"""Backend parity: the numpy fallback must produce bit-identical labels.

The backend is fixed at import time, so the fallback runs in a subprocess
and its output is compared against this process (numba by default).
"""

import json
import os
import subprocess
import sys

import numpy as np

from treelabels import _backend
from treelabels.labelfile import encode_tree
from treelabels.tree_model import gen_random_caterpillar, gen_random_tree, gen_weighted_path

SWEEP = "import json, sys; from test_backend import sweep_in_process; json.dump(sweep_in_process(), sys.stdout)"


def sweep_in_process() -> dict:
    out = {"backend": _backend.BACKEND, "cases": []}
    for scheme, t, eps in [
        ("exact", gen_random_tree(150, seed=41), None),
        ("approx", gen_random_tree(150, seed=41), 0.5),
        ("path", gen_weighted_path(11, 10**6, seed=42), None),
        ("caterpillar", gen_random_caterpillar(120, seed=43), None),
    ]:
        ls = encode_tree(t, scheme, eps=eps)
        us, vs = np.triu_indices(t.n, k=1)
        got = ls.batch().decode_pairs(us.astype(np.int64), vs.astype(np.int64))
        out["cases"].append(
            {
                "scheme": scheme,
                "labels": [lab.to_hex() for lab in ls.labels],
                "dists": got.tolist(),
            }
        )
    return out


def run_sweep(backend: str) -> dict:
    env = dict(os.environ, TREELABELS_BACKEND=backend)
    env["PYTHONPATH"] = os.pathsep.join(
        p for p in (os.path.dirname(__file__), env.get("PYTHONPATH", "")) if p
    )
    proc = subprocess.run(
        [sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True, timeout=300
    )
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_numpy_backend_matches_default():
    here = sweep_in_process()
    numpy_out = run_sweep("numpy")
    assert numpy_out["backend"] == "numpy"
    assert numpy_out["cases"] == here["cases"]


def test_backend_env_reports():
    assert run_sweep("numba")["backend"] == "numba"


def test_bad_backend_value_rejected():
    env = dict(os.environ, TREELABELS_BACKEND="cuda")
    proc = subprocess.run(
        [sys.executable, "-c", "import treelabels"],
        env=env,
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode != 0
    assert "TREELABELS_BACKEND" in proc.stderr
