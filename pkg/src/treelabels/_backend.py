"""Kernel backend selection.

Hot loops live in :mod:`treelabels.kernels` as plain functions over int64
numpy arrays.  At import time each one is either compiled with numba's
``njit`` or left as-is, depending on the ``TREELABELS_BACKEND`` environment
variable:

* unset or ``"numba"``: compile with numba (``"numba"`` makes a missing
  numba installation a hard error instead of a silent fallback)
* ``"numpy"``: pure-Python/numpy execution of the identical source

The selected backend is fixed for the lifetime of the process.
"""

import os

_ENV_VAR = "TREELABELS_BACKEND"

_requested = os.environ.get(_ENV_VAR, "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"{_ENV_VAR} must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    BACKEND = "numpy"
else:
    try:
        import numba  # noqa: F401

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise RuntimeError(
                f"{_ENV_VAR}=numba but numba is not importable"
            ) from None
        BACKEND = "numpy"


def jit(fn):
    """Compile ``fn`` with numba when the numba backend is active.

    Under the numpy backend this is the identity, so every kernel keeps a
    pure-Python execution path with the same semantics (kernels stick to
    int64 arithmetic for exactly this reason).
    """
    if BACKEND == "numba":
        import numba

        return numba.njit(cache=True)(fn)
    return fn
