"""Label-size budgets and the frozen constants they depend on.

Each scheme's guarantee has the shape "leading term + constant * slack term".
The leading terms are computed here; the constants live in calibration.json
so a regression that inflates labels fails loudly instead of the budget
drifting to match.
"""

from __future__ import annotations

import json
import math
from importlib import resources

from .bitcodec import header_cost, width_for
from .path_scheme import SegmentPlan


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def load_calibration() -> dict:
    text = resources.files(__package__).joinpath("calibration.json").read_text()
    return json.loads(text)


def exact_budget(n: int, c: float) -> float:
    """Whole exact label: half W^2 leading term plus c*W*loglog slack."""
    w = ceil_log2(max(2, n))
    ll = max(1, ceil_log2(max(2, w)))
    return 0.5 * w * w + c * w * ll


def exact_distlist_budget(n: int) -> int:
    """The ancestor-distance list alone telescopes to W(W+1)/2 bits."""
    w = ceil_log2(max(2, n))
    return w * (w + 1) // 2


def approx_s_budget(n: int) -> int:
    """Sketch-stream bits at stretch parameter 1."""
    return 2 * ceil_log2(max(2, n)) + 2


def path_budget(plan: SegmentPlan) -> int:
    """Value field is (k-1)*ell+1 bits; index and its header ride on top."""
    k = plan.k
    return (k - 1) * plan.ell + 1 + width_for(k) + header_cost(k)


def path_floor(k: int, n: int) -> float:
    """Information floor for k-hop path labels, printed next to measurements."""
    return (k - 1) / k * math.log2(n) + math.log2(k)


def cat_budget(n: int, c: float, c_prime: float) -> float:
    w = ceil_log2(max(2, n))
    ll = ceil_log2(max(2, w))
    lll = ceil_log2(max(2, ll))
    return 2 * w - ll + c * lll + c_prime
