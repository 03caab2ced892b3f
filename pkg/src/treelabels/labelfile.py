"""Label-file serialization and scheme dispatch.

A label file holds everything a decoder needs: the scheme name, the scheme
parameters, and one bit string per node.  The tree itself is never stored,
so queries against a label file exercise the decoders' statelessness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .approx_scheme import ApproxBatch, ApproxLabel, decode_approx, encode_approx_buffer, eps_to_fp, fp_to_eps
from .bitcodec import BitString, CodecError, LabelBuffer
from .caterpillar_scheme import (
    CatBatch,
    CaterpillarLabel,
    CatParams,
    decode_caterpillar,
    encode_caterpillar,
)
from .errors import SchemeError
from .exact_scheme import ExactBatch, ExactLabel, decode_exact, encode_exact_buffer
from .path_scheme import PathBatch, PathLabel, SegmentPlan, decode_path, encode_path
from .tree_model import Tree

SCHEMES = ("exact", "approx", "path", "caterpillar")


@dataclass
class LabelSet:
    """All labels of one tree under one scheme, plus the shared parameters.

    ``labels[v]`` is node v's bit string.  ``params`` carries whatever the
    scheme needs beyond the two labels (segment widths, quantized stretch);
    for the exact scheme it is informational only.
    """

    scheme: str
    params: dict
    labels: list[BitString] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise SchemeError(f"node {v} out of range for {self.n} labels")

    def decode(self, u: int, v: int) -> int:
        self._check_node(u)
        self._check_node(v)
        a, b = self.labels[u], self.labels[v]
        if self.scheme == "exact":
            return decode_exact(ExactLabel(a), ExactLabel(b))
        if self.scheme == "approx":
            return decode_approx(ApproxLabel(a), ApproxLabel(b))
        if self.scheme == "path":
            plan = self._plan()
            return decode_path(PathLabel(a, plan), PathLabel(b, plan))
        cp = self._cat_params()
        return decode_caterpillar(CaterpillarLabel(a, cp), CaterpillarLabel(b, cp))

    def batch(self):
        """Parse every label once; the result decodes pair arrays."""
        buf = LabelBuffer.from_bitstrings(self.labels)
        if self.scheme == "exact":
            return ExactBatch(buf)
        if self.scheme == "approx":
            return ApproxBatch(buf)
        if self.scheme == "path":
            return PathBatch(buf, self._plan())
        return CatBatch(buf, self._cat_params())

    def bit_sizes(self) -> np.ndarray:
        return np.array([lab.nbits for lab in self.labels], dtype=np.int64)

    def _plan(self) -> SegmentPlan:
        p = self.params
        return SegmentPlan(int(p["k"]), int(p["ell"]), int(p["L"]))

    def _cat_params(self) -> CatParams:
        return CatParams.from_dict(self.params)


def encode_tree(t: Tree, scheme: str, eps: float | None = None) -> LabelSet:
    """Label every node of ``t`` under ``scheme``.

    ``eps`` applies to the approx scheme only; passing it elsewhere is an
    error so a mistyped command fails loudly instead of silently ignoring it.
    """
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")
    if scheme != "approx" and eps is not None:
        raise SchemeError(f"eps only applies to the approx scheme, not {scheme!r}")
    if scheme == "exact":
        buf = encode_exact_buffer(t)
        labels = [buf[v] for v in range(t.n)]
        return LabelSet("exact", {"n": t.n}, labels)
    if scheme == "approx":
        if eps is None:
            raise SchemeError("approx scheme requires eps")
        buf = encode_approx_buffer(t, eps)
        labels = [buf[v] for v in range(t.n)]
        fp = eps_to_fp(eps)
        return LabelSet("approx", {"n": t.n, "eps_fp": fp, "eps": fp_to_eps(fp)}, labels)
    if scheme == "path":
        labs = encode_path(t)
        plan = labs[0].plan
        params = {"n": t.n, "k": plan.k, "ell": plan.ell, "L": plan.L}
        return LabelSet("path", params, [lab.bits for lab in labs])
    labs = encode_caterpillar(t)
    return LabelSet("caterpillar", labs[0].params.to_dict(), [lab.bits for lab in labs])


def to_doc(ls: LabelSet) -> dict:
    return {
        "scheme": ls.scheme,
        "params": ls.params,
        "labels": [{"bits": lab.nbits, "hex": lab.to_hex()} for lab in ls.labels],
    }


def from_doc(doc: dict) -> LabelSet:
    if not isinstance(doc, dict):
        raise SchemeError("label file must hold a JSON object")
    scheme = doc.get("scheme")
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r} in label file")
    params = doc.get("params")
    if not isinstance(params, dict):
        raise SchemeError("label file missing params object")
    raw = doc.get("labels")
    if not isinstance(raw, list):
        raise SchemeError("label file missing labels array")
    labels: list[BitString] = []
    for i, entry in enumerate(raw):
        try:
            labels.append(BitString.from_hex(entry["hex"], int(entry["bits"])))
        except (KeyError, TypeError, ValueError, CodecError) as exc:
            raise SchemeError(f"label {i} is malformed: {exc}") from exc
    return LabelSet(scheme, params, labels)


def save_labels(ls: LabelSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_doc(ls), fh, separators=(",", ":"))
        fh.write("\n")


def load_labels(path: str) -> LabelSet:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemeError(f"label file is not valid JSON: {exc}") from exc
    return from_doc(doc)
