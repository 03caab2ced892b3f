"""Distance labels for trees.

Assign each node a short bit string so that the distance between two nodes
can be recovered from their two labels alone, with the tree thrown away.
Exact labels cost about half log^2 n bits; approximate labels trade a
1 + eps stretch factor for O(log n) bits; special tree shapes (paths with
weighted edges, caterpillars) get tighter dedicated schemes.
"""

from .approx_scheme import ApproxLabel, decode_approx, encode_approx
from .bitcodec import BitString, BitWriter, BitCursor, CodecError
from .caterpillar_scheme import (
    CaterpillarLabel,
    CatParams,
    decode_caterpillar,
    encode_caterpillar,
)
from .errors import SchemeError
from .exact_scheme import ExactLabel, decode_exact, encode_exact
from .families import (
    HwaTree,
    expand_unweighted,
    gen_hard_caterpillar,
    gen_hwa_tree,
    hwa_leaf_distance,
)
from .hld import HldIndex, decompose
from .labelfile import LabelSet, encode_tree, load_labels, save_labels
from .nca_core import NcaInfo, NcaSublabel, decode_nca, encode_nca
from .path_scheme import PathLabel, SegmentPlan, decode_path, encode_path
from .tree_model import (
    DistOracle,
    Tree,
    TreeError,
    gen_random_caterpillar,
    gen_random_tree,
    gen_weighted_path,
    oracle_dist,
    parse_tree,
    serialize_tree,
)
from .verify import VerifyReport, verify_labels

__version__ = "0.1.0"

__all__ = [
    "ApproxLabel",
    "BitCursor",
    "BitString",
    "BitWriter",
    "CaterpillarLabel",
    "CatParams",
    "CodecError",
    "DistOracle",
    "ExactLabel",
    "HldIndex",
    "HwaTree",
    "LabelSet",
    "NcaInfo",
    "NcaSublabel",
    "PathLabel",
    "SchemeError",
    "SegmentPlan",
    "Tree",
    "TreeError",
    "VerifyReport",
    "decode_approx",
    "decode_caterpillar",
    "decode_exact",
    "decode_nca",
    "decode_path",
    "decompose",
    "encode_approx",
    "encode_caterpillar",
    "encode_exact",
    "encode_nca",
    "encode_path",
    "encode_tree",
    "expand_unweighted",
    "gen_hard_caterpillar",
    "gen_hwa_tree",
    "gen_random_caterpillar",
    "gen_random_tree",
    "gen_weighted_path",
    "hwa_leaf_distance",
    "load_labels",
    "oracle_dist",
    "parse_tree",
    "save_labels",
    "serialize_tree",
    "verify_labels",
]
