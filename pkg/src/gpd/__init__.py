"""Generalized rank invariants and persistence diagrams over posets.

Diagrams of finite-dimensional GF(p) vector spaces or finite sets,
indexed by finite posets or by zigzag / linear windows, with:

- the generalized rank invariant (rank of the canonical limit-to-colimit
  map of each connected restriction),
- persistence diagrams by inclusion-exclusion over entourages, equal to
  the Moebius inversion of the rank invariant,
- zigzag barcodes and set-theoretic 0-th level set barcodes of Reeb
  graphs, and
- exact bottleneck distances between the resulting diagrams.
"""

from .errors import (
    CycleDetectedError,
    DanglingEdgeError,
    DimensionMismatchError,
    EmptyDiagramError,
    EmptySubsetError,
    GPDError,
    InputFormatError,
    InvalidIntervalError,
    MissingDecorationError,
    NonMonotoneCriticalValuesError,
    NotConnectedError,
    NotLinearError,
    NotNestedError,
    NotZigzagError,
    ShapeMismatchError,
    SignedDiagramError,
    UnknownElementError,
)
from .exactfield import FieldElem, Matrix
from .metrics import bottleneck, bottleneck_per_decoration, epsilon_matching_exists, intervals_to_points
from .poset import Poset, ZZInterval, ZZWindow, ZWindow, build_poset, zz_extend
from .setmod import (
    ComponentTable,
    SetDiagram,
    colimit_components,
    count_full,
    decompose,
    has_section,
    is_untwisted,
    levelset_barcode,
    linearize,
    merge_tree_rank,
    reeb_dot,
    set_lc_rank,
    set_persistence_diagram,
    set_persistence_diagram_at,
    set_rank_invariant,
)
from .vecmod import (
    Cone,
    VecDiagram,
    colimit,
    decomposability_obstruction,
    lc_rank,
    limit,
    pairwise_image_rank,
    persistence_diagram,
    persistence_diagram_at,
    persistence_diagram_via_mobius,
    rank_at,
    rank_invariant,
    reindex_R_to_Z,
    reindex_Z_to_ZZ,
    standard_rank_invariant,
    synthesize_from_barcode,
    validate_functoriality,
    z_barcode,
    zigzag_barcode,
)

__version__ = "0.1.0"
