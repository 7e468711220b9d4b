"""Tensor-ring decompositions, rounding and graph-based tensor formats."""

from .bench import ExperimentReport, ReportRow, ShiftSweep, emit_report, read_report, run_comparison, shift_sweep
from .conversions import CanonicalTensor, cp_family, cp_to_tr_optimal, cp_to_tt, tr_to_tt, tt_to_tr
from .decompose import (
    InteractionProfile,
    heuristic_tr_svd,
    interaction_profile,
    interaction_rank,
    reduced_storage_tr_svd,
    tr_svd,
    tr_svd_balanced,
)
from .dense import cyclic_shift, dense_norm, hadamard, mode_product, refold, unfold
from .edges import delete_edge, insert_edge, rank_reshuffle
from .estimator import TensorRingDecomposition, check_tensor
from .exceptions import (
    CapacityError,
    DegenerateComponentError,
    DivisorError,
    DomainError,
    FormatError,
    IndexDomainError,
    ShapeError,
    TensorRingError,
)
from .functions import GeneratorSpec, generate
from .graph import (
    CyclePathCover,
    GraphFamily,
    GraphTensor,
    TensorGraph,
    chorded_cycle_family,
    cycle_path_cover,
    extract_cycle_tensor,
    g_truncate,
    graph_to_dense,
    greedy_graph_select,
    insert_graph_edge,
    skip_chain_family,
)
from .io import load_representation, read_dten, write_dten
from .linalg import SVDTruncation, delta_rank, divisors, reduced_qr, truncated_svd
from .ring import (
    TRTensor,
    storage_cost,
    shift_representation,
    tr_add,
    tr_add_blockdiag,
    tr_eval,
    tr_norm,
    tr_round,
    tr_scale,
    tr_to_dense,
)

__version__ = "0.1.0"
