"""Entanglement detection from the Schmidt coefficients of bipartite states."""

from .bounds import BoundEstimate, SearchConfig, maximize, profile_curve, reproduce_tables
from .channels import (
    ChannelMatrix,
    channel_of_state,
    choi_state,
    eb_necessary_check,
    is_eb_2xN,
)
from .criteria import (
    BoundTable,
    Outcome,
    Verdict,
    charpoly_coeffs,
    naive_bound,
    rank_bound,
    rc_check,
    rcl_check,
    symmetric_polys,
)
from .errors import *  # noqa: F403
from .geometry import (
    BlochCoords,
    apply_local_orthogonal,
    class_dimension,
    from_coords,
    hermitian_basis,
    to_coords,
    trace_variation,
)
from .linalg import BipartiteState, Dims, partial_trace, purity, tensor_product, validate_density
from .ppt import PptReport, is_separable_2xN, partial_transpose, ppt_report
from .schmidt import SchmidtSpectrum, realign, schmidt_spectrum, trace_norm_realigned
from .states import (
    max_entangled,
    random_density,
    random_pure,
    random_separable,
    werner,
    werner_polys,
)

__version__ = "0.1.0"
