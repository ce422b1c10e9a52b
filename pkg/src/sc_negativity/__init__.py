"""Negativity of bipartite quantum states, with closed forms for Schmidt-correlated states."""

from .dynamics import (
    AdditiveObservable,
    DephasingModel,
    TimeSeries,
    conservation_residual,
    evolve_closed_form,
    integrate_rk4,
    liouville_rhs,
    negativity_time_series,
    rk4_trajectory,
)
from .errors import *  # noqa: F401,F403
from .explorer import (
    ConjectureReport,
    LocalBasisPair,
    local_basis_distance,
    minimize_over_local_bases,
    sc_minimality_check,
)
from .linalg import EigenDecomposition, alpha_norm, hermitian_eig, kron, trace_norm
from .mixtures import (
    LambdaComponent,
    LambdaMap,
    LambdaMixture,
    assemble_mixture,
    lambda_maps_from_spectra,
    make_mixture,
    mixture_negativity_bound,
    validate_disjointness,
)
from .negativity import (
    NegativityReport,
    PtEigenPair,
    band_bound,
    band_chain,
    diagonal_projection,
    distance_to_diagonal,
    negativity_exact,
    negativity_sc_closed_form,
    partial_transpose,
    pt_eigensystem_sc,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureSchmidtVector,
    SchmidtCorrelatedState,
    detect_sc,
    random_sc,
    sc_embed,
    sc_from_mixture,
    validate_density,
)

__version__ = "0.1.0"
