"""Consensus dynamics on hierarchical organization networks.

Builds the layered unit/leader network, simulates diffusive consensus on it
and computes convergence rates numerically (any depth) and in closed form
(two layers).
"""

from .closedform import (
    CubicRoots,
    PerronVectorL2,
    SpectrumL2,
    analytic_spectrum_l2,
    cubic_k_roots,
    eigvec_vbar_vtilde,
    eigvec_vcheck,
    eigvec_vhat,
    left_perron_l2,
    optimal_alpha_equal,
    perturbation_coefficient,
    rate_autonomous_l2,
    rate_equal_weights,
)
from .dynamics import (
    InputSpec,
    SimConfig,
    Trajectory,
    consensus_value,
    empirical_rate,
    simulate,
    system_matrix,
)
from .errors import ConfigError, NumericalError
from .hierarchy import (
    HierarchyConfig,
    NodeCoord,
    WeightMatrix,
    build_weight_matrix,
    build_weight_matrix_blockform,
    coord_to_index,
    index_to_coord,
    node_count,
)
from .spectral import NumericSpectrum, numeric_spectrum, rate_autonomous, rate_with_input
from .sweep import (
    GridSpec,
    SweepResult,
    classify_lambda_region,
    sweep_autonomous_rate,
    sweep_input_rate,
    tradeoff_report,
)

__version__ = "0.1.0"
