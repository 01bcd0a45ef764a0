"""Pattern-reconfigurable MIMO channel simulation and transmit-pattern design.

The package covers the full pipeline: clustered multipath channel generation,
achievable-rate and correlation metrics, single-pattern min-max gain
allocation, sequential multi-pattern decorrelation, and a paired Monte Carlo
harness with CSV outputs.
"""

from .channel import (
    GOOD_CONDITIONED,
    ILL_CONDITIONED,
    ChannelConfig,
    ChannelRealization,
    ScatteringPath,
    array_response,
    draw_cluster_powers,
    generate_realization,
    pattern_channel,
    physical_channel,
    response_matrices,
    subchannel,
    subchannel_stack,
)
from .exceptions import (
    ConfigError,
    DegenerateAllocationError,
    DegenerateClipError,
    ZeroGainPathError,
)
from .gain_allocation import (
    EXACT_NORMALIZATION,
    PHASE_FREE_NORMALIZATION,
    GainAllocation,
    MinMaxOptions,
    combined_spectral_norm,
    gains_to_pattern_column,
    grid_oracle_allocation,
    hermitian_lift,
    power_scaling,
    simplex_project,
    single_pattern_design,
    solve_minmax_allocation,
    unit_phases_of,
)
from .harness import (
    ALL_SCHEMES,
    ExperimentConfig,
    ResultRow,
    SweepSpec,
    aggregate_samples,
    array_factor_scan,
    evaluate_trial,
    export_pattern_samples,
    load_experiment_config,
    load_pattern_samples,
    parse_experiment_config,
    run_experiment,
    run_selftest,
    run_trials,
    upper_bound_rate,
    write_array_factor_csv,
    write_rate_csv,
)
from .metrics import (
    RateContext,
    achievable_rate,
    correlation_levels,
    rate_via_singular_values,
    subchannel_gram,
)
from .sequential import (
    CgOptions,
    SequentialDesignResult,
    coupling_matrix,
    coupling_vector,
    evd_solve,
    manifold_cg,
    receive_correlation,
    sequential_design,
)

__version__ = "0.1.0"
