"""One-bit downlink precoding with antenna selection for MU-MISO PSK.

Transmit vectors live on the ternary alphabet {-1, 0, +1} per real
dimension: one-bit DACs drive +-1 and a zero pair switches the antenna off.
The package provides the decision-region geometry, a two-stage solver
(hard-threshold feasibility iteration plus a bit-flip refinement sweep),
exhaustive and quantized zero-forcing baselines, closed-form cost counts,
and a reproducible Monte-Carlo SER harness with CSV/JSON reporting and
optional figure rendering.
"""

__version__ = "0.1.0"

from .geometry import (
    Constellation,
    DecisionBasis,
    FeasibilityMatrix,
    basis_inverses,
    build_basis,
    build_constellation,
    build_feasibility_matrix,
    coefficients,
    decode,
    decode_all,
    in_region,
)
from .precoders import (
    ChiCounts,
    ComplexityReport,
    IhtConfig,
    IhtResult,
    MultiplyCounter,
    SolverRefusal,
    bf_refine,
    complexity_formulas,
    ensure_search_tractable,
    exhaustive_search,
    hard_threshold,
    iht_solve,
    qzf_precode,
    two_stage_precode,
)
from .reallift import lift_channel, lift_scalar, lift_vector, phi_expand, rotation, unlift_vector
from .reporting import CSV_HEADER, build_manifest, format_csv, format_json, read_csv, read_json
from .simulation import (
    SerCurve,
    SimConfig,
    SweepPoint,
    available_solvers,
    compare_sweeps,
    draw_channel,
    draw_noise,
    register_solver,
    run_sweep,
    run_trial,
    trial_rng,
)

__all__ = [
    "__version__",
    "Constellation",
    "DecisionBasis",
    "FeasibilityMatrix",
    "basis_inverses",
    "build_basis",
    "build_constellation",
    "build_feasibility_matrix",
    "coefficients",
    "decode",
    "decode_all",
    "in_region",
    "ChiCounts",
    "ComplexityReport",
    "IhtConfig",
    "IhtResult",
    "MultiplyCounter",
    "SolverRefusal",
    "bf_refine",
    "complexity_formulas",
    "ensure_search_tractable",
    "exhaustive_search",
    "hard_threshold",
    "iht_solve",
    "qzf_precode",
    "two_stage_precode",
    "lift_channel",
    "lift_scalar",
    "lift_vector",
    "phi_expand",
    "rotation",
    "unlift_vector",
    "CSV_HEADER",
    "build_manifest",
    "format_csv",
    "format_json",
    "read_csv",
    "read_json",
    "SerCurve",
    "SimConfig",
    "SweepPoint",
    "available_solvers",
    "compare_sweeps",
    "draw_channel",
    "draw_noise",
    "register_solver",
    "run_sweep",
    "run_trial",
    "trial_rng",
]
