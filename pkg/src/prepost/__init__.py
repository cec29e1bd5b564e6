"""prepost: a finite-dimensional simulator of pre- and post-selected quantum dynamics.

The package pins quantum processes at both ends -- an initial and a final
boundary state -- and evaluates everything in between: history amplitudes
and ABL probabilities, projector postponement, decision accumulation,
bang/crunch matched histories, and a set of desk-scale interference
thought experiments.  Hot kernels run through numba when available, with a
pure-numpy fallback selected by the PREPOST_BACKEND environment variable.
"""

__version__ = "0.1.0"

from .bidirectional import (
    BidirectionalUniverse,
    CptAmplitudePair,
    DominanceModel,
    born_emergence_experiment,
    cpt_asymmetry,
    dominance_experiment,
    matched_history_amplitude,
)
from .decision_tree import (
    DecisionRun,
    FinalDensity,
    accumulate_final_density,
    enumerate_histories,
    overlap_scaling_experiment,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    EmptyBranchError,
    EnumerationCapError,
    ImpossiblePostSelectionError,
    PrepostError,
)
from .gedanken import (
    EllipsoidConfig,
    HbtConfig,
    WitnessConfig,
    cat_witness_coherence,
    ellipsoid_experiment,
    hbt_rate,
    stern_gerlach_recombine,
)
from .hilbert import (
    Operator,
    Projector,
    StateVector,
    Unitary,
    apply,
    inner,
    make_rng,
    partial_trace,
    random_state,
    random_unitary,
    split_rng,
    tensor,
)
from .two_boundary import (
    Evolve,
    History,
    Measure,
    MeasurementEvent,
    Schedule,
    TwoBoundaryProcess,
    collapse,
    history_amplitude,
    history_probability,
    shift_projection,
)

__all__ = [
    "__version__",
    "BidirectionalUniverse",
    "ConfigError",
    "CptAmplitudePair",
    "DecisionRun",
    "DimensionMismatchError",
    "DominanceModel",
    "EllipsoidConfig",
    "EmptyBranchError",
    "EnumerationCapError",
    "Evolve",
    "FinalDensity",
    "HbtConfig",
    "History",
    "ImpossiblePostSelectionError",
    "Measure",
    "MeasurementEvent",
    "Operator",
    "PrepostError",
    "Projector",
    "Schedule",
    "StateVector",
    "TwoBoundaryProcess",
    "Unitary",
    "WitnessConfig",
    "accumulate_final_density",
    "apply",
    "born_emergence_experiment",
    "cat_witness_coherence",
    "collapse",
    "cpt_asymmetry",
    "dominance_experiment",
    "ellipsoid_experiment",
    "enumerate_histories",
    "history_amplitude",
    "history_probability",
    "hbt_rate",
    "inner",
    "make_rng",
    "matched_history_amplitude",
    "overlap_scaling_experiment",
    "partial_trace",
    "random_state",
    "random_unitary",
    "shift_projection",
    "split_rng",
    "stern_gerlach_recombine",
    "tensor",
]
