"""Phase-space quantum dynamics for the three-well Bose-Hubbard chain.

Simulates the trimer in the truncated Wigner and positive-P
representations for Fock, coherent, amplitude-squeezed and vacuum initial
states, bins trajectory snapshots into atom-number distributions, and
compares initial-state choices through Bhattacharyya statistics.
"""

from .model import (
    ModelParams,
    PPField,
    Scenario,
    ScenarioError,
    StateSpec,
    WignerField,
    classical_energy,
    total_number,
)
from .sampling import (
    RngStream,
    sample_initial_fields,
    sample_positive_p,
    sample_wigner,
)
from .dynamics import (
    DivergenceError,
    EnsembleResult,
    TimeGrid,
    pp_step,
    run_ensemble,
    wigner_rhs,
    wigner_step,
)
from .statistics import (
    MomentSeries,
    NumberDistribution,
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    bin_distribution,
    bootstrap_coefficient_error,
    moment_series,
    snapshot_distribution,
)
from .io import load_scenario, parse_scenario, serialize_scenario

__version__ = "0.1.0"
