"""qsdsim: linear quantum state diffusion with space-time fluctuations.

Simulation and verification toolkit for linear QSD with commuting and
non-commuting (Pauli, iso-space) fluctuations: trajectory/master-equation
solvers, time-ordered propagators with repeated fluctuations, a two-arm
matter-interferometer decoherence model, and bounds on the fluctuation
time constant tau_0 from interferometry experiments.
"""

from .core import (
    ComplexOperator,
    DensityOperator,
    TrajectoryState,
    dagger,
    identity,
    is_hermitian,
    is_unitary,
    kron,
    partial_trace_iso,
    pauli,
)
from .streams import RandomStream, draw_complex_gaussian
from .fluctuations import (
    EtaMethod,
    EtaResult,
    FluctuationKind,
    IsoIncrement,
    ScalarIncrement,
    exchange_mean_algebraic,
    exchange_mean_mc,
    iso_matrix,
    pauli_exchange_sum,
    sample_pauli,
    sample_scalar,
)
from .markov import (
    EnsembleEstimate,
    LindbladModel,
    drift_from_trace_condition,
    ensemble_density,
    run_qsd_ensemble,
    solve_master,
    step_linear_qsd,
    step_master,
)
from .dyson import (
    DysonTerms,
    FluctuationSchedule,
    IncrementRef,
    ScheduleTerm,
    density_second_order,
    draw_schedule_samples,
    drift_second_order,
    dyson_terms,
    fluctuation_matrix,
    time_ordered_propagator,
)
from .interferometer import (
    ETA_PAULI,
    InterferometerGeometry,
    P1,
    P2,
    Scenario,
    ScenarioKind,
    SuppressionMethod,
    SuppressionReport,
    build_schedule,
    draw_fields,
    fluctuation_operator,
    lightline_times,
    make_triangle_geometry,
    oracle_characteristic_sums,
    simulate_scenario_mc,
    suppression_analytic,
)
from .bounds import (
    CODATA,
    BoundsInput,
    PhysicalConstants,
    decoherence_rate,
    preset_kasevich_chu,
    tau0_bound,
)

__version__ = "0.1.0"
