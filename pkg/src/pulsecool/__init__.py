"""Pulse-shaped coupling control for resonator state swaps and cooling."""

from .model import (
    Auxiliary,
    ControlPulse,
    CoolingMetrics,
    ModelParams,
    RADIANS_PER_PERIOD,
    make_params,
    metrics_from_occupation,
    pulse_resample,
)
from .covariance import (
    CovarianceState,
    DriftDiffusion,
    build_diffusion,
    build_drift,
    final_occupation,
    mean_occupation,
    propagate_pulse,
    propagate_segment,
    steady_state,
    thermal_covariance,
)
from .fock import (
    DensityMatrix,
    FockSystem,
    build_system,
    evolve_closed,
    evolve_lindblad,
    mixed_12_initial,
    partial_trace_target,
    purity,
    swap_purity,
)
from .optimizer import (
    Objective,
    OptimizationResult,
    evaluate,
    gradient,
    optimize,
    optimize_over_time,
)
from .baselines import SidebandPoint, rwa_swap_cool, sideband_curve, sideband_point

__version__ = "0.1.0"
