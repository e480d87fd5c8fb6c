"""Simulation and numerics laboratory for dyadic branching Brownian motion."""

from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    absence_ld_experiment,
    coverage_experiment,
    density_experiment,
    enlargement_volume_experiment,
    growth_experiment,
    many_to_one_check,
    mass_distribution_test,
    range_density_experiment,
    speed_experiment,
)
from .fkpp import (
    FkppConfig,
    FkppSolution,
    NumericalFailure,
    absence_moving,
    default_domain,
    export_solution,
    picard_check,
    solve_absence,
)
from .geometry import (
    Ball,
    Covering,
    DensityCheck,
    MovingBallSpec,
    ball_at,
    cubic_covering,
    gaussian_ball_prob,
    is_r_dense,
    union_volume,
    unit_ball_volume,
)
from .rates import (
    RateParams,
    RateResult,
    absence_rate_closed_form,
    growth_exponent,
    minimize,
    objective,
    rho_bar,
    volume_constant,
)
from .sim import (
    ParticleSnapshot,
    RangeSample,
    SimConfig,
    SimulationRun,
    export_snapshots,
    mass_in_ball,
    max_radius,
    replica_seed,
    simulate,
)
from .verification import SUITES, CheckResult, check_names, run_suite

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Covering",
    "DensityCheck",
    "ExperimentConfig",
    "ExperimentReport",
    "FkppConfig",
    "FkppSolution",
    "MovingBallSpec",
    "NumericalFailure",
    "ParticleSnapshot",
    "RangeSample",
    "RateParams",
    "RateResult",
    "SimConfig",
    "SimulationRun",
    "absence_ld_experiment",
    "absence_moving",
    "absence_rate_closed_form",
    "ball_at",
    "coverage_experiment",
    "cubic_covering",
    "default_domain",
    "density_experiment",
    "enlargement_volume_experiment",
    "export_snapshots",
    "export_solution",
    "gaussian_ball_prob",
    "growth_exponent",
    "growth_experiment",
    "is_r_dense",
    "many_to_one_check",
    "mass_distribution_test",
    "mass_in_ball",
    "max_radius",
    "minimize",
    "objective",
    "picard_check",
    "range_density_experiment",
    "replica_seed",
    "rho_bar",
    "simulate",
    "solve_absence",
    "speed_experiment",
    "union_volume",
    "unit_ball_volume",
    "volume_constant",
]
