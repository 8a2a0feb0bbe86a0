"""Low-rank kinetic solver for the BGK equation with a MacCormack fluid reference."""

from ._core import (
    FluidState,
    IntegrationError,
    LowRankState,
    PhaseGrids,
    ProjectorSplitting,
    ScenarioConfig,
    SplittingConfig,
    cfl_dt,
    compute_coefficients,
    dense_f,
    init_equilibrium,
    initial_condition,
    load_config,
    maccormack_step,
    make_fluid_state,
    moments,
    parse_config,
    run,
    validate,
    viscosity_from_epsilon,
    vorticity,
)

__all__ = [
    "FluidState",
    "IntegrationError",
    "LowRankState",
    "PhaseGrids",
    "ProjectorSplitting",
    "ScenarioConfig",
    "SplittingConfig",
    "cfl_dt",
    "compute_coefficients",
    "dense_f",
    "init_equilibrium",
    "initial_condition",
    "load_config",
    "maccormack_step",
    "make_fluid_state",
    "moments",
    "parse_config",
    "run",
    "validate",
    "viscosity_from_epsilon",
    "vorticity",
]
