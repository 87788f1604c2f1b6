"""Two-domain flow with a friction interface condition (compiled core)."""

from ._core import (
    Config,
    ConfigError,
    NewtonError,
    alpha_eps,
    beta_eps,
    complementarity_defect,
    mesh_info,
    rho_eps,
    run,
    timeseries_csv,
    verify_complementarity,
    verify_convergence,
    verify_energy,
    verify_eps_rate,
    verify_limits,
)

__all__ = [
    "Config",
    "ConfigError",
    "NewtonError",
    "alpha_eps",
    "beta_eps",
    "complementarity_defect",
    "mesh_info",
    "rho_eps",
    "run",
    "timeseries_csv",
    "verify_complementarity",
    "verify_convergence",
    "verify_energy",
    "verify_eps_rate",
    "verify_limits",
]
