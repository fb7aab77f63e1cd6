"""Numerical lab for Robin-boundary energy functionals on star-shaped
planar domains: radial ball solves, P1 finite elements, shape-inequality
checks, and batch sweeps."""

from .config import ExperimentConfig, load_builtin, load_config, parse_config
from .errors import ConfigError, SolverError
from .fem import EnergyReport, Mesh, ScalarField, lambda_2, lambda_q, mesh_star, minimize_energy
from .geometry import Ball, StarDomain, fraenkel_asymmetry
from .inequalities import (
    Resolution,
    check_ec_ball_minimality,
    check_intermediate,
    check_quantitative,
    check_scaling,
    check_trace_poincare,
    sweep,
)
from .radial import BallEnergy, RadialParams, RadialProfile, ball_energy, eigenvalue_q2_ball, solve_ball
from .reports import InequalityReport, SweepResult

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallEnergy",
    "ConfigError",
    "EnergyReport",
    "ExperimentConfig",
    "InequalityReport",
    "Mesh",
    "RadialParams",
    "RadialProfile",
    "Resolution",
    "ScalarField",
    "SolverError",
    "StarDomain",
    "SweepResult",
    "ball_energy",
    "check_ec_ball_minimality",
    "check_intermediate",
    "check_quantitative",
    "check_scaling",
    "check_trace_poincare",
    "eigenvalue_q2_ball",
    "fraenkel_asymmetry",
    "lambda_2",
    "lambda_q",
    "load_builtin",
    "load_config",
    "mesh_star",
    "minimize_energy",
    "parse_config",
    "solve_ball",
    "sweep",
    "__version__",
]
