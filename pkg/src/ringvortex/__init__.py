"""Stationary ring-vortex profiles of the radial cubic Schroedinger boundary value problem."""

__version__ = "0.1.0"

from .constrained_minimizer import (
    MinimizeOptions,
    MinimizeResult,
    lagrange_beta,
    minimize_constrained,
    project_power,
    tent_profile,
)
from .functionals import (
    FunctionalValues,
    el_residual,
    eval_action,
    eval_action_beta,
    gradient,
)
from .mountain_pass import MountainPassOptions, MountainPassResult, mountain_pass_solve
from .potentials import PotentialSpec, summarize
from .radial_core import Moments, Profile, RadialGrid, build_grid, h_norm_sq, moments

__all__ = [
    "FunctionalValues", "MinimizeOptions", "MinimizeResult", "Moments", "MountainPassOptions",
    "MountainPassResult", "PotentialSpec", "Profile", "RadialGrid", "build_grid",
    "el_residual", "eval_action", "eval_action_beta", "gradient", "h_norm_sq", "lagrange_beta",
    "minimize_constrained", "moments", "mountain_pass_solve", "project_power", "summarize",
    "tent_profile",
]
