"""Power allocation and rate regions for the two-user fading cooperative MAC."""

from ._coopmac import (
    Ensemble,
    InvalidInput,
    ParseError,
    RateBounds,
    ValidationError,
    convex_hull,
    load_scenario,
    min_gap,
    optimize,
    project_user,
    rate_bounds,
    rayleigh,
    solve,
    uniform_grid,
)

__all__ = [
    "Ensemble",
    "InvalidInput",
    "ParseError",
    "RateBounds",
    "ValidationError",
    "convex_hull",
    "load_scenario",
    "min_gap",
    "optimize",
    "project_user",
    "rate_bounds",
    "rayleigh",
    "solve",
    "uniform_grid",
]
