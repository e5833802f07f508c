"""Coded distributed computing over a star network."""

from ._core import (
    ParameterError,
    SchemeError,
    binomial,
    convex_envelope_curves,
    enumerate_subsets,
    execute,
    is_pareto,
    locate_facet,
    minimal_feasible,
    pareto_points,
    plane_bounds,
    run_mixture,
    subset_rank,
    surface_value,
)

__all__ = [
    "ParameterError",
    "SchemeError",
    "binomial",
    "convex_envelope_curves",
    "enumerate_subsets",
    "execute",
    "is_pareto",
    "locate_facet",
    "minimal_feasible",
    "pareto_points",
    "plane_bounds",
    "run_mixture",
    "subset_rank",
    "surface_value",
]
