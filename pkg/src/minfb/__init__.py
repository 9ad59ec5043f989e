"""Minimum feasibility blockers for difference-constraint systems.

Deleting arcs of a weighted digraph so that no negative cycle remains is the
same as deleting rows of a system ``x_u - x_v <= b`` until it is feasible.
"""
from .errors import InputError, NotApplicable, ResourceError
from .graph import (Arc, Cycle, Potential, WeightedDigraph, build_feasible_potential,
                    has_negative_cycle, parse_ndfas, shortest_negative_cycle,
                    strong_components, verify_solution)
from .portfolio import solve_portfolio

__all__ = [
    "Arc", "Cycle", "Potential", "WeightedDigraph", "InputError", "NotApplicable",
    "ResourceError", "build_feasible_potential", "has_negative_cycle", "parse_ndfas",
    "shortest_negative_cycle", "strong_components", "verify_solution", "solve_portfolio",
]
