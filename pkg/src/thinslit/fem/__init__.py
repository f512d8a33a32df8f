"""Q2 finite elements on unions of rectangles with Dirichlet-to-Neumann outlets."""

from .mesh import MeshSpec, build_mesh
from .solver import FemOptions, SolutionField, solve_channel, solve_config, solve_domain

__all__ = ["FemOptions", "MeshSpec", "SolutionField", "build_mesh", "solve_channel", "solve_config",
           "solve_domain"]
