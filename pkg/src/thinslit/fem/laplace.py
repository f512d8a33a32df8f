"""Laplace solve on the truncated frozen slit-mouth domain.

The domain is the lower half-plane cut to ``[-R, R] x [-R, 0]`` joined to the
strip ``[-1/2, 1/2] x [0, H]``.  It serves as an independent check of the
boundary-layer constant computed by mode matching.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from ..errors import MeshError
from .assembly import assemble_parts, edge_integrals
from .mesh import StructuredMesh, compose_grid, graded_grid


@dataclass
class LaplaceField:
    mesh: StructuredMesh
    values: np.ndarray
    strip_height: float

    def mean_on_strip_top(self):
        rm = self.mesh.rects["strip"]
        weights = edge_integrals(rm.x_edges, lambda s: np.ones((1, len(s))))[0]
        return float(weights @ self.values[rm.edge_ids("top")] / (rm.x_edges[-1] - rm.x_edges[0]))


def far_field(x, y):
    """Leading half-plane behaviour ``(1/pi) ln(1/r)``."""
    return -np.log(np.hypot(x, y)) / np.pi


def solve_frozen_domain(radius=1000.0, strip_height=3.0, corner_size=2e-3, growth=1.25):
    """Harmonic ``Y`` with unit outward flux through the strip top, Neumann
    walls, and ``Y = (1/pi) ln(1/r)`` on the three cut sides of the box."""
    if not (radius > 2.0 and strip_height > 0.5 and 0 < corner_size < 0.05 and growth > 1.0):
        raise MeshError("frozen-domain parameters out of range")
    h_strip = 0.05
    grade = dict(h_fine=corner_size, growth=growth)
    strip_x = graded_grid(-0.5, 0.5, hot=(-0.5, 0.5), h_max=h_strip, **grade)
    strip_y = graded_grid(0.0, strip_height, hot=(0.0,), h_max=h_strip, **grade)
    box_x = compose_grid(-radius, radius, fixed=[strip_x], hot=(-0.5, 0.5),
                         h_max=radius / 8, **grade)
    box_y = graded_grid(-radius, 0.0, hot=(0.0,), h_max=radius / 8, **grade)
    mesh = StructuredMesh({"box": (box_x, box_y), "strip": (strip_x, strip_y)})

    K, _ = assemble_parts(mesh)
    rhs = np.zeros(mesh.n_nodes)
    top = mesh.rects["strip"]
    rhs[top.edge_ids("top")] += edge_integrals(strip_x, lambda s: np.ones((1, len(s))))[0]

    box = mesh.rects["box"]
    fixed = np.unique(np.concatenate([box.edge_ids(s) for s in ("left", "right", "bottom")]))
    free = np.setdiff1d(np.arange(mesh.n_nodes), fixed)
    u = np.zeros(mesh.n_nodes)
    u[fixed] = far_field(*mesh.nodes[fixed].T)
    K = K.tocsr()
    b = rhs[free] - K[free][:, fixed] @ u[fixed]
    u[free] = spla.spsolve(K[free][:, free].tocsc(), b)
    return LaplaceField(mesh, u, strip_height)
