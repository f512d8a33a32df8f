"""Modal Dirichlet-to-Neumann conditions on the truncation faces."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from ..errors import MeshError
from .assembly import edge_integrals

DEFAULT_MODES = 15


def transverse_modes(s, n_modes):
    """Orthonormal Neumann modes ``1, sqrt(2) cos(k pi s)`` on a unit cross-section."""
    k = np.arange(n_modes)[:, None]
    modes = np.sqrt(2.0) * np.cos(k * np.pi * np.asarray(s)[None, :])
    modes[0] = 1.0
    return modes


def axial_rates(omega, n_modes):
    """``Lambda_k`` with outgoing mode ``exp(-Lambda_k * distance)``.

    ``Lambda_0 = -i omega`` (propagating), ``Lambda_k = sqrt(k^2 pi^2 - omega^2)``.
    """
    k = np.arange(n_modes)
    rates = np.sqrt((k * np.pi) ** 2 - omega**2 + 0j)
    rates[0] = -1j * omega
    return rates


@dataclass
class DtNFace:
    face: object
    omega: float
    n_modes: int
    node_ids: np.ndarray
    projections: np.ndarray  # (n_modes, n_face_nodes): int phi_k N_i

    @property
    def rates(self):
        return axial_rates(self.omega, self.n_modes)

    @property
    def incident_value(self):
        """Incident plane wave ``exp(i omega (x - reference))`` on the face."""
        return np.exp(1j * self.omega * (self.face.position - self.face.reference))

    def mode_amplitudes(self, values):
        return self.projections @ values[self.node_ids]


def make_faces(mesh, omega, n_modes=DEFAULT_MODES):
    if n_modes < 1:
        raise MeshError(f"n_modes={n_modes} must be at least 1")
    faces = []
    for face in mesh.domain.truncation_faces:
        ids, edges = mesh.face_nodes(face)
        start, stop = face.span
        if abs((stop - start) - 1.0) > 1e-12 or edges[0] != start or edges[-1] != stop:
            raise MeshError(f"face {face.name} is not aligned with the mesh lines")
        proj = edge_integrals(edges, lambda s: transverse_modes(s - start, n_modes))
        faces.append(DtNFace(face, omega, n_modes, ids, proj))
    return faces


def apply_dtn(system, faces, omega=None):
    """Add the DtN bilinear forms and the incident-wave load.

    Returns ``(matrix, rhs)``.  On the inlet face the unit incident wave
    ``exp(i omega (x - x_ref))`` is imposed; the other faces are outgoing
    only.
    """
    n = system.shape[0]
    rhs = np.zeros(n, dtype=complex)
    rows, cols, vals = [], [], []
    for f in faces:
        if omega is not None and f.omega != omega:
            raise MeshError("face data built for a different wave number")
        q = f.projections
        block = (q.T * f.rates) @ q
        rows.append(np.repeat(f.node_ids, len(f.node_ids)))
        cols.append(np.tile(f.node_ids, len(f.node_ids)))
        vals.append(block.ravel())
        if f.face.incident:
            np.add.at(rhs, f.node_ids, -2j * f.omega * f.incident_value * q[0])
    extra = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    return (system + extra).tocsr(), rhs
