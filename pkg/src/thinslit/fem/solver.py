"""Scattering solve on the truncated distributor and coefficient extraction."""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from ..errors import SolverError
from ..geometry import build_domain, channel_domain, DEFAULT_TRUNC_V
from ..scattering import ScatteringTriple
from .assembly import assemble, shape_1d
from .dtn import DEFAULT_MODES, apply_dtn, make_faces
from .mesh import MeshSpec, build_mesh

RESIDUAL_TOL = 1e-10


@dataclass
class SolutionField:
    mesh: object
    values: np.ndarray
    omega: float
    config: object = None
    residual: float = float("nan")
    stats: dict = field(default_factory=dict)

    def evaluate(self, x, y, fill=np.nan):
        """Interpolate the biquadratic field at points ``(x, y)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast(x, y).shape
        x = np.broadcast_to(x, shape).ravel()
        y = np.broadcast_to(y, shape).ravel()
        out = np.full(x.shape, fill, dtype=complex)
        done = np.zeros(x.shape, dtype=bool)
        for rm in self.mesh.rects.values():
            xe, ye = rm.x_edges, rm.y_edges
            inside = ~done & (x >= xe[0]) & (x <= xe[-1]) & (y >= ye[0]) & (y <= ye[-1])
            if not inside.any():
                continue
            px, py = x[inside], y[inside]
            i = np.clip(np.searchsorted(xe, px, side="right") - 1, 0, len(xe) - 2)
            j = np.clip(np.searchsorted(ye, py, side="right") - 1, 0, len(ye) - 2)
            bx = shape_1d((px - xe[i]) / (xe[i + 1] - xe[i]))
            by = shape_1d((py - ye[j]) / (ye[j + 1] - ye[j]))
            acc = np.zeros(len(px), dtype=complex)
            for a in range(3):
                for b in range(3):
                    acc += bx[:, a] * by[:, b] * self.values[rm.ids[2 * i + a, 2 * j + b]]
            out[inside] = acc
            done |= inside
        return out.reshape(shape)

    def max_abs_in(self, rect_name):
        return float(np.max(np.abs(self.values[self.mesh.rects[rect_name].ids])))


def solve(matrix, rhs):
    """Sparse direct solve with a relative-residual check."""
    t0 = time.perf_counter()
    try:
        lu = spla.splu(matrix.tocsc())
        x = lu.solve(rhs)
    except (RuntimeError, ValueError) as exc:
        raise SolverError(
            f"factorization failed ({exc}); n={matrix.shape[0]}, nnz={matrix.nnz}"
        ) from exc
    res = np.linalg.norm(matrix @ x - rhs) / max(np.linalg.norm(rhs), 1e-300)
    if not np.isfinite(res) or res > RESIDUAL_TOL:
        raise SolverError(
            f"relative residual {res:.3e} exceeds {RESIDUAL_TOL}; n={matrix.shape[0]}, nnz={matrix.nnz}"
        )
    stats = {"n": matrix.shape[0], "nnz": int(matrix.nnz), "seconds": time.perf_counter() - t0}
    return x, res, stats


def extract_scattering(field, faces, omega):
    """Modal projection of the solved field onto the propagating mode.

    ``R`` is referenced to the inlet face's reference abscissa and each
    ``T`` to the top of its slit.
    """
    coeffs = {}
    for f in faces:
        if f.omega != omega:
            raise SolverError("face data built for a different wave number")
        amp = f.mode_amplitudes(field.values)[0]
        if f.face.incident:
            inc = f.incident_value
            coeffs[f.face.name] = (amp - inc) * inc  # = (amp - inc) e^{-i w l}
        else:
            dist = abs(f.face.position - f.face.reference)
            coeffs[f.face.name] = amp * np.exp(-1j * omega * dist)
    return ScatteringTriple(
        coeffs["inlet"],
        coeffs.get("outlet_plus", 0.0),
        coeffs.get("outlet_minus", 0.0),
    )


@dataclass(frozen=True)
class FemOptions:
    trunc_h: float = None
    trunc_v: float = DEFAULT_TRUNC_V
    n_modes: int = DEFAULT_MODES
    mesh: MeshSpec = MeshSpec()


def solve_domain(domain, omega, options=FemOptions(), config=None):
    mesh = build_mesh(domain, spec=options.mesh)
    faces = make_faces(mesh, omega, options.n_modes)
    matrix, rhs = apply_dtn(assemble(mesh, omega), faces, omega)
    values, res, stats = solve(matrix, rhs)
    field = SolutionField(mesh, values, omega, config, res, stats)
    return field, extract_scattering(field, faces, omega)


def solve_config(config, options=FemOptions()):
    """Full-wave scattering solve for a distributor configuration.

    Returns ``(field, triple)``.
    """
    domain = build_domain(config, options.trunc_h, options.trunc_v)
    return solve_domain(domain, config.omega, options, config)


def solve_channel(omega, trunc_h=3.0, options=FemOptions(), wall_x=0.0):
    """The no-slit control: trunk closed by the end wall."""
    return solve_domain(channel_domain(trunc_h, wall_x), omega, options)
