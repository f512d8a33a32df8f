"""Structured biquadratic meshes on unions of axis-aligned rectangles."""

from dataclasses import dataclass

import numpy as np

from ..errors import MeshError
from ..geometry import SIGNS


def graded_grid(a, b, hot=(), h_fine=None, h_max=None, growth=1.3, min_elements=1):
    """Element boundaries on ``[a, b]`` equidistributing a size function.

    The target size grows linearly (so element sizes grow geometrically by
    ``growth``) from ``h_fine`` at each point of ``hot`` up to ``h_max``.
    """
    if not b > a:
        raise MeshError(f"empty interval [{a}, {b}]")
    if h_max is None:
        h_max = b - a
    if h_fine is None or not hot:
        n = max(min_elements, int(np.ceil((b - a) / h_max - 1e-9)))
        grid = np.linspace(a, b, n + 1)
        grid[0], grid[-1] = a, b
        return grid
    hot = np.asarray(hot, dtype=float)
    samples = max(2000, int(40 * (b - a) / h_fine))
    samples = min(samples, 400_000)
    x = np.linspace(a, b, samples + 1)
    dist = np.min(np.abs(x[:, None] - hot[None, :]), axis=1)
    size = np.minimum(h_max, h_fine + (growth - 1.0) * dist)
    density = 1.0 / size
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(x))))
    n = max(min_elements, int(np.ceil(cum[-1] - 1e-9)))
    grid = np.interp(np.linspace(0.0, cum[-1], n + 1), cum, x)
    grid[0], grid[-1] = a, b
    return grid


def compose_grid(a, b, fixed=(), **grading):
    """Grid on ``[a, b]`` that contains every array in ``fixed`` verbatim.

    Gaps between the fixed pieces are filled with :func:`graded_grid`.
    """
    pieces = sorted((np.asarray(f, dtype=float) for f in fixed), key=lambda f: f[0])
    out = []
    cursor = a
    for piece in pieces:
        if piece[0] < cursor - 1e-14 or piece[-1] > b + 1e-14:
            raise MeshError(f"fixed sub-grid [{piece[0]}, {piece[-1]}] does not fit in [{a}, {b}]")
        if piece[0] > cursor:
            out.append(graded_grid(cursor, piece[0], **grading)[:-1])
        out.append(piece[:-1] if piece[-1] < b else piece)
        cursor = piece[-1]
    if cursor < b:
        out.append(graded_grid(cursor, b, **grading))
    grid = np.concatenate(out)
    if np.any(np.diff(grid) <= 0):
        raise MeshError("grid lines are not strictly increasing")
    return grid


def quadratic_nodes(edges):
    """Element boundaries -> Q2 node coordinates (boundaries and midpoints)."""
    nodes = np.empty(2 * len(edges) - 1)
    nodes[0::2] = edges
    nodes[1::2] = 0.5 * (edges[:-1] + edges[1:])
    return nodes


@dataclass
class RectMesh:
    name: str
    x_edges: np.ndarray
    y_edges: np.ndarray
    ids: np.ndarray  # (2 nx + 1, 2 ny + 1) global node numbers

    @property
    def x_nodes(self):
        return quadratic_nodes(self.x_edges)

    @property
    def y_nodes(self):
        return quadratic_nodes(self.y_edges)

    @property
    def n_elements(self):
        return (len(self.x_edges) - 1) * (len(self.y_edges) - 1)

    def element_nodes(self):
        """(n_elements, 9) global ids; local index ``3 a + b`` with ``a`` along x."""
        nx = len(self.x_edges) - 1
        ny = len(self.y_edges) - 1
        i = np.arange(nx)[:, None]
        j = np.arange(ny)[None, :]
        cols = []
        for a in range(3):
            for b in range(3):
                cols.append(self.ids[2 * i + a, 2 * j + b].ravel())
        return np.stack(cols, axis=1)

    def edge_ids(self, side):
        return {
            "left": self.ids[0, :],
            "right": self.ids[-1, :],
            "bottom": self.ids[:, 0],
            "top": self.ids[:, -1],
        }[side]


class StructuredMesh:
    """Conforming union of per-rectangle tensor grids.

    Nodes on shared edges are merged by exact coordinate identity, so adjacent
    rectangles must be built from identical grid-line arrays along their
    interface.
    """

    def __init__(self, rect_grids, domain=None):
        self.domain = domain
        self.rects = {}
        coords = []
        lookup = {}
        count = 0
        for name, (x_edges, y_edges) in rect_grids.items():
            xn = quadratic_nodes(np.asarray(x_edges, dtype=float))
            yn = quadratic_nodes(np.asarray(y_edges, dtype=float))
            ids = np.full((len(xn), len(yn)), -1, dtype=np.int64)
            boundary = np.zeros(ids.shape, dtype=bool)
            boundary[0, :] = boundary[-1, :] = boundary[:, 0] = boundary[:, -1] = True
            for ix, iy in zip(*np.nonzero(boundary)):
                key = (xn[ix], yn[iy])
                gid = lookup.get(key)
                if gid is None:
                    gid = count
                    lookup[key] = gid
                    coords.append(key)
                    count += 1
                ids[ix, iy] = gid
            inner = ~boundary
            n_inner = int(inner.sum())
            ids[inner] = np.arange(count, count + n_inner)
            X, Y = np.meshgrid(xn, yn, indexing="ij")
            coords.extend(zip(X[inner], Y[inner]))
            count += n_inner
            self.rects[name] = RectMesh(name, np.asarray(x_edges, float), np.asarray(y_edges, float), ids)
        self.nodes = np.array(coords, dtype=float)

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_elements(self):
        return sum(r.n_elements for r in self.rects.values())

    def face_nodes(self, face):
        """Global ids and 1D edge grid of the rectangle side lying on ``face``."""
        rm = self.rects[face.rect]
        if face.axis == "x":
            side = "left" if face.normal < 0 else "right"
            edges = rm.y_edges
        else:
            side = "bottom" if face.normal < 0 else "top"
            edges = rm.x_edges
        return rm.edge_ids(side), edges


@dataclass(frozen=True)
class MeshSpec:
    """Resolution controls.

    ``h0`` is the element size away from the slits, ``refine_factor`` the
    minimum number of elements across a slit.  Elements shrink geometrically
    (ratio ``growth``) towards the slit corners down to
    ``epsilon / (refine_factor * corner_ratio)``.
    """

    h0: float = 0.05
    refine_factor: float = 4.0
    corner_ratio: float = 8.0
    growth: float = 1.3

    def refined(self, factor=2.0):
        return MeshSpec(self.h0 / factor, self.refine_factor * factor, self.corner_ratio, self.growth)


def build_mesh(domain, h0=0.05, refine_factor=4.0, spec=None):
    """Graded biquadratic mesh of the five-rectangle distributor domain
    (or of the bare trunk returned by :func:`thinslit.geometry.channel_domain`)."""
    if spec is None:
        spec = MeshSpec(h0=h0, refine_factor=refine_factor)
    if not spec.h0 <= 0.1:
        raise MeshError(f"h0={spec.h0} too coarse: at least 10 nodes per unit length required")
    if not spec.refine_factor >= 1:
        raise MeshError(f"refine_factor={spec.refine_factor} must be at least 1")
    _check_faces(domain)

    trunk = domain.rect("trunk")
    names = [r.name for r in domain.rectangles]
    if len(names) == 1:
        grids = {
            "trunk": (
                graded_grid(trunk.x0, trunk.x1, h_max=spec.h0),
                graded_grid(trunk.y0, trunk.y1, h_max=spec.h0),
            )
        }
        return StructuredMesh(grids, domain)

    cfg = domain.config
    eps = cfg.epsilon
    h_slit = eps / spec.refine_factor
    h_corner = min(h_slit, eps / (spec.refine_factor * spec.corner_ratio))
    if h_slit > eps / 4 + 1e-15:
        raise MeshError(
            f"slit resolution too low: {eps / h_slit:.2f} < 4 elements across the slit"
        )
    grade = dict(h_fine=h_corner, h_max=spec.h0, growth=spec.growth)

    slit_x = {}
    corners = []
    for sign in SIGNS:
        r = domain.rect(f"slit_{sign}")
        slit_x[sign] = graded_grid(
            r.x0, r.x1, hot=(r.x0, r.x1), h_fine=h_corner, h_max=h_slit, growth=spec.growth,
            min_elements=int(np.ceil(spec.refine_factor - 1e-9)),
        )
        corners.extend([r.x0, r.x1])

    grids = {
        "trunk": (
            compose_grid(trunk.x0, trunk.x1, fixed=slit_x.values(), hot=tuple(corners), **grade),
            graded_grid(trunk.y0, trunk.y1, hot=(trunk.y1,), **grade),
        )
    }
    for sign in SIGNS:
        s = domain.rect(f"slit_{sign}")
        o = domain.rect(f"outlet_{sign}")
        grids[f"slit_{sign}"] = (
            slit_x[sign],
            graded_grid(s.y0, s.y1, hot=(s.y0, s.y1), **grade),
        )
        grids[f"outlet_{sign}"] = (
            compose_grid(o.x0, o.x1, fixed=[slit_x[sign]], hot=(s.x0, s.x1), **grade),
            graded_grid(o.y0, o.y1, hot=(o.y0,), **grade),
        )
        if o.y0 != s.y1:
            raise MeshError(f"slit {sign} top and outlet bottom do not coincide")
    return StructuredMesh(grids, domain)


def _check_faces(domain):
    """Each truncation face must be a full side of its rectangle and must not
    cut through a slit."""
    for face in domain.truncation_faces:
        r = domain.rect(face.rect)
        if face.axis == "x":
            side = r.x0 if face.normal < 0 else r.x1
            ok = side == face.position and (r.y0, r.y1) == tuple(face.span)
        else:
            side = r.y0 if face.normal < 0 else r.y1
            ok = side == face.position and (r.x0, r.x1) == tuple(face.span)
        if not ok:
            raise MeshError(f"face {face.name} is not aligned with rectangle {r.name}")
        for other in domain.rectangles:
            if other.name.startswith("slit"):
                if face.axis == "x" and other.x0 < face.position < other.x1:
                    raise MeshError(f"face {face.name} cuts through {other.name}")
                if face.axis == "y" and other.y0 < face.position < other.y1:
                    raise MeshError(f"face {face.name} cuts through {other.name}")
