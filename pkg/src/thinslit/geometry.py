"""Three-channel slit geometry.

The trunk ``Pi0 = (-inf, wall_x) x (0, 1)`` is connected through two thin
vertical slits of width ``epsilon`` to two semi-infinite outlet channels of
unit width.  Slit ``+`` and slit ``-`` are centred at ``p_plus`` and
``p_minus``; their lengths are the resonant lengths ``pi m / omega`` shifted
by ``epsilon * Lp``.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, GeometryError

SIGNS = ("plus", "minus")

#: slits whose mouth reaches the end wall to within this distance are treated
#: as flush with it (mouth corner sitting on the corner of the trunk)
FLUSH_TOL = 1e-12


def resonant_length(omega, m):
    """Length ``pi m / omega`` at which ``omega**2`` is a Dirichlet eigenvalue
    of the one-dimensional slit problem."""
    if not 0.0 < omega < np.pi:
        raise DomainError(f"omega={omega!r} must lie in (0, pi)")
    if int(m) != m or m < 1:
        raise DomainError(f"resonance order m={m!r} must be a positive integer")
    return np.pi * int(m) / omega


def slit_length(L, Lp, epsilon):
    """True slit length ``L + epsilon * Lp``."""
    if epsilon <= 0:
        raise DomainError(f"epsilon={epsilon!r} must be positive")
    if L <= 0:
        raise DomainError(f"base length L={L!r} must be positive")
    length = L + epsilon * Lp
    if length <= 0:
        raise DomainError(
            f"slit degenerates: L + epsilon*Lp = {length!r} <= 0 (L={L}, Lp={Lp})"
        )
    return length


@dataclass(frozen=True)
class Slit:
    p: float
    m: int
    Lp: float
    L: float
    length: float
    flush: bool


@dataclass(frozen=True)
class WaveguideConfig:
    """Physical and geometric parameters of the distributor.

    Base lengths are never stored: they follow from ``(omega, m)``.  A slit
    may touch the end wall (``p + epsilon/2 >= wall_x``, e.g. ``p = wall_x``);
    the asymptotic model treats such a slit as sitting in the corner, while
    :func:`build_domain` only accepts ``p + epsilon/2 <= wall_x``.
    """

    omega: float
    epsilon: float
    p_plus: float
    p_minus: float
    m_plus: int = 1
    m_minus: int = 1
    Lp_plus: float = 0.0
    Lp_minus: float = 0.0
    wall_x: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.omega < np.pi:
            raise DomainError(
                f"omega={self.omega!r} must lie in (0, pi) (single propagating mode)"
            )
        if not self.epsilon > 0:
            raise DomainError(f"epsilon={self.epsilon!r} must be positive")
        if self.p_plus == self.p_minus:
            raise GeometryError("p_plus and p_minus must differ (two distinct slits)")
        if abs(self.p_plus - self.p_minus) <= self.epsilon:
            raise GeometryError(
                f"slits overlap: |p_plus - p_minus| = {abs(self.p_plus - self.p_minus)}"
                f" <= epsilon = {self.epsilon}"
            )
        for name in ("p_plus", "p_minus"):
            if getattr(self, name) > self.wall_x:
                raise GeometryError(
                    f"{name}={getattr(self, name)} lies beyond the end wall x={self.wall_x}"
                )
        for name in ("m_plus", "m_minus"):
            m = getattr(self, name)
            if int(m) != m or m < 1:
                raise DomainError(f"{name}={m!r} must be a positive integer")
            object.__setattr__(self, name, int(m))
        # validates the true lengths
        self.length("plus")
        self.length("minus")

    def slit(self, sign):
        p = getattr(self, f"p_{sign}")
        m = getattr(self, f"m_{sign}")
        Lp = getattr(self, f"Lp_{sign}")
        L = resonant_length(self.omega, m)
        return Slit(
            p=p,
            m=m,
            Lp=Lp,
            L=L,
            length=slit_length(L, Lp, self.epsilon),
            flush=self.is_flush(sign),
        )

    def length(self, sign):
        """True slit length ``L^eps`` of slit ``sign``."""
        return slit_length(
            resonant_length(self.omega, getattr(self, f"m_{sign}")),
            getattr(self, f"Lp_{sign}"),
            self.epsilon,
        )

    def is_flush(self, sign):
        p = getattr(self, f"p_{sign}")
        return p + 0.5 * self.epsilon >= self.wall_x - FLUSH_TOL

    def source_abscissa(self, sign):
        """Abscissa of the slit mouth point ``A`` measured from the end wall.

        Flush slits are represented by a source in the corner (0).
        """
        if self.is_flush(sign):
            return 0.0
        return getattr(self, f"p_{sign}") - self.wall_x

    def mouth(self, sign):
        """Point ``A = (p, 1)``."""
        return (getattr(self, f"p_{sign}"), 1.0)

    def top(self, sign):
        """Point ``B = (p, 1 + L^eps)``."""
        return (getattr(self, f"p_{sign}"), 1.0 + self.length(sign))

    def with_lengths(self, length_plus, length_minus):
        """Copy of the config whose true slit lengths are the given values."""
        eps = self.epsilon
        Lp = (length_plus - resonant_length(self.omega, self.m_plus)) / eps
        Lm = (length_minus - resonant_length(self.omega, self.m_minus)) / eps
        return replace(self, Lp_plus=Lp, Lp_minus=Lm)

    def swapped(self):
        """The same geometry with the two slit labels exchanged."""
        return replace(
            self,
            p_plus=self.p_minus,
            p_minus=self.p_plus,
            m_plus=self.m_minus,
            m_minus=self.m_plus,
            Lp_plus=self.Lp_minus,
            Lp_minus=self.Lp_plus,
        )


@dataclass(frozen=True)
class Rect:
    name: str
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def area(self):
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, x, y):
        return (self.x0 <= x) & (x <= self.x1) & (self.y0 <= y) & (y <= self.y1)


@dataclass(frozen=True)
class Face:
    """Artificial truncation cross-section of unit width.

    ``axis`` is the coordinate held fixed on the face ('x' for the vertical
    inlet face, 'y' for the horizontal outlet faces); ``normal`` is the sign
    of the outward normal along that axis.  ``reference`` is the coordinate
    at which the propagating-mode amplitude is phase-referenced.
    """

    name: str
    axis: str
    position: float
    span: tuple
    normal: int
    incident: bool
    reference: float
    rect: str


@dataclass(frozen=True)
class Segment:
    y: float
    x0: float
    x1: float
    between: tuple

    @property
    def length(self):
        return self.x1 - self.x0


@dataclass(frozen=True)
class DomainDescription:
    rectangles: tuple
    truncation_faces: tuple
    interface_segments: tuple
    config: WaveguideConfig = field(default=None, compare=False)

    def rect(self, name):
        for r in self.rectangles:
            if r.name == name:
                return r
        raise KeyError(name)

    def face(self, name):
        for f in self.truncation_faces:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def area(self):
        return sum(r.area for r in self.rectangles)

    @property
    def bounding_box(self):
        return (
            min(r.x0 for r in self.rectangles),
            max(r.x1 for r in self.rectangles),
            min(r.y0 for r in self.rectangles),
            max(r.y1 for r in self.rectangles),
        )

    def contains(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        inside = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for r in self.rectangles:
            inside |= r.contains(x, y)
        return inside


def default_trunc_h(config):
    return abs(min(config.p_plus, config.p_minus) - config.wall_x) + 2.0


DEFAULT_TRUNC_V = 2.0


def build_domain(config, trunc_h=None, trunc_v=DEFAULT_TRUNC_V):
    """Truncate the unbounded waveguide into five rectangles.

    The inlet face sits at ``x = wall_x - trunc_h``; each outlet face sits
    ``trunc_v`` above the top of its slit.
    """
    if trunc_h is None:
        trunc_h = default_trunc_h(config)
    eps = config.epsilon
    wall = config.wall_x
    for sign in SIGNS:
        p = getattr(config, f"p_{sign}")
        if p + 0.5 * eps > wall + FLUSH_TOL:
            raise GeometryError(
                f"slit {sign} crosses the end wall: p + epsilon/2 = {p + 0.5 * eps}"
                f" > wall_x = {wall}"
            )
    if abs(config.p_plus - config.p_minus) < 1.0:
        raise GeometryError(
            "outlet channels overlap: |p_plus - p_minus| must be at least 1"
        )
    reach = max(abs(config.p_plus - wall), abs(config.p_minus - wall))
    if trunc_h < reach + 2.0:
        raise GeometryError(
            f"trunc_h={trunc_h} must be at least max|p - wall_x| + 2 = {reach + 2.0}"
        )
    if trunc_v < 1.0:
        raise GeometryError(f"trunc_v={trunc_v} must be at least 1")

    x_in = wall - trunc_h
    rects = [Rect("trunk", x_in, wall, 0.0, 1.0)]
    faces = [
        Face(
            name="inlet",
            axis="x",
            position=x_in,
            span=(0.0, 1.0),
            normal=-1,
            incident=True,
            reference=wall,
            rect="trunk",
        )
    ]
    segments = []
    for sign in SIGNS:
        p = getattr(config, f"p_{sign}")
        top = 1.0 + config.length(sign)
        # flush slit: snap the right edge onto the wall exactly
        x1 = min(p + 0.5 * eps, wall)
        x0 = x1 - eps
        rects.append(Rect(f"slit_{sign}", x0, x1, 1.0, top))
        rects.append(Rect(f"outlet_{sign}", p - 0.5, p + 0.5, top, top + trunc_v))
        faces.append(
            Face(
                name=f"outlet_{sign}",
                axis="y",
                position=top + trunc_v,
                span=(p - 0.5, p + 0.5),
                normal=+1,
                incident=False,
                reference=top,
                rect=f"outlet_{sign}",
            )
        )
        segments.append(Segment(1.0, x0, x1, ("trunk", f"slit_{sign}")))
        segments.append(Segment(top, x0, x1, (f"slit_{sign}", f"outlet_{sign}")))
    return DomainDescription(tuple(rects), tuple(faces), tuple(segments), config)


def channel_domain(trunc_h, wall_x=0.0):
    """The trunk alone, closed by the end wall: the no-slit control problem."""
    if trunc_h <= 0:
        raise GeometryError(f"trunc_h={trunc_h} must be positive")
    x_in = wall_x - trunc_h
    rect = Rect("trunk", x_in, wall_x, 0.0, 1.0)
    face = Face("inlet", "x", x_in, (0.0, 1.0), -1, True, wall_x, "trunk")
    return DomainDescription((rect,), (face,), ())
