"""Wave-number dependent constants of the asymptotic model and their cache.

``C_Xi`` comes from the slit-mouth boundary layer, ``G`` from the outlet
half-strip Green's function, ``Gamma_+/-`` and the coupling value
``Gamma_tilde`` from the trunk Green's functions.  None of them depends on
the slit width, so they are computed once per ``(omega, p_plus, p_minus)``
and cached on disk.
"""

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from filelock import FileLock

from .boundary_layer import compute_c_xi
from .errors import DomainError, RegimeError
from .green import DEFAULT_TERMS, halfstrip_constant, trunk_green

CACHE_ENV = "THINSLIT_CACHE_DIR"
CACHE_FILE = "constants.txt"
LEMMA_TOL = 1e-6
REGIME_TOL = 1e-9


@dataclass(frozen=True)
class FarFieldAmplitudes:
    s_plus: complex
    s_minus: complex
    eta: float


@dataclass(frozen=True)
class AuxConstants:
    """Constants at source abscissae ``p_plus``, ``p_minus`` measured from
    the end wall (0 marks a slit sitting in the corner)."""

    c_xi: float
    g_const: complex
    gamma_plus: complex
    gamma_minus: complex
    gamma_tilde: complex
    omega: float
    p_plus: float
    p_minus: float

    def gamma(self, sign):
        return getattr(self, f"gamma_{sign}")

    def p(self, sign):
        return getattr(self, f"p_{sign}")

    def far_field(self):
        w = self.omega
        return FarFieldAmplitudes(
            s_plus=1j * math.cos(w * self.p_plus) / w,
            s_minus=1j * math.cos(w * self.p_minus) / w,
            eta=float((w * self.gamma_tilde).real),
        )

    def lemma_residuals(self):
        """Deviations from the exact identities satisfied by the constants."""
        w = self.omega
        cp, cm = math.cos(w * self.p_plus), math.cos(w * self.p_minus)
        return {
            "c_xi_imag": abs(complex(self.c_xi).imag),
            "g": abs((w * self.g_const).imag - 1.0),
            "gamma_plus": abs((w * self.gamma_plus).imag - cp**2),
            "gamma_minus": abs((w * self.gamma_minus).imag - cm**2),
            "gamma_tilde": abs((w * self.gamma_tilde).imag - cp * cm),
        }

    def check_lemmas(self, tol=LEMMA_TOL):
        bad = {k: v for k, v in self.lemma_residuals().items() if v > tol}
        if bad:
            raise AssertionError(f"constant identities violated: {bad}")
        return True


def compute_g_const(omega, n_terms=DEFAULT_TERMS):
    """Regularized value ``G`` of the outlet half-strip Green's function at
    its source point."""
    return halfstrip_constant(omega, n_terms)


def compute_gamma(omega, p, p_eval, n_terms=DEFAULT_TERMS):
    """Regularized trunk Green's constant (``p_eval == p``) or the value of
    the trunk Green's function with source at ``p`` seen at ``p_eval``."""
    return trunk_green(omega, p, p_eval, n_terms)


def coupling_eta(aux):
    """Coupling ``eta = Re(omega Gamma_tilde)`` between the two slits.

    Only meaningful when both mouths sit where ``cos(omega p) = 1``, for then
    ``omega Gamma_tilde = eta + i``.
    """
    w = aux.omega
    for sign in ("plus", "minus"):
        c = math.cos(w * aux.p(sign))
        if abs(c - 1.0) > REGIME_TOL:
            raise RegimeError(f"cos(omega p_{sign}) = {c!r}; eta needs cos(omega p) = 1")
    return float((w * aux.gamma_tilde).real)


def _compute(omega, p_plus, p_minus, tolerance, n_terms):
    return AuxConstants(
        c_xi=compute_c_xi(tolerance),
        g_const=complex(compute_g_const(omega, n_terms)),
        gamma_plus=complex(compute_gamma(omega, p_plus, p_plus, n_terms)),
        gamma_minus=complex(compute_gamma(omega, p_minus, p_minus, n_terms)),
        gamma_tilde=complex(compute_gamma(omega, p_plus, p_minus, n_terms)),
        omega=omega,
        p_plus=p_plus,
        p_minus=p_minus,
    )


class ConstantCache:
    """Append-only text table of computed constants.

    Readers never lock (a torn trailing line is skipped); writers serialize
    through a lock file.  Keys are exact float matches on
    ``(omega, p_plus, p_minus, tolerance)``.
    """

    FIELDS = (
        "omega p_plus p_minus c_xi g_re g_im gp_re gp_im gm_re gm_im gt_re gt_im tolerance"
    ).split()

    def __init__(self, directory=None):
        if directory is None:
            directory = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "thinslit"
        self.directory = Path(directory)
        self.path = self.directory / CACHE_FILE
        self._lock = FileLock(str(self.path) + ".lock")

    @staticmethod
    def _key(omega, p_plus, p_minus, tolerance):
        return (float(omega), float(p_plus), float(p_minus), float(tolerance))

    def entries(self):
        out = {}
        if not self.path.exists():
            return out
        with open(self.path) as fh:
            for line in fh:
                parts = line.split()
                if len(parts) != len(self.FIELDS) or line.startswith("#"):
                    continue
                try:
                    v = [float(s) for s in parts]
                except ValueError:
                    continue
                aux = AuxConstants(
                    c_xi=v[3],
                    g_const=complex(v[4], v[5]),
                    gamma_plus=complex(v[6], v[7]),
                    gamma_minus=complex(v[8], v[9]),
                    gamma_tilde=complex(v[10], v[11]),
                    omega=v[0],
                    p_plus=v[1],
                    p_minus=v[2],
                )
                out[self._key(v[0], v[1], v[2], v[12])] = aux
        return out

    def get(self, omega, p_plus, p_minus, tolerance):
        return self.entries().get(self._key(omega, p_plus, p_minus, tolerance))

    def put(self, aux, tolerance):
        vals = [
            aux.omega, aux.p_plus, aux.p_minus, aux.c_xi,
            aux.g_const.real, aux.g_const.imag,
            aux.gamma_plus.real, aux.gamma_plus.imag,
            aux.gamma_minus.real, aux.gamma_minus.imag,
            aux.gamma_tilde.real, aux.gamma_tilde.imag,
            tolerance,
        ]
        line = " ".join(repr(float(v)) for v in vals) + "\n"
        self.directory.mkdir(parents=True, exist_ok=True)
        with self._lock:
            new = not self.path.exists()
            with open(self.path, "a") as fh:
                if new:
                    fh.write("# " + " ".join(self.FIELDS) + "\n")
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())


def aux_constants(omega, p_plus, p_minus, tolerance=1e-8, n_terms=DEFAULT_TERMS, cache=None):
    """Constants at ``(omega, p_plus, p_minus)``; consults ``cache`` first
    when given (pass ``False`` to bypass even the default cache)."""
    if p_plus > 0 or p_minus > 0:
        raise DomainError("source abscissae are measured from the end wall and must be <= 0")
    if cache is None:
        cache = ConstantCache()
    if cache:
        hit = cache.get(omega, p_plus, p_minus, tolerance)
        if hit is not None:
            return hit
    aux = _compute(omega, p_plus, p_minus, tolerance, n_terms)
    if cache:
        cache.put(aux, tolerance)
    return aux


def aux_for_config(config, tolerance=1e-8, cache=None):
    """Constants at the mouth positions the asymptotic model uses for ``config``."""
    return aux_constants(
        config.omega,
        config.source_abscissa("plus"),
        config.source_abscissa("minus"),
        tolerance,
        cache=cache,
    )
