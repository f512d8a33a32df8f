"""Additive constant of the slit-mouth boundary layer.

The frozen domain is the lower half-plane joined to the semi-strip
``|x| < 1/2, y >= 0``.  ``Y`` is harmonic with Neumann walls,
``Y ~ y + C`` up the strip and ``Y ~ (1/pi) ln(1/|xi|)`` in the half-plane.
The problem is pure Laplace, so ``C`` does not depend on the wave number.

Two independent routes are provided:

* :func:`c_xi_mode_matching` expands the aperture flux in Gegenbauer
  polynomials carrying the ``r^(-1/3)`` re-entrant corner singularity and
  matches cosine modes of the strip to the half-plane potential.  All
  half-plane integrals are Weber-Schafheitlin integrals in closed form.
* :func:`c_xi_truncated_solve` solves the truncated field problem with the
  finite-element machinery and reads ``C`` off the top of the strip.
"""

from functools import lru_cache

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

# weight (1 - t^2)^(LAM - 1/2) = (1 - t^2)^(-1/3)
LAM = 1.0 / 6.0
_RHO = 2.0 * LAM + 1.0
_TAIL_TERMS = 4000


def _log_gamma(x):
    return special.gammaln(x), special.gammasgn(x)


def _ws_integral(mu, nu, rho):
    """``int_0^inf J_mu(t) J_nu(t) t^-rho dt`` (Weber-Schafheitlin)."""
    parts = [
        (special.gammaln(rho), 1.0),
        _log_gamma(0.5 * (mu + nu - rho + 1.0)),
    ]
    denominators = [
        _log_gamma(0.5 * (rho + nu - mu + 1.0)),
        _log_gamma(0.5 * (rho + nu + mu + 1.0)),
        _log_gamma(0.5 * (rho - nu + mu + 1.0)),
    ]
    log_value = sum(v for v, _ in parts) - sum(v for v, _ in denominators) - rho * np.log(2.0)
    sign = np.prod([s for _, s in parts]) * np.prod([s for _, s in denominators])
    return sign * np.exp(log_value)


def _ws_regularized_00():
    """``int_0^inf (J_lam(t)^2 t^(-2 lam) - h0 exp(-2t)) dt / t``.

    Obtained as the finite part of the Weber-Schafheitlin integral with the
    exponent shifted by ``s -> 0``, minus the Gamma-function pole of the
    subtracted exponential.
    """
    h0 = 1.0 / (2.0 ** (2 * LAM) * special.gamma(1.0 + LAM) ** 2)
    a0 = 0.5 * h0
    dlog = -(
        special.digamma(_RHO)
        - np.log(2.0)
        - special.digamma(0.5 * (_RHO + 1.0))
        - 0.5 * special.digamma(0.5 * (_RHO + 2 * LAM + 1.0))
    )
    return 2.0 * a0 * dlog + h0 * (0.5 * np.euler_gamma + np.log(2.0))


def _basis_scale(m):
    # cosine transform of (1-t^2)^(-1/3) C_m(t) over |x| < 1/2, t = 2x
    log_mag = special.gammaln(m + 2 * LAM) - special.gammaln(m + 1.0) - special.gammaln(LAM)
    sign = (-1.0) ** (m // 2)
    return sign * 0.5 * np.pi * 2.0 ** (1.0 - LAM) * np.exp(log_mag)


def _galerkin_system(n_basis, n_modes=_TAIL_TERMS):
    orders = 2 * np.arange(n_basis)
    scale = np.array([_basis_scale(m) for m in orders])
    mu = orders + LAM

    half_plane = np.empty((n_basis, n_basis))
    for i in range(n_basis):
        for j in range(i, n_basis):
            if i == j == 0:
                val = _ws_regularized_00()
            else:
                val = _ws_integral(mu[i], mu[j], _RHO)
            half_plane[i, j] = half_plane[j, i] = val
    half_plane *= np.outer(scale, scale) / np.pi

    # strip modes cos(n pi (x + 1/2)), only even n = 2l couple; J at t = l pi
    ell = np.arange(1, n_modes + 1, dtype=float)
    t = ell * np.pi
    bessel = special.jv(mu[:, None], t[None, :]) * t ** (-LAM)
    strip = (bessel / (ell * np.pi)) @ bessel.T
    # tail l > n_modes from the two-term Hankel expansion sampled at t = l pi
    phase = mu * np.pi / 2 + np.pi / 4
    c, s = np.cos(phase), np.sin(phase)
    q = (4 * mu**2 - 1) / 8
    z1 = special.zeta(2 + 2 * LAM, n_modes + 1)
    z2 = special.zeta(3 + 2 * LAM, n_modes + 1)
    base = 2.0 / np.pi**3 * np.pi ** (-2 * LAM)
    strip += base * (
        np.outer(c, c) * z1 + (np.outer(c, s * q) + np.outer(s * q, c)) / np.pi * z2
    )
    strip *= np.outer(scale, scale)

    flux = np.zeros(n_basis)
    flux[0] = scale[0] / (2.0**LAM * special.gamma(1.0 + LAM))
    return half_plane + strip, flux


def c_xi_galerkin(n_basis, n_modes=_TAIL_TERMS):
    """Mode-matching estimate of the constant with ``n_basis`` aperture
    functions."""
    matrix, flux = _galerkin_system(n_basis, n_modes)
    n = n_basis
    system = np.zeros((n + 1, n + 1))
    system[:n, :n] = matrix
    system[:n, n] = -flux
    system[n, :n] = flux
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    return float(np.linalg.solve(system, rhs)[n])


@lru_cache(maxsize=None)
def c_xi_mode_matching(tolerance=1e-10, max_basis=64):
    """Refine the aperture basis until two successive sizes agree."""
    if not tolerance > 0:
        raise DomainError(f"tolerance={tolerance!r} must be positive")
    n = 2
    prev = c_xi_galerkin(n)
    while n < max_basis:
        n *= 2
        cur = c_xi_galerkin(n)
        if abs(cur - prev) <= tolerance:
            return cur
        prev = cur
    raise ConvergenceError(
        f"aperture expansion did not settle to {tolerance} with {max_basis} functions"
    )


def compute_c_xi(tolerance=1e-8):
    """Boundary-layer constant ``C_Xi`` (real by construction).

    Raises :class:`ConvergenceError` if two successive refinements disagree by
    more than ``tolerance`` up to the largest basis size.
    """
    return c_xi_mode_matching(float(tolerance))


def c_xi_truncated_solve(radius=1000.0, strip_height=3.0, corner_size=2e-3, growth=1.25):
    """Finite-element estimate of ``C_Xi`` on a truncated frozen domain.

    The half-plane is cut to ``[-radius, radius] x [-radius, 0]`` with the
    far-field value ``(1/pi) ln(1/r)`` imposed on the cut (the first
    correction is ``O(r^-2)`` by symmetry); a unit flux enters through the
    top of the strip.  ``C`` is the mean of ``Y - y`` on the strip top.
    """
    from .fem.laplace import solve_frozen_domain

    field = solve_frozen_domain(radius, strip_height, corner_size, growth)
    return field.mean_on_strip_top() - strip_height
