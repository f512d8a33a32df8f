"""Modal series for the outgoing Neumann Green's functions of the channels.

Transverse modes of a unit-width channel are ``1`` and
``sqrt(2) cos(k pi s)``; mode ``k >= 1`` decays with rate
``lambda_k = sqrt(k^2 pi^2 - omega^2)``.  A unit point flux injected through
the wall produces a ``(1/pi) ln(1/r)`` singularity, so self-evaluations of
the modal series diverge like ``sum 1/(k pi)``.  Every such sum is split
into an absolutely convergent remainder plus a closed-form log series:

    sum_k exp(-k pi d) / (k pi) = -(1/pi) ln(1 - exp(-pi d))
    sum_k 1/(k pi) - (1/pi) ln(1/r)   ->  -(1/pi) ln(pi)   (boundary limit)
"""

import numpy as np

from .errors import ConvergenceError, DomainError

DEFAULT_TERMS = 100_000
SERIES_TOL = 1e-8


def decay_rates(omega, n_terms, step=1):
    k = np.arange(step, n_terms + 1, step, dtype=float)
    return k, np.sqrt((k * np.pi) ** 2 - omega**2)


def _check_args(omega, n_terms):
    if not 0.0 < omega < np.pi:
        raise DomainError(f"omega={omega!r} must lie in (0, pi)")
    if n_terms < 100:
        raise DomainError(f"n_terms={n_terms} must be at least 100")


def _regular_sum(omega, n_terms):
    """``sum_{k>=1} (1/lambda_k - 1/(k pi))``; terms are O(k^-3)."""
    k, lam = decay_rates(omega, n_terms)
    return float(np.sum(1.0 / lam - 1.0 / (k * np.pi)))


def evanescent_sum(omega, d, n_terms):
    """``sum_{k>=1} exp(-lambda_k d) / lambda_k`` for ``d > 0``."""
    if d <= 0:
        raise DomainError(f"evanescent sum needs a positive distance, got {d}")
    k, lam = decay_rates(omega, n_terms)
    rest = np.exp(-lam * d) / lam - np.exp(-k * np.pi * d) / (k * np.pi)
    return float(np.sum(rest)) - np.log1p(-np.exp(-np.pi * d)) / np.pi


def _converged(fn, n_terms, what):
    first = fn(n_terms)
    second = fn(2 * n_terms)
    if abs(second - first) > SERIES_TOL:
        raise ConvergenceError(
            f"{what}: doubling n_terms={n_terms} moved the value by"
            f" {abs(second - first):.3e} > {SERIES_TOL}"
        )
    return second


def halfstrip_constant(omega, n_terms=DEFAULT_TERMS):
    """Constant ``G`` in ``g = (1/pi) ln(1/r) + G + O(r)`` at the source.

    ``g`` is the outgoing solution in the half-strip ``(-1/2, 1/2) x (0, inf)``
    with a unit Neumann point source at the midpoint of its bottom edge.  By
    symmetry only even transverse modes ``k = 2j`` are excited.
    """
    _check_args(omega, n_terms)

    def partial(n):
        j = np.arange(1, n // 2 + 1, dtype=float)
        lam = np.sqrt((2 * j * np.pi) ** 2 - omega**2)
        reg = float(np.sum(2.0 / lam - 1.0 / (j * np.pi)))
        return complex(reg - np.log(2 * np.pi) / np.pi, 1.0 / omega)

    return _converged(partial, n_terms, "half-strip constant G")


def trunk_green(omega, p, p_eval, n_terms=DEFAULT_TERMS):
    """Outgoing trunk Green's function with source ``(p, 1)``.

    The trunk is ``(-inf, 0) x (0, 1)`` with a sound-hard end wall at
    ``x = 0``, handled by an image source at ``(-p, 1)``.  For
    ``p_eval == p`` the regularized constant ``Gamma`` (value minus the
    logarithmic singularity) is returned; otherwise the value at
    ``(p_eval, 1)``.  A source in the corner (``p == 0``) coincides with its
    image and carries a ``(2/pi) ln(1/r)`` singularity instead.
    """
    _check_args(omega, n_terms)
    if p > 0 or p_eval > 0:
        raise DomainError(
            f"source and evaluation abscissae must be <= 0, got p={p}, p_eval={p_eval}"
        )

    if p_eval == p:
        if p == 0.0:

            def partial(n):
                reg = 2.0 * _regular_sum(omega, n) - 2.0 * np.log(np.pi) / np.pi
                return 1j / omega + reg

        else:
            plane = 0.5j / omega * (1.0 + np.exp(-2j * omega * p))

            def partial(n):
                reg = _regular_sum(omega, n) - np.log(np.pi) / np.pi
                return plane + reg + evanescent_sum(omega, -2.0 * p, n)

    else:
        direct = abs(p_eval - p)
        image = -(p_eval + p)
        plane = 0.5j / omega * (np.exp(1j * omega * direct) + np.exp(-1j * omega * (p_eval + p)))

        def partial(n):
            return (
                plane
                + evanescent_sum(omega, direct, n)
                + evanescent_sum(omega, image, n)
            )

    return _converged(partial, n_terms, "trunk Green's function")


def halfstrip_green_interior(omega, y, n_terms=DEFAULT_TERMS):
    """Plain (unaccelerated) modal sum for ``g(0, y)``, ``y > 0``."""
    j = np.arange(1, n_terms // 2 + 1, dtype=float)
    lam = np.sqrt((2 * j * np.pi) ** 2 - omega**2)
    return 1j / omega * np.exp(1j * omega * y) + float(np.sum(2.0 * np.exp(-lam * y) / lam))


def trunk_green_interior(omega, p, x, y, n_terms=DEFAULT_TERMS):
    """Plain modal sum for the trunk Green's function at an interior point."""
    k, lam = decay_rates(omega, n_terms)
    # phi_k(1) phi_k(y) = 2 cos(k pi) cos(k pi y)
    trans = 2.0 * np.cos(k * np.pi) * np.cos(k * np.pi * y)
    axial = (np.exp(-lam * abs(x - p)) + np.exp(-lam * abs(x + p))) / (2.0 * lam)
    plane = 0.5j / omega * (np.exp(1j * omega * abs(x - p)) + np.exp(1j * omega * abs(x + p)))
    return plane + float(np.sum(trans * axial))
