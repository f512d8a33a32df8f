"""Leading-order scattering by two thin resonant slits.

Inside slit ``+/-`` the field is ``a_+/- sin(omega (y - 1)) / epsilon`` to
leading order.  The amplitudes solve a 2x2 system whose coefficients are the
detunings ``beta_+/-`` (slit-length corrections plus logarithmic and
boundary-layer terms) and the inter-slit coupling ``omega Gamma_tilde``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MismatchError, SingularSystemError
from .geometry import SIGNS, resonant_length
from .scattering import ScatteringTriple

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class BetaPair:
    beta_plus: float
    beta_minus: float

    def __post_init__(self):
        if not (math.isfinite(self.beta_plus) and math.isfinite(self.beta_minus)):
            raise DomainError(f"non-finite detuning {self}")

    def __getitem__(self, sign):
        return getattr(self, f"beta_{sign}")


@dataclass(frozen=True)
class AmplitudePair:
    a_plus: complex
    a_minus: complex

    def __getitem__(self, sign):
        return getattr(self, f"a_{sign}")

    def c_a(self, omega):
        """Slope of the slit field at the mouths, ``a omega``."""
        return (self.a_plus * omega, self.a_minus * omega)

    def c_b(self, omega, m_plus, m_minus):
        """Slope at the slit tops in the downward coordinate, ``(-1)^(1+m) a omega``."""
        return (
            (-1) ** (1 + m_plus) * self.a_plus * omega,
            (-1) ** (1 + m_minus) * self.a_minus * omega,
        )


@dataclass(frozen=True)
class ResonantMode:
    """Dirichlet mode ``sin(pi m (y - 1) / L)`` of the 1D slit problem on
    ``(1, 1 + L)``."""

    m: int
    L: float

    @property
    def mu(self):
        return (math.pi * self.m / self.L) ** 2

    def profile(self, y):
        return np.sin(math.pi * self.m * (np.asarray(y) - 1.0) / self.L)

    @classmethod
    def at(cls, omega, m):
        return cls(m, resonant_length(omega, m))


def mouth_constant(p, epsilon, c_xi):
    """Constant picked up when matching the trunk field to a slit mouth.

    A mouth away from the wall sees a half-plane: ``|ln eps|/pi + C_Xi``.  A
    mouth in the corner (``p == 0``) sees a quarter-plane; reflecting it in
    the wall gives a centred mouth of width ``2 eps``, hence
    ``2 |ln eps|/pi - 2 ln 2/pi + 2 C_Xi``.
    """
    log_eps = abs(math.log(epsilon))
    if p == 0.0:
        return 2.0 * log_eps / math.pi - 2.0 * math.log(2.0) / math.pi + 2.0 * c_xi
    return log_eps / math.pi + c_xi


def detuning_offset(p, epsilon, aux, gamma):
    """``beta / omega - Lp``: everything in the detuning except the length
    correction."""
    top = abs(math.log(epsilon)) / math.pi + aux.c_xi + aux.g_const.real
    return mouth_constant(p, epsilon, aux.c_xi) + top + gamma.real


def _check_aux(config, aux):
    if aux.omega != config.omega:
        raise MismatchError(f"constants computed at omega={aux.omega}, config has {config.omega}")
    for sign in SIGNS:
        if aux.p(sign) != config.source_abscissa(sign):
            raise MismatchError(
                f"constants computed at p_{sign}={aux.p(sign)},"
                f" config mouth is at {config.source_abscissa(sign)}"
            )


def beta_from_config(config, aux):
    """Detunings of the slits described by ``config``."""
    _check_aux(config, aux)
    eps = config.epsilon
    vals = []
    for sign in SIGNS:
        off = detuning_offset(aux.p(sign), eps, aux, aux.gamma(sign))
        vals.append(config.omega * (getattr(config, f"Lp_{sign}") + off))
    return BetaPair(*vals)


def length_corrections(beta, config, aux):
    """``Lp_+/-`` realizing the detunings ``beta`` at the config's width."""
    _check_aux(config, aux)
    eps = config.epsilon
    return tuple(
        beta[sign] / config.omega - detuning_offset(aux.p(sign), eps, aux, aux.gamma(sign))
        for sign in SIGNS
    )


def lengths_from_beta(beta, config, aux):
    """True slit lengths ``L^eps_+/-`` realizing the detunings ``beta``."""
    out = []
    for sign, Lp in zip(SIGNS, length_corrections(beta, config, aux)):
        L = resonant_length(config.omega, getattr(config, f"m_{sign}")) + config.epsilon * Lp
        if L <= 0:
            raise DomainError(f"detuning {beta[sign]} gives a nonpositive slit length {L}")
        out.append(float(L))
    return tuple(out)


def _diag(beta, c):
    return beta + 1j * (1.0 + c * c)


def amplitude_residual(amps, beta, omega, p_plus, p_minus, gamma_tilde):
    """Relative residuals of the two rows of the amplitude system."""
    cp, cm = math.cos(omega * p_plus), math.cos(omega * p_minus)
    wg = omega * gamma_tilde
    out = []
    for a_s, a_o, d, c in (
        (amps.a_plus, amps.a_minus, _diag(beta.beta_plus, cp), cp),
        (amps.a_minus, amps.a_plus, _diag(beta.beta_minus, cm), cm),
    ):
        row = a_s * d + a_o * wg + 2.0 * c
        scale = abs(a_s * d) + abs(a_o * wg) + 2.0 * abs(c)
        out.append(abs(row) / scale if scale > 0 else 0.0)
    return tuple(out)


def solve_amplitudes(beta, omega, p_plus, p_minus, gamma_tilde):
    """Slit amplitudes ``a_+/-`` from the closed-form 2x2 solution.

    The residual of the linear system is checked on every call; if the closed
    form loses accuracy the system is solved by elimination instead.
    """
    cp, cm = math.cos(omega * p_plus), math.cos(omega * p_minus)
    dp, dm = _diag(beta.beta_plus, cp), _diag(beta.beta_minus, cm)
    wg = omega * gamma_tilde
    den = dp * dm - wg * wg
    scale = abs(dp * dm) + abs(wg) ** 2
    if abs(den) < 1e-14 * scale:
        raise SingularSystemError(f"amplitude system is singular: |det| = {abs(den):.3e}")
    amps = AmplitudePair(
        (2.0 * cm * wg - 2.0 * dm * cp) / den,
        (2.0 * cp * wg - 2.0 * dp * cm) / den,
    )
    if max(amplitude_residual(amps, beta, omega, p_plus, p_minus, gamma_tilde)) > RESIDUAL_TOL:
        a = np.linalg.solve(np.array([[dp, wg], [wg, dm]]), np.array([-2.0 * cp, -2.0 * cm]))
        amps = AmplitudePair(complex(a[0]), complex(a[1]))
    return amps


def scattering_first_order(amps, omega, p_plus, p_minus, m_plus, m_minus):
    """Leading-order ``(R, T+, T-)`` from the slit amplitudes.

    The mouth positions enter ``R`` through ``cos(omega p)``; each outlet
    only sees the field at the top of its own slit, so ``T`` does not.
    (Writing ``T`` with an extra ``cos(omega p)`` factor breaks energy
    conservation unless ``cos(omega p) = 1``.)
    """
    cp, cm = math.cos(omega * p_plus), math.cos(omega * p_minus)
    r = 1.0 + 1j * (amps.a_plus * cp + amps.a_minus * cm)
    tp = 1j * (-1) ** (1 + m_plus) * amps.a_plus
    tm = 1j * (-1) ** (1 + m_minus) * amps.a_minus
    return ScatteringTriple(r, tp, tm)


def _eta_denominator(bp, bm, eta):
    return bp * bm + 2j * (bp + bm) - 3.0 - eta**2 - 2j * eta


def scattering_eta(beta, eta, m_plus=1, m_minus=1):
    """Coefficients when both mouths satisfy ``cos(omega p) = 1`` and the
    coupling is ``omega Gamma_tilde = eta + i``."""
    bp, bm = beta.beta_plus, beta.beta_minus
    den = _eta_denominator(bp, bm, eta)
    r = (bp * bm + 1.0 - eta**2 + 2j * eta) / den
    tp = 2j * (-1) ** m_plus * (bm + 1j - eta) / den
    tm = 2j * (-1) ** m_minus * (bp + 1j - eta) / den
    return ScatteringTriple(r, tp, tm)


def scattering_decoupled(beta, m_plus=1, m_minus=1):
    """Coefficients with the inter-slit coupling neglected (``eta = 0``)."""
    bp, bm = beta.beta_plus, beta.beta_minus
    den = bp * bm + 2j * (bp + bm) - 3.0
    r = (bp * bm + 1.0) / den
    tp = 2j * (-1) ** m_plus * (bm + 1j) / den
    tm = 2j * (-1) ** m_minus * (bp + 1j) / den
    return ScatteringTriple(r, tp, tm)


def design_for_ratio(target_ratio, branch=+1):
    """Detunings on the zero-reflection curve ``beta_+ beta_- = -1`` with
    ``|T+| / |T-| = target_ratio`` (in the decoupled model).

    On that curve the ratio equals ``1 / |beta_+|``; ``branch`` picks the sign
    of ``beta_+``.
    """
    t = float(target_ratio)
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"target ratio must be a positive finite number, got {target_ratio!r}")
    if branch not in (+1, -1):
        raise DomainError("branch must be +1 or -1")
    return BetaPair(branch / t, -branch * t)


def slit_amplitude(amps, epsilon):
    """Peak field magnitude ``|a| / epsilon`` inside each slit."""
    if epsilon <= 0:
        raise DomainError(f"epsilon={epsilon!r} must be positive")
    return (abs(amps.a_plus) / epsilon, abs(amps.a_minus) / epsilon)


@dataclass(frozen=True)
class AsymptoticResult:
    beta: BetaPair
    amplitudes: AmplitudePair
    triple: ScatteringTriple
    eta: float


def evaluate(config, aux):
    """Full leading-order prediction for a configuration."""
    beta = beta_from_config(config, aux)
    amps = solve_amplitudes(beta, config.omega, aux.p_plus, aux.p_minus, aux.gamma_tilde)
    triple = scattering_first_order(
        amps, config.omega, aux.p_plus, aux.p_minus, config.m_plus, config.m_minus
    )
    return AsymptoticResult(beta, amps, triple, float((config.omega * aux.gamma_tilde).real))


def evaluate_beta(beta, config, aux):
    """Leading-order prediction at prescribed detunings."""
    amps = solve_amplitudes(beta, config.omega, aux.p_plus, aux.p_minus, aux.gamma_tilde)
    triple = scattering_first_order(
        amps, config.omega, aux.p_plus, aux.p_minus, config.m_plus, config.m_minus
    )
    return AsymptoticResult(beta, amps, triple, float((config.omega * aux.gamma_tilde).real))
