from dataclasses import dataclass


@dataclass(frozen=True)
class ScatteringTriple:
    """Reflection and the two transmission coefficients.

    Each is the complex amplitude of the propagating mode in its channel; the
    squared moduli are energy fractions.
    """

    r: complex
    t_plus: complex
    t_minus: complex

    def __post_init__(self):
        for name in ("r", "t_plus", "t_minus"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def energy_residual(self):
        return abs(1.0 - abs(self.r) ** 2 - abs(self.t_plus) ** 2 - abs(self.t_minus) ** 2)

    @property
    def ratio(self):
        """``|T+| / |T-|`` (inf when nothing reaches the minus channel)."""
        if self.t_minus == 0:
            return float("inf")
        return abs(self.t_plus) / abs(self.t_minus)

    def as_dict(self):
        return {
            "R": [self.r.real, self.r.imag],
            "T_plus": [self.t_plus.real, self.t_plus.imag],
            "T_minus": [self.t_minus.real, self.t_minus.imag],
            "abs_R": abs(self.r),
            "abs_T_plus": abs(self.t_plus),
            "abs_T_minus": abs(self.t_minus),
            "energy_residual": self.energy_residual,
        }
