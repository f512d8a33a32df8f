"""Thin resonant slits as a two-outlet energy distributor.

Leading-order asymptotic design of the slit lengths and finite-element
verification of the resulting scattering coefficients.
"""

from .asymptotic import (
    BetaPair, design_for_ratio, evaluate, evaluate_beta, lengths_from_beta, scattering_decoupled,
    scattering_eta, solve_amplitudes,
)
from .boundary_layer import compute_c_xi
from .constants import AuxConstants, ConstantCache, aux_constants, aux_for_config, coupling_eta
from .errors import ComputationError, InputError, ThinSlitError
from .fem import FemOptions, MeshSpec, solve_config
from .geometry import WaveguideConfig, build_domain
from .io import __version__, parse_config
from .sweep import GridSpec, design, design_and_verify, extract_min_reflection_curve, run_sweep

__all__ = [
    "AuxConstants", "BetaPair", "ComputationError", "ConstantCache", "FemOptions", "GridSpec",
    "InputError", "MeshSpec", "ThinSlitError", "WaveguideConfig", "__version__", "aux_constants",
    "aux_for_config", "build_domain", "compute_c_xi", "coupling_eta", "design", "design_and_verify",
    "design_for_ratio", "evaluate", "evaluate_beta", "extract_min_reflection_curve", "lengths_from_beta",
    "parse_config", "run_sweep", "scattering_decoupled", "scattering_eta", "solve_amplitudes",
    "solve_config",
]
