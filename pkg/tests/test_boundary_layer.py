import inspect

import pytest

from thinslit.boundary_layer import (
    c_xi_galerkin, c_xi_mode_matching, c_xi_truncated_solve, compute_c_xi,
)
from thinslit.errors import ConvergenceError


def test_real():
    c = compute_c_xi(1e-6)
    assert isinstance(c, float)
    assert complex(c).imag == 0.0


def test_refinement_consistency():
    assert abs(compute_c_xi(1e-4) - compute_c_xi(1e-6)) < 1e-4


def test_no_wave_number():
    assert "omega" not in inspect.signature(compute_c_xi).parameters


def test_galerkin_converges_fast():
    vals = [c_xi_galerkin(n) for n in (2, 4, 8, 16)]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert diffs[-1] < 1e-8
    assert diffs[0] > diffs[-1]


def test_convergence_error():
    with pytest.raises(ConvergenceError):
        c_xi_mode_matching(1e-16, max_basis=4)


def test_truncated_domain_oracle():
    assert abs(c_xi_truncated_solve() - compute_c_xi(1e-6)) < 1e-4

