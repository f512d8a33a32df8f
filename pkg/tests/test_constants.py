import math
import threading

import numpy as np
import pytest

from thinslit.constants import (
    AuxConstants, ConstantCache, aux_constants, aux_for_config, compute_g_const, compute_gamma,
    coupling_eta,
)
from thinslit.errors import DomainError, RegimeError
from thinslit.green import halfstrip_green_interior, trunk_green_interior

from conftest import OMEGA, paper_config

OMEGAS = (0.3 * math.pi, 0.5 * math.pi, 0.8 * math.pi)
PS = (-4.0, -2.5, -1.0, -0.025)


def _richardson(fn, y):
    """Limit y -> 0 of ``fn`` assuming an O(y^2) leading error."""
    return (4.0 * fn(y / 2) - fn(y)) / 3.0


def test_g_imaginary_part():
    g = compute_g_const(OMEGA, 100_000)
    assert abs((OMEGA * g).imag - 1.0) < 1e-8


def test_g_cauchy():
    a = compute_g_const(OMEGA, 100_000)
    b = compute_g_const(OMEGA, 200_000)
    assert abs(a.real - b.real) < 1e-8


@pytest.mark.parametrize("omega", OMEGAS)
def test_g_small_r_oracle(omega):
    g = compute_g_const(omega)
    est = _richardson(lambda y: halfstrip_green_interior(omega, y) - math.log(1 / y) / math.pi, 0.005)
    assert abs(est - g) < 2e-5


@pytest.mark.parametrize("p", [-2.5, -1.0, -0.3])
def test_gamma_small_r_oracle(p):
    gam = compute_gamma(OMEGA, p, p)
    est = _richardson(
        lambda y: trunk_green_interior(OMEGA, p, p, 1.0 - y) - math.log(1 / y) / math.pi, 0.005
    )
    assert abs(est - gam) < 2e-5


def test_corner_gamma_small_r_oracle():
    # a source in the corner coincides with its image: twice the log
    gam = compute_gamma(OMEGA, 0.0, 0.0)
    r = 0.005

    def f(s):
        # approach along the wall-normal diagonal
        return trunk_green_interior(OMEGA, 0.0, -s, 1.0 - s) - 2 * math.log(1 / (s * math.sqrt(2))) / math.pi

    assert abs(_richardson(f, r) - gam) < 5e-5


def test_gamma_zero_cosine():
    p = -0.5 * math.pi / OMEGA  # cos(omega p) = 0
    gam = compute_gamma(OMEGA, p, p)
    assert abs((OMEGA * gam).imag) < 1e-8


def test_gamma_minus_paper():
    gam = compute_gamma(OMEGA, -2.5, -2.5)
    assert abs((OMEGA * gam).imag - 1.0) < 1e-8


@pytest.mark.parametrize("a,b", [(-2.5, 0.0), (-1.0, -4.0), (-0.025, -2.5), (-3.3, -0.7)])
def test_reciprocity(a, b):
    assert abs(compute_gamma(OMEGA, a, b) - compute_gamma(OMEGA, b, a)) < 1e-10


def test_cross_value_matches_interior_sum():
    # away from the source the plain modal sum converges; compare on the wall
    val = compute_gamma(OMEGA, -1.0, -2.2)
    ref = trunk_green_interior(OMEGA, -1.0, -2.2, 1.0)
    assert abs(val - ref) < 1e-6


def test_positive_abscissa_rejected():
    with pytest.raises(DomainError):
        compute_gamma(OMEGA, 0.5, -1.0)
    with pytest.raises(DomainError):
        aux_constants(OMEGA, -1.0, 0.2, cache=False)


@pytest.mark.parametrize("omega", OMEGAS)
def test_lemma_grid(omega):
    for i, pp in enumerate(PS):
        for pm in PS[:i]:
            aux = aux_constants(omega, pp, pm)
            res = aux.lemma_residuals()
            assert max(res.values()) < 1e-6, res


def test_coupling_eta_paper():
    aux = aux_for_config(paper_config())
    eta = coupling_eta(aux)
    assert eta == (OMEGA * aux.gamma_tilde).real
    assert abs((OMEGA * aux.gamma_tilde).imag - 1.0) < 1e-8
    assert 0.0 < abs(eta) < 0.1


def test_coupling_eta_regime():
    with pytest.raises(RegimeError):
        coupling_eta(aux_constants(OMEGA, -1.0, -2.5))


def test_coupling_decays_with_separation():
    dev = []
    for pm in (-2.5, -5.0, -7.5):
        gt = compute_gamma(OMEGA, 0.0, pm)
        dev.append(abs(OMEGA * gt - 1j * math.cos(0.0) * np.exp(-1j * OMEGA * pm)))
    assert dev[0] > dev[1] > dev[2]
    assert dev[2] < 1e-5


def test_far_field():
    aux = aux_constants(OMEGA, -1.0, -2.5)
    ff = aux.far_field()
    assert ff.s_plus == 1j * math.cos(-OMEGA) / OMEGA
    assert ff.s_minus == 1j * math.cos(-2.5 * OMEGA) / OMEGA
    assert ff.eta == (OMEGA * aux.gamma_tilde).real


def test_lemma_check_flags_bad_values():
    aux = aux_constants(OMEGA, -1.0, -2.5)
    bad = AuxConstants(**{**aux.__dict__, "g_const": aux.g_const + 0.01j})
    with pytest.raises(AssertionError):
        bad.check_lemmas()


def test_cache_round_trip(tmp_path):
    cache = ConstantCache(tmp_path)
    a = aux_constants(OMEGA, -0.5, -2.5, cache=cache)
    assert cache.get(OMEGA, -0.5, -2.5, 1e-8) == a
    assert aux_constants(OMEGA, -0.5, -2.5, cache=cache) == a
    lines = (tmp_path / "constants.txt").read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 2
    assert len(lines[1].split()) == 13


def test_cache_torn_line_skipped(tmp_path):
    cache = ConstantCache(tmp_path)
    aux_constants(OMEGA, -0.5, -2.5, cache=cache)
    with open(tmp_path / "constants.txt", "a") as fh:
        fh.write("2.5 -0.5 -2.")
    assert len(cache.entries()) == 1


def test_cache_concurrent_writers(tmp_path):
    base = aux_constants(OMEGA, -0.5, -2.5, cache=False)
    cache = ConstantCache(tmp_path)

    def write(k):
        for i in range(20):
            cache.put(AuxConstants(**{**base.__dict__, "p_plus": -0.01 * (k * 20 + i + 1)}), 1e-8)

    threads = [threading.Thread(target=write, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(cache.entries()) == 80


def test_env_cache_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("THINSLIT_CACHE_DIR", str(tmp_path))
    assert ConstantCache().path == tmp_path / "constants.txt"
