import math

import pytest

from thinslit.errors import DomainError, GeometryError
from thinslit.geometry import (
    WaveguideConfig, build_domain, channel_domain, resonant_length, slit_length,
)

from conftest import OMEGA, paper_config


@pytest.mark.parametrize("omega,m,L", [(0.8 * math.pi, 1, 1.25), (math.pi / 2, 2, 4.0), (0.8 * math.pi, 2, 2.5)])
def test_resonant_length(omega, m, L):
    assert resonant_length(omega, m) == pytest.approx(L, abs=1e-14)
    assert abs(resonant_length(omega, m) * omega / math.pi - m) < 1e-12


@pytest.mark.parametrize("omega,m", [(0.0, 1), (math.pi, 1), (-1.0, 1), (1.0, 0)])
def test_resonant_length_rejects(omega, m):
    with pytest.raises(DomainError):
        resonant_length(omega, m)


def test_slit_length():
    assert slit_length(1.25, 0.0, 0.05) == 1.25
    assert slit_length(1.25, -2.0, 0.05) == pytest.approx(1.15, abs=1e-15)
    with pytest.raises(DomainError):
        slit_length(1.25, -30.0, 0.05)


@pytest.mark.parametrize("kw", [
    dict(omega=1.5 * math.pi),
    dict(epsilon=0.0),
    dict(p_plus=-2.5),
    dict(p_plus=-2.47),
    dict(p_plus=0.1),
    dict(m_plus=0),
    dict(m_minus=1.5),
])
def test_config_invariants(kw):
    with pytest.raises((DomainError, GeometryError)):
        paper_config(**kw)


def test_config_accessors(paper):
    assert paper.is_flush("plus") and not paper.is_flush("minus")
    assert paper.source_abscissa("plus") == 0.0
    assert paper.source_abscissa("minus") == -2.5
    assert paper.mouth("minus") == (-2.5, 1.0)
    assert paper.top("plus") == (-0.025, 2.25)
    c = paper.with_lengths(1.1, 1.2)
    assert c.length("plus") == pytest.approx(1.1, abs=1e-14)
    assert c.length("minus") == pytest.approx(1.2, abs=1e-14)
    s = paper.swapped()
    assert (s.p_plus, s.p_minus) == (paper.p_minus, paper.p_plus)


def test_paper_domain(paper):
    d = build_domain(paper)
    assert len(d.rectangles) == 5
    assert len(d.truncation_faces) == 3
    for seg in d.interface_segments:
        assert seg.length == pytest.approx(paper.epsilon, abs=1e-15)
    # the flush slit shares its right side with the end wall
    assert d.rect("slit_plus").x1 == paper.wall_x
    assert d.face("inlet").position == -(2.5 + 2.0)
    parts = sum(r.area for r in d.rectangles)
    assert d.area == pytest.approx(parts, rel=1e-15)


def test_domain_deterministic(paper):
    assert build_domain(paper) == build_domain(paper)


@pytest.mark.parametrize("kw,args", [
    (dict(p_plus=0.0), {}),  # mouth sticks out past the end wall
    (dict(p_plus=-2.0), {}),  # outlet channels overlap
    ({}, dict(trunc_h=3.0)),  # inlet face too close to a mouth
    ({}, dict(trunc_v=0.5)),
])
def test_domain_errors(kw, args):
    with pytest.raises(GeometryError):
        build_domain(paper_config(**kw), **args)


def test_domain_contains(paper):
    d = build_domain(paper)
    assert d.contains(-1.0, 0.5)
    assert d.contains(-2.5, 1.5)
    assert not d.contains(-1.0, 1.5)


def test_channel_domain():
    d = channel_domain(3.0)
    assert len(d.rectangles) == 1 and len(d.truncation_faces) == 1
    assert d.area == pytest.approx(3.0)


def test_wall_shift():
    c = WaveguideConfig(OMEGA, 0.05, p_plus=0.975, p_minus=-1.5, wall_x=1.0)
    assert c.source_abscissa("plus") == 0.0
    assert c.source_abscissa("minus") == -2.5
