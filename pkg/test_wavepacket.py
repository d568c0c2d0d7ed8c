#!/usr/bin/env python3
"""
가우시안 파동 묶음 테스트
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pcat.exceptions import PcatConfigurationError, PcatDomainError
from pcat.numerics.quadrature import integrate_polar
from pcat.physics.wavepacket import GaussianPacket, SupportPoint, momentum_at, weight

def test_weight_known_values():
    assert weight(GaussianPacket(1.0), 0.0) == pytest.approx(1.0 / math.pi)
    w = 0.6
    assert GaussianPacket(w).weight(w) == pytest.approx(math.exp(-1.0) / (math.pi * w * w))

def test_weight_is_vectorized():
    values = GaussianPacket(0.3).weight(np.array([0.0, 0.3, 0.6]))
    assert values.shape == (3,)
    assert np.all(np.diff(values) < 0)

def test_weight_rejects_negative_radius():
    with pytest.raises(PcatDomainError):
        GaussianPacket(1.0).weight(-0.1)

@pytest.mark.parametrize("width", [0.0, -1.0])
def test_packet_requires_positive_width(width):
    with pytest.raises(PcatDomainError):
        GaussianPacket(width)

def test_packet_rejects_unknown_particle():
    with pytest.raises(PcatConfigurationError):
        GaussianPacket(0.5, 'C')

def test_momentum_at_known_values():
    a, b = GaussianPacket(0.6, 'A'), GaussianPacket(0.6, 'b')
    assert momentum_at(a, SupportPoint(0.0)).as_array().tolist() == [0.0, 0.0, 1.0]
    assert momentum_at(b, SupportPoint(0.0)).as_array().tolist() == [0.0, 0.0, -1.0]

    k = a.momentum_at(SupportPoint(0.6, math.pi / 2))
    np.testing.assert_allclose(k.as_array(), [0.0, 0.6, 1.0], atol=1e-15)
    assert k.energy() == pytest.approx(math.sqrt(1.36))

def test_sample_radius_inverse_cdf():
    packet = GaussianPacket(0.4)
    assert packet.sample_radius(1.0) == 0.0
    assert packet.sample_radius(math.exp(-1.0)) == pytest.approx(0.4)

def test_closed_form_moments():
    packet = GaussianPacket(0.5)
    assert packet.mean_radius() == pytest.approx(0.5 * math.sqrt(math.pi) / 2)
    assert packet.second_moment() == pytest.approx(0.25)
    assert packet.r_max(8.0) == pytest.approx(4.0)

@pytest.mark.parametrize("width", [1e-3, 0.3, 0.6, 1.5])
def test_mean_radius_by_quadrature(width):
    packet = GaussianPacket(width)
    result = integrate_polar(lambda r, phi: r, packet)
    assert result.converged
    assert result.value == pytest.approx(width * math.sqrt(math.pi) / 2, abs=1e-12)
    assert result.value == pytest.approx(packet.mean_radius(), abs=1e-12)

if __name__ == "__main__":
    pytest.main([__file__, "-v"])
