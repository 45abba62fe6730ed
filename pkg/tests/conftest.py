import math

import pytest
from hypothesis import HealthCheck, settings

from pinem.units import beam_from, laser_from, sigma_E_for_decay

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

HBAR_OMEGA = 1.55


def make_case(g=1.0, phi0=0.0, gamma0=None, sigma_E=None, photon_energy=HBAR_OMEGA, beta=0.7):
    if sigma_E is None:
        sigma_E = sigma_E_for_decay(photon_energy, gamma0)
    beam = beam_from(beta, sigma_E)
    laser = laser_from(photon_energy=photon_energy, g_mag=g, phi0=phi0)
    return beam, laser


@pytest.fixture
def case():
    return make_case


@pytest.fixture
def ir_beam():
    return beam_from(0.7, 0.3)


PI = math.pi
