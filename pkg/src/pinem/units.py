"""Unit system and relativistic electron kinematics.

Everything in the package works in eV, fs and nm:

=========  ================
energy     eV
time       fs
length     nm
momentum   eV fs / nm
mass       eV fs^2 / nm^2
=========  ================

A field amplitude of 1 V/nm acting on the electron charge is taken as a force
of 1 eV/nm, so ``e * F`` is entered directly in eV/nm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

CM_TO_NM = 1.0e7
UM_TO_NM = 1.0e3


@dataclass(frozen=True)
class UnitConstants:
    hbar: float = 0.6582119569  # eV fs
    c: float = 299.792458  # nm / fs
    electron_rest_energy: float = 510998.95  # eV

    @property
    def electron_mass(self) -> float:
        """Rest mass in eV fs^2 / nm^2."""
        return self.electron_rest_energy / self.c**2


CONSTANTS = UnitConstants()
HBAR = CONSTANTS.hbar
C_LIGHT = CONSTANTS.c
ELECTRON_MASS = CONSTANTS.electron_mass


@dataclass(frozen=True)
class BeamParameters:
    """Longitudinal kinematics of the electron and its intrinsic uncertainty.

    Build instances with :func:`beam_from`; the derived fields are filled in
    there so the invariants hold by construction.
    """

    beta: float
    gamma: float
    v0: float
    p0: float
    E0: float
    m_star: float
    sigma_E: float
    sigma_p: float
    sigma_z0: float
    sigma_t0: float

    @property
    def chirp_rate(self) -> float:
        """Chirp parameter ``2 sigma_p^2 / (m* hbar)`` in 1/fs."""
        return 2.0 * self.sigma_p**2 / (self.m_star * HBAR)


@dataclass(frozen=True)
class LaserParameters:
    wavelength: float
    photon_energy: float
    g_mag: float = 0.0
    phi0: float = 0.0

    @property
    def omega(self) -> float:
        """Angular frequency in rad/fs."""
        return self.photon_energy / HBAR

    def delta_p(self, beam: BeamParameters) -> float:
        """Momentum quantum exchanged per photon, ``hbar omega / v0``."""
        return self.photon_energy / beam.v0

    def wavenumber(self, beam: BeamParameters) -> float:
        """Spatial frequency of the near-field phase seen by the electron, ``omega / v0`` (1/nm)."""
        return self.omega / beam.v0


def beam_from(beta: float, sigma_E: float) -> BeamParameters:
    """Construct the beam for velocity ratio ``beta`` and energy spread ``sigma_E`` (eV).

    ``sigma_E`` is a standard deviation; the uncertainty-limited bunch length
    follows from ``sigma_z0 = hbar / (2 sigma_p)``.
    """
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"beta must lie in (0, 1), got {beta!r}")
    if not sigma_E > 0.0 or not math.isfinite(sigma_E):
        raise ParameterError(f"sigma_E must be positive, got {sigma_E!r}")

    m = ELECTRON_MASS
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    v0 = beta * C_LIGHT
    p0 = gamma * m * v0
    E0 = gamma * CONSTANTS.electron_rest_energy
    m_star = gamma**3 * m
    sigma_p = sigma_E / v0
    sigma_z0 = HBAR / (2.0 * sigma_p)
    return BeamParameters(
        beta=beta,
        gamma=gamma,
        v0=v0,
        p0=p0,
        E0=E0,
        m_star=m_star,
        sigma_E=sigma_E,
        sigma_p=sigma_p,
        sigma_z0=sigma_z0,
        sigma_t0=sigma_z0 / v0,
    )


def sigma_E_from_length(beta: float, sigma_z: float) -> float:
    """Energy spread (eV) of a minimum-uncertainty packet of rms length ``sigma_z`` (nm)."""
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"beta must lie in (0, 1), got {beta!r}")
    if not sigma_z > 0.0:
        raise ParameterError(f"sigma_z must be positive, got {sigma_z!r}")
    return HBAR * beta * C_LIGHT / (2.0 * sigma_z)


def laser_from(
    *,
    wavelength: float | None = None,
    photon_energy: float | None = None,
    g_mag: float = 0.0,
    phi0: float = 0.0,
) -> LaserParameters:
    """Build the optical drive from exactly one of ``wavelength`` (nm) or ``photon_energy`` (eV)."""
    if (wavelength is None) == (photon_energy is None):
        raise ParameterError("give exactly one of wavelength or photon_energy")
    hc = 2.0 * math.pi * HBAR * C_LIGHT
    if wavelength is not None:
        if not wavelength > 0.0:
            raise ParameterError(f"wavelength must be positive, got {wavelength!r}")
        photon_energy = hc / wavelength
    else:
        if not photon_energy > 0.0:
            raise ParameterError(f"photon_energy must be positive, got {photon_energy!r}")
        wavelength = hc / photon_energy
    if not g_mag >= 0.0 or not math.isfinite(g_mag):
        raise ParameterError(f"g_mag must be non-negative, got {g_mag!r}")
    if not math.isfinite(phi0):
        raise ParameterError(f"phi0 must be finite, got {phi0!r}")
    return LaserParameters(
        wavelength=float(wavelength),
        photon_energy=float(photon_energy),
        g_mag=float(g_mag),
        phi0=float(phi0),
    )


def decay_parameter(beam: BeamParameters, laser: LaserParameters) -> float:
    """Ratio of photon quantum to twice the energy spread, ``hbar omega / (2 sigma_E)``.

    Large values put the electron in the plane-wave (sideband) regime, small
    values in the point-particle (acceleration) regime.
    """
    return laser.photon_energy / (2.0 * beam.sigma_E)


def sigma_E_for_decay(photon_energy: float, gamma0: float) -> float:
    """Energy spread giving decay parameter ``gamma0`` at the given photon energy."""
    if not gamma0 > 0.0:
        raise ParameterError(f"gamma0 must be positive, got {gamma0!r}")
    return photon_energy / (2.0 * gamma0)


def coupling_from_field(field_amplitude: float, length: float, laser: LaserParameters) -> float:
    """Coupling ``|g|`` of a uniform field ``F`` (V/nm) over ``length`` nm.

    ``2|g| = e F L / (hbar omega)``.
    """
    if field_amplitude < 0.0:
        raise ParameterError(f"field amplitude must be non-negative, got {field_amplitude!r}")
    if not length > 0.0:
        raise ParameterError(f"interaction length must be positive, got {length!r}")
    return field_amplitude * length / (2.0 * laser.photon_energy)


def drift_time(length: float, beam: BeamParameters) -> float:
    """Flight time (fs) over ``length`` nm."""
    return length / beam.v0
