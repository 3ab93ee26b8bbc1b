"""Physical constants and unit conversions, kept in one place.

Internal unit conventions used throughout the package:

* angular frequencies in rad/s (user-facing "frequencies" are always
  ordinary frequencies, i.e. value/2pi, and are converted on input),
* lengths in micrometres outside the radial-integration layer,
  atomic units (Bohr radii) inside it,
* times in seconds,
* masses in atomic mass units at API boundaries, kilograms internally,
* interaction coefficients (C6, pulse amplitudes) in rad/s * um^6.
"""

import math

from scipy.constants import physical_constants, hbar as HBAR

TWO_PI = 2.0 * math.pi

AMU_KG = physical_constants["atomic mass constant"][0]

BOHR_RADIUS_M = physical_constants["Bohr radius"][0]
BOHR_RADIUS_UM = BOHR_RADIUS_M * 1e6

# Hartree expressed as an angular frequency (E_h / hbar).
HARTREE_ANG = physical_constants["Hartree energy"][0] / HBAR

# One atomic-unit C6 (E_h * a0^6) expressed in rad/s * um^6.
AU_C6_TO_ANG_UM6 = HARTREE_ANG * BOHR_RADIUS_UM**6

UM_TO_M = 1e-6

# Ordinary-frequency multipliers to angular rad/s.
FREQ_UNITS = {
    "hz": TWO_PI,
    "khz": TWO_PI * 1e3,
    "mhz": TWO_PI * 1e6,
    "ghz": TWO_PI * 1e9,
    "thz": TWO_PI * 1e12,
}


def ordinary_to_angular(value, unit):
    """Convert an ordinary frequency with a unit suffix to rad/s."""
    try:
        return value * FREQ_UNITS[unit.lower()]
    except KeyError:
        raise ValueError(f"unknown frequency unit {unit!r}") from None


def angular_to_ghz(omega):
    """Angular frequency in rad/s to ordinary GHz (the /2pi convention)."""
    return omega / FREQ_UNITS["ghz"]


def angular_to_khz(omega):
    return omega / FREQ_UNITS["khz"]
