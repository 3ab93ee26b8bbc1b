"""rydcool: state-insensitive Rydberg-dressed interactions and phonon-swap
cooling dynamics for trapped neutral-atom registers.

Subpackage map:

* ``angular``   -- Wigner 3j/6j, Clebsch-Gordan, rank-2 spherical harmonics,
  dipole matrix-element angular factors.
* ``atomdata``  -- species files, quantum-defect energies, Numerov radial
  wavefunctions and matrix elements.
* ``vdw``       -- pair-interaction channels, per-channel C6, Zeeman-basis
  interaction matrix, deviation-from-identity metric.
* ``dressing``  -- laser-dressed soft-core potentials and the exact
  diagonalization oracle.
* ``phonons``   -- phonon coupling strength, chain coupling matrices,
  Gaussian quadratic dynamics, analytic occupancy formula.
* ``adiabatic`` -- interaction pulses, equilibrium tracking, pulse areas,
  non-adiabaticity diagnostics, pulse optimization.
* ``cli``       -- the ``rydcool`` command-line front end.
"""

__version__ = "0.1.0"

from .angular import HalfInt  # noqa: F401
from .atomdata import (  # noqa: F401
    GridSpec,
    RydbergLevel,
    SpeciesData,
    ZeemanState,
    bundled_species,
    load_species,
)
