"""Species data (quantum defects, lifetimes, constants) and Rydberg-state
energies and radial matrix elements via quantum-defect theory.

Radial wavefunctions are obtained in the Coulomb approximation: the radial
equation is integrated inward with the Numerov method at the quantum-defect
energy E = -1/(2 n*^2) (atomic units) on a square-root-spaced grid.  With
the substitution x = sqrt(r), y(x) = R(r) r^(3/4), the radial equation
becomes y'' = k(x) y with

    k(x) = (2L + 1/2)(2L + 3/2) / x^2 - 8 - 8 E x^2,

integrated from the classically forbidden outer region toward the core and
truncated at the species' inner cutoff (or at the onset of the core
divergence of the quantum-defect solution, whichever comes first).
Accuracy on matrix elements is at the 1% level, sufficient for the
10%-level interaction coefficients built on top of them.

Lengths in this module are atomic units (Bohr radii); energies are
returned as angular frequencies in rad/s; lifetimes in microseconds.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from .angular import HalfInt, _twice
from .constants import TWO_PI
from .errors import (
    IntegrationError,
    MissingSeriesError,
    SpeciesFileError,
    UnphysicalStateError,
)

# Series required of any species file: S1/2, P1/2, P3/2, D3/2, D5/2
REQUIRED_SERIES = ((0, 1), (1, 1), (1, 3), (2, 3), (2, 5))

_SERIES_NAMES = "SPDFGH"


def _series_label(L: int, tj: int) -> str:
    letter = _SERIES_NAMES[L] if L < len(_SERIES_NAMES) else f"L{L}"
    return f"{letter}{tj}/2"


@dataclass(frozen=True)
class RydbergLevel:
    """(n, L, J) label of a fine-structure Rydberg level."""

    n: int
    L: int
    J: HalfInt

    def __post_init__(self):
        j = self.J if isinstance(self.J, HalfInt) else HalfInt(_twice(self.J))
        object.__setattr__(self, "J", j)
        if abs(j.twice - 2 * self.L) != 1:
            raise ValueError(f"J must be L +- 1/2, got L={self.L}, J={j}")

    def __repr__(self):
        letter = _SERIES_NAMES[self.L] if self.L < 6 else f"L{self.L}"
        return f"{self.n}{letter}{self.J}"


@dataclass(frozen=True)
class ZeemanState:
    """A Rydberg level with a magnetic quantum number."""

    level: RydbergLevel
    mJ: HalfInt

    def __post_init__(self):
        m = self.mJ if isinstance(self.mJ, HalfInt) else HalfInt(_twice(self.mJ))
        object.__setattr__(self, "mJ", m)
        if abs(m.twice) > self.level.J.twice or (m.twice - self.level.J.twice) % 2:
            raise ValueError(f"invalid mJ={m} for {self.level}")


@dataclass(frozen=True)
class GridSpec:
    """Radial grid: n_points uniform steps in x = sqrt(r).

    The outer radius defaults to 2 n (n + 15) a.u., which covers the
    classically allowed region with room for the evanescent tail up to
    n ~ 90; r_out overrides it (used to put two levels on a common grid).
    """

    n_points: int = 4000
    r_out: float | None = None

    def outer_radius(self, n: int) -> float:
        if self.r_out is not None:
            return self.r_out
        return 2.0 * n * (n + 15.0)


@dataclass(frozen=True)
class SpeciesData:
    """Immutable per-species inputs.

    defect_series maps (L, 2J) to Rydberg-Ritz coefficients (d0, d2, d4);
    lifetime_refs maps (L, 2J) to (n_ref, tau_ref in microseconds);
    rydberg_const is the reduced-mass Rydberg constant as an angular
    frequency (rad/s); core_radius_cut is the inner integration cutoff in
    Bohr radii.  A per-species wavefunction cache is kept behind a lock;
    it is semantically transparent.
    """

    name: str
    mass_amu: float
    rydberg_const: float
    defect_series: dict
    lifetime_refs: dict
    core_radius_cut: float = 0.05
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    def defect(self, n: int, L: int, J) -> float:
        """Rydberg-Ritz quantum defect for level (n, L, J)."""
        key = (L, _twice(J))
        if key not in self.defect_series:
            raise MissingSeriesError(
                f"species {self.name!r} has no defect series "
                f"{_series_label(L, key[1])}"
            )
        d0, d2, d4 = self.defect_series[key]
        if d2 == 0.0 and d4 == 0.0:
            return d0
        m = n - d0
        return d0 + d2 / m**2 + d4 / m**4

    def n_star(self, level: RydbergLevel) -> float:
        ns = level.n - self.defect(level.n, level.L, level.J)
        if ns <= 0:
            raise UnphysicalStateError(
                f"n* = {ns:.3f} <= 0 for {level} of species {self.name!r}"
            )
        return ns


def _parse_half(tok: str, path, lineno) -> int:
    """Parse '1/2', '0.5' or '2' into a twice-integer."""
    try:
        f = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SpeciesFileError(
            f"cannot parse half-integer {tok!r}", path, lineno
        ) from None
    t = f * 2
    if t.denominator != 1:
        raise SpeciesFileError(f"{tok!r} is not a half-integer", path, lineno)
    return int(t)


def _iter_rows(text, path):
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            continue
        if section is None:
            raise SpeciesFileError("data before any [section] header", path, lineno)
        yield section, lineno, line.split()


def parse_species_text(text: str, path="<string>", name="species") -> SpeciesData:
    defects = {}
    lifetimes = {}
    consts = {}
    seen_any = False
    for section, lineno, toks in _iter_rows(text, path):
        seen_any = True
        if section == "defects":
            if len(toks) != 5:
                raise SpeciesFileError(
                    "expected 'L J delta0 delta2 delta4'", path, lineno
                )
            L = int(toks[0])
            tj = _parse_half(toks[1], path, lineno)
            defects[(L, tj)] = tuple(float(t) for t in toks[2:5])
        elif section == "lifetimes":
            if len(toks) != 4:
                raise SpeciesFileError(
                    "expected 'L J n_ref tau_ref_us'", path, lineno
                )
            L = int(toks[0])
            tj = _parse_half(toks[1], path, lineno)
            lifetimes[(L, tj)] = (int(toks[2]), float(toks[3]))
        elif section == "constants":
            if len(toks) != 2:
                raise SpeciesFileError("expected 'key value'", path, lineno)
            consts[toks[0].lower()] = float(toks[1])
        else:
            raise SpeciesFileError(f"unknown section [{section}]", path, lineno)

    if not seen_any:
        raise SpeciesFileError("file is empty", path)
    for key in ("mass_amu", "rydberg_const_ghz"):
        if key not in consts:
            raise SpeciesFileError(f"missing [constants] entry {key!r}", path)
    missing = [k for k in REQUIRED_SERIES if k not in defects]
    if missing:
        names = ", ".join(_series_label(L, tj) for L, tj in missing)
        raise MissingSeriesError(f"missing required defect series: {names}", path)

    return SpeciesData(
        name=name,
        mass_amu=consts["mass_amu"],
        rydberg_const=consts["rydberg_const_ghz"] * TWO_PI * 1e9,
        defect_series=defects,
        lifetime_refs=lifetimes,
        core_radius_cut=consts.get("core_radius_cut_au", 0.05),
    )


def load_species(path) -> SpeciesData:
    """Load a species data file (see the bundled rb87.species for the format)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_species_text(text, path=str(path), name=name)


def bundled_species(name: str = "rb87") -> SpeciesData:
    """Load a species file shipped with the package."""
    text = resources.files("rydcool.data").joinpath(f"{name}.species").read_text()
    return parse_species_text(text, path=f"<bundled:{name}>", name=name)


def level_energy(species: SpeciesData, level: RydbergLevel) -> float:
    """Level energy -Ry/(n - delta)^2 as an angular frequency (rad/s)."""
    ns = species.n_star(level)
    return -species.rydberg_const / (ns * ns)


def lifetime(species: SpeciesData, level: RydbergLevel) -> float:
    """Radiative lifetime in microseconds, (n*/n*_ref)^3 scaling."""
    key = (level.L, level.J.twice)
    if key not in species.lifetime_refs:
        raise MissingSeriesError(
            f"species {species.name!r} has no lifetime reference "
            f"{_series_label(level.L, key[1])}"
        )
    n_ref, tau_ref = species.lifetime_refs[key]
    ref_level = RydbergLevel(n_ref, level.L, level.J)
    return tau_ref * (species.n_star(level) / species.n_star(ref_level)) ** 3


def decay_rate(species: SpeciesData, level: RydbergLevel) -> float:
    """Decay rate Gamma = 1/tau as an angular frequency (rad/s)."""
    return 1.0 / (lifetime(species, level) * 1e-6)


# --------------------------------------------------------------------------
# Radial integration
# --------------------------------------------------------------------------

_RESCALE_LIMIT = 1e120


def _numerov_inward(x, k):
    """Integrate y'' = k(x) y from the outermost grid point inward.

    The outer boundary is seeded with a tiny value; the physical solution
    grows exponentially inward through the forbidden region, washing out
    the seed.  The running solution is rescaled when it grows past the
    float comfort zone (the equation is linear, so rescaling is exact).
    """
    h = x[1] - x[0]
    f = (1.0 - (h * h / 12.0) * k).tolist()
    n = len(x)
    y = [0.0] * n
    y[-1] = 1e-12
    y[-2] = 1.2e-12
    for i in range(n - 3, -1, -1):
        yi = ((12.0 - 10.0 * f[i + 1]) * y[i + 1] - f[i + 2] * y[i + 2]) / f[i]
        y[i] = yi
        if abs(yi) > _RESCALE_LIMIT:
            inv = 1.0 / _RESCALE_LIMIT
            for j in range(i, n):
                y[j] *= inv
    return np.asarray(y)


@dataclass(frozen=True)
class RadialWavefunction:
    """Sampled radial function R(r) on a sqrt-spaced grid (atomic units)."""

    r: np.ndarray
    R: np.ndarray
    level: RydbergLevel

    def nodes(self) -> int:
        u = self.R * self.r
        sign = np.sign(u[np.abs(u) > 1e-9 * np.max(np.abs(u))])
        return int(np.sum(sign[1:] != sign[:-1]))


def _solve_radial(species, level, n_points, r_out):
    ns = species.n_star(level)
    energy = -1.0 / (2.0 * ns * ns)
    r_in = max(species.core_radius_cut, 1e-4)
    if r_out <= r_in:
        raise IntegrationError(
            f"outer radius {r_out} <= inner cutoff {r_in} for {level}"
        )
    x = np.linspace(math.sqrt(r_in), math.sqrt(r_out), n_points)
    L = level.L
    k = ((2 * L + 0.5) * (2 * L + 1.5)) / (x * x) - 8.0 - 8.0 * energy * x * x
    y = _numerov_inward(x, k)
    u = y * np.sqrt(x)

    # Core-divergence guard: the quantum-defect solution of the pure
    # Coulomb potential can blow up near the origin.  That shows up as the
    # global |u| maximum sitting at the inner boundary, far above the
    # oscillation envelope further out; truncate at the innermost node
    # past the runaway in that case.
    absu = np.abs(u)
    guard = max(5, n_points // 50)
    if np.max(absu[:guard]) > 3.0 * np.max(absu[guard:]):
        signs = np.sign(u[guard:])
        flips = np.nonzero(signs[1:] * signs[:-1] < 0)[0]
        if len(flips) == 0:
            raise IntegrationError(
                f"radial solution for {level} diverges at the core with no "
                f"node to truncate at; inner cutoff {r_in} a.u. is pathological"
            )
        i0 = guard + int(flips[0]) + 1
        x, u = x[i0:], u[i0:]

    # normalize: integral R^2 r^2 dr = integral u^2 dr = 2 u^2 x dx
    norm2 = np.trapezoid(2.0 * u * u * x, x)
    if not np.isfinite(norm2) or norm2 <= 0.0:
        raise IntegrationError(f"radial normalization failed for {level}")
    u = u / math.sqrt(norm2)
    r = x * x
    return RadialWavefunction(r=r, R=u / r, level=level), x, u


def _cached_solution(species, level, n_points, r_out):
    key = (level.n, level.L, level.J.twice, n_points, round(r_out, 6))
    with species._lock:
        hit = species._cache.get(key)
    if hit is not None:
        return hit
    sol = _solve_radial(species, level, n_points, r_out)
    with species._lock:
        species._cache[key] = sol
    return sol


def radial_wavefunction(
    species: SpeciesData, level: RydbergLevel, grid: GridSpec = GridSpec()
) -> RadialWavefunction:
    """Normalized Coulomb-approximation radial wavefunction of a level."""
    wf, _, _ = _cached_solution(
        species, level, grid.n_points, grid.outer_radius(level.n)
    )
    return wf


def radial_matrix_element(
    species: SpeciesData,
    level_a: RydbergLevel,
    level_c: RydbergLevel,
    grid: GridSpec = GridSpec(),
) -> float:
    """Radial integral of R_a R_c r^3 dr in atomic units (Bohr radii).

    Both wavefunctions are solved on a common sqrt-spaced grid extending
    to the larger of the two default outer radii, so the integrand is
    sampled without interpolation.  Symmetric in its two levels.
    """
    if abs(level_a.L - level_c.L) != 1:
        raise ValueError(
            f"radial matrix element needs |L_a - L_c| = 1, got "
            f"{level_a} and {level_c}"
        )
    r_out = max(grid.outer_radius(level_a.n), grid.outer_radius(level_c.n))
    _, xa, ua = _cached_solution(species, level_a, grid.n_points, r_out)
    _, xc, uc = _cached_solution(species, level_c, grid.n_points, r_out)
    # common grid, but the inner truncation points may differ
    n = min(len(xa), len(xc))
    xa, ua, uc = xa[-n:], ua[-n:], uc[-n:]
    # integral u_a u_c r dr = 2 u_a u_c x^3 dx
    return float(np.trapezoid(2.0 * ua * uc * xa**3, xa))
