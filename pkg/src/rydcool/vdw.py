"""Second-order (van der Waals) pair interactions between Rydberg atoms.

For a pair of fine-structure levels, the dipole-allowed virtual
transitions group into four channels labelled a..d by the (L, J) manifolds
of the intermediate pair.  Each channel contributes a radial coefficient
(the sum over intermediate principal quantum numbers of squared radial
matrix elements over the pair energy defect) times an n-independent 4x4
angular matrix in the two-atom Zeeman basis {++, +-, -+, --}.

Every channel matrix decomposes as w_p * identity + s_p * D(theta, phi)
with a single traceless anisotropy matrix D, weights {2/27, 8/27, 4/27,
4/27} and signs {-,-,+,+}; the assembled interaction at separation r is
h_matrix / r^6 with

    h_matrix = c6_total * identity - c6_aniso * D(theta, phi).

Energy defects use E(initial pair) - E(intermediate pair), which makes the
interaction of rubidium nS + nS pairs repulsive (positive c6_total), as it
must be.  Coefficients carry rad/s * um^6 units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .angular import HalfInt, clebsch_gordan, dipole_angular, sph_harm_l2
from .atomdata import GridSpec, RydbergLevel, SpeciesData, level_energy, radial_matrix_element
from .constants import AU_C6_TO_ANG_UM6, HARTREE_ANG, TWO_PI
from .errors import NonConvergedError

PAIR_TYPES = ("SS", "SP", "PP")

_S12 = (0, HalfInt(1))
_P12 = (1, HalfInt(1))
_P32 = (1, HalfInt(3))
_D32 = (2, HalfInt(3))

# intermediate (L, J) manifolds per channel label, per pair type
_CHANNEL_TABLE = {
    "SS": {"a": (_P12, _P12), "b": (_P32, _P32), "c": (_P32, _P12), "d": (_P12, _P32)},
    "SP": {"a": (_P12, _S12), "b": (_P32, _D32), "c": (_P32, _S12), "d": (_P12, _D32)},
    "PP": {"a": (_S12, _S12), "b": (_D32, _D32), "c": (_S12, _D32), "d": (_D32, _S12)},
}

# channel matrix = weight * identity + sign * anisotropy matrix
CHANNEL_ISO_WEIGHT = {"a": 2.0 / 27.0, "b": 8.0 / 27.0, "c": 4.0 / 27.0, "d": 4.0 / 27.0}
CHANNEL_ANISO_SIGN = {"a": -1.0, "b": -1.0, "c": 1.0, "d": 1.0}

# two-atom Zeeman basis {++, +-, -+, --} as twice-m pairs
ZEEMAN_BASIS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class Channel:
    """One dipole-allowed virtual-transition channel of a level pair."""

    initial: tuple[RydbergLevel, RydbergLevel]
    final_LJ: tuple[tuple[int, HalfInt], tuple[int, HalfInt]]
    label: str

    def __post_init__(self):
        for (l0, j0), lvl in zip(self.final_LJ, self.initial):
            if abs(l0 - lvl.L) != 1 or abs(j0.twice - lvl.J.twice) > 2:
                raise ValueError(
                    f"channel {self.label}: {lvl} -> (L={l0}, J={j0}) is not "
                    "dipole allowed"
                )


@dataclass(frozen=True)
class ChannelSum:
    """Converged radial coefficient of one channel.

    c6 is in rad/s * um^6; terms holds (n_alpha, n_beta, radial product in
    a.u.^4, energy defect in rad/s) for every retained contribution.
    """

    channel: Channel
    c6: float
    terms: tuple
    n_window: int
    converged: bool
    n_skipped_resonant: int = 0

    @property
    def c6_ghz_um6(self) -> float:
        return self.c6 / (TWO_PI * 1e9)


def _levels_match(pair_type, levels):
    want = {
        "SS": (_S12, _S12),
        "SP": (_S12, _P12),
        "PP": (_P12, _P12),
    }[pair_type]
    for lvl, (l0, j0) in zip(levels, want):
        if lvl.L != l0 or lvl.J.twice != j0.twice:
            return False
    return True


def enumerate_channels(pair_type: str, levels) -> list[Channel]:
    """The four labelled channels of an SS, SP or PP level pair."""
    if pair_type not in PAIR_TYPES:
        raise ValueError(f"unsupported pair type {pair_type!r}; use one of {PAIR_TYPES}")
    levels = tuple(levels)
    if not _levels_match(pair_type, levels):
        raise ValueError(f"levels {levels} do not match pair type {pair_type}")
    return [
        Channel(initial=levels, final_LJ=lj, label=lab)
        for lab, lj in _CHANNEL_TABLE[pair_type].items()
    ]


# --------------------------------------------------------------------------
# Angular structure
# --------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _channel_tensor(tL1, tJ1, tL2, tJ2, tLa, tJa, tLb, tJb):
    """Angular tensor T[row, col, M+2, M'+2] of a channel.

    Contracting T with Y_2^M(theta,phi)* Y_2^M'(theta,phi)* and the 24pi/5
    prefactor yields the channel's 4x4 Zeeman matrix.  The tensor itself is
    real and independent of geometry, so it is computed once per channel
    type.
    """
    T = np.zeros((4, 4, 5, 5))
    cg = {}
    for mu in (-1, 0, 1):
        for nu in (-1, 0, 1):
            cg[(mu, nu)] = clebsch_gordan(1, mu, 1, nu, 2, mu + nu)

    def amp_to(tmk, tml, tma, tmb):
        """Sum over (mu, nu) at fixed total M of J(1->a) J(2->b) CG."""
        out = np.zeros(5)
        for mu in (-1, 0, 1):
            j1 = dipole_angular(
                HalfInt(tL1 * 2), HalfInt(tJ1), HalfInt(tmk), mu,
                HalfInt(tLa * 2), HalfInt(tJa), HalfInt(tma),
            )
            if j1 == 0.0:
                continue
            for nu in (-1, 0, 1):
                j2 = dipole_angular(
                    HalfInt(tL2 * 2), HalfInt(tJ2), HalfInt(tml), nu,
                    HalfInt(tLb * 2), HalfInt(tJb), HalfInt(tmb),
                )
                if j2 == 0.0:
                    continue
                out[mu + nu + 2] += cg[(mu, nu)] * j1 * j2
        return out

    def amp_back(tma, tmb, tmk, tml):
        """Same with the roles of initial and intermediate states swapped."""
        out = np.zeros(5)
        for mu in (-1, 0, 1):
            j1 = dipole_angular(
                HalfInt(tLa * 2), HalfInt(tJa), HalfInt(tma), mu,
                HalfInt(tL1 * 2), HalfInt(tJ1), HalfInt(tmk),
            )
            if j1 == 0.0:
                continue
            for nu in (-1, 0, 1):
                j2 = dipole_angular(
                    HalfInt(tLb * 2), HalfInt(tJb), HalfInt(tmb), nu,
                    HalfInt(tL2 * 2), HalfInt(tJ2), HalfInt(tml),
                )
                if j2 == 0.0:
                    continue
                out[mu + nu + 2] += cg[(mu, nu)] * j1 * j2
        return out

    for tma in range(-tJa, tJa + 1, 2):
        for tmb in range(-tJb, tJb + 1, 2):
            fwd = [amp_to(tmk, tml, tma, tmb) for tmk, tml in ZEEMAN_BASIS]
            bwd = [amp_back(tma, tmb, tmk, tml) for tmk, tml in ZEEMAN_BASIS]
            for i in range(4):
                for j in range(4):
                    T[i, j] += np.outer(fwd[i], bwd[j])
    return T


def channel_angular_matrix(channel: Channel, theta: float, phi: float) -> np.ndarray:
    """The n-independent 4x4 Zeeman-basis angular matrix of a channel."""
    l1, l2 = channel.initial
    (la, ja), (lb, jb) = channel.final_LJ
    T = _channel_tensor(
        l1.L, l1.J.twice, l2.L, l2.J.twice, la, ja.twice, lb, jb.twice
    )
    y = np.array([sph_harm_l2(m, theta, phi) for m in (-2, -1, 0, 1, 2)])
    yc = np.conj(y)
    return (24.0 * math.pi / 5.0) * np.einsum("ijmn,m,n->ij", T, yc, yc)


def anisotropy_matrix(theta: float, phi: float) -> np.ndarray:
    """Closed form of the traceless Zeeman-mixing matrix D(theta, phi)."""
    c2t = math.cos(2.0 * theta)
    st, ct = math.sin(theta), math.cos(theta)
    s2t = math.sin(2.0 * theta)
    ep = cmath.exp(1j * phi)
    em = cmath.exp(-1j * phi)
    ep2 = cmath.exp(2j * phi)
    em2 = cmath.exp(-2j * phi)
    a = (3.0 * c2t - 1.0) / 81.0
    b = (1.0 - 3.0 * c2t) / 81.0
    c = (-3.0 * c2t - 5.0) / 81.0
    return np.array(
        [
            [a, (2 / 27) * em * ct * st, (2 / 27) * em * ct * st, (2 / 27) * em2 * st * st],
            [(1 / 27) * ep * s2t, b, c, -(2 / 27) * em * ct * st],
            [(1 / 27) * ep * s2t, c, b, -(2 / 27) * em * ct * st],
            [(2 / 27) * ep2 * st * st, -(1 / 27) * ep * s2t, -(1 / 27) * ep * s2t, a],
        ],
        dtype=complex,
    )


# --------------------------------------------------------------------------
# Radial channel sums
# --------------------------------------------------------------------------

# terms with |defect| below this are first-order resonances, not part of
# the second-order sum (they only occur for exchange-degenerate SP pairs)
_RESONANCE_CUT = TWO_PI * 100.0  # rad/s


def _series_n_floor(species, L, J) -> int:
    d0 = species.defect_series.get((L, J.twice), (0.0, 0.0, 0.0))[0]
    return max(L + 1, int(math.floor(d0)) + 1)


def _channel_terms(species, channel, n_window, grid):
    lvl1, lvl2 = channel.initial
    (la, ja), (lb, jb) = channel.final_LJ
    e_init = level_energy(species, lvl1) + level_energy(species, lvl2)

    def side(lvl, L, J):
        out = {}
        lo = max(_series_n_floor(species, L, J), lvl.n - n_window)
        for n in range(lo, lvl.n + n_window + 1):
            inter = RydbergLevel(n, L, J)
            out[n] = (
                radial_matrix_element(species, lvl, inter, grid),
                level_energy(species, inter),
            )
        return out

    side1 = side(lvl1, la, ja)
    side2 = side(lvl2, lb, jb)

    terms = []
    skipped = 0
    for na, (r1, ea) in side1.items():
        for nb, (r2, eb) in side2.items():
            delta = e_init - (ea + eb)
            if abs(delta) < _RESONANCE_CUT:
                skipped += 1
                continue
            terms.append((na, nb, (r1 * r1) * (r2 * r2), delta))
    return terms, skipped


def _c6_from_terms(terms) -> float:
    # radial products are a.u.^4; defects rad/s; result rad/s * um^6
    acc = 0.0
    for _, _, rad4, delta in terms:
        acc += rad4 / (delta / HARTREE_ANG)
    return acc * AU_C6_TO_ANG_UM6


def compute_C6_channel(
    species: SpeciesData,
    channel: Channel,
    n_window: int = 6,
    grid: GridSpec = GridSpec(),
) -> ChannelSum:
    """Channel coefficient summed over intermediate n within +-n_window.

    The result is flagged non-converged when enlarging the window by 2
    changes the coefficient by more than 1%.
    """
    if n_window < 1:
        raise ValueError("n_window must be >= 1")
    terms, skipped = _channel_terms(species, channel, n_window, grid)
    c6 = _c6_from_terms(terms)
    terms_wide, _ = _channel_terms(species, channel, n_window + 2, grid)
    c6_wide = _c6_from_terms(terms_wide)
    converged = c6 != 0.0 and abs(c6_wide - c6) <= 0.01 * abs(c6)
    return ChannelSum(
        channel=channel,
        c6=c6,
        terms=tuple(terms),
        n_window=n_window,
        converged=converged,
        n_skipped_resonant=skipped,
    )


# --------------------------------------------------------------------------
# Assembly
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PairPotential:
    """Assembled Zeeman-basis pair interaction at unit r^-6.

    h_matrix / r^6 (r in um) is the interaction in rad/s; c6 coefficients
    are rad/s * um^6.  The two construction paths (channel sum and the
    isotropic/anisotropic closed form) are cross-checked at assembly.
    """

    pair_type: str
    levels: tuple[RydbergLevel, RydbergLevel]
    theta: float
    phi: float
    c6_channels: dict
    channel_sums: dict
    c6_total: float
    c6_aniso: float
    h_matrix: np.ndarray
    deviation: float
    converged: bool
    warnings: tuple = ()

    @property
    def c6_total_ghz_um6(self) -> float:
        return self.c6_total / (TWO_PI * 1e9)


def deviation_from_identity(
    c6_total: float, c6_aniso: float, theta: float = 0.0, phi: float = 0.0
) -> float:
    """Spectral-norm ratio of the anisotropic to the isotropic term."""
    if c6_total == 0.0:
        raise ZeroDivisionError("c6_total is zero; deviation undefined")
    if c6_aniso == 0.0:
        return 0.0
    d0_norm = np.linalg.norm(anisotropy_matrix(theta, phi), 2)
    return abs(c6_aniso) * d0_norm / abs(c6_total)


def assemble_vdw(
    species: SpeciesData,
    pair_type: str,
    levels,
    theta: float = 0.0,
    phi: float = 0.0,
    n_window: int = 6,
    grid: GridSpec = GridSpec(),
    require_converged: bool = False,
) -> PairPotential:
    """Full Zeeman-basis interaction of a level pair.

    For SP pairs with |n1 - n2| < 10 a warning is attached: the
    first-order, resonant dipolar exchange between the two levels (not
    part of this second-order sum) is then not negligible.
    """
    levels = tuple(levels)
    channels = enumerate_channels(pair_type, levels)
    warnings = []
    if pair_type == "SP" and abs(levels[0].n - levels[1].n) < 10:
        warnings.append(
            f"SP pair with |dn| = {abs(levels[0].n - levels[1].n)} < 10: "
            "direct dipolar exchange is not negligible"
        )

    sums = {
        ch.label: compute_C6_channel(species, ch, n_window=n_window, grid=grid)
        for ch in channels
    }
    c6 = {lab: s.c6 for lab, s in sums.items()}
    converged = all(s.converged for s in sums.values())
    if require_converged and not converged:
        bad = [lab for lab, s in sums.items() if not s.converged]
        raise NonConvergedError(
            f"channel sums {bad} not converged at n_window={n_window}"
        )

    c6_total = (2.0 / 27.0) * (c6["a"] + 4.0 * c6["b"] + 2.0 * (c6["c"] + c6["d"]))
    c6_aniso = c6["a"] + c6["b"] - c6["c"] - c6["d"]

    h_channels = sum(
        c6[ch.label] * channel_angular_matrix(ch, theta, phi) for ch in channels
    )
    h_closed = c6_total * np.eye(4, dtype=complex) - c6_aniso * anisotropy_matrix(
        theta, phi
    )
    scale = max(abs(c6_total), max(abs(v) for v in c6.values()), 1e-300)
    mismatch = np.max(np.abs(h_channels - h_closed)) / scale
    if mismatch > 1e-10:
        raise AssertionError(
            f"channel-sum and closed-form interaction matrices disagree "
            f"(relative mismatch {mismatch:.2e})"
        )

    return PairPotential(
        pair_type=pair_type,
        levels=levels,
        theta=theta,
        phi=phi,
        c6_channels=c6,
        channel_sums=sums,
        c6_total=c6_total,
        c6_aniso=c6_aniso,
        h_matrix=h_closed,
        deviation=deviation_from_identity(c6_total, c6_aniso, theta, phi),
        converged=converged,
        warnings=tuple(warnings),
    )


def pair_levels(pair_type: str, n1: int, n2: int):
    """The (level1, level2) pair for a map cell of the given pair type."""
    if pair_type == "SS":
        return RydbergLevel(n1, 0, HalfInt(1)), RydbergLevel(n2, 0, HalfInt(1))
    if pair_type == "SP":
        return RydbergLevel(n1, 0, HalfInt(1)), RydbergLevel(n2, 1, HalfInt(1))
    if pair_type == "PP":
        return RydbergLevel(n1, 1, HalfInt(1)), RydbergLevel(n2, 1, HalfInt(1))
    raise ValueError(f"unsupported pair type {pair_type!r}")


@dataclass(frozen=True)
class MapCell:
    n: int
    dn: int
    pair_type: str
    c6_ghz_um6: float
    deviation: float
    error: Optional[str] = None


def c6_map(
    species: SpeciesData,
    pair_type: str,
    n_range,
    dn_range,
    theta: float = 0.0,
    phi: float = 0.0,
    n_window: int = 6,
    grid: GridSpec = GridSpec(),
    max_workers: int = 1,
) -> list[MapCell]:
    """Grid of (c6_total, deviation) over n and dn = n2 - n1 (n-major order).

    Per-cell failures are recorded in the cell; the rest of the grid
    completes.  Cells are independent, so they may be computed in a thread
    pool (the per-species wavefunction cache is lock-protected).
    """
    cells = [(n, dn) for n in n_range for dn in dn_range]

    def one(args):
        n, dn = args
        try:
            pp = assemble_vdw(
                species,
                pair_type,
                pair_levels(pair_type, n, n + dn),
                theta=theta,
                phi=phi,
                n_window=n_window,
                grid=grid,
            )
            return MapCell(n, dn, pair_type, pp.c6_total_ghz_um6, pp.deviation)
        except Exception as exc:  # cell failure must not kill the grid
            return MapCell(n, dn, pair_type, math.nan, math.nan, error=str(exc))

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(one, cells))
    return [one(c) for c in cells]
