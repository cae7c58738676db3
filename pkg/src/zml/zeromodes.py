"""Zero-energy solutions, their normalizability, and mode counting.

On the line the candidate modes are exp(-lambda_k) (lower / "b" component)
and exp(+lambda_k) (upper / "a" component).  Square-integrability is decided
purely by the exact asymptotic slopes of lambda_k: the b mode needs
slope_right > 0 and slope_left < 0, the a mode the reverse.  That slope test
reproduces the open admissibility window |k| < |Q|/2 in exactly one spin
sector, fixed by the sign of the flux; quadrature of the sampled mode is
only a consistency check, never the verdict.

In the radially symmetric plane the candidates are r^j exp(-lambda) (or the
mirrored sector for negative flux) whose squared-norm integrand behaves like
r^(2j + 1 - |Phi|/pi) at infinity; integrability at infinity therefore
requires that tail exponent below -1.  The headline count keeps the integer
part of |Phi|/2pi; exactly integer flux is flagged because there the strict
tail rule admits one mode fewer.

Modes are stored in log space (exp(+-lambda) overflows casually) and all
norms are computed from the log samples with a max shift.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .potential import lambda_1d, lambda_2d_radial
from .profiles import DEFAULT_RTOL, Flux, total_flux

__all__ = [
    "SpinSector",
    "SECTOR_A",
    "SECTOR_B",
    "SECTOR_NONE",
    "sector_for_label",
    "OpenInterval",
    "ZeroMode",
    "Mode2D",
    "ZeroModeCount2D",
    "ScanEntry",
    "admissible_k_interval",
    "build_mode_1d",
    "scan_k",
    "count_2d_zero_modes",
    "build_mode_2d",
    "holomorphy_residual",
]

# exp overflows float64 above this argument
_LOG_MAX = 709.0


@dataclass(frozen=True)
class SpinSector:
    """Spinor component label; gamma is the sign of lambda in exp(gamma lambda)."""

    label: str
    gamma: int


SECTOR_A = SpinSector("a", +1)
SECTOR_B = SpinSector("b", -1)
SECTOR_NONE = SpinSector("none", 0)


def sector_for_label(label):
    for s in (SECTOR_A, SECTOR_B, SECTOR_NONE):
        if s.label == label:
            return s
    raise ValueError(f"unknown sector label {label!r}")


@dataclass(frozen=True)
class OpenInterval:
    """Open interval (lo, hi); empty when hi <= lo."""

    lo: float
    hi: float

    @property
    def is_empty(self):
        return not (self.lo < self.hi)

    def contains(self, x):
        return self.lo < x < self.hi


@dataclass(frozen=True, eq=False)
class ZeroMode:
    """Candidate 1D zero mode exp(gamma lambda_k), sampled in log space."""

    sector: SpinSector
    k: float
    grid: object
    log_values: np.ndarray
    values: np.ndarray        # exp(log) where representable, else nan
    l2_norm: float            # sqrt int psi^2, inf when not normalizable
    normalizable: bool

    def __post_init__(self):
        self.log_values.setflags(write=False)
        self.values.setflags(write=False)


@dataclass(frozen=True, eq=False)
class Mode2D:
    """Radial plane mode r^j exp(gamma lambda) and its tail exponent."""

    j: int
    sector: SpinSector
    grid: object
    log_values: np.ndarray
    values: np.ndarray
    tail_exponent: float      # 2j + 1 - |Phi|/pi governs r -> inf integrability
    normalizable: bool

    def __post_init__(self):
        self.log_values.setflags(write=False)
        self.values.setflags(write=False)


@dataclass(frozen=True)
class ZeroModeCount2D:
    """Plane zero-mode count: integer part of |Phi|/2pi in one sector."""

    sector: SpinSector
    n_modes: int
    flux_over_2pi: float
    integer_flux: bool        # there the strict tail rule gives n_modes - 1


@dataclass(frozen=True)
class ScanEntry:
    k: float
    normalizable: bool
    l2_norm: float


def _flux_value(flux):
    if isinstance(flux, Flux):
        return flux.value
    return float(flux)


def admissible_k_interval(flux):
    """Spin sector carrying zero modes and the open window of admissible k.

    Positive flux selects the b sector with k in (-Q/2, Q/2), negative flux
    the a sector with the same numeric window; zero flux admits nothing.
    Endpoints are excluded: there one tail of lambda is flat and the mode is
    a non-integrable constant in that direction.
    """
    q = _flux_value(flux)
    if q > 0.0:
        return SECTOR_B, OpenInterval(-0.5 * q, 0.5 * q)
    if q < 0.0:
        return SECTOR_A, OpenInterval(0.5 * q, -0.5 * q)
    return SECTOR_NONE, OpenInterval(0.0, 0.0)


def _slope_test(sector, slope_left, slope_right):
    if sector is SECTOR_B:
        return slope_right > 0.0 and slope_left < 0.0
    if sector is SECTOR_A:
        return slope_right < 0.0 and slope_left > 0.0
    raise ValueError("sector must be a or b")


def _representable(log_values):
    # overflow -> nan; underflow falls through to an exact 0.0, the true limit
    vals = np.full(log_values.shape, np.nan)
    ok = log_values <= _LOG_MAX
    vals[ok] = np.exp(log_values[ok])
    return vals


def _shifted_norm(log_values, x):
    """sqrt int exp(2 log psi) dx via composite Simpson with a max shift."""
    shift = float(log_values.max())
    integral = simpson(np.exp(2.0 * (log_values - shift)), x=x)
    if integral <= 0.0:
        return 0.0
    log_norm = shift + 0.5 * math.log(integral)
    return math.exp(log_norm) if log_norm <= _LOG_MAX else math.inf


def build_mode_1d(profile, k, sector, grid, rtol=DEFAULT_RTOL,
                  enforce_padding=True):
    """Construct the sector's candidate mode for linear coefficient k.

    The normalizability verdict comes from the slope test alone;
    the L2 norm is quadrature over the grid extent and is flagged infinite
    for non-normalizable modes.
    """
    if sector is SECTOR_NONE or not isinstance(sector, SpinSector):
        raise ValueError("build_mode_1d needs sector a or b")
    q = total_flux(profile, rtol=rtol).value
    normalizable = _slope_test(sector, k - 0.5 * q, k + 0.5 * q)
    # the padding rule protects decaying tails; a mode this sector cannot
    # normalize has none, so only normalizable builds enforce it
    pot = lambda_1d(profile, k, grid, rtol=rtol,
                    enforce_padding=enforce_padding and normalizable)
    log_values = sector.gamma * pot.values
    if normalizable:
        norm = _shifted_norm(log_values, grid.points())
    else:
        norm = math.inf
    return ZeroMode(sector=sector, k=float(k), grid=grid,
                    log_values=log_values, values=_representable(log_values),
                    l2_norm=norm, normalizable=normalizable)


def scan_k(profile, sector, k_list, grid, rtol=DEFAULT_RTOL):
    """Per-k normalizability verdicts and norms over a list of k values.

    Verdicts are exact (slope test); they are true precisely on the open
    interval from admissible_k_interval.  The base convolution is built once
    and the k x term added per k.  Norms are computed on the given grid, so
    near the window edges (where the padding rule would demand enormous
    grids) they are truncation-limited; the verdict is unaffected.
    """
    if sector is SECTOR_NONE or not isinstance(sector, SpinSector):
        raise ValueError("scan_k needs sector a or b")
    base = lambda_1d(profile, 0.0, grid, rtol=rtol, enforce_padding=False)
    q = base.flux.value
    x = grid.points()
    out = []
    for k in k_list:
        k = float(k)
        ok = _slope_test(sector, k - 0.5 * q, k + 0.5 * q)
        if ok:
            log_values = sector.gamma * (base.values + k * x)
            norm = _shifted_norm(log_values, x)
        else:
            norm = math.inf
        out.append(ScanEntry(k=k, normalizable=ok, l2_norm=norm))
    return out


def count_2d_zero_modes(flux):
    """Zero-mode count of the radially symmetric plane problem.

    n_modes is the integer part of |Phi|/2pi (modes j = 0 .. n_modes-1) in
    the b sector for positive flux, a for negative.  When |Phi|/2pi is an
    integer the topmost mode j = n_modes - 1 sits exactly on the
    integrability boundary and the strict tail rule rejects it; such inputs
    are flagged rather than silently resolved.
    """
    phi = _flux_value(flux)
    ratio = abs(phi) / (2.0 * math.pi)
    n = int(math.floor(ratio))
    integer_flux = ratio > 0.0 and abs(ratio - round(ratio)) <= 1e-9 * max(1.0, ratio)
    if phi > 0.0:
        sector = SECTOR_B
    elif phi < 0.0:
        sector = SECTOR_A
    else:
        sector = SECTOR_NONE
    return ZeroModeCount2D(sector=sector, n_modes=n, flux_over_2pi=ratio,
                           integer_flux=integer_flux)


def build_mode_2d(profile, j, grid, rtol=DEFAULT_RTOL):
    """Radial mode r^j exp(gamma lambda) with its strict tail verdict.

    The squared-norm integrand scales like r^tail_exponent with
    tail_exponent = 2j + 1 - |Phi|/pi, so the mode is normalizable iff that
    exponent is < -1.  The sector follows the flux sign (b-like decay
    exp(-lambda) for Phi >= 0).
    """
    if int(j) != j or j < 0:
        raise ValueError(f"j must be a non-negative integer, got {j}")
    j = int(j)
    pot = lambda_2d_radial(profile, grid, rtol=rtol)
    phi = pot.flux.value
    sector = SECTOR_B if phi > 0.0 else (SECTOR_A if phi < 0.0 else SECTOR_NONE)
    gamma = sector.gamma if sector is not SECTOR_NONE else -1
    r = grid.points()
    with np.errstate(divide="ignore"):
        log_r = np.log(r)
    log_values = j * log_r + gamma * pot.values if j > 0 else gamma * pot.values
    tail = 2.0 * j + 1.0 - abs(phi) / math.pi
    return Mode2D(j=j, sector=sector, grid=grid, log_values=log_values,
                  values=_representable(log_values), tail_exponent=tail,
                  normalizable=bool(tail < -1.0))


def holomorphy_residual(j, points):
    """Exact check that z^j (z = ix + y) is annihilated by -i d/dx - d/dy.

    Both derivative terms are evaluated by exact polynomial differentiation
    at the sample points and combined; the max modulus is zero up to
    rounding for every j >= 0.
    """
    if int(j) != j or j < 0:
        raise ValueError(f"j must be a non-negative integer, got {j}")
    j = int(j)
    worst = 0.0
    for x, y in points:
        z = 1j * x + y
        if j == 0:
            dx = 0.0
            dy = 0.0
        else:
            dz = j * z ** (j - 1)
            dx = 1j * dz    # d/dx z^j
            dy = dz         # d/dy z^j
        worst = max(worst, abs(-1j * dx - dy))
    return worst
