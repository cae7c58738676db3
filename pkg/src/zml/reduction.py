"""Transverse-channel bookkeeping and degeneracy verification.

With periodicity L_y in the symmetry direction the transverse wavenumbers
quantize as k_y = 2 pi n / L_y.  A channel hosts a zero mode precisely when
its effective linear coefficient k_gauge + k_y falls in the open window of
length |Q| centred at zero (one gauge serves every channel of a sweep), so
the analytic degeneracy is g = floor(|Q| L_y / 2 pi); for a constant field
over a strip of width L_x this reduces to the familiar floor(B L_x L_y/2pi).

``verify_degeneracy`` reconciles that count with the spectral oracle.  Level
zero sums near-zero mode counts per channel.  Excited levels need more care
on a lattice with compactly supported fields, for two measured reasons:
central differences host a staggered ("doubler") twin of every level, and
channels near the window edge lose their excited state to the continuum
outright (the level sits above the flat-region floor (|Q|/2 - |k_y|)^2, so
no eigenvector is localized there; only a washed-out density remains).  The
excited-level count is therefore taken as the bulk-projected spectral
weight: each non-doubler eigenstate in the level window contributes its
probability weight inside the field support.  Cleanly bound Landau states
contribute ~1 (their weight is 1 - O(e^-30)) and the continuum contributes
precisely the in-sample density of the dissolved states, which restores the
degeneracy-formula total to within one unit.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (CapExceededError, ClusterResolutionError,
                     PaddingError)
from .potential import PADDING_FLOOR, required_padding, vector_potential_y
from .profiles import DEFAULT_RTOL, total_flux
from .spectral import (DENSE_CAP, DiracOperator, eigen_spectrum,
                       windowed_singular_modes)

__all__ = [
    "ReductionConfig",
    "ChannelVerdict",
    "DegeneracyReport",
    "quantize_ky",
    "default_n_range",
    "admissible_channels",
    "degeneracy_general",
    "constant_field_degeneracy",
    "verify_degeneracy",
]

TWO_PI = 2.0 * math.pi

# near-degenerate eigenvalues are handled as one subspace (the solver may
# rotate their basis arbitrarily); genuine neighbours sit >= the continuum
# spacing apart, orders of magnitude above this
_GROUP_TOL = 1e-3


@dataclass(frozen=True)
class ReductionConfig:
    """Channel-sweep parameters; B_const/L_x describe the constant-field case."""

    L_y: float
    k_gauge: float = 0.0
    n_range: tuple = None
    B_const: float = None
    L_x: float = None

    def __post_init__(self):
        if not (math.isfinite(self.L_y) and self.L_y > 0.0):
            raise ValueError(f"L_y must be finite and positive, got {self.L_y}")
        if self.n_range is not None:
            lo, hi = self.n_range
            if int(lo) != lo or int(hi) != hi or lo > hi:
                raise ValueError(f"n_range must be integers lo <= hi, got {self.n_range}")
            object.__setattr__(self, "n_range", (int(lo), int(hi)))
        for name in ("B_const", "L_x"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and positive, got {v}")

    @property
    def l_B(self):
        """Magnetic length 1/sqrt(B_const); None without a constant field."""
        if self.B_const is None:
            return None
        return 1.0 / math.sqrt(self.B_const)


@dataclass
class ChannelVerdict:
    n: int
    k_y: float
    admissible: bool
    near_zero_count: int = None
    level_weight: float = None   # bulk-projected spectral weight in the window


@dataclass
class DegeneracyReport:
    Q: float
    L_y: float
    g_analytic_real: float
    g_analytic: int
    channels: list = field(default_factory=list)
    g_numeric: int = None
    discrepancy: int = None
    level: int = 0
    tau: float = None
    cluster_center: float = None

    @property
    def admissible_count(self):
        return sum(1 for ch in self.channels if ch.admissible)


def quantize_ky(L_y, n_range):
    """k_y(n) = 2 pi n / L_y for n in the inclusive integer range, ascending."""
    if not (math.isfinite(L_y) and L_y > 0.0):
        raise ValueError(f"L_y must be finite and positive, got {L_y}")
    lo, hi = n_range
    if int(lo) != lo or int(hi) != hi:
        raise ValueError("n_range bounds must be integers")
    if lo > hi:
        raise ValueError(f"empty channel range {n_range}")
    return np.array([TWO_PI * n / L_y for n in range(int(lo), int(hi) + 1)])


def default_n_range(Q, L_y, k_gauge=0.0):
    """Channel range covering the admissible window plus one boundary channel."""
    half = 0.5 * abs(Q)
    lo = math.floor((-half - k_gauge) * L_y / TWO_PI) - 1
    hi = math.ceil((half - k_gauge) * L_y / TWO_PI) + 1
    return (int(lo), int(hi))


def admissible_channels(profile, cfg, rtol=DEFAULT_RTOL):
    """Analytic degeneracy report: per-channel window verdicts and floor(|Q| L_y/2pi).

    A channel is admissible iff |k_gauge + k_y| < |Q|/2 (open window of
    length |Q|).  The admissible count can differ from the floor formula by
    at most one lattice point.
    """
    q = total_flux(profile, rtol=rtol).value
    n_range = cfg.n_range or default_n_range(q, cfg.L_y, cfg.k_gauge)
    kys = quantize_ky(cfg.L_y, n_range)
    half = 0.5 * abs(q)
    channels = [ChannelVerdict(n=n, k_y=float(ky),
                               admissible=bool(abs(cfg.k_gauge + ky) < half))
                for n, ky in zip(range(n_range[0], n_range[1] + 1), kys)]
    g_real = abs(q) * cfg.L_y / TWO_PI
    g = int(math.floor(g_real))
    report = DegeneracyReport(Q=q, L_y=cfg.L_y, g_analytic_real=g_real,
                              g_analytic=g, channels=channels)
    report.discrepancy = abs(report.admissible_count - g)
    return report


def degeneracy_general(profile, L_y, rtol=DEFAULT_RTOL):
    """floor(Q L_y / 2 pi) for a flux-orientation-normalized profile (Q >= 0)."""
    q = total_flux(profile, rtol=rtol).value
    if q < 0.0:
        raise ValueError(f"flux orientation must be normalized to Q >= 0, got {q}; "
                         "flip the field sign first")
    return int(math.floor(q * L_y / TWO_PI))


def constant_field_degeneracy(cfg):
    """floor(B L_x L_y / 2 pi), the constant-field special case."""
    if cfg.B_const is None or cfg.L_x is None:
        raise ValueError("constant-field degeneracy needs B_const and L_x")
    return int(math.floor(cfg.B_const * cfg.L_x * cfg.L_y / TWO_PI))


def _check_sweep_padding(profile, q, cfg, channels, grid):
    s_lo, s_hi = profile.support
    left = s_lo - grid.x_lo
    right = grid.x_hi - s_hi
    need = PADDING_FLOOR
    worst = None
    for ch in channels:
        if ch.admissible:
            p = required_padding(q, cfg.k_gauge + ch.k_y)
            if p > need:
                need, worst = p, ch.n
    if min(left, right) < need:
        raise PaddingError(
            f"sweep grid provides padding {left:.3g}/{right:.3g} past the "
            f"support but channel n={worst} requires >= {need:.3g}",
            required=need, available=min(left, right))
    return min(left, right)


def _sweep_zero_tolerance(bmax, min_pad):
    # stay below both a tenth of the Landau gap and half the first rung of
    # the flat-region ladder that window-edge channels develop
    scales = [0.5 * math.pi / (4.0 * min_pad)]
    if bmax > 0.0:
        scales.append(0.1 * math.sqrt(2.0 * bmax))
    return min(scales)


def _detect_cluster_center(pooled, level, ctol):
    """Gap-split the deepest channel's singular values; median of cluster m.

    Only the most-admissible channel is used: channels near the window edge
    have already lost excited levels to a dense continuum comb that would
    bury every gap.
    """
    vals = np.sort(pooled)
    if vals.size == 0:
        raise ClusterResolutionError("no spectral values to cluster; "
                                     "is the sweep admissible at all?")
    clusters = []
    start = 0
    for i in range(1, vals.size + 1):
        if i == vals.size or vals[i] - vals[i - 1] > ctol:
            clusters.append(vals[start:i])
            start = i
    if level > len(clusters):
        raise ClusterResolutionError(
            f"asked for level {level} but only {len(clusters)} clusters are "
            "resolved at this grid")
    cluster = clusters[level - 1]
    width = float(cluster[-1] - cluster[0])
    if width > ctol:
        raise ClusterResolutionError(
            f"cluster {level} spans {width:.3g} > tolerance {ctol:.3g}; "
            "refine the grid")
    if level < len(clusters):
        sep = float(clusters[level][0] - cluster[-1])
        if sep < 2.0 * ctol:
            raise ClusterResolutionError(
                f"clusters {level} and {level + 1} are separated by only "
                f"{sep:.3g} < {2 * ctol:.3g}; refine the grid")
    return float(np.median(cluster))


def _smooth_bulk_weight(svals, vecs, support_mask):
    """Bulk-projected weight of the non-doubler states in a singular window.

    Near-degenerate values are treated as one group (LAPACK may rotate the
    basis within such a group arbitrarily, so classification must be
    basis-free): within each group the directions with less
    difference-energy than sum-energy are the smooth (non-doubler) states,
    and each contributes its probability weight inside the field support.
    """
    weight = 0.0
    i = 0
    while i < svals.size:
        j = i + 1
        while j < svals.size and svals[j] - svals[j - 1] <= _GROUP_TOL:
            j += 1
        basis, _ = np.linalg.qr(vecs[:, i:j])
        d = np.diff(basis, axis=0)
        s = basis[1:] + basis[:-1]
        split, rot = np.linalg.eigh(d.T @ d - s.T @ s)
        smooth = basis @ rot[:, split < 0.0]
        if smooth.shape[1]:
            weight += float(np.sum((smooth * support_mask[:, None]) * smooth))
        i = j
    return weight


def verify_degeneracy(profile, cfg, level, grid, zero_tol=None,
                      cluster_tol=None, cap=DENSE_CAP, rtol=DEFAULT_RTOL):
    """Reconcile the analytic degeneracy with the spectral oracle.

    Level 0 sums per-channel near-zero mode counts at tolerance ``zero_tol``
    (default: below both the Landau scale and the finite-padding edge-ladder
    scale).  Level m >= 1 totals the bulk-projected weight of non-doubler
    states within ``cluster_tol`` of the m-th level center and rounds; the
    center comes from B_const when the config provides it and from
    gap-splitting the deepest admissible channel's spectrum otherwise, and
    unresolvable clusters raise ClusterResolutionError instead of guessing.
    Channels are processed in ascending n and the report is deterministic.
    """
    if int(level) != level or level < 0:
        raise ValueError(f"level must be a non-negative integer, got {level}")
    level = int(level)
    report = admissible_channels(profile, cfg, rtol=rtol)
    q = report.Q
    m = grid.n - 2
    if m > cap:
        raise CapExceededError(f"{m} interior points exceed the sweep cap "
                               f"{cap}; coarsen the grid or raise cap=")
    min_pad = _check_sweep_padding(profile, q, cfg, report.channels, grid)
    x_int = grid.points()[1:-1]
    ay = vector_potential_y(profile, x_int, rtol=rtol)
    bmax = float(profile.max_abs())
    tau0 = zero_tol if zero_tol is not None else _sweep_zero_tolerance(bmax, min_pad)
    ops = []
    for ch in report.channels:
        ops.append(DiracOperator(grid=grid, k_y=ch.k_y, interior_x=x_int,
                                 w_values=(cfg.k_gauge + ch.k_y) + ay,
                                 h=grid.h, bmax=bmax))
    spectra = [eigen_spectrum(op, tau=tau0, method="banded") for op in ops]
    for ch, spec in zip(report.channels, spectra):
        ch.near_zero_count = spec.near_zero_count
    report.level = level
    report.tau = tau0
    if level == 0:
        report.g_numeric = sum(ch.near_zero_count for ch in report.channels)
        report.discrepancy = abs(report.g_numeric - report.g_analytic)
        return report

    ctol = cluster_tol
    if ctol is None:
        if bmax <= 0.0:
            raise ClusterResolutionError("field-free sweep has no level "
                                         "structure to cluster")
        ctol = 0.1 * math.sqrt(2.0 * bmax)
    if cfg.B_const is not None:
        center = math.sqrt(2.0 * level * cfg.B_const)
    else:
        deepest = None
        for ch, spec in zip(report.channels, spectra):
            if ch.admissible:
                depth = abs(cfg.k_gauge + ch.k_y)
                if deepest is None or depth < deepest[0]:
                    deepest = (depth, spec)
        vals = (deepest[1].eigenvalues[deepest[1].eigenvalues > 2.0 * tau0]
                if deepest else np.array([]))
        center = _detect_cluster_center(vals, level, ctol)
    s_lo, s_hi = profile.support
    support_mask = ((x_int >= s_lo) & (x_int <= s_hi)).astype(float)
    lo, hi = max(center - ctol, 0.0), center + ctol
    total = 0.0
    for ch, op, spec in zip(report.channels, ops, spectra):
        vals = spec.eigenvalues
        if not np.any((vals >= lo) & (vals <= hi)):
            ch.level_weight = 0.0   # empty window, skip the vector solve
            continue
        svals, vecs = windowed_singular_modes(op, lo, hi)
        ch.level_weight = _smooth_bulk_weight(svals, vecs, support_mask)
        total += ch.level_weight
    report.g_numeric = int(round(total))
    report.discrepancy = abs(report.g_numeric - report.g_analytic)
    report.cluster_center = center
    return report
