"""Discretized two-component operator for one transverse channel.

For a channel with wavenumber k_y the two coupled first-order equations in
the real representation (psi_a, i psi_b) read

    (+d/dx + W) psi_b = E psi_a,      (-d/dx + W) psi_a = E psi_b,

with W(x) = k_y + A_y(x) and A_y = d lambda/dx obtained analytically from
the sign-kernel convolution of the field.  On a uniform interior grid with
Dirichlet truncation (boundary rows dropped) the derivative is the
antisymmetric central-difference matrix D, giving the real symmetric block
operator

    H = [[0, M], [M^T, 0]],      M = D + diag(W),

whose spectrum is symmetric about zero: the eigenvalues are exactly the
+-singular values of M.  Three equivalent spectral paths are provided:

- "dense": eigendecomposition of the assembled 2m x 2m matrix;
- "svd": singular values of the dense M;
- "banded": eigenvalues of the pentadiagonal M^T M (sign-split afterwards),
  which is the fast path for channel sweeps (O(m^2) instead of O(m^3)).

Central differences carry the usual lattice artifact: M also hosts a
staggered ("doubler") branch whose levels coincide with the partner tower.
``windowed_singular_modes`` exposes the right-singular vectors in a value
window so callers can classify smooth versus staggered and bulk versus edge
states; the zero level itself is artifact-free (the staggered zero mode
grows like exp(+lambda) and is expelled by the Dirichlet truncation).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CapExceededError, EigenSolveError, GridError, ProfileError
from .potential import check_padding, vector_potential_y
from .profiles import DEFAULT_RTOL

__all__ = [
    "DiracOperator",
    "Spectrum",
    "DENSE_CAP",
    "build_operator",
    "eigen_spectrum",
    "count_near_zero",
    "mode_residual",
    "susy_partners",
    "windowed_singular_modes",
]

DENSE_CAP = 4000


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """One-channel discretization on the interior points of a grid."""

    grid: object            # full grid; the operator lives on its interior
    k_y: float
    interior_x: np.ndarray
    w_values: np.ndarray    # k_y + A_y at the interior points
    h: float
    bmax: float             # max |B|, sets the Landau scale sqrt(2 bmax)

    def __post_init__(self):
        self.interior_x.setflags(write=False)
        self.w_values.setflags(write=False)

    @property
    def size(self):
        return self.w_values.size

    def m_matrix(self):
        """Dense M = D + diag(W); sub/super diagonals are -/+ 1/(2h)."""
        m = self.size
        if m > DENSE_CAP:
            raise CapExceededError(
                f"dense assembly of a {m}x{m} block refused (cap {DENSE_CAP})")
        c = 1.0 / (2.0 * self.h)
        mat = np.diag(self.w_values.copy())
        idx = np.arange(m - 1)
        mat[idx, idx + 1] = c
        mat[idx + 1, idx] = -c
        return mat

    @property
    def matrix(self):
        """Dense symmetric 2m x 2m block matrix [[0, M], [M^T, 0]]."""
        mm = self.m_matrix()
        m = self.size
        full = np.zeros((2 * m, 2 * m))
        full[:m, m:] = mm
        full[m:, :m] = mm.T
        return full

    def m_matvec(self, v):
        """(D + W) v with Dirichlet neighbours outside the interior."""
        c = 1.0 / (2.0 * self.h)
        out = self.w_values * v
        out[:-1] += c * v[1:]
        out[1:] -= c * v[:-1]
        return out

    def mt_matvec(self, u):
        """(D + W)^T u = (-D + W) u."""
        c = 1.0 / (2.0 * self.h)
        out = self.w_values * u
        out[:-1] -= c * u[1:]
        out[1:] += c * u[:-1]
        return out

    def mtm_band(self):
        """Lower band form (diag, 1st, 2nd subdiagonal) of the pentadiagonal M^T M."""
        w = self.w_values
        m = self.size
        c = 1.0 / (2.0 * self.h)
        idx = np.arange(m)
        band = np.zeros((3, m))
        band[0] = w * w + c * c * ((idx > 0).astype(float)
                                   + (idx < m - 1).astype(float))
        band[1, :m - 1] = c * (w[:-1] - w[1:])
        band[2, :m - 2] = -c * c
        return band


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalues with the near-zero classification tolerance."""

    eigenvalues: np.ndarray
    zero_tolerance: float
    near_zero_count: int

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)


def build_operator(profile, k_y, grid, rtol=DEFAULT_RTOL, cap=DENSE_CAP,
                   enforce_padding=True, _ay=None):
    """Discretize the channel k_y of a line profile on the grid interior.

    A_y is computed analytically through the same quadrature engine as the
    potentials (pass a precomputed interior A_y via _ay to share it across a
    channel sweep).  The interior size must stay within ``cap``; exceeding
    it raises with instructions rather than thrashing the dense solver.
    """
    if profile.is_radial:
        raise ProfileError("build_operator needs a line profile")
    m = grid.n - 2
    if m < 2:
        raise GridError("operator needs at least 2 interior points")
    if m > cap:
        raise CapExceededError(
            f"{m} interior points exceed the solver cap {cap}; coarsen the "
            "grid or raise cap= explicitly")
    if enforce_padding:
        check_padding(profile, k_y, grid)
    x = grid.points()[1:-1]
    ay = vector_potential_y(profile, x, rtol=rtol) if _ay is None else np.asarray(_ay)
    if ay.shape != x.shape:
        raise GridError("precomputed A_y does not match the grid interior")
    return DiracOperator(grid=grid, k_y=float(k_y), interior_x=x,
                         w_values=k_y + ay, h=grid.h,
                         bmax=float(profile.max_abs()))


def default_zero_tolerance(op):
    """0.1 sqrt(2 max|B|): a tenth of the first Landau gap."""
    if op.bmax <= 0.0:
        raise ValueError("field-free operator has no Landau scale; "
                         "pass tau explicitly")
    return 0.1 * math.sqrt(2.0 * op.bmax)


def _check_tau(op, tau):
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if op.bmax > 0.0:
        gap = math.sqrt(2.0 * op.bmax)
        if tau >= 0.5 * gap:
            warnings.warn(f"zero tolerance {tau:.3g} is not below half the "
                          f"first gap {gap:.3g}; counts may absorb the first "
                          "excited cluster", stacklevel=3)


def eigen_spectrum(op, tau=None, method="auto"):
    """Full symmetric spectrum of the channel operator.

    method "dense" diagonalizes the assembled block matrix, "svd" takes
    singular values of M, "banded" the eigenvalues of pentadiagonal M^T M;
    the latter two reconstruct the spectrum as +-singular values, which the
    chiral block structure makes exact.  "auto" picks dense for small
    operators and banded for sweeps.  Ordering is ascending.
    """
    if tau is None:
        tau = default_zero_tolerance(op)
    tau = float(tau)
    _check_tau(op, tau)
    if method == "auto":
        method = "dense" if op.size <= 300 else "banded"
    try:
        if method == "dense":
            vals = scipy.linalg.eigh(op.matrix, eigvals_only=True)
        elif method == "svd":
            s = scipy.linalg.svdvals(op.m_matrix())
            vals = np.sort(np.concatenate([-s, s]))
        elif method == "banded":
            ev = scipy.linalg.eig_banded(op.mtm_band(), lower=True,
                                         eigvals_only=True)
            s = np.sqrt(np.clip(ev, 0.0, None))
            vals = np.sort(np.concatenate([-s, s]))
        else:
            raise ValueError(f"unknown spectral method {method!r}")
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(
            f"symmetric eigensolver failed for channel k_y={op.k_y} "
            f"(m={op.size}, method={method}): {exc}") from exc
    # eigenvalues inside (-tau, tau) arrive in +-pairs (one pair per
    # near-null singular value), so halving counts zero MODES, not states
    count = int(np.sum(np.abs(vals) < tau)) // 2
    return Spectrum(eigenvalues=vals, zero_tolerance=tau, near_zero_count=count)


def count_near_zero(spectrum):
    """Number of near-zero modes: +-pairs of eigenvalues inside (-tau, tau)."""
    return spectrum.near_zero_count


def mode_residual(op, mode, drop_edge=0):
    """Relative discrete residual ||H psi|| / ||psi|| of an analytic mode.

    The mode is embedded in its spinor block (b modes produce the residual
    M psi_b, a modes M^T psi_a).  Scaling is removed through the log samples,
    so steep modes do not overflow.  ``drop_edge`` rows at each end can be
    excluded: Dirichlet rows see the missing neighbour of non-decaying modes.
    The expected decay is O(h^2) times the cubed slope scale.
    """
    og, mg = op.grid, mode.grid
    if (og.x_lo, og.x_hi, og.n) != (mg.x_lo, mg.x_hi, mg.n):
        raise GridError("operator and mode live on different grids")
    logs = mode.log_values[1:-1]
    v = np.exp(logs - logs.max())
    if mode.sector.label == "b":
        resid = op.m_matvec(v)
    elif mode.sector.label == "a":
        resid = op.mt_matvec(v)
    else:
        raise ValueError("mode has no spin sector")
    if drop_edge > 0:
        resid = resid[drop_edge:-drop_edge]
    denom = float(np.linalg.norm(v))
    return float(np.linalg.norm(resid)) / denom


def susy_partners(op):
    """The squared chiral blocks (H_minus, H_plus) = (M^T M, M M^T).

    Their nonzero spectra coincide exactly; zero modes of H_minus / H_plus
    are the b / a sector zero modes, and the two null dimensions add up to
    the near-zero count of the full block operator.
    """
    mm = op.m_matrix()
    return mm.T @ mm, mm @ mm.T


def windowed_singular_modes(op, lo, hi):
    """Singular values of M in [lo, hi] with their right singular vectors.

    Computed as eigenpairs of the pentadiagonal M^T M restricted to the
    squared window.  The vectors are the b-sector components, suitable for
    smooth/staggered and bulk/edge classification.
    """
    if not 0.0 <= lo <= hi:
        raise ValueError("need 0 <= lo <= hi for a singular-value window")
    try:
        vals, vecs = scipy.linalg.eig_banded(
            op.mtm_band(), lower=True, select="v",
            select_range=(lo * lo, hi * hi))
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(
            f"windowed banded eigensolver failed for k_y={op.k_y} "
            f"(m={op.size}): {exc}") from exc
    return np.sqrt(np.clip(vals, 0.0, None)), vecs
