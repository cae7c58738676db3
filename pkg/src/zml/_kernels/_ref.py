"""Pure-Python quadrature kernels (fallback backend).

These are the hot numerical primitives of the package: evaluation of the
compactly supported field profiles and adaptive composite Simpson
integration of the Green-kernel convolutions

    lambda(x)  =  int 1/2 |x - t| B(t) dt          (convolve_abs)
    A(x)       =  int 1/2 sign(x - t) B(t) dt      (convolve_sign)
    lambda(r)  =  int t B(t) ln(max(r, t)) dt      (convolve_log_radial)

together with the plain and first-moment integrals used for fluxes.
The compiled twin in ``_core.pyx`` implements the identical algorithm
operation-for-operation; keep the two in sync.

Algorithm: the integration interval is split at forced nodes (profile
breakpoints and, for the convolutions, the kernel kink t = x), then each
segment is refined by Simpson bisection until the classic |S2 - S| <= 15 eps
test passes, with the budget eps divided proportionally to segment width and
halved per level.  Whatever error estimate could not be resolved within the
depth limit is accumulated; if it exceeds the requested tolerance a
QuadratureError reports both numbers.
"""

import math

import numpy as np

from ..errors import QuadratureError

BACKEND = "python"

# profile-kind codes shared with the compiled backend
KIND_BOX = 0            # params (B0, a)
KIND_TRUNC_GAUSS = 1    # params (B0, sigma, cutoff)
KIND_BUMP = 2           # params (B0, a)
KIND_PW_LINEAR = 3      # params (x0, B0, x1, B1, ...)

MAX_DEPTH = 48
MAX_SEGMENTS = 4096   # total bisections per integral: bounds work when the
                      # tolerance is unreachable instead of exploding 2^depth
_TINY_SCALE = 1e-300


def eval_field(kind, params, t):
    """Field value at a single point; exact zero outside the support."""
    if kind == KIND_BOX:
        if abs(t) <= params[1]:
            return params[0]
        return 0.0
    if kind == KIND_TRUNC_GAUSS:
        if abs(t) <= params[2]:
            s = params[1]
            return params[0] * (math.exp(-t * t / (2.0 * s * s))
                                - math.exp(-params[2] * params[2] / (2.0 * s * s)))
        return 0.0
    if kind == KIND_BUMP:
        if abs(t) < params[1]:
            u = t / params[1]
            return params[0] * math.exp(1.0 - 1.0 / (1.0 - u * u))
        return 0.0
    if kind == KIND_PW_LINEAR:
        n = len(params) // 2
        if t < params[0] or t > params[2 * (n - 1)]:
            return 0.0
        lo, hi = 0, n - 1
        while hi - lo > 1:            # rightmost segment with x_lo <= t
            mid = (lo + hi) // 2
            if params[2 * mid] <= t:
                lo = mid
            else:
                hi = mid
        x0, b0 = params[2 * lo], params[2 * lo + 1]
        x1, b1 = params[2 * hi], params[2 * hi + 1]
        if x1 == x0:
            return b0
        return b0 + (b1 - b0) * (t - x0) / (x1 - x0)
    raise ValueError(f"unknown profile kind code {kind}")


def field_values(kind, params, xs):
    """Vector of field values; scalar loop so both backends agree exactly."""
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(xs.shape, dtype=np.float64)
    flat = xs.ravel()
    dst = out.ravel()
    for i in range(flat.size):
        dst[i] = eval_field(kind, params, flat[i])
    return out


# weight codes for the integrand
_W_PLAIN = 0
_W_ABS = 1
_W_RADIAL = 3
_W_LOG = 4


def _integrand(kind, params, weight, x0, t):
    b = eval_field(kind, params, t)
    if weight == _W_PLAIN:
        return b
    if weight == _W_ABS:
        return 0.5 * abs(x0 - t) * b
    if weight == _W_RADIAL:
        return t * b
    # _W_LOG: azimuthally averaged log kernel, r0 = 1
    if t == 0.0 and x0 <= 0.0:
        return 0.0
    m = x0 if x0 > t else t
    return t * b * math.log(m)


def _simpson(a, fa, fm, fb, b):
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0


class _Acc:
    """Unresolved-error accumulator and remaining bisection budget."""

    __slots__ = ("unresolved", "budget")

    def __init__(self):
        self.unresolved = 0.0
        self.budget = MAX_SEGMENTS


def _adapt(kind, params, weight, x0, a, fa, m, fm, b, fb, s, eps, depth, acc):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = _integrand(kind, params, weight, x0, lm)
    frm = _integrand(kind, params, weight, x0, rm)
    sl = _simpson(a, fa, flm, fm, m)
    sr = _simpson(m, fm, frm, fb, b)
    s2 = sl + sr
    diff = s2 - s
    # 10x safety under the classic 15 eps rule: callers get the requested
    # tolerance with margin, like library integrators deliver
    if abs(diff) <= 1.5 * eps:
        return s2 + diff / 15.0
    if (depth >= MAX_DEPTH or acc.budget <= 0
            or lm <= a or lm >= m or rm <= m or rm >= b):
        acc.unresolved += abs(diff) / 15.0
        return s2 + diff / 15.0
    acc.budget -= 1
    half = 0.5 * eps
    return (_adapt(kind, params, weight, x0, a, fa, lm, flm, m, fm, sl,
                   half, depth + 1, acc)
            + _adapt(kind, params, weight, x0, m, fm, rm, frm, b, fb, sr,
                     half, depth + 1, acc))


def _segment_nodes(lo, hi, seeds, extra):
    nodes = [lo]
    for s in seeds:
        if lo < s < hi:
            nodes.append(s)
    if extra is not None and lo < extra < hi:
        nodes.append(extra)
    nodes.append(hi)
    nodes.sort()
    out = [nodes[0]]
    for v in nodes[1:]:
        if v > out[-1]:
            out.append(v)
    return out


def _integrate(kind, params, weight, x0, lo, hi, seeds, rtol):
    """Adaptive Simpson over [lo, hi] with forced nodes; raises on failure."""
    if hi <= lo:
        return 0.0
    nodes = _segment_nodes(lo, hi, seeds, x0 if weight != _W_PLAIN else None)
    nseg = len(nodes) - 1
    segs = []
    scale = 0.0
    for i in range(nseg):
        a = nodes[i]
        b = nodes[i + 1]
        m = 0.5 * (a + b)
        fa = _integrand(kind, params, weight, x0, a)
        fm = _integrand(kind, params, weight, x0, m)
        fb = _integrand(kind, params, weight, x0, b)
        s = _simpson(a, fa, fm, fb, b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _integrand(kind, params, weight, x0, lm)
        frm = _integrand(kind, params, weight, x0, rm)
        scale += abs(_simpson(a, fa, flm, fm, m)) + abs(_simpson(m, fm, frm, fb, b))
        segs.append((a, fa, m, fm, b, fb, s))
    eps_total = rtol * (scale if scale > _TINY_SCALE else _TINY_SCALE)
    acc = _Acc()
    width = hi - lo
    total = 0.0
    for (a, fa, m, fm, b, fb, s) in segs:
        eps_seg = eps_total * (b - a) / width
        total += _adapt(kind, params, weight, x0, a, fa, m, fm, b, fb, s,
                        eps_seg, 0, acc)
    if acc.unresolved > eps_total:
        raise QuadratureError(
            f"adaptive Simpson did not converge: requested tolerance "
            f"{eps_total:.3e}, achieved error estimate {acc.unresolved:.3e}",
            requested=eps_total, achieved=acc.unresolved)
    return total


def integrate_field(kind, params, lo, hi, seeds, rtol):
    """int B(t) dt over [lo, hi]."""
    return _integrate(kind, params, _W_PLAIN, 0.0, lo, hi, seeds, rtol)


def integrate_radial_moment(kind, params, lo, hi, seeds, rtol):
    """int t B(t) dt over [lo, hi] (flux of a radial profile / 2 pi)."""
    return _integrate(kind, params, _W_RADIAL, 0.0, lo, hi, seeds, rtol)


def convolve_abs(kind, params, lo, hi, seeds, xs, rtol):
    """int 1/2 |x - t| B(t) dt for every x in xs."""
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(xs.size, dtype=np.float64)
    for i in range(xs.size):
        out[i] = _integrate(kind, params, _W_ABS, xs[i], lo, hi, seeds, rtol)
    return out.reshape(xs.shape)


def convolve_sign(kind, params, lo, hi, seeds, xs, rtol):
    """int 1/2 sign(x - t) B(t) dt for every x in xs.

    The jump at t = x is handled by splitting into two one-sided integrals,
    so Simpson never sees the discontinuity.
    """
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(xs.size, dtype=np.float64)
    for i in range(xs.size):
        x = xs[i]
        left = _integrate(kind, params, _W_PLAIN, 0.0,
                          lo, min(x, hi), seeds, rtol) if x > lo else 0.0
        right = _integrate(kind, params, _W_PLAIN, 0.0,
                           max(x, lo), hi, seeds, rtol) if x < hi else 0.0
        out[i] = 0.5 * (left - right)
    return out.reshape(xs.shape)


def convolve_log_radial(kind, params, lo, hi, seeds, rs, rtol):
    """int t B(t) ln(max(r, t)) dt for every radius r in rs (r0 = 1)."""
    rs = np.asarray(rs, dtype=np.float64)
    out = np.empty(rs.size, dtype=np.float64)
    for i in range(rs.size):
        out[i] = _integrate(kind, params, _W_LOG, rs[i], lo, hi, seeds, rtol)
    return out.reshape(rs.shape)
