# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels.

Operation-for-operation twin of ``_ref.py``; see that module for the
algorithm description.  Keep the two implementations in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log

from ..errors import QuadratureError

cnp.import_array()

BACKEND = "cython"

cdef enum:
    _KIND_BOX = 0
    _KIND_TRUNC_GAUSS = 1
    _KIND_BUMP = 2
    _KIND_PW_LINEAR = 3

KIND_BOX = _KIND_BOX
KIND_TRUNC_GAUSS = _KIND_TRUNC_GAUSS
KIND_BUMP = _KIND_BUMP
KIND_PW_LINEAR = _KIND_PW_LINEAR

cdef int MAX_DEPTH = 48
# total bisections per integral: bounds work when the tolerance is
# unreachable instead of exploding 2^depth
cdef int MAX_SEGMENTS = 4096

cdef double _TINY_SCALE = 1e-300

cdef int _W_PLAIN = 0
cdef int _W_ABS = 1
cdef int _W_RADIAL = 3
cdef int _W_LOG = 4


cdef double _eval(int kind, const double* p, Py_ssize_t plen, double t) noexcept nogil:
    cdef double s, u, x0, b0, x1, b1
    cdef Py_ssize_t n, lo, hi, mid
    if kind == _KIND_BOX:
        if fabs(t) <= p[1]:
            return p[0]
        return 0.0
    if kind == _KIND_TRUNC_GAUSS:
        if fabs(t) <= p[2]:
            s = p[1]
            return p[0] * (exp(-t * t / (2.0 * s * s))
                           - exp(-p[2] * p[2] / (2.0 * s * s)))
        return 0.0
    if kind == _KIND_BUMP:
        if fabs(t) < p[1]:
            u = t / p[1]
            return p[0] * exp(1.0 - 1.0 / (1.0 - u * u))
        return 0.0
    # _KIND_PW_LINEAR
    n = plen // 2
    if t < p[0] or t > p[2 * (n - 1)]:
        return 0.0
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if p[2 * mid] <= t:
            lo = mid
        else:
            hi = mid
    x0 = p[2 * lo]
    b0 = p[2 * lo + 1]
    x1 = p[2 * hi]
    b1 = p[2 * hi + 1]
    if x1 == x0:
        return b0
    return b0 + (b1 - b0) * (t - x0) / (x1 - x0)


cdef double _integrand(int kind, const double* p, Py_ssize_t plen,
                       int weight, double x0, double t) noexcept nogil:
    cdef double b = _eval(kind, p, plen, t)
    cdef double m
    if weight == _W_PLAIN:
        return b
    if weight == _W_ABS:
        return 0.5 * fabs(x0 - t) * b
    if weight == _W_RADIAL:
        return t * b
    if t == 0.0 and x0 <= 0.0:
        return 0.0
    m = x0 if x0 > t else t
    return t * b * log(m)


cdef inline double _simpson(double a, double fa, double fm, double fb,
                            double b) noexcept nogil:
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0


cdef double _adapt(int kind, const double* p, Py_ssize_t plen, int weight,
                   double x0, double a, double fa, double m, double fm,
                   double b, double fb, double s, double eps, int depth,
                   double* unresolved, int* budget) noexcept nogil:
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = _integrand(kind, p, plen, weight, x0, lm)
    cdef double frm = _integrand(kind, p, plen, weight, x0, rm)
    cdef double sl = _simpson(a, fa, flm, fm, m)
    cdef double sr = _simpson(m, fm, frm, fb, b)
    cdef double s2 = sl + sr
    cdef double diff = s2 - s
    cdef double half
    # 10x safety under the classic 15 eps rule: callers get the requested
    # tolerance with margin, like library integrators deliver
    if fabs(diff) <= 1.5 * eps:
        return s2 + diff / 15.0
    if (depth >= MAX_DEPTH or budget[0] <= 0
            or lm <= a or lm >= m or rm <= m or rm >= b):
        unresolved[0] += fabs(diff) / 15.0
        return s2 + diff / 15.0
    budget[0] -= 1
    half = 0.5 * eps
    return (_adapt(kind, p, plen, weight, x0, a, fa, lm, flm, m, fm, sl,
                   half, depth + 1, unresolved, budget)
            + _adapt(kind, p, plen, weight, x0, m, fm, rm, frm, b, fb, sr,
                     half, depth + 1, unresolved, budget))


cdef double _integrate(int kind, const double* p, Py_ssize_t plen, int weight,
                       double x0, double lo, double hi,
                       const double* seeds, Py_ssize_t nseeds, double rtol,
                       double* nodes, double* work, int* fail) noexcept nogil:
    # nodes: scratch of size nseeds + 3; work: scratch of size 7*(nseeds+2)
    cdef Py_ssize_t nn, i, j, nseg
    cdef int budget
    cdef double a, b, m, fa, fm, fb, s, lm, rm, flm, frm
    cdef double scale, eps_total, eps_seg, total, unresolved, width, v
    if hi <= lo:
        return 0.0
    nn = 0
    nodes[nn] = lo
    nn += 1
    for i in range(nseeds):
        if lo < seeds[i] < hi:
            nodes[nn] = seeds[i]
            nn += 1
    if weight != _W_PLAIN and lo < x0 < hi:
        nodes[nn] = x0
        nn += 1
    nodes[nn] = hi
    nn += 1
    # insertion sort + dedup (node lists are tiny)
    for i in range(1, nn):
        v = nodes[i]
        j = i
        while j > 0 and nodes[j - 1] > v:
            nodes[j] = nodes[j - 1]
            j -= 1
        nodes[j] = v
    nseg = 0
    for i in range(nn - 1):
        if nodes[i + 1] > nodes[nseg]:
            nodes[nseg + 1] = nodes[i + 1]
            nseg += 1
    # rough pass: per-segment Simpson plus one bisection level for the scale
    scale = 0.0
    for i in range(nseg):
        a = nodes[i]
        b = nodes[i + 1]
        m = 0.5 * (a + b)
        fa = _integrand(kind, p, plen, weight, x0, a)
        fm = _integrand(kind, p, plen, weight, x0, m)
        fb = _integrand(kind, p, plen, weight, x0, b)
        s = _simpson(a, fa, fm, fb, b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _integrand(kind, p, plen, weight, x0, lm)
        frm = _integrand(kind, p, plen, weight, x0, rm)
        scale += fabs(_simpson(a, fa, flm, fm, m)) + fabs(_simpson(m, fm, frm, fb, b))
        work[7 * i] = a
        work[7 * i + 1] = fa
        work[7 * i + 2] = m
        work[7 * i + 3] = fm
        work[7 * i + 4] = b
        work[7 * i + 5] = fb
        work[7 * i + 6] = s
    eps_total = rtol * (scale if scale > _TINY_SCALE else _TINY_SCALE)
    width = hi - lo
    total = 0.0
    unresolved = 0.0
    budget = MAX_SEGMENTS
    for i in range(nseg):
        eps_seg = eps_total * (work[7 * i + 4] - work[7 * i]) / width
        total += _adapt(kind, p, plen, weight, x0,
                        work[7 * i], work[7 * i + 1], work[7 * i + 2],
                        work[7 * i + 3], work[7 * i + 4], work[7 * i + 5],
                        work[7 * i + 6], eps_seg, 0, &unresolved, &budget)
    if unresolved > eps_total:
        fail[0] = 1
        work[0] = eps_total
        work[1] = unresolved
    return total


cdef _as_c(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


cdef _raise_quadrature(double requested, double achieved):
    raise QuadratureError(
        f"adaptive Simpson did not converge: requested tolerance "
        f"{requested:.3e}, achieved error estimate {achieved:.3e}",
        requested=requested, achieved=achieved)


def eval_field(kind, params, t):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = _as_c(params)
    return _eval(kind, &p[0], p.shape[0], t)


def field_values(kind, params, xs):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = _as_c(params)
    arr = np.asarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = _as_c(arr.ravel())
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(flat.shape[0])
    cdef Py_ssize_t i
    cdef int k = kind
    with nogil:
        for i in range(flat.shape[0]):
            out[i] = _eval(k, &p[0], p.shape[0], flat[i])
    return out.reshape(arr.shape)


cdef _scalar_quad(int kind, object params, int weight, double lo, double hi,
                  object seeds, double rtol):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = _as_c(params)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sd = _as_c(seeds)
    cdef Py_ssize_t nmax = sd.shape[0] + 3
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nodes = np.empty(nmax)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(7 * nmax)
    cdef int fail = 0
    cdef double res
    cdef const double* sdp = NULL
    if sd.shape[0] > 0:
        sdp = &sd[0]
    res = _integrate(kind, &p[0], p.shape[0], weight, 0.0, lo, hi,
                     sdp, sd.shape[0], rtol, &nodes[0], &work[0], &fail)
    if fail:
        _raise_quadrature(work[0], work[1])
    return res


def integrate_field(kind, params, lo, hi, seeds, rtol):
    return _scalar_quad(kind, params, _W_PLAIN, lo, hi, seeds, rtol)


def integrate_radial_moment(kind, params, lo, hi, seeds, rtol):
    return _scalar_quad(kind, params, _W_RADIAL, lo, hi, seeds, rtol)


cdef _convolve(int kind, object params, int weight, double lo, double hi,
               object seeds, object xs, double rtol):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = _as_c(params)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sd = _as_c(seeds)
    arr = np.asarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = _as_c(arr.ravel())
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(flat.shape[0])
    cdef Py_ssize_t nmax = sd.shape[0] + 3
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nodes = np.empty(nmax)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(7 * nmax)
    cdef int fail = 0
    cdef Py_ssize_t i
    cdef int k = kind, w = weight
    cdef double a = lo, b = hi, tol = rtol
    cdef const double* sdp = NULL
    if sd.shape[0] > 0:
        sdp = &sd[0]
    with nogil:
        for i in range(flat.shape[0]):
            out[i] = _integrate(k, &p[0], p.shape[0], w, flat[i], a, b,
                                sdp, sd.shape[0], tol, &nodes[0], &work[0],
                                &fail)
            if fail:
                break
    if fail:
        _raise_quadrature(work[0], work[1])
    return out.reshape(arr.shape)


def convolve_abs(kind, params, lo, hi, seeds, xs, rtol):
    return _convolve(kind, params, _W_ABS, lo, hi, seeds, xs, rtol)


def convolve_log_radial(kind, params, lo, hi, seeds, rs, rtol):
    return _convolve(kind, params, _W_LOG, lo, hi, seeds, rs, rtol)


def convolve_sign(kind, params, lo, hi, seeds, xs, rtol):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = _as_c(params)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sd = _as_c(seeds)
    arr = np.asarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = _as_c(arr.ravel())
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(flat.shape[0])
    cdef Py_ssize_t nmax = sd.shape[0] + 3
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nodes = np.empty(nmax)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(7 * nmax)
    cdef int fail = 0
    cdef Py_ssize_t i
    cdef int k = kind
    cdef double a = lo, b = hi, tol = rtol, x, left, right
    cdef const double* sdp = NULL
    if sd.shape[0] > 0:
        sdp = &sd[0]
    with nogil:
        for i in range(flat.shape[0]):
            x = flat[i]
            left = 0.0
            right = 0.0
            if x > a:
                left = _integrate(k, &p[0], p.shape[0], _W_PLAIN, 0.0, a,
                                  x if x < b else b, sdp, sd.shape[0], tol,
                                  &nodes[0], &work[0], &fail)
            if not fail and x < b:
                right = _integrate(k, &p[0], p.shape[0], _W_PLAIN, 0.0,
                                   x if x > a else a, b, sdp, sd.shape[0],
                                   tol, &nodes[0], &work[0], &fail)
            out[i] = 0.5 * (left - right)
            if fail:
                break
    if fail:
        _raise_quadrature(work[0], work[1])
    return out.reshape(arr.shape)
