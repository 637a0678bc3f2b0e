# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Matsubara-term kernel.

Same algorithm as ``_kernels_py.lifshitz_terms``: G7K15 on fixed initial
panels over t in [0, 40], uniform bisection of every panel until the
summed |K - G| estimate meets the relative tolerance.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, expm1, fabs, isinf, isfinite, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"

cdef enum:
    NINIT = 12
    MAXLEV = 12

cdef double T_MAX = 40.0
cdef double[NINIT] INIT_EDGES = [0.0, 0.1, 0.4, 1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 23.0, 31.0, 40.0]

cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999246519,
    0.209482141084727828012999174891714]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327]


cdef inline double coth(double u) nogil:
    if u > 350.0:
        return 1.0
    if u < 1e-4:
        return 1.0 / u + u / 3.0
    return 1.0 + 2.0 / expm1(2.0 * u)


cdef inline double integrand(double y, double zeta, double ex, double ez,
                             bint ideal, double thick, double shift) nogil:
    cdef double rpar, rperp, E, z2, dx, dz, fx, fz, num
    z2 = zeta * zeta
    if ideal:
        rpar = 1.0
        rperp = 1.0
    elif zeta == 0.0:
        rperp = 0.0
        E = sqrt(ex * ez)
        if isinf(E):
            rpar = 1.0
        else:
            rpar = (E * E - 1.0) / (E * E + 1.0 + 2.0 * E * coth(y * thick))
    elif not (isfinite(ex) and isfinite(ez)):
        rpar = 1.0
        rperp = 1.0
    else:
        E = sqrt(ex * ez)
        dx = z2 * (ex - 1.0)
        dz = z2 * (ez - 1.0)
        fx = sqrt(y * y + dx)
        fz = sqrt(y * y + dz)
        num = ((ex - 1.0) * (ez - 1.0) + (ex - 1.0) + (ez - 1.0)) * y * y - dz
        rpar = num / (E * E * y * y + fz * fz + 2.0 * E * y * fz * coth(fz * thick))
        rperp = dx / (y * y + fx * fx + 2.0 * y * fx * coth(fx * thick))
    return 2.0 * y * (y - shift) * rpar + z2 * (rperp - rpar) * (1.0 - shift / y)


cdef inline void gk15(double lo, double hi, double zeta, double ex, double ez,
                      bint ideal, double thick, double shift,
                      double* k_out, double* e_out) nogil:
    cdef double half = 0.5 * (hi - lo)
    cdef double mid = 0.5 * (hi + lo)
    cdef double fc, f1, f2, t, resk, resg
    cdef int j
    t = mid
    fc = exp(-t) * integrand(zeta + t, zeta, ex, ez, ideal, thick, shift)
    resk = WGK[7] * fc
    resg = WG[3] * fc
    for j in range(7):
        t = mid - half * XGK[j]
        f1 = exp(-t) * integrand(zeta + t, zeta, ex, ez, ideal, thick, shift)
        t = mid + half * XGK[j]
        f2 = exp(-t) * integrand(zeta + t, zeta, ex, ez, ideal, thick, shift)
        resk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    k_out[0] = half * resk
    e_out[0] = fabs(half * (resk - resg))


cdef inline double tail_bound(double zeta, double shift) nogil:
    cdef double Y = zeta + T_MAX
    return exp(-T_MAX) * (2.0 * Y * Y + 4.0 * Y + 4.0 + 2.0 * shift * (Y + 1.0) + 2.0 * zeta * zeta)


def lifshitz_terms(zeta, ex, ez, bint ideal=False, double thick=INFINITY,
                   double shift=0.0, double rtol=1e-6, int max_level=8):
    """Scaled y-integrals for a batch of Matsubara terms (see the Python twin)."""
    cdef const double[::1] zv = np.ascontiguousarray(zeta, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(ex, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(ez, dtype=np.float64)
    cdef Py_ssize_t n = zv.shape[0]
    if xv.shape[0] != n or wv.shape[0] != n:
        raise ValueError("zeta, ex, ez must have equal length")
    if max_level < 0 or max_level > MAXLEV:
        raise ValueError("max_level out of range")
    out_v = np.zeros(n)
    out_e = np.zeros(n)
    cdef double[::1] ov = out_v
    cdef double[::1] oe = out_e
    cdef Py_ssize_t cap = (NINIT - 1) * (1 << max_level) + 1
    cdef double* edges = <double*> malloc(cap * sizeof(double))
    cdef double* tmp = <double*> malloc(cap * sizeof(double))
    if edges == NULL or tmp == NULL:
        free(edges)
        free(tmp)
        raise MemoryError()
    cdef Py_ssize_t i, p, npan
    cdef int level
    cdef double v, e, kk, ee
    try:
        with nogil:
            for i in range(n):
                npan = NINIT - 1
                for p in range(NINIT):
                    edges[p] = INIT_EDGES[p]
                level = 0
                while True:
                    v = 0.0
                    e = 0.0
                    for p in range(npan):
                        gk15(edges[p], edges[p + 1], zv[i], xv[i], wv[i], ideal, thick, shift, &kk, &ee)
                        v += kk
                        e += ee
                    if e <= rtol * fabs(v) or level == max_level:
                        break
                    for p in range(npan):
                        tmp[2 * p] = edges[p]
                        tmp[2 * p + 1] = 0.5 * (edges[p] + edges[p + 1])
                    tmp[2 * npan] = edges[npan]
                    npan = 2 * npan
                    for p in range(npan + 1):
                        edges[p] = tmp[p]
                    level += 1
                ov[i] = v
                oe[i] = e + tail_bound(zv[i], shift)
    finally:
        free(edges)
        free(tmp)
    return out_v, out_e
