# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: DOPRI5 radial integration and Fornberg derivatives.

Mirrors ``lel._pycore``; see there for the contracts.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, isfinite, NAN

cnp.import_array()

cdef enum:
    OK = 0
    ZERO = 1
    NONFINITE = 2
    UNDERFLOW = 3
    MAX_STEPS = 4

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0, B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0
cdef double C2 = 0.2, C3 = 0.3, C4 = 0.8, C5 = 8.0 / 9.0


cdef struct StepOut:
    double u5, v5, k7u, k7v, eu, ev


cdef inline double _force(double pm1, double u) nogil:
    return -pow(fabs(u), pm1) * u


cdef StepOut _step(double nm1, double pm1, double r, double u, double v,
                   double ku, double kv, double h) nogil:
    cdef double k1u = ku, k1v = kv
    cdef double k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, uu, vv
    cdef StepOut out
    uu = u + h * A21 * k1u
    vv = v + h * A21 * k1v
    k2u = vv
    k2v = -nm1 * vv / (r + C2 * h) + _force(pm1, uu)
    uu = u + h * (A31 * k1u + A32 * k2u)
    vv = v + h * (A31 * k1v + A32 * k2v)
    k3u = vv
    k3v = -nm1 * vv / (r + C3 * h) + _force(pm1, uu)
    uu = u + h * (A41 * k1u + A42 * k2u + A43 * k3u)
    vv = v + h * (A41 * k1v + A42 * k2v + A43 * k3v)
    k4u = vv
    k4v = -nm1 * vv / (r + C4 * h) + _force(pm1, uu)
    uu = u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u)
    vv = v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
    k5u = vv
    k5v = -nm1 * vv / (r + C5 * h) + _force(pm1, uu)
    uu = u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u)
    vv = v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
    k6u = vv
    k6v = -nm1 * vv / (r + h) + _force(pm1, uu)
    out.u5 = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
    out.v5 = v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
    out.k7u = out.v5
    out.k7v = -nm1 * out.v5 / (r + h) + _force(pm1, out.u5)
    out.eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * out.k7u)
    out.ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * out.k7v)
    return out


cdef class _Buffer:
    cdef public object r, u, v
    cdef double[::1] rv, uv, vv
    cdef Py_ssize_t n, cap

    def __init__(self, Py_ssize_t cap):
        self.cap = cap
        self.n = 0
        self.r = np.empty(cap)
        self.u = np.empty(cap)
        self.v = np.empty(cap)
        self.rv, self.uv, self.vv = self.r, self.u, self.v

    cdef void push(self, double r, double u, double v):
        if self.n == self.cap:
            self.cap *= 2
            self.r = np.resize(self.r, self.cap)
            self.u = np.resize(self.u, self.cap)
            self.v = np.resize(self.v, self.cap)
            self.rv, self.uv, self.vv = self.r, self.u, self.v
        self.rv[self.n] = r
        self.uv[self.n] = u
        self.vv[self.n] = v
        self.n += 1


def integrate_radial(int dim, double p, double r0, double u0, double du0,
                     double r_max, double tol, double h_max, long max_steps=10_000_000):
    cdef double nm1 = dim - 1.0, pm1 = p - 1.0
    cdef double r = r0, u = u0, v = du0
    cdef double ku = v, kv = -nm1 * v / r + _force(pm1, u)
    cdef double h = min(h_max, r_max - r, r0)
    cdef double first_zero = NAN, su, sv, err, fac, lo, hi, mid
    cdef int status = OK
    cdef long steps = 0
    cdef bint last
    cdef StepOut s
    cdef _Buffer buf = _Buffer(1024)
    buf.push(r, u, v)
    while r < r_max:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        steps += 1
        last = r + h >= r_max
        if last:
            h = r_max - r
        s = _step(nm1, pm1, r, u, v, ku, kv, h)
        if not (isfinite(s.u5) and isfinite(s.v5)):
            if h <= 1e-14 * max(1.0, r):
                status = NONFINITE
                break
            h *= 0.2
            continue
        su = tol + tol * max(fabs(u), fabs(s.u5))
        sv = tol + tol * max(fabs(v), fabs(s.v5))
        err = max(fabs(s.eu) / su, fabs(s.ev) / sv)
        if err > 1.0:
            h *= max(0.2, 0.9 * pow(err, -0.2))
            if h <= 1e-14 * max(1.0, r):
                status = UNDERFLOW
                break
            continue
        if u > 0.0 and s.u5 <= 0.0:
            lo = 0.0
            hi = h
            while hi - lo > 1e-12 * h:
                mid = 0.5 * (lo + hi)
                if _step(nm1, pm1, r, u, v, ku, kv, mid).u5 > 0.0:
                    lo = mid
                else:
                    hi = mid
            first_zero = r + 0.5 * (lo + hi)
            r = r_max if last else r + h
            buf.push(r, s.u5, s.v5)
            status = ZERO
            break
        r = r_max if last else r + h
        u = s.u5
        v = s.v5
        ku = s.k7u
        kv = s.k7v
        buf.push(r, u, v)
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
        h = min(h * fac, h_max)
    return (buf.r[:buf.n].copy(), buf.u[:buf.n].copy(), buf.v[:buf.n].copy(), first_zero, status,
            r if status in (NONFINITE, UNDERFLOW, MAX_STEPS) else NAN)


def stencil_derivative(x, f, int width):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=float)
    cdef Py_ssize_t half = width // 2, n = xv.shape[0]
    cdef Py_ssize_t m = n - 2 * half
    if m <= 0:
        return np.empty(0)
    out_arr = np.zeros(m)
    cdef double[::1] out = out_arr
    cdef double[::1] c0 = np.empty(width), c1 = np.empty(width), off = np.empty(width)
    cdef Py_ssize_t t, i, j
    cdef double prod1, prod2, dx3, dx4, dx5, acc
    for t in range(m):
        for j in range(width):
            off[j] = xv[t + j] - xv[t + half]
            c0[j] = 0.0
            c1[j] = 0.0
        c0[0] = 1.0
        prod1 = 1.0
        dx4 = off[0]
        for i in range(1, width):
            prod2 = 1.0
            dx5 = dx4
            dx4 = off[i]
            for j in range(i):
                dx3 = off[i] - off[j]
                prod2 = prod2 * dx3
                if j == i - 1:
                    c1[i] = prod1 * (c0[i - 1] - dx5 * c1[i - 1]) / prod2
                    c0[i] = -prod1 * dx5 * c0[i - 1] / prod2
                c1[j] = (dx4 * c1[j] - c0[j]) / dx3
                c0[j] = dx4 * c0[j] / dx3
            prod1 = prod2
        acc = 0.0
        for j in range(width):
            acc += c1[j] * fv[t + j]
        out[t] = acc
    return out_arr
