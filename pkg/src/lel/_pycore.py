"""Pure-Python kernels; used when the compiled ``lel._core`` is unavailable.

Both functions mirror ``_core.pyx`` operation for operation so the two
backends agree to rounding.
"""

import math

import numpy as np

OK, ZERO, NONFINITE, UNDERFLOW, MAX_STEPS = 0, 1, 2, 3, 4

# Dormand-Prince 5(4) tableau
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0
C2, C3, C4, C5 = 0.2, 0.3, 0.8, 8.0 / 9.0


def _rhs(nm1, pm1, r, u, v):
    return v, -nm1 * v / r - abs(u) ** pm1 * u


def _step(nm1, pm1, r, u, v, ku, kv, h):
    """One DOPRI5 step; returns (u5, v5, ku7, kv7, err_u, err_v)."""
    k1u, k1v = ku, kv
    k2u, k2v = _rhs(nm1, pm1, r + C2 * h, u + h * A21 * k1u, v + h * A21 * k1v)
    k3u, k3v = _rhs(nm1, pm1, r + C3 * h,
                    u + h * (A31 * k1u + A32 * k2u),
                    v + h * (A31 * k1v + A32 * k2v))
    k4u, k4v = _rhs(nm1, pm1, r + C4 * h,
                    u + h * (A41 * k1u + A42 * k2u + A43 * k3u),
                    v + h * (A41 * k1v + A42 * k2v + A43 * k3v))
    k5u, k5v = _rhs(nm1, pm1, r + C5 * h,
                    u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
                    v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v))
    k6u, k6v = _rhs(nm1, pm1, r + h,
                    u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
                    v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v))
    u5 = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
    v5 = v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
    k7u, k7v = _rhs(nm1, pm1, r + h, u5, v5)
    eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
    ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
    return u5, v5, k7u, k7v, eu, ev


def integrate_radial(dim, p, r0, u0, du0, r_max, tol, h_max, max_steps=10_000_000):
    """Adaptive DOPRI5 for ``u'' + (dim-1)/r u' + |u|^(p-1) u = 0`` from ``r0 > 0``.

    Stops at ``r_max`` or at the first step where ``u`` turns non-positive;
    in that case the crossing is bisected on the step length down to
    ``1e-12`` of the step.

    Returns ``(r, u, du, first_zero, status, status_r)``; ``first_zero`` is
    NaN when no crossing occurred.
    """
    nm1 = dim - 1.0
    pm1 = p - 1.0
    rs, us, vs = [r0], [u0], [du0]
    r, u, v = r0, u0, du0
    ku, kv = _rhs(nm1, pm1, r, u, v)
    h = min(h_max, r_max - r, r0)
    first_zero = math.nan
    status = OK
    steps = 0
    while r < r_max:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        steps += 1
        last = r + h >= r_max
        if last:
            h = r_max - r
        u5, v5, k7u, k7v, eu, ev = _step(nm1, pm1, r, u, v, ku, kv, h)
        if not (math.isfinite(u5) and math.isfinite(v5)):
            if h <= 1e-14 * max(1.0, r):
                status = NONFINITE
                break
            h *= 0.2
            continue
        su = tol + tol * max(abs(u), abs(u5))
        sv = tol + tol * max(abs(v), abs(v5))
        err = max(abs(eu) / su, abs(ev) / sv)
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            if h <= 1e-14 * max(1.0, r):
                status = UNDERFLOW
                break
            continue
        if u > 0.0 and u5 <= 0.0:
            lo, hi = 0.0, h
            while hi - lo > 1e-12 * h:
                mid = 0.5 * (lo + hi)
                um = _step(nm1, pm1, r, u, v, ku, kv, mid)[0]
                if um > 0.0:
                    lo = mid
                else:
                    hi = mid
            first_zero = r + 0.5 * (lo + hi)
            r = r_max if last else r + h
            rs.append(r)
            us.append(u5)
            vs.append(v5)
            status = ZERO
            break
        r = r_max if last else r + h
        u, v, ku, kv = u5, v5, k7u, k7v
        rs.append(r)
        us.append(u)
        vs.append(v)
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = min(h * fac, h_max)
    return (np.array(rs), np.array(us), np.array(vs), first_zero, status,
            r if status in (NONFINITE, UNDERFLOW, MAX_STEPS) else math.nan)


def stencil_derivative(x, f, width):
    """First derivative of ``f`` at nodes ``half..n-half-1`` by Fornberg weights.

    ``width = 2*half + 1`` nodes centred on each target node; the grid may
    be nonuniform.  Vectorised over target nodes.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    half = width // 2
    n = x.size
    m = n - 2 * half
    if m <= 0:
        return np.empty(0)
    centre = x[half:n - half]
    offs = [x[j:j + m] - centre for j in range(width)]
    # Fornberg recursion for derivative orders 0 and 1
    c0 = [np.zeros(m) for _ in range(width)]
    c1 = [np.zeros(m) for _ in range(width)]
    c0[0][:] = 1.0
    prod1 = np.ones(m)
    dx4 = offs[0]
    for i in range(1, width):
        prod2 = np.ones(m)
        dx5 = dx4
        dx4 = offs[i]
        for j in range(i):
            dx3 = offs[i] - offs[j]
            prod2 = prod2 * dx3
            if j == i - 1:
                c1[i] = prod1 * (c0[i - 1] - dx5 * c1[i - 1]) / prod2
                c0[i] = -prod1 * dx5 * c0[i - 1] / prod2
            c1[j] = (dx4 * c1[j] - c0[j]) / dx3
            c0[j] = dx4 * c0[j] / dx3
        prod1 = prod2
    out = np.zeros(m)
    for j in range(width):
        out += c1[j] * f[j:j + m]
    return out
