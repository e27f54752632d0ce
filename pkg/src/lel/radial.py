"""Radial solutions of ``u'' + (N-1) u'/r + |u|^(p-1) u = 0``.

Shooting from ``u(0) = alpha, u'(0) = 0``, the closed-form critical
bubble, the scaling map ``u -> lam^(2/(p-1)) u(lam r)`` and a
finite-difference PDE residual.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import kernels


class IntegrationError(RuntimeError):
    """Raised when the integrator cannot continue; ``radius`` says where."""

    def __init__(self, message: str, radius: float):
        super().__init__(f"{message} at r = {radius!r}")
        self.radius = radius


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples of a radial function and its derivative on a grid.

    ``first_zero`` is set when ``u`` changes sign on the grid; the last
    node then lies just past the zero.  ``r_series`` is the radius up to
    which values came from the Taylor start rather than the integrator.
    """

    dim: int
    p: float
    alpha: float
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    first_zero: Optional[float] = None
    r_series: float = 0.0

    def __post_init__(self):
        for name in ("grid", "u", "du"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.grid.shape == self.u.shape == self.du.shape) or self.grid.ndim != 1:
            raise ValueError("grid, u and du must be 1-d arrays of equal length")
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def extent(self) -> float:
        """Largest radius usable by energy computations."""
        return self.first_zero if self.first_zero is not None else float(self.grid[-1])

    @cached_property
    def _spline(self):
        return CubicHermiteSpline(self.grid, self.u, self.du)

    def at(self, r):
        """``(u(r), u'(r))`` by cubic Hermite interpolation of the nodes."""
        s = self._spline
        return s(r), s.derivative()(r)


def series_radius(p: float, alpha: float, tol: float) -> float:
    return tol ** 0.25 * max(1.0, alpha) ** (-(p - 1.0) / 4.0)


def shoot(
    dim: int,
    p: float,
    alpha: float,
    r_max: float,
    tol: float = 1e-10,
    h_max: Optional[float] = None,
    series_nodes: int = 4,
) -> RadialProfile:
    """Integrate the radial problem from the centre value ``alpha``.

    Parameters
    ----------
    dim, p : int, float
        Dimension and exponent.
    alpha : float
        ``u(0) >= 0``.
    r_max : float
        Integration stops here unless ``u`` crosses zero first.
    tol : float
        Relative and absolute tolerance of the DOPRI5 step control.
    h_max : float, optional
        Cap on the step length.  The default ``tol^(1/5) * alpha^(-(p-1)/2)``
        keeps the stored grid fine enough for Simpson quadrature at the
        same accuracy as the integration, and scales with the solution.
        Pass ``math.inf`` to leave the controller free.
    series_nodes : int
        Number of intervals sampled from the Taylor start
        ``alpha - alpha^p r^2/(2N)`` on ``[0, r_series]``.

    Returns
    -------
    RadialProfile
    """
    p = float(p)
    alpha = float(alpha)
    if dim < 1 or p <= 1.0:
        raise ValueError(f"need dim >= 1 and p > 1, got dim={dim}, p={p}")
    if alpha < 0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    if not (r_max > 0 and tol > 0):
        raise ValueError("r_max and tol must be positive")
    if alpha == 0.0:
        grid = np.linspace(0.0, r_max, 5)
        return RadialProfile(dim, p, 0.0, grid, np.zeros(5), np.zeros(5))

    if h_max is None:
        h_max = tol ** 0.2 * alpha ** (-(p - 1.0) / 2.0)
    r_s = min(series_radius(p, alpha, tol), 0.5 * r_max)
    rs = np.linspace(0.0, r_s, series_nodes + 1)
    ap = alpha ** p
    us = alpha - ap * rs**2 / (2 * dim)
    dus = -ap * rs / dim

    r, u, du, zero, status, where = kernels.integrate_radial(
        int(dim), p, r_s, float(us[-1]), float(dus[-1]), float(r_max), float(tol),
        float(h_max),
    )
    if status == kernels.NONFINITE:
        raise IntegrationError("non-finite state (u' blew up)", where)
    if status == kernels.UNDERFLOW:
        raise IntegrationError("step size underflow", where)
    if status == kernels.MAX_STEPS:
        raise IntegrationError("step limit reached", where)
    return RadialProfile(
        dim=int(dim),
        p=p,
        alpha=alpha,
        grid=np.concatenate([rs[:-1], r]),
        u=np.concatenate([us[:-1], u]),
        du=np.concatenate([dus[:-1], du]),
        first_zero=None if math.isnan(zero) else float(zero),
        r_series=r_s,
    )


def rescale(profile: RadialProfile, lam: float) -> RadialProfile:
    """Apply ``u_lam(r) = lam^(2/(p-1)) u(lam r)`` to a profile."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if lam == 1:
        return profile
    tau = 2.0 / (profile.p - 1.0)
    su = lam**tau
    return RadialProfile(
        dim=profile.dim,
        p=profile.p,
        alpha=profile.alpha * su,
        grid=profile.grid / lam,
        u=profile.u * su,
        du=profile.du * (su * lam),
        first_zero=None if profile.first_zero is None else profile.first_zero / lam,
        r_series=profile.r_series / lam,
    )


def residual_nodes(profile: RadialProfile, width: int = 7):
    """Pointwise residual ``u'' + (N-1)u'/r + |u|^(p-1)u`` at interior nodes.

    ``u''`` is the centred ``width``-point Fornberg derivative of the stored
    ``u'``.  Nodes within ``r_series`` of the origin (or at ``r = 0``) are
    dropped.  Returns ``(radii, residuals)``.
    """
    n = profile.grid.size
    if n < 3:
        raise ValueError(f"need at least 3 nodes for a residual, got {n}")
    width = min(width, n if n % 2 else n - 1)
    half = width // 2
    d2 = kernels.stencil_derivative(profile.grid, profile.du, width)
    r = profile.grid[half:n - half]
    u = profile.u[half:n - half]
    du = profile.du[half:n - half]
    keep = r > max(profile.r_series, 0.0)
    r, u, du, d2 = r[keep], u[keep], du[keep], d2[keep]
    res = d2 + (profile.dim - 1) * du / r + np.abs(u) ** (profile.p - 1) * u
    return r, res


def pde_residual(profile: RadialProfile, width: int = 7) -> float:
    """Max-abs PDE residual over interior nodes (see :func:`residual_nodes`)."""
    _, res = residual_nodes(profile, width)
    return float(np.max(np.abs(res))) if res.size else 0.0


# -- critical bubble ---------------------------------------------------------


@dataclass(frozen=True)
class BubbleParams:
    dim: int
    t: float
    center: tuple = field(default=())

    def __post_init__(self):
        if self.dim < 3:
            raise ValueError(f"bubbles need dim >= 3, got {self.dim}")
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        center = tuple(float(c) for c in self.center) or (0.0,) * self.dim
        if len(center) != self.dim:
            raise ValueError(f"center must have {self.dim} coordinates")
        object.__setattr__(self, "center", center)

    @property
    def p(self) -> float:
        return (self.dim + 2) / (self.dim - 2)


def bubble_constant(dim: int) -> float:
    """``c(N) = (N(N-2))^((N-2)/4)``."""
    return (dim * (dim - 2)) ** ((dim - 2) / 4)


def bubble_radial(dim: int, t: float, r):
    """Bubble value and radial derivative at distance ``r`` from the centre."""
    r = np.asarray(r, dtype=float)
    s = t * t + r * r
    u = bubble_constant(dim) * (t / s) ** ((dim - 2) / 2)
    return u, -(dim - 2) * r / s * u


def bubble_value(bp: BubbleParams, x) -> np.ndarray:
    """Evaluate the bubble at point(s) ``x`` (last axis of length ``dim``)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != bp.dim:
        raise ValueError(f"points must have {bp.dim} coordinates")
    dist = np.linalg.norm(x - np.asarray(bp.center), axis=-1)
    return bubble_radial(bp.dim, bp.t, dist)[0]


def bubble_profile(bp: BubbleParams, radii: Sequence[float]) -> RadialProfile:
    """Sample the bubble (as a function of distance to its centre)."""
    grid = np.asarray(radii, dtype=float)
    u, du = bubble_radial(bp.dim, bp.t, grid)
    alpha = float(bubble_radial(bp.dim, bp.t, 0.0)[0])
    return RadialProfile(bp.dim, bp.p, alpha, grid, u, du)


def uniform_grid(r_min: float, r_max: float, h: float) -> np.ndarray:
    n = int(math.floor((r_max - r_min) / h + 1e-9))
    return r_min + h * np.arange(n + 1)


def bubble_check(dim: int, t: float, h: float = 1e-3, r_min: float = 0.1,
                 r_max: float = 10.0, width: int = 7) -> dict:
    """PDE residual of the sampled bubble on a uniform grid of spacing ``h``."""
    prof = bubble_profile(BubbleParams(dim, t), uniform_grid(r_min, r_max, h))
    return {"dim": dim, "t": t, "max_residual": pde_residual(prof, width), "grid_spacing": h}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def profile_to_csv(profile: RadialProfile) -> str:
    buf = io.StringIO()
    buf.write("r,u,du\n")
    for r, u, du in zip(profile.grid, profile.u, profile.du):
        buf.write(f"{fmt(r)},{fmt(u)},{fmt(du)}\n")
    return buf.getvalue()
