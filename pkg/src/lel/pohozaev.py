"""Energy ``F``, boundary quantities ``G1, G2`` and the Pohozaev identity.

All surface integrals are reduced to radial point values times the sphere
area, so the functions here are only meaningful for radial profiles.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from .exponents import DomainError, sphere_area
from .radial import RadialProfile, fmt

REL_FLOOR = 1e-30


@dataclass(frozen=True)
class PohozaevReport:
    R: float
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float

    def to_json(self) -> dict:
        return {k: float(getattr(self, k)) for k in ("R", "lhs", "rhs", "abs_residual", "rel_residual")}


@dataclass(frozen=True)
class EnergyCurve:
    radii: np.ndarray
    F: np.ndarray
    G1: np.ndarray
    G2: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("R,F,G1,G2\n")
        for row in zip(self.radii, self.F, self.G1, self.G2):
            buf.write(",".join(fmt(v) for v in row) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class FeedbackResult:
    holds: bool
    C_used: float
    F: float
    G1: float
    G2: float


def _check_radius(profile: RadialProfile, R: float) -> None:
    if not R > 0:
        raise ValueError(f"radius must be positive, got {R}")
    if R > profile.extent * (1 + 1e-12):
        raise ValueError(f"R = {R} beyond the profile extent {profile.extent}")


def _positive_part(u):
    return np.maximum(u, 0.0)


def energy_F(profile: RadialProfile, R: float) -> float:
    """``omega * int_0^R u^(p+1) r^(N-1) dr`` by composite Simpson.

    Uses the stored nodes below ``R`` plus an interpolated node at ``R``.
    """
    _check_radius(profile, R)
    if profile.grid[0] != 0.0:
        raise ValueError("energy_F needs a profile sampled from r = 0")
    grid = profile.grid
    n = int(np.searchsorted(grid, R, side="left"))
    uR, _ = profile.at(R)
    x = np.append(grid[:n], R)
    u = np.append(profile.u[:n], uR)
    y = _positive_part(u) ** (profile.p + 1) * x ** (profile.dim - 1)
    if x.size < 2:
        return 0.0
    return sphere_area(profile.dim) * float(simpson(y, x=x))


def surface_G1(profile: RadialProfile, R: float) -> float:
    _check_radius(profile, R)
    u, _ = profile.at(R)
    return sphere_area(profile.dim) * R**profile.dim * float(_positive_part(u)) ** (profile.p + 1)


def surface_G2(profile: RadialProfile, R: float) -> float:
    _check_radius(profile, R)
    u, du = profile.at(R)
    return sphere_area(profile.dim) * R**profile.dim * float(du * du + u * u / (R * R))


def _boundary_terms(profile: RadialProfile, R: float):
    N, p = profile.dim, profile.p
    u, du = (float(v) for v in profile.at(R))
    up = max(u, 0.0) ** (p + 1)
    return (R * up / (p + 1), 0.5 * R * du * du, 0.5 * (N - 2) * u * du)


def pohozaev_coefficient(dim: int, p) -> float:
    return dim / (p + 1) - (dim - 2) / 2


def pohozaev_sides(profile: RadialProfile, R: float) -> PohozaevReport:
    """Both sides of the radial Pohozaev identity on the ball of radius ``R``.

    ``lhs = (N/(p+1) - (N-2)/2) F(R)`` and
    ``rhs = omega R^(N-1) [R u^(p+1)/(p+1) + R u'^2/2 + (N-2)/2 u u']``.
    """
    N = profile.dim
    lhs = pohozaev_coefficient(N, profile.p) * energy_F(profile, R)
    rhs = sphere_area(N) * R ** (N - 1) * sum(_boundary_terms(profile, R))
    diff = abs(lhs - rhs)
    return PohozaevReport(R, lhs, rhs, diff, diff / (abs(lhs) + abs(rhs) + REL_FLOOR))


def pohozaev_scale(profile: RadialProfile, R: float) -> float:
    """Size of the boundary side with every term taken in absolute value."""
    N = profile.dim
    return sphere_area(N) * R ** (N - 1) * sum(abs(t) for t in _boundary_terms(profile, R))


def feedback_constant(dim: int, p) -> float:
    """``max(1/(p+1), 1/2 + (N-2)/4) / (N/(p+1) - (N-2)/2)``, for ``p < p_S``.

    Follows from the identity after bounding ``|u u'| <= (R u'^2 + u^2/R)/2``.
    """
    p = Fraction(p)
    coef = Fraction(dim) / (p + 1) - Fraction(dim - 2, 2)
    if coef <= 0:
        raise DomainError(f"feedback bound needs p < p_S (N={dim}, p={p})")
    return float(max(1 / (p + 1), Fraction(1, 2) + Fraction(dim - 2, 4)) / coef)


def feedback_check(profile: RadialProfile, R: float) -> FeedbackResult:
    C = feedback_constant(profile.dim, profile.p)
    F = energy_F(profile, R)
    G1 = surface_G1(profile, R)
    G2 = surface_G2(profile, R)
    return FeedbackResult(F <= C * (G1 + G2), C, F, G1, G2)


def energy_curve(profile: RadialProfile, radii: Sequence[float]) -> EnergyCurve:
    radii = np.asarray(radii, dtype=float)
    return EnergyCurve(
        radii=radii,
        F=np.array([energy_F(profile, R) for R in radii]),
        G1=np.array([surface_G1(profile, R) for R in radii]),
        G2=np.array([surface_G2(profile, R) for R in radii]),
    )


def default_radii(profile: RadialProfile, r_max: float = math.inf, count: int = 8) -> np.ndarray:
    """``count`` log-spaced radii from ``0.1`` to ``0.95`` of ``min(r_max, extent)``."""
    stop = min(r_max, profile.extent)
    return np.geomspace(0.1 * stop, 0.95 * stop, count)
