"""Worked input/output examples for each module."""

import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from lel.exponents import (
    Admissibility,
    ProblemParams,
    RefusedError,
    admissible,
    certify,
    derive_exponents,
    select_q,
    sphere_area,
    step1_certify,
)
from lel.pohozaev import energy_F, feedback_check, pohozaev_sides, surface_G1, surface_G2
from lel.radial import BubbleParams, bubble_constant, bubble_profile, bubble_value, pde_residual, rescale, shoot
from lel.sweep import certify_row, midpoint_grid


@pytest.mark.parametrize("dim, p, p_S, tau, k", [
    (3, 5, Fr(5), Fr(1, 2), Fr(6, 5)),
    (2, 7, math.inf, Fr(1, 3), Fr(8, 7)),
    (6, 2, Fr(2), Fr(2), Fr(3, 2)),
])
def test_derived(dim, p, p_S, tau, k):
    d = derive_exponents(ProblemParams(dim, Fr(p)))
    assert (d.p_S, d.tau, d.k) == (p_S, tau, k)


@pytest.mark.parametrize("dim, p, status", [
    (5, 2, Admissibility.ADMISSIBLE), (4, 2, Admissibility.SIMPLE_RANGE), (3, 5, Admissibility.CRITICAL),
])
def test_admissibility_examples(dim, p, status):
    assert admissible(ProblemParams(dim, Fr(p))) is status


def test_q_selection_examples():
    qs = select_q(ProblemParams(5, Fr(2)))
    assert (qs.gamma, qs.q0, qs.eps0, qs.q, qs.ell) == (5, Fr(5, 2), Fr(1, 2), Fr(9, 4), Fr(9, 8))
    with pytest.raises(RefusedError):
        select_q(ProblemParams(3, Fr(3)))
    qs2 = select_q(ProblemParams(2, Fr(3)))
    assert (qs2.q0, qs2.q, qs2.ell) == (Fr(7, 2), Fr(13, 4), Fr(13, 12))


def test_step_examples():
    params = ProblemParams(2, Fr(3))
    s1 = step1_certify(params, derive_exponents(params), select_q(params))
    assert s1.case == "Case1"
    c = certify(ProblemParams(5, Fr(2)))
    assert (c.step1.lam, c.step1.mu) == (Fr(18, 7), 6)
    assert (c.step2.inv_z, c.step2.inv_z_conj) == (Fr(7, 12), Fr(5, 12))
    assert c.a > 0 and c.b == Fr(1, 6)


def test_critical_end_row_has_small_a():
    edge = certify_row(5, Fr(7, 3) - Fr(1, 1000))
    mid = certify_row(5, midpoint_grid(5, 50)[25])
    assert 0 < edge.a < mid.a


@pytest.mark.parametrize("dim, value", [(4, 8 ** 0.5), (3, 3 ** 0.25)])
def test_bubble_at_centre(dim, value):
    bp = BubbleParams(dim, 1.0, center=(0.5,) * dim)
    assert bubble_value(bp, np.array(bp.center)) == pytest.approx(value, rel=1e-15)


def test_bubble_decay():
    dim, t = 5, 2.0
    bp = BubbleParams(dim, t)
    for r in (1e3, 1e4):
        x = np.zeros(dim)
        x[0] = r
        expected = bubble_constant(dim) * t ** ((dim - 2) / 2) * r ** (2 - dim)
        assert bubble_value(bp, x) == pytest.approx(expected, rel=3 * (t / r) ** 2)


def test_zero_profile_everywhere():
    prof = shoot(4, 2.5, 0.0, 5.0)
    assert prof.first_zero is None
    assert pde_residual(prof) == 0.0
    for R in (1.0, 5.0):
        assert energy_F(prof, R) == surface_G1(prof, R) == surface_G2(prof, R) == 0.0
        rep = pohozaev_sides(prof, R)
        assert rep.lhs == rep.rhs == rep.rel_residual == 0.0
    assert feedback_check(prof, 2.0).holds


def test_shot_matches_critical_bubble():
    alpha = bubble_value(BubbleParams(3, 1.0), np.zeros(3))
    prof = shoot(3, 5.0, float(alpha), 1e3)
    assert prof.first_zero is None
    u = bubble_value(BubbleParams(3, 1.0), np.stack([prof.grid, 0 * prof.grid, 0 * prof.grid], axis=1))
    assert np.max(np.abs(prof.u - u)) < 1e-8


def test_identity_rescale():
    prof = shoot(3, 2.0, 1.0, 10.0)
    assert rescale(prof, 1) is prof


def test_bubble_energy_ratio_tends_to_one():
    grid = np.concatenate([[0.0], np.geomspace(1e-4, 4e3, 40000)])
    prof = bubble_profile(BubbleParams(5, 1.0), grid)
    gaps = [energy_F(prof, 2 * R) / energy_F(prof, R) - 1 for R in (1.0, 10.0, 100.0, 1000.0)]
    assert all(g > 0 for g in gaps[:3])
    assert gaps == sorted(gaps, reverse=True)
    assert abs(gaps[-1]) < 1e-12


def test_surface_terms_just_inside_first_zero():
    prof = shoot(3, 2.0, 1.0, 50.0)
    R = prof.first_zero * (1 - 1e-9)
    G1, G2 = surface_G1(prof, R), surface_G2(prof, R)
    _, du = prof.at(R)
    assert G1 < 1e-20
    assert G2 == pytest.approx(sphere_area(3) * R**3 * float(du) ** 2, rel=1e-7) and G2 > 0


def test_feedback_on_N3_p2_grid():
    prof = shoot(3, 2.0, 1.0, 50.0)
    for R in np.linspace(0.05, 1.0, 40) * prof.first_zero:
        assert feedback_check(prof, R).holds
