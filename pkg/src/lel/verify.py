"""Independent re-verification of a :class:`NonexistenceCertificate`.

The checker recomputes every identity and inequality from the stored
fields with exact arithmetic.  It does not call the construction routines
in :mod:`lel.exponents`, so hand-built or deserialized certificates are
judged on their own merits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Tuple

from .exponents import NonexistenceCertificate


@dataclass(frozen=True)
class Verification:
    ok: bool
    violations: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.ok


def _emb(inv_source, order, dim):
    return max(inv_source - Fraction(order, dim - 1), Fraction(0))


def _between01(x):
    return x is not None and 0 <= x <= 1


def _clauses(cert: NonexistenceCertificate) -> List[Tuple[str, Callable[[], bool]]]:
    N, p = cert.params.dim, cert.params.p
    d, qs, s1, s2 = cert.derived, cert.qsel, cert.step1, cert.step2
    n1 = Fraction(1, N - 1)
    tau, k = d.tau, d.k
    q, ell = qs.q, qs.ell
    cap_half = min(qs.eps0, (qs.q0 - q) / p) / 2

    def a1_def(eps):
        if s1.case == "Case1":
            return (p + 1) * (tau - N / (p + 1)) - (p + 1) * eps * p * tau / (ell + eps)
        th = s1.theta
        return (th * (q * tau / (ell + eps) - 2) - N / (1 + p) - (2 - N / k) * (1 - th)) * (1 + p)

    def a2_def(eps):
        t1, t2 = s2.theta1, s2.theta2
        return p * tau / (1 + eps) * (t1 + t2) + N / k * (2 - t1 - t2) - (N + 2)

    def p_S_ok():
        if N == 2:
            return d.p_S == math.inf
        return d.p_S == Fraction(N + 2, N - 2)

    def admissible():
        return N == 2 or Fraction(N, N - 2) < p < Fraction(N + 2, N - 2)

    clauses = [
        ("parameters outside the admissible window", admissible),
        ("tau != 2/(p-1)", lambda: tau == 2 / (p - 1)),
        ("k != (p+1)/p", lambda: k == (p + 1) / p),
        ("p_S does not match the dimension", p_S_ok),
        ("2 + tau != p*tau", lambda: 2 + tau == p * tau),
        ("omega is not the unit sphere area",
         lambda: math.isclose(d.omega, 2 * math.pi ** (N / 2) / math.gamma(N / 2), rel_tol=1e-12)),
        ("q0 != gamma(p-1)/2", lambda: qs.q0 == qs.gamma * (p - 1) / 2),
        ("gamma outside (N-1, N]", lambda: N == 2 or N - 1 < qs.gamma <= N),
        ("eps0 != q0 - p", lambda: qs.eps0 == qs.q0 - p),
        ("eps0 not positive", lambda: qs.eps0 > 0),
        ("ell != q/p", lambda: ell == q / p),
        ("q-window ordering violated",
         lambda: (N - 1) * (p - 1) / 2 < q < qs.q0 < p + 1 and q > p),
        ("ell outside (1, k)", lambda: 1 < ell < k),
    ]

    # step 1
    case2_expected = 1 / ell >= 2 * n1 + 1 / (1 + p)
    clauses += [
        ("step1 case tag does not match the dichotomy",
         lambda: s1.case == ("Case2" if case2_expected else "Case1")),
        ("step1 lambda is not the W^{2,ell} embedding exponent",
         lambda: s1.inv_lambda == _emb(1 / ell, 2, N)),
    ]
    if s1.case == "Case1":
        clauses += [
            ("step1 Case1 embedding misses L^(p+1)", lambda: s1.inv_lambda < 1 / (1 + p)),
            ("step1 Case1 carries interpolation data", lambda: s1.theta is None and s1.inv_mu is None),
            ("b1 != 1 in Case1", lambda: s1.b1 == 1),
            ("a1(0) != (p+1)(tau - N/(p+1)) in Case1",
             lambda: s1.a1_at_0 == (p + 1) * (tau - N / (p + 1))),
        ]
    else:
        def chain():
            # 1/((1-theta)p) = (p/q - 1/k)/(p/lambda - 1/k) > 1
            if s1.theta == 1:
                return True
            lhs = 1 / ((1 - s1.theta) * p)
            rhs = (p / q - 1 / k) / (p * s1.inv_lambda - 1 / k)
            return lhs == rhs and lhs > 1

        clauses += [
            ("step1 mu is not the W^{2,k} embedding exponent",
             lambda: s1.inv_mu == _emb(1 / k, 2, N)),
            ("step1 interpolation identity 1/(1+p) = theta/lambda + (1-theta)/mu violated",
             lambda: 1 / (1 + p) == s1.theta * s1.inv_lambda + (1 - s1.theta) * s1.inv_mu),
            ("theta outside [0, 1]", lambda: _between01(s1.theta)),
            ("b1 != 1 - p(1-theta)", lambda: s1.b1 == 1 - p * (1 - s1.theta)),
            ("a1(0) does not match its definition", lambda: s1.a1_at_0 == a1_def(Fraction(0))),
            ("a1(0) != 2(tau - (N-2)/2) b1", lambda: s1.a1_at_0 == 2 * (tau - Fraction(N - 2, 2)) * s1.b1),
            ("step1 positivity chain p(1-theta) < 1 violated", chain),
        ]
    clauses += [
        ("b1 not positive", lambda: s1.b1 > 0),
        ("a1(0) not positive", lambda: s1.a1_at_0 > 0),
        ("step1 eps outside (0, cap/2]", lambda: 0 < s1.eps <= cap_half),
        ("a1(eps) does not match its definition", lambda: s1.a1_at_eps == a1_def(s1.eps)),
        ("a1(eps) below a1(0)/2", lambda: s1.a1_at_eps >= s1.a1_at_0 / 2),
        ("a1(eps) not positive", lambda: s1.a1_at_eps > 0),
    ]

    # step 2
    b2_from_k = 1 - (2 - s2.theta1 - s2.theta2) / k
    clauses += [
        ("step2 lambda1, lambda2 or mu is not its W^1 embedding exponent",
         lambda: (s2.inv_lambda1, s2.inv_lambda2, s2.inv_mu)
         == (_emb(1 / ell, 1, N), _emb(Fraction(1), 1, N), _emb(1 / k, 1, N))),
        ("1/z + 1/z' != 1", lambda: s2.inv_z + s2.inv_z_conj == 1),
        ("theta1 or theta2 outside [0, 1]", lambda: _between01(s2.theta1) and _between01(s2.theta2)),
        ("b2 != 1 - (2 - theta1 - theta2)/k", lambda: s2.b2 == b2_from_k),
    ]
    if s2.subcase == "holder":
        clauses += [
            ("holder subcase used with N > 3", lambda: N <= 3),
            ("holder subcase needs z = z' = 2 and theta1 = theta2 = 1",
             lambda: s2.inv_z == Fraction(1, 2) and s2.theta1 == 1 and s2.theta2 == 1),
            ("holder embeddings do not reach L^z and L^z'",
             lambda: s2.inv_lambda1 <= s2.inv_z and s2.inv_lambda2 <= s2.inv_z_conj),
        ]
    else:
        upper_a = 1 / ell - n1
        upper_b = 1 / (1 + p) + n1

        def subcase_ok():
            if s2.subcase == "theta1_one":
                return upper_a <= upper_b and s2.inv_z == upper_a
            if s2.subcase == "theta2_zero":
                return upper_b < upper_a and s2.inv_z == upper_b
            return False

        clauses += [
            ("1/z outside the z-window",
             lambda: max(1 / k - n1, n1) <= s2.inv_z <= min(upper_a, upper_b)),
            ("step2 subcase does not match the choice of z", subcase_ok),
            ("step2 interpolation identity for z violated",
             lambda: s2.inv_z == s2.theta1 * s2.inv_lambda1 + (1 - s2.theta1) * s2.inv_mu),
            ("step2 interpolation identity for z' violated",
             lambda: s2.inv_z_conj == s2.theta2 * s2.inv_lambda2 + (1 - s2.theta2) * s2.inv_mu),
            ("b2 closed forms disagree",
             lambda: s2.b2 == b2_from_k == s2.theta1 / ell + s2.theta2 - 2 * n1),
        ]
    clauses += [
        ("b2 not positive", lambda: s2.b2 > 0),
        ("a2(0) does not match its definition", lambda: s2.a2_at_0 == a2_def(Fraction(0))),
        ("a2(0) != (p+1)(tau - N/(p+1)) b2",
         lambda: s2.a2_at_0 == (p + 1) * (tau - N / (p + 1)) * s2.b2),
        ("a2(0) not positive", lambda: s2.a2_at_0 > 0),
        ("step2 eps outside (0, cap/2]", lambda: 0 < s2.eps <= cap_half),
        ("a2(eps) does not match its definition", lambda: s2.a2_at_eps == a2_def(s2.eps)),
        ("a2(eps) below a2(0)/2", lambda: s2.a2_at_eps >= s2.a2_at_0 / 2),
        ("a2(eps) not positive", lambda: s2.a2_at_eps > 0),
    ]

    clauses += [
        ("steps use different eps", lambda: s1.eps == s2.eps),
        ("a != min(a1(eps), a2(eps))", lambda: cert.a == min(s1.a1_at_eps, s2.a2_at_eps)),
        ("b != min(b1, b2)", lambda: cert.b == min(s1.b1, s2.b2)),
        ("a not positive", lambda: cert.a > 0),
        ("b outside (0, 1]", lambda: 0 < cert.b <= 1),
    ]
    return clauses


def verify_certificate(cert: NonexistenceCertificate) -> Verification:
    """Check every clause of ``cert``; the result is truthy iff all hold.

    Clauses that cannot even be evaluated (missing field, division by
    zero from a tampered value) count as violated.
    """
    try:
        clauses = _clauses(cert)
    except (TypeError, ZeroDivisionError, AttributeError) as exc:
        return Verification(False, (f"certificate is structurally incomplete: {exc}",))
    bad = []
    for name, check in clauses:
        try:
            ok = bool(check())
        except (TypeError, ZeroDivisionError, AttributeError):
            ok = False
        if not ok:
            bad.append(name)
    return Verification(not bad, tuple(bad))
