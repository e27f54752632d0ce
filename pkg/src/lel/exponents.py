"""Exact-rational exponent engine for the Lane-Emden Liouville argument.

Everything here is a pure function of ``(N, p)`` with ``p`` an exact
:class:`fractions.Fraction`.  The chain is

    derive_exponents -> select_q -> step1_certify / step2_certify -> certify

and the result, a :class:`NonexistenceCertificate`, carries every
intermediate exponent so that :func:`lel.verify.verify_certificate` can
re-derive each identity from the raw fields.

Sobolev exponents on the sphere are stored as reciprocals (``inv_*``).
A reciprocal of ``0`` stands for the ``L^infinity`` branch of the
embedding, which occurs in low dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

RationalLike = Union[int, Fraction, str, float, Decimal]

HALF = Fraction(1, 2)


class DomainError(ValueError):
    """Raised for parameters outside ``N >= 2, p > 1``."""


class RefusedError(ValueError):
    """Certification refused for a non-admissible ``(N, p)``."""

    def __init__(self, status: "Admissibility", message: str = ""):
        self.status = status
        super().__init__(message or status.value)


class CertificateError(RuntimeError):
    """Internal contradiction in the exponent chain (bug sentinel)."""


class Admissibility(str, Enum):
    ADMISSIBLE = "Admissible"
    SIMPLE_RANGE = "SimpleRange"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"


def to_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` into an exact :class:`Fraction`.

    Accepts integers, fractions, strings of the form ``"a/b"`` or a finite
    decimal such as ``"1.75"``, and floats (read through their shortest
    decimal repr, so ``1.1`` becomes ``11/10``).  Non-finite input raises
    :class:`DomainError`.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite exponent {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise DomainError(f"non-finite exponent {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            dec = Decimal(text)
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise DomainError(f"cannot parse {value!r} as an exact rational") from exc
        if not dec.is_finite():
            raise DomainError(f"non-finite exponent {value!r}")
        return Fraction(dec)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


@dataclass(frozen=True)
class ProblemParams:
    """Dimension ``dim`` and exact nonlinearity exponent ``p``."""

    dim: int
    p: Fraction

    def __post_init__(self):
        if isinstance(self.dim, bool) or int(self.dim) != self.dim:
            raise DomainError(f"dimension must be an integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", to_rational(self.p))
        if self.dim < 2:
            raise DomainError(f"dimension must be >= 2, got {self.dim}")
        if self.p <= 1:
            raise DomainError(f"exponent must exceed 1, got p = {self.p}")

    @classmethod
    def of(cls, dim: int, p: RationalLike) -> "ProblemParams":
        return cls(dim, to_rational(p))


@dataclass(frozen=True)
class DerivedExponents:
    p_S: Union[Fraction, float]  # math.inf when dim == 2
    tau: Fraction
    k: Fraction
    omega: float


@dataclass(frozen=True)
class QSelection:
    gamma: Fraction
    q0: Fraction
    eps0: Fraction
    q: Fraction
    ell: Fraction


@dataclass(frozen=True)
class Step1Certificate:
    """Exponents of the ``G1`` estimate.

    ``inv_lambda`` is the reciprocal Sobolev exponent of
    ``W^{2, ell}`` on the sphere.  ``inv_mu`` and ``theta`` are only used
    in ``Case2``, where the ``L^{p+1}`` norm is interpolated between the
    two embeddings.
    """

    case: str
    inv_lambda: Fraction
    inv_mu: Optional[Fraction]
    theta: Optional[Fraction]
    b1: Fraction
    a1_at_0: Fraction
    eps: Fraction
    a1_at_eps: Fraction

    @property
    def lam(self):
        return _exponent(self.inv_lambda)

    @property
    def mu(self):
        return None if self.inv_mu is None else _exponent(self.inv_mu)


@dataclass(frozen=True)
class Step2Certificate:
    """Exponents of the ``G2`` estimate.

    ``subcase`` is one of ``"theta1_one"`` (``1/z = 1/ell - 1/(N-1)``),
    ``"theta2_zero"`` (``1/z = 1/(1+p) + 1/(N-1)``) or ``"holder"``
    (``N <= 3``: both first-order embeddings already land above ``L^2``,
    so ``z = z' = 2`` with ``theta1 = theta2 = 1``).
    """

    subcase: str
    inv_z: Fraction
    inv_z_conj: Fraction
    inv_lambda1: Fraction
    inv_lambda2: Fraction
    inv_mu: Fraction
    theta1: Fraction
    theta2: Fraction
    b2: Fraction
    a2_at_0: Fraction
    eps: Fraction
    a2_at_eps: Fraction

    @property
    def z(self):
        return _exponent(self.inv_z)

    @property
    def z_conj(self):
        return _exponent(self.inv_z_conj)

    @property
    def lambda1(self):
        return _exponent(self.inv_lambda1)

    @property
    def lambda2(self):
        return _exponent(self.inv_lambda2)

    @property
    def mu(self):
        return _exponent(self.inv_mu)


@dataclass(frozen=True)
class NonexistenceCertificate:
    params: ProblemParams
    derived: DerivedExponents
    qsel: QSelection
    step1: Step1Certificate
    step2: Step2Certificate
    a: Fraction
    b: Fraction


def _exponent(inv: Fraction):
    return math.inf if inv == 0 else 1 / inv


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere in ``R^dim``."""
    return 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def critical_exponent(dim: int) -> Union[Fraction, float]:
    return math.inf if dim == 2 else Fraction(dim + 2, dim - 2)


def embedding_reciprocal(inv_source: Fraction, order: int, dim: int) -> Fraction:
    """Reciprocal target exponent of ``W^{order, 1/inv_source}(S^{dim-1})``.

    Returns ``0`` (the ``L^infinity`` branch) when the source exponent is
    above ``(dim - 1)/order``.
    """
    return max(inv_source - Fraction(order, dim - 1), Fraction(0))


def derive_exponents(params: ProblemParams) -> DerivedExponents:
    p = params.p
    return DerivedExponents(
        p_S=critical_exponent(params.dim),
        tau=2 / (p - 1),
        k=(p + 1) / p,
        omega=sphere_area(params.dim),
    )


def admissible(params: ProblemParams) -> Admissibility:
    N, p = params.dim, params.p
    if N == 2:
        return Admissibility.ADMISSIBLE
    p_S = Fraction(N + 2, N - 2)
    if p <= Fraction(N, N - 2):
        return Admissibility.SIMPLE_RANGE
    if p < p_S:
        return Admissibility.ADMISSIBLE
    if p == p_S:
        return Admissibility.CRITICAL
    return Admissibility.SUPERCRITICAL


def admissible_window(dim: int) -> tuple:
    """Open interval of ``p`` accepted by :func:`certify` (``N >= 3``)."""
    if dim < 3:
        raise DomainError("the admissible window is unbounded for dim = 2")
    return Fraction(dim, dim - 2), Fraction(dim + 2, dim - 2)


def _require_admissible(params: ProblemParams) -> None:
    status = admissible(params)
    if status is Admissibility.ADMISSIBLE:
        return
    N, p = params.dim, params.p
    reasons = {
        Admissibility.SIMPLE_RANGE: f"1 < p <= N/(N-2) = {Fraction(N, N - 2)}",
        Admissibility.CRITICAL: f"p = p_S = {critical_exponent(N)}",
        Admissibility.SUPERCRITICAL: f"p > p_S = {critical_exponent(N)}",
    }
    raise RefusedError(
        status, f"{status.value}: (N={N}, p={p}) has {reasons[status]}"
    )


def select_q(params: ProblemParams) -> QSelection:
    """Pick the integrability exponent ``q`` strictly inside its window.

    For ``N >= 3`` the local bound is taken with ``gamma = N``, so
    ``q0 = N(p-1)/2`` and ``q`` is the midpoint of
    ``(max(p, (N-1)(p-1)/2), q0)``.  For ``N = 2`` the lower constraint
    ``(p-1)/2 < q`` is automatic and ``q0 = p + 1/2``, ``q = p + 1/4``.
    """
    _require_admissible(params)
    N, p = params.dim, params.p
    if N == 2:
        q0 = p + HALF
        q = p + Fraction(1, 4)
        gamma = 2 * q0 / (p - 1)
    else:
        gamma = Fraction(N)
        q0 = gamma * (p - 1) / 2
        lower = max(p, (N - 1) * (p - 1) / 2)
        if not lower < q0:
            raise CertificateError(f"empty q-window ({lower}, {q0}) for N={N}, p={p}")
        q = (lower + q0) / 2
    return QSelection(gamma=gamma, q0=q0, eps0=q0 - p, q=q, ell=q / p)


def epsilon_cap(params: ProblemParams, qsel: QSelection) -> Fraction:
    """Upper end of the epsilon range keeping ``q < p(ell+eps) < q0``."""
    return min(qsel.eps0, (qsel.q0 - qsel.q) / params.p)


def step1_case(params: ProblemParams, qsel: QSelection) -> str:
    N, p = params.dim, params.p
    if 1 / qsel.ell < Fraction(2, N - 1) + 1 / (1 + p):
        return "Case1"
    return "Case2"


def a1_of_eps(params, derived, qsel, case, theta, eps) -> Fraction:
    """Exponent ``a1(eps)`` of the ``G1 <= C R^{-a1} F(2R)^{1-b1}`` bound."""
    N, p = params.dim, params.p
    tau, k = derived.tau, derived.k
    eps = Fraction(eps)
    if case == "Case1":
        return (p + 1) * (tau - N / (p + 1)) - (p + 1) * eps * p * tau / (qsel.ell + eps)
    return (
        theta * (qsel.q * tau / (qsel.ell + eps) - 2)
        - N / (1 + p)
        - (2 - N / k) * (1 - theta)
    ) * (1 + p)


def a2_of_eps(params, derived, theta1, theta2, eps) -> Fraction:
    """Exponent ``a2(eps)`` of the ``G2 <= C R^{-a2} F(2R)^{1-b2}`` bound."""
    N, p = params.dim, params.p
    tau, k = derived.tau, derived.k
    return (
        p * tau / (1 + Fraction(eps)) * (theta1 + theta2)
        + N / k * (2 - theta1 - theta2)
        - (N + 2)
    )


def half_gain_epsilon(a_of_eps, pole: Fraction, cap: Fraction) -> Fraction:
    """Largest ``eps <= cap/2`` with ``a(eps) >= a(0)/2``.

    ``a`` must have the shape ``alpha + beta/(pole + eps)`` with
    ``beta >= 0``, which both step exponents do, so the threshold crossing
    is solved exactly instead of searched for.
    """
    a0 = a_of_eps(Fraction(0))
    beta = (a0 - a_of_eps(Fraction(1))) * pole * (pole + 1)
    alpha = a0 - beta / pole
    target = a0 / 2
    eps = cap / 2
    if alpha < target:
        eps = min(eps, beta / (target - alpha) - pole)
    if not (eps > 0 and a_of_eps(eps) >= target):
        raise CertificateError(f"epsilon selection failed: eps = {eps}, a(0) = {a0}")
    return eps


def step1_certify(
    params: ProblemParams,
    derived: DerivedExponents,
    qsel: QSelection,
    eps: Optional[Fraction] = None,
) -> Step1Certificate:
    """Certify the ``G1`` bound.

    If ``eps`` is omitted it is chosen by :func:`half_gain_epsilon`; an explicit ``eps`` must lie in
    ``(0, epsilon_cap)``.
    """
    N, p = params.dim, params.p
    tau = derived.tau
    case = step1_case(params, qsel)
    inv_lambda = embedding_reciprocal(1 / qsel.ell, 2, N)
    if case == "Case1":
        inv_mu = theta = None
        b1 = Fraction(1)
        a1_0 = (p + 1) * (tau - N / (p + 1))
    else:
        inv_mu = embedding_reciprocal(1 / derived.k, 2, N)
        target = 1 / (1 + p)
        if not inv_mu <= target <= inv_lambda or inv_mu == inv_lambda:
            raise CertificateError(
                f"1/(1+p) = {target} is not between 1/mu = {inv_mu} and 1/lambda = {inv_lambda}"
            )
        theta = (target - inv_mu) / (inv_lambda - inv_mu)
        b1 = 1 - p * (1 - theta)
        a1_0 = a1_of_eps(params, derived, qsel, case, theta, 0)
    if b1 <= 0 or a1_0 <= 0:
        raise CertificateError(f"step 1 gives b1 = {b1}, a1(0) = {a1_0} for N={N}, p={p}")

    def a1(e):
        return a1_of_eps(params, derived, qsel, case, theta, e)

    eps = _check_eps(params, qsel, eps) if eps is not None else half_gain_epsilon(a1, qsel.ell, epsilon_cap(params, qsel))
    return Step1Certificate(
        case=case,
        inv_lambda=inv_lambda,
        inv_mu=inv_mu,
        theta=theta,
        b1=b1,
        a1_at_0=a1_0,
        eps=eps,
        a1_at_eps=a1(eps),
    )


def _interpolation_weight(target: Fraction, inv_hi: Fraction, inv_lo: Fraction) -> Fraction:
    # solves target = w*inv_hi + (1-w)*inv_lo
    return (target - inv_lo) / (inv_hi - inv_lo)


def z_window(params: ProblemParams, derived: DerivedExponents, qsel: QSelection) -> tuple:
    """Closed interval of admissible ``1/z`` for the ``G2`` splitting."""
    n1 = Fraction(1, params.dim - 1)
    lo = max(1 / derived.k - n1, n1)
    hi = min(1 / qsel.ell - n1, 1 / (1 + params.p) + n1)
    return lo, hi


def step2_certify(
    params: ProblemParams,
    derived: DerivedExponents,
    qsel: QSelection,
    eps: Optional[Fraction] = None,
) -> Step2Certificate:
    N, p = params.dim, params.p
    n1 = Fraction(1, N - 1)
    inv_l1 = embedding_reciprocal(1 / qsel.ell, 1, N)
    inv_l2 = embedding_reciprocal(Fraction(1), 1, N)
    inv_mu = embedding_reciprocal(1 / derived.k, 1, N)

    if N <= 3:
        # Both first-order embeddings reach L^2 or better: Hoelder on the
        # sphere with z = z' = 2 uses the ell+eps and 1+eps norms alone.
        subcase = "holder"
        inv_z = inv_zc = HALF
        theta1 = theta2 = Fraction(1)
        if inv_l1 > inv_z or inv_l2 > inv_zc:
            raise CertificateError(f"Hoelder route unavailable for N={N}, p={p}")
    else:
        lo, hi = z_window(params, derived, qsel)
        if lo > hi:
            raise CertificateError(f"empty z-window [{lo}, {hi}] for N={N}, p={p}")
        if 1 / qsel.ell - n1 <= 1 / (1 + p) + n1:
            subcase = "theta1_one"
            inv_z = 1 / qsel.ell - n1
        else:
            subcase = "theta2_zero"
            inv_z = 1 / (1 + p) + n1
        inv_zc = 1 - inv_z
        theta1 = _interpolation_weight(inv_z, inv_l1, inv_mu)
        theta2 = _interpolation_weight(inv_zc, inv_l2, inv_mu)
        if not (0 <= theta1 <= 1 and 0 <= theta2 <= 1):
            raise CertificateError(f"theta1 = {theta1}, theta2 = {theta2} outside [0, 1]")

    b2 = 1 - (2 - theta1 - theta2) / derived.k
    a2_0 = a2_of_eps(params, derived, theta1, theta2, 0)
    if b2 <= 0 or a2_0 <= 0:
        raise CertificateError(f"step 2 gives b2 = {b2}, a2(0) = {a2_0} for N={N}, p={p}")

    def a2(e):
        return a2_of_eps(params, derived, theta1, theta2, e)

    eps = _check_eps(params, qsel, eps) if eps is not None else half_gain_epsilon(a2, Fraction(1), epsilon_cap(params, qsel))
    return Step2Certificate(
        subcase=subcase,
        inv_z=inv_z,
        inv_z_conj=inv_zc,
        inv_lambda1=inv_l1,
        inv_lambda2=inv_l2,
        inv_mu=inv_mu,
        theta1=theta1,
        theta2=theta2,
        b2=b2,
        a2_at_0=a2_0,
        eps=eps,
        a2_at_eps=a2(eps),
    )


def _check_eps(params, qsel, eps) -> Fraction:
    eps = to_rational(eps)
    if not 0 < eps < epsilon_cap(params, qsel):
        raise DomainError(f"eps = {eps} outside (0, {epsilon_cap(params, qsel)})")
    return eps


def certify(params: ProblemParams) -> NonexistenceCertificate:
    """Build the full certificate ``(a, b)`` for an admissible ``(N, p)``.

    Both steps are evaluated at a common ``eps`` (the smaller of the two
    per-step choices) because the ``G1`` and ``G2`` bounds must hold at the
    same good radius.  ``a`` and ``b`` are the minima over the two steps.
    """
    qsel = select_q(params)
    derived = derive_exponents(params)
    s1 = step1_certify(params, derived, qsel)
    s2 = step2_certify(params, derived, qsel)
    eps = min(s1.eps, s2.eps)
    if s1.eps != eps:
        s1 = step1_certify(params, derived, qsel, eps)
    if s2.eps != eps:
        s2 = step2_certify(params, derived, qsel, eps)
    return NonexistenceCertificate(
        params=params,
        derived=derived,
        qsel=qsel,
        step1=s1,
        step2=s2,
        a=min(s1.a1_at_eps, s2.a2_at_eps),
        b=min(s1.b1, s2.b2),
    )


def tamper(cert: NonexistenceCertificate, path: str, value) -> NonexistenceCertificate:
    """Return a copy of ``cert`` with the dotted field ``path`` replaced."""
    head, _, rest = path.partition(".")
    if not rest:
        return replace(cert, **{head: value})
    return replace(cert, **{head: tamper(getattr(cert, head), rest, value)})


# -- serialization -----------------------------------------------------------


def rational_to_json(x):
    if x is None:
        return None
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return x
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(obj):
    if obj is None:
        return None
    if obj == "inf":
        return math.inf
    if isinstance(obj, float):
        return obj
    return Fraction(int(obj["num"]), int(obj["den"]))


def _fields_to_json(obj, skip=()):
    out = {}
    for name in obj.__dataclass_fields__:
        if name in skip:
            continue
        val = getattr(obj, name)
        out[name] = val if isinstance(val, str) else rational_to_json(val)
    return out


def certificate_to_json(cert: NonexistenceCertificate) -> dict:
    return {
        "params": {"dim": cert.params.dim, "p": rational_to_json(cert.params.p)},
        "derived": _fields_to_json(cert.derived),
        "qsel": _fields_to_json(cert.qsel),
        "step1": _fields_to_json(cert.step1),
        "step2": _fields_to_json(cert.step2),
        "a": rational_to_json(cert.a),
        "b": rational_to_json(cert.b),
    }


def certificate_from_json(obj: dict) -> NonexistenceCertificate:
    def build(cls, data):
        kwargs = {}
        for name in cls.__dataclass_fields__:
            val = data[name]
            tag = isinstance(val, str) and val != "inf"
            kwargs[name] = val if tag else rational_from_json(val)
        return cls(**kwargs)

    params = ProblemParams(int(obj["params"]["dim"]), rational_from_json(obj["params"]["p"]))
    return NonexistenceCertificate(
        params=params,
        derived=build(DerivedExponents, obj["derived"]),
        qsel=build(QSelection, obj["qsel"]),
        step1=build(Step1Certificate, obj["step1"]),
        step2=build(Step2Certificate, obj["step2"]),
        a=rational_from_json(obj["a"]),
        b=rational_from_json(obj["b"]),
    )
