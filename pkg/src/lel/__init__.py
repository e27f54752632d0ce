"""Exponent certificates and radial numerics for ``Delta u + u^p = 0``."""

from .exponents import (
    Admissibility,
    CertificateError,
    DomainError,
    NonexistenceCertificate,
    ProblemParams,
    RefusedError,
    admissible,
    certificate_from_json,
    certificate_to_json,
    certify,
    derive_exponents,
    select_q,
    step1_certify,
    step2_certify,
    tamper,
    to_rational,
)
from .kernels import BACKEND
from .pohozaev import (
    EnergyCurve,
    PohozaevReport,
    energy_curve,
    energy_F,
    feedback_check,
    feedback_constant,
    pohozaev_sides,
    surface_G1,
    surface_G2,
)
from .radial import (
    BubbleParams,
    IntegrationError,
    RadialProfile,
    bubble_check,
    bubble_profile,
    bubble_value,
    pde_residual,
    rescale,
    shoot,
)
from .sweep import CertificateRow, sweep, table_to_csv
from .verify import Verification, verify_certificate

__version__ = "0.1.0"
