"""qtheta: exact truncated q-series arithmetic and partial theta identities."""

from .errors import (
    EmptyWindow,
    InsufficientWindow,
    NonTruncatable,
    NotInvertible,
    OutOfWindow,
    PoleAtRequestedPoint,
    PoleAtZero,
    QThetaError,
    UnknownIdentity,
)
from .series import (
    FORMAL,
    EvalContext,
    Monomial,
    Series,
    Window,
    add,
    coeff_at,
    equal_on_window,
    eval_monomial,
    first_difference,
    format_rat,
    invert,
    mono,
    mul,
    parse_rat,
)
from .qfun import (
    apply_poch,
    complete_theta,
    partial_theta,
    phi21,
    poch_finite,
    poch_inf,
    psi,
    tau,
    tau_monomial,
    triple_product_rhs,
)
from .kernels import (
    L_kernel,
    L_shifted,
    P_kernel,
    P_shifted,
    U_m,
    V_mn,
    f_kernel,
    g_n,
    t_summand,
)
from .bailey import (
    BaileyPair,
    beta_from_alpha,
    t0_pair_1,
    t0_pair_2,
    unit_pair,
    warnaar_L_transform_sides,
)
from .identities import (
    IdentityDescriptor,
    VerificationReport,
    build_registry,
    expand,
    list_identities,
    sample_points,
    verify,
    verify_points,
)

__version__ = "1.0.0"

__all__ = [
    "QThetaError", "EmptyWindow", "OutOfWindow", "NotInvertible", "PoleAtZero",
    "NonTruncatable", "InsufficientWindow", "UnknownIdentity",
    "PoleAtRequestedPoint",
    "FORMAL", "Monomial", "mono", "Window", "Series", "EvalContext",
    "add", "mul", "coeff_at", "invert", "eval_monomial",
    "first_difference", "equal_on_window", "format_rat", "parse_rat",
    "tau", "tau_monomial", "apply_poch", "poch_finite", "poch_inf",
    "partial_theta", "psi", "complete_theta", "triple_product_rhs", "phi21",
    "L_kernel", "L_shifted", "P_kernel", "P_shifted", "t_summand",
    "U_m", "V_mn", "f_kernel", "g_n",
    "BaileyPair", "beta_from_alpha", "unit_pair", "t0_pair_1", "t0_pair_2",
    "warnaar_L_transform_sides",
    "IdentityDescriptor", "VerificationReport", "build_registry",
    "list_identities", "sample_points", "verify", "verify_points", "expand",
    "__version__",
]
