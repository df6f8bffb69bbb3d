"""Twisted Barnes multiple zeta functions: continuation by Hankel contours,
the transformation group G_N and its fixed points, residue series and
Kronecker limit identities."""
from .applications import (
    RationalityVerdict,
    detect_rational,
    example2_chain,
    gamma_product,
    kronecker_limit,
    lambert_ex1,
    lambert_ex2,
    lambert_ex2_twosided,
)
from .contour import (
    Pole,
    QuadratureConfig,
    L_extended,
    enumerate_poles,
    epsilon_select,
    hankel_L,
    residue_at,
    rho,
    rho_relation_check,
    verify_transform,
)
from .domain import DomainPoint, classify, in_D_psi, pi_projection, trace
from .errors import (
    BZetaError,
    CaseAmbiguityError,
    ConvergenceError,
    DomainError,
    NotFixedError,
    PreconditionError,
    TruncationError,
)
from .evaluator import (
    bernoulli_gen,
    coeff_structured,
    f_test,
    laurent_coeff_F,
    residue_at_integer,
    special_value,
    zeta_series,
)
from .group import (
    GroupElement,
    act,
    compose,
    fixed_point_space,
    inverse,
    is_fixed,
    j_factor,
    psi_angle,
)
from .numeric import PrecisionConfig, TruncatedLaurentSeries, cpow, e2pi, gamma
from .result import EvalResult

__version__ = "0.1.0"
