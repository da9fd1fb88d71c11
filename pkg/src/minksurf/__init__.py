"""Minimal space-like surfaces in Minkowski space-time from holomorphic generators.

Explicit solutions (K, kappa) of the natural PDE system, canonical
Weierstrass surface construction, finite-difference residual verification,
and the fractional-linear equivalence of generator pairs.
"""

__version__ = "0.1.0"

from .curvature import (
    alpha_from_any,
    alpha_from_eta,
    alpha_from_g,
    alpha_from_theta,
    alpha_from_w,
    curvatures,
)
from .errors import (
    DisconnectedBasepointError,
    EmptyAdmissibleSetError,
    InputError,
    MinksurfError,
    NumericError,
    SingularParamsError,
    UnwrapError,
)
from .expr import Expr, ExprError, differentiate, evaluate, parse, to_string
from .fields import (
    AdmissibilityMask,
    AlphaField,
    CurvatureField,
    GridSpec,
    Reason,
    ScalarField,
)
from .moebius import MoebiusParams, compose, identity_params, inverse, same_solution, transform
from .pairs import (
    HarmonicScalar,
    PairG,
    PairH,
    PairW,
    PairXi,
    admissibility,
    eta_from_xi,
    g_to_xi,
    h_to_w,
    make_rep,
    theta_from_w,
    w_to_g,
)
from .pdeverify import (
    LogPolarField,
    ResidualReport,
    check_harmonic,
    convergence_slope,
    laplacian,
    log_polar,
    refinement_study,
    residual_complex,
    residual_system1,
    residual_systemXY,
)
from .weierstrass import (
    PhiFrame,
    SecondFundamentalData,
    SurfaceJet,
    SurfaceMesh,
    curvatures_extrinsic,
    default_basepoint,
    export_mesh,
    integrate_lpath,
    integrate_surface,
    jet,
    mdot,
    phi_from_g,
    phi_from_h,
    phi_from_w,
    second_fundamental,
)
