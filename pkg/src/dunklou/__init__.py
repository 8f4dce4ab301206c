"""Exact and numerical calculus for reflection-symmetric OU diffusions.

The package computes everything twice where it matters: once exactly on
polynomials (rational arithmetic end to end) and once numerically through
the positivity-preserving kernel, then certifies that the two paths agree.
"""

from .rootsys import (
    CapabilityError,
    GroupKind,
    RootSystem,
    parse_group,
    rank1,
    symmetric_group,
    z2power,
)
from .polyalg import (
    CrossPathError,
    DegreeCapError,
    ExactDivisionError,
    Polynomial,
    PolyVector,
    carre_du_champ,
    divided_difference,
    dunkl_derivative,
    dunkl_gradient,
    dunkl_laplacian,
    ou_generator,
    parse_poly,
    poly_str,
    reflect_poly,
)
from .dunklkernel import ek, ek_1d, ek_log, series_build
from .quadrature import (
    QuadratureError,
    QuadratureRule,
    gauss_rule,
    integrate_mk,
    integrate_mk_exact,
    integrate_wk,
    normalization_ck,
    rule_1d,
)
from .spectral import (
    EigenBasis,
    EigenGateError,
    build_basis,
    graded_parts,
    graded_weights,
    ou_spectral,
    psi_value,
)
from .semigroup import (
    OuEvaluator,
    dunkl_apply_numeric,
    kernel_K,
    kernel_Q,
    kernel_upper_estimate,
    ou_gaussian_quadrature,
    ou_quadrature,
)
from .inequalities import (
    CheckReport,
    FunctionSpec,
    check_entropy_bounds,
    check_gradient_bound,
    check_poincare_sandwich,
    check_reverse_poincare,
    entropy,
    polynomial_battery,
    positive_battery,
    reports_to_csv,
    reports_to_json,
    taylor_table,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "CheckReport",
    "CrossPathError",
    "DegreeCapError",
    "EigenBasis",
    "EigenGateError",
    "ExactDivisionError",
    "FunctionSpec",
    "GroupKind",
    "OuEvaluator",
    "PolyVector",
    "Polynomial",
    "QuadratureError",
    "QuadratureRule",
    "RootSystem",
    "build_basis",
    "carre_du_champ",
    "check_entropy_bounds",
    "check_gradient_bound",
    "check_poincare_sandwich",
    "check_reverse_poincare",
    "divided_difference",
    "dunkl_apply_numeric",
    "dunkl_derivative",
    "dunkl_gradient",
    "dunkl_laplacian",
    "ek_1d",
    "ek_log",
    "ek",
    "entropy",
    "gauss_rule",
    "graded_parts",
    "graded_weights",
    "integrate_mk",
    "integrate_mk_exact",
    "integrate_wk",
    "kernel_K",
    "kernel_Q",
    "kernel_upper_estimate",
    "normalization_ck",
    "ou_gaussian_quadrature",
    "ou_generator",
    "ou_quadrature",
    "ou_spectral",
    "parse_group",
    "parse_poly",
    "poly_str",
    "polynomial_battery",
    "positive_battery",
    "psi_value",
    "rank1",
    "reflect_poly",
    "reports_to_csv",
    "reports_to_json",
    "rule_1d",
    "series_build",
    "symmetric_group",
    "taylor_table",
    "z2power",
    "__version__",
]
