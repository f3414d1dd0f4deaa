"""Identity, integral-formula and rigidity checks."""
from .boundary import boundary_hessian_check, contact_angle
from .identities import (
    IdentityReport,
    check_divergence_formulas,
    check_integral_identity,
    check_minkowski,
    mean_curvature_balance,
    sigma_wronskian_integral,
)
from ..pfunction import PFunctionField, p_function
