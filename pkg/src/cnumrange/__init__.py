"""c-numerical ranges of matrices and finite-rank operators.

``W_c(A) = { sum_j c_j <A e_j, e_j> : (e_1, ..., e_k) orthonormal }`` is computed
through its support function ``h(theta) = M_c(Re(e^{i theta} A))``, a weighted
sum of eigenvalues of a Hermitian matrix.
"""

from .coefficients import CoefficientVector, Regime, adjusted, classify_regime, r_c_is_norm
from .closedform import (
    EllipseDescriptor,
    is_ellipse,
    rank1_range,
    rank2_diag_range,
    rank2_ellipse,
    rank2_nonellipse_support,
    symmetry_predict,
    trace_candidates,
)
from .errors import (
    CNRError,
    ConfigError,
    ContractError,
    DimensionError,
    InconsistencyError,
    NumericError,
    ParseError,
    ShapeError,
)
from .linalg import INFINITE, OperatorModel, as_operator
from .numrange import (
    Interval,
    RangeRegion,
    boundary,
    contains,
    interval,
    is_symmetric,
    radius,
    regions_equal,
    selfadjoint_interval,
    selfadjoint_interval_infinite,
    support_value,
)

__version__ = "0.1.0"
