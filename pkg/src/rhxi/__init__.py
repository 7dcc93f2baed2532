"""High-precision evaluation of the line integrals of xi(2s)/xi(s) and xi(s).

The package computes

    I(eps) = (1/pi) int_0^inf Re f(1/2 + eps + it) dt,   f(s) = xi(2s) / xi(s),

sweeps it over eps to look for jumps (poles of f off the critical line would
make I depend on eps), and checks its own quadrature against the closed form
of int xi(1/2 + eps + it) dt.
"""

from .context import EvalResult, Flag, PrecisionContext
from .errors import (
    CalibrationError,
    CircleContainsMultipleZeros,
    DomainError,
    MaxPanelsExceeded,
    NearPoleOnContour,
    NearZeroDivisor,
    NonFiniteIntegrand,
    NoSignChange,
    PoleError,
    PrecisionError,
    PreconditionError,
    RhxiError,
    StepTooCoarse,
)
from .quadrature import (
    ContourSpec,
    IntegralResult,
    IntegrationOptions,
    closed_form_j,
    i_of_eps,
    integrate_vertical,
    j_of_eps,
    reference_value,
    tail_bound,
)
from .special_functions import f_ratio, log_gamma, xi, xi_symmetry_residual, zeta
from .sweep import (
    JumpFlag,
    ResidueEstimate,
    SweepOptions,
    SweepResult,
    default_eps_grid,
    detect_jumps,
    inject_pole,
    residue_at,
    residue_from_jump,
    sweep,
)
from .zeros import ZeroList, refine_zero, scan_zeros

__version__ = "0.1.0"
