"""Analysis on Q_p: wavelets, the Vladimirov operator, Green functions and point interactions."""

from .cyclotomic import Cyclo
from .errors import DiagonalDivergenceError, NotInL2Error, RangeError, SingularEtaError, UnboundedTailError
from .green import (
    DeltaFunctional,
    GreenFunction,
    continuity_bound,
    delta_pairing,
    diagonal_value,
    green_coefficient,
    green_eval,
    green_norm_squared,
    half_power_membership,
    radial_oracle,
    weak_residual,
)
from .kernels import BACKEND
from .padic_core import (
    Ball,
    BallRelation,
    PadicRational,
    UnitPhase,
    ball_relation,
    character,
    fractional_part,
    haar_measure,
    norm,
    valuation,
)
from .realization import (
    BoundaryData,
    DomainElement,
    InteractionConfig,
    RMatrix,
    adjoint_apply,
    build_r_matrix,
    construct_domain_element,
    eta_transform_check,
    friedrichs_domain_check,
    gamma_maps,
    green_identity_defect,
    is_eta_self_adjoint,
    is_self_adjoint,
    realization_domain_check,
)
from .schwartz import TestFunction, canonicalize, fourier, integrate, inner_product
from .vladimirov import (
    Counterexample,
    SpectralMultiplier,
    apply_spectral,
    counterexample_value,
    dalpha_point_oracle,
    domain_membership_partial,
)
from .wavelets import WaveletExpansion, WaveletIndex, expand_test_function, gram_window, point_eval, wavelet_eval

__version__ = "0.1.0"
