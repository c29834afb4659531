"""Tunnelling exponents for a weak-pulse-assisted strong electric field.

Natural units throughout: m = 1, the strong field is a fraction of the
critical field E_S = m^2, times are in 1/m, and tunnelling exponents are in
units of E_S/E.
"""

__version__ = "0.1.0"

from .backgrounds import (
    FieldScales,
    PulseKind,
    SpectralFunction,
    WeakPulse,
    euclidean_potential,
    euclidean_profile,
    kappa_of_order,
    profile,
    spectral_function,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    GridError,
    RegimeWarning,
    SchwingerKitError,
    ShootingError,
    UnsupportedPulseError,
)
from .perturbative import (
    OrderConfig,
    SaddleDiagnostic,
    absorption_factor,
    first_order_exponent,
    higher_order_exponent,
    integral_condition,
    saddle_frequency,
    saddle_scan,
)
from .worldline import (
    Branch,
    CorrectionBlock,
    InstantonLoop,
    ReflectionSolution,
    StationaryAction,
    action_curve,
    correction_block,
    critical_gamma,
    delta_shift,
    reflection_solve,
    shoot_instanton,
    stationary_action,
    xi,
)

__all__ = [
    "__version__",
    "PulseKind", "WeakPulse", "FieldScales", "SpectralFunction",
    "profile", "euclidean_profile", "euclidean_potential",
    "spectral_function", "kappa_of_order",
    "Branch", "StationaryAction", "CorrectionBlock", "ReflectionSolution",
    "InstantonLoop", "critical_gamma", "correction_block", "xi", "delta_shift",
    "stationary_action", "action_curve", "reflection_solve", "shoot_instanton",
    "SaddleDiagnostic", "OrderConfig", "absorption_factor", "saddle_frequency",
    "saddle_scan", "integral_condition", "first_order_exponent",
    "higher_order_exponent",
    "SchwingerKitError", "DomainError", "ConvergenceError", "BracketError",
    "UnsupportedPulseError", "ShootingError", "GridError", "RegimeWarning",
]
