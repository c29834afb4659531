"""Fourier-space track: matrix element, saddle diagnostics, photon orders.

The weak pulse enters perturbatively through its transform; the strong
background supplies the exponential matrix element for absorbing energy
varpi.  Exponents are reported as logs (the probability contribution is
exp of the returned value times the stated scale), and the first-order
suppression exponent is normalized to the rate convention of the worldline
track so the two can be compared directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfun
from .backgrounds import FieldScales, PulseKind, WeakPulse, spectral_function
from .errors import DomainError, RegimeWarning, UnsupportedPulseError

__all__ = [
    "SaddleDiagnostic",
    "OrderConfig",
    "absorption_factor",
    "log_absorption_factor",
    "saddle_frequency",
    "saddle_scan",
    "integral_condition",
    "first_order_exponent",
    "higher_order_exponent",
    "photon_frequencies",
]

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)

# exponential large-x tail constants of the catalogued transforms
_TAIL_CONST = {
    PulseKind.SAUTER: 0.5 * math.pi,
    PulseKind.MODIFIED_SAUTER: 0.5 * math.pi,
    PulseKind.LORENTZIAN: 1.0,
    PulseKind.RECTANGULAR: 1.0,
}

# validity window of the saddle frequency (gamma * E/E_S below this)
SADDLE_VALIDITY = 1e-2


@dataclass(frozen=True)
class SaddleDiagnostic:
    """Saddle-condition residual at one gamma.

    ``derivative_at_sp`` is the dimensionless log-derivative of the product
    (transform x matrix element) at the saddle frequency, scaled by omega/m,
    with the sinc oscillation averaged over one period (principal value; the
    pointwise value, which spikes at the sinc zeros, is kept separately in
    ``oscillation``).
    """

    gamma: float
    E_over_ES: float
    varpi_sp: float
    derivative_at_sp: float
    oscillation: float
    valid: bool


@dataclass(frozen=True)
class OrderConfig:
    """Photon-order bookkeeping: total order, absorbed split, energy share.

    ``sigma`` is the absorbed energy over 2m; energy conservation ties the
    emitted frequencies to it (see :func:`photon_frequencies`).
    """

    n_photons: int
    j_split: int
    sigma: float

    def __post_init__(self) -> None:
        if int(self.n_photons) != self.n_photons or self.n_photons < 1:
            raise DomainError(f"OrderConfig: n_photons must be a positive integer")
        if int(self.j_split) != self.j_split or not (1 <= self.j_split <= self.n_photons):
            raise DomainError(
                f"OrderConfig: need 1 <= j_split <= n_photons, got {self.j_split}"
            )
        if not (0.0 < self.sigma < 1.0):
            raise DomainError(f"OrderConfig: sigma must lie in (0,1), got {self.sigma}")

    def validate_frequencies(self, freqs: Sequence[float], m: float = 1.0) -> None:
        """Reject frequency assignments violating energy conservation.

        The first ``j_split`` frequencies must sum to 2 m sigma and the full
        set must sum to zero.
        """
        if len(freqs) != self.n_photons:
            raise DomainError(
                f"OrderConfig: expected {self.n_photons} frequencies, got {len(freqs)}"
            )
        total = 2.0 * m * self.sigma
        scale = max(1.0, abs(total))
        if abs(sum(freqs[: self.j_split]) - total) > 1e-9 * scale:
            raise DomainError("OrderConfig: absorbed frequencies do not sum to 2 m sigma")
        if abs(2.0 * m * self.sigma + sum(freqs[self.j_split:])) > 1e-9 * scale:
            raise DomainError("OrderConfig: energy conservation violated")


def photon_frequencies(cfg: OrderConfig, m: float = 1.0) -> list[float]:
    """Saddle-point frequency assignment for the photon-order prefactor.

    Interior absorbed legs each carry 2 m sigma/(J-1) and interior emitted
    legs -2 m sigma/(N-J-1); the first and last entries take up whatever
    the definition of sigma and overall energy conservation leave over.
    Requires at least one emitted leg (j_split < n_photons).
    """
    if cfg.j_split >= cfg.n_photons:
        raise DomainError(
            "photon_frequencies: energy conservation needs an emitted frequency "
            "(j_split < n_photons)"
        )
    total = 2.0 * m * cfg.sigma
    J, n = cfg.j_split, cfg.n_photons
    if J >= 2:
        interior = [total / (J - 1)] * (J - 1)
        absorbed = [total - sum(interior)] + interior
    else:
        absorbed = [total]
    k = n - J - 1
    if k >= 1:
        interior = [-total / k] * k
        emitted = interior + [-total - sum(interior)]
    else:
        emitted = [-total]
    freqs = absorbed + emitted
    cfg.validate_frequencies(freqs, m)
    return freqs


# ---------------------------------------------------------------------------
# matrix element and saddle frequency
# ---------------------------------------------------------------------------

def log_absorption_factor(varpi: float, E_over_ES: float) -> float:
    """Log of the matrix element for absorbing energy varpi (m = 1).

    ln Pi = (E_S/E) ([v sqrt(1-v^2) + arcsin v] - pi/2) with v = varpi/2;
    zero (unsuppressed) at varpi = 2m.
    """
    if varpi < 0.0 or varpi > 2.0:
        raise DomainError(
            f"absorption factor: varpi={varpi} outside [0, 2m] leaves the real domain"
        )
    v = 0.5 * varpi
    return (v * math.sqrt(1.0 - v * v) + math.asin(v) - 0.5 * math.pi) / E_over_ES


def absorption_factor(varpi: float, E_over_ES: float) -> float:
    """Matrix element exp{(E_S/E)([v sqrt(1-v^2)+arcsin v] - pi/2)}, v = varpi/2m.

    Underflows to zero for deep suppression (small E_over_ES away from the
    threshold varpi = 2m); use :func:`log_absorption_factor` there.
    """
    return math.exp(log_absorption_factor(varpi, E_over_ES))


def saddle_frequency(gamma: float) -> float:
    """Saddle frequency 2m sqrt(1 - 1/gamma^2); NaN marks gamma < 1."""
    if gamma < 1.0:
        return math.nan
    return 2.0 * math.sqrt(1.0 - 1.0 / (gamma * gamma))


def saddle_scan(
    E_over_ES: float,
    gamma_grid: Sequence[float],
    kappa: float = 1e-4,
) -> list[SaddleDiagnostic]:
    """Evaluate the saddle condition at the saddle frequency across gamma.

    The rectangular-limit transform is realized at small ``kappa``.  The
    scan works entirely in log space: the log-derivative of the product
    (omega gtilde) * Pi at x_sp = varpi_sp/omega is

        cot x - 1/x - kappa^2 x/2 + gamma sqrt(1 - v(x)^2),

    scaled by omega/m.  ``derivative_at_sp`` replaces cot by its vanishing
    principal-value period average (the pointwise value is kept as
    ``oscillation`` and spikes near sinc zeros, flagged non-finite if a
    zero is hit).
    """
    out = []
    for gamma in gamma_grid:
        gamma = float(gamma)
        if gamma <= 1.0:
            raise DomainError(f"saddle_scan: gamma grid must lie in (1, inf), got {gamma}")
        omega = gamma * E_over_ES  # m = 1
        vsp = saddle_frequency(gamma)
        x_sp = vsp / omega
        v = 0.5 * vsp
        envelope = gamma * math.sqrt(1.0 - v * v) - 1.0 / x_sp - 0.5 * kappa * kappa * x_sp
        deriv = omega * envelope
        s = math.sin(x_sp)
        osc = omega * (envelope + math.cos(x_sp) / s) if s != 0.0 else math.inf
        valid = gamma * E_over_ES <= SADDLE_VALIDITY * (1.0 + 1e-12)
        out.append(SaddleDiagnostic(gamma, E_over_ES, vsp, deriv, osc, valid))
    return out


# ---------------------------------------------------------------------------
# integral condition
# ---------------------------------------------------------------------------

def integral_condition(pulse: WeakPulse) -> float:
    """Half-line integral of the rescaled transform, int_0^inf omega gtilde dx.

    Exponential-tail pulses return sqrt(pi/2); the super-Gaussian at finite
    order returns strictly less (its value is sqrt(pi/2) erf(1/kappa) up to
    quadrature error).  The exact rectangular limit uses the analytic sinc
    integral instead of quadrature.
    """
    kind = pulse.kind
    if kind is PulseKind.RECTANGULAR:
        return _SQRT_2_OVER_PI * 0.5 * math.pi
    if kind is PulseKind.LORENTZIAN:
        def f(x: float) -> float:
            return _SQRT_2_OVER_PI * (x * specfun.bessel_k1(x) if x > 0.0 else 1.0)
        return specfun.integrate_semiline(f, tol=1e-9).value
    if kind is PulseKind.SAUTER:
        def f(x: float) -> float:
            z = 0.5 * math.pi * x
            if z > 700.0:
                return 0.0
            return _SQRT_PI_OVER_2 * (x / math.sinh(z) if x > 0.0 else 2.0 / math.pi)
        return specfun.integrate_semiline(f, tol=1e-9).value
    if kind is PulseKind.MODIFIED_SAUTER:
        def f(x: float) -> float:
            z = 0.5 * math.pi * x
            return _SQRT_PI_OVER_2 / math.cosh(z) if z <= 700.0 else 0.0
        return specfun.integrate_semiline(f, tol=1e-9).value
    if kind is PulseKind.SUPER_GAUSSIAN:
        sf = spectral_function(pulse)
        zeros = (k * math.pi for k in range(1, 200001))
        return specfun.integrate_semiline(
            lambda x: float(sf(x)), tol=1e-9, zeros=zeros, max_intervals=200000
        ).value
    if kind is PulseKind.GAUSSIAN:
        return specfun.integrate_semiline(
            lambda x: math.exp(-0.25 * x * x) / math.sqrt(2.0), tol=1e-9
        ).value
    raise UnsupportedPulseError(f"integral_condition: unhandled kind {kind}")  # pragma: no cover


# ---------------------------------------------------------------------------
# order-by-order exponents
# ---------------------------------------------------------------------------

def first_order_exponent(pulse: WeakPulse, scales: FieldScales) -> float:
    """Suppression exponent of the first-order probability term (units E_S/E).

    Combines the exponential large-x estimate of the transform (tail
    constant c) with the matrix element at the saddle frequency; the
    |amplitude|^2 doubling and the rate convention cancel, so on the
    exponential-tail catalogue this equals the dynamical stationary action
    of the worldline track.  Below gamma = c the saddle collapses to the
    origin and the static value pi is returned.
    """
    c = _TAIL_CONST.get(pulse.kind)
    if c is None:
        raise UnsupportedPulseError(
            f"first_order_exponent: no exponential tail estimate for {pulse.kind.value}"
        )
    gamma = scales.gamma
    if gamma <= c:
        return math.pi
    v = math.sqrt(1.0 - (c / gamma) ** 2)
    f = v * math.sqrt(1.0 - v * v) + math.asin(v)
    return 4.0 * c * v / gamma - 2.0 * f + math.pi


def higher_order_exponent(
    pulse: WeakPulse,
    scales: FieldScales,
    cfg: OrderConfig,
) -> float:
    """Log of the n-photon probability contribution at its saddle.

    For the Lorentzian (and the rectangular limit, whose sin-product
    prefactor reduces to the same exponential) the result

        -(4 m^2/E) Sigma_sp/gamma
        + (2 m^2/E) [Sigma_sp sqrt(1-Sigma_sp^2) + arcsin Sigma_sp - pi/2]

    with Sigma_sp = sqrt(1 - 1/gamma^2) is independent of the photon order;
    ``cfg`` only carries the bookkeeping.  A RegimeWarning flags
    2 m Sigma_sp < 10 omega, where the large-frequency estimate degrades.
    """
    if pulse.kind not in (PulseKind.LORENTZIAN, PulseKind.RECTANGULAR):
        raise UnsupportedPulseError(
            "higher_order_exponent: Lorentzian or rectangular pulses only"
        )
    gamma = scales.gamma
    if gamma <= 1.0:
        raise DomainError(f"higher_order_exponent: below threshold (gamma={gamma} <= 1)")
    sigma_sp = math.sqrt(1.0 - 1.0 / (gamma * gamma))
    if 2.0 * sigma_sp < 10.0 * scales.omega:
        warnings.warn(
            f"higher_order_exponent: 2 m Sigma_sp = {2*sigma_sp:g} is not large "
            f"against omega = {scales.omega:g}",
            RegimeWarning,
        )
    E = scales.E_over_ES
    bracket = sigma_sp * math.sqrt(1.0 - sigma_sp ** 2) + math.asin(sigma_sp) - 0.5 * math.pi
    return -(4.0 / E) * sigma_sp / gamma + (2.0 / E) * bracket
