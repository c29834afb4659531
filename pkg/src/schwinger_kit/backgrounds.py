"""Composite background: weak-pulse profiles, Euclidean continuations, transforms.

The field is a uniform strong part plus a weak pulse, E(t) = E (1 + eps g(t))
along a fixed axis.  Natural units are used throughout: m = 1, the strong
field strength is stored as a fraction of the critical value E_S = m^2, and
times are in 1/m.

The module covers the Minkowski profiles g(t), their Euclidean continuations
(t -> i x4) together with the weak Euclidean potential G(x4) = int_0^x4 of
the continued profile, and the rescaled Fourier transforms x -> omega *
gtilde(omega x) used by the perturbative track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.special import erf

from . import specfun
from .errors import DomainError, GridError, UnsupportedPulseError

__all__ = [
    "PulseKind",
    "WeakPulse",
    "FieldScales",
    "SpectralFunction",
    "profile",
    "euclidean_profile",
    "euclidean_potential",
    "spectral_function",
    "kappa_of_order",
    "convolution_transform_check",
    "EXP_BUDGET",
]

# largest exponent (omega*x4)^(4N+2) we allow before exp() overflow
EXP_BUDGET = 700.0

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)


class PulseKind(Enum):
    SUPER_GAUSSIAN = "sg"
    GAUSSIAN = "gaussian"
    SAUTER = "sauter"
    MODIFIED_SAUTER = "modified-sauter"
    LORENTZIAN = "lorentzian"
    RECTANGULAR = "rectangular"

    @classmethod
    def parse(cls, name: str) -> "PulseKind":
        aliases = {
            "sg": cls.SUPER_GAUSSIAN,
            "super-gaussian": cls.SUPER_GAUSSIAN,
            "gaussian": cls.GAUSSIAN,
            "sauter": cls.SAUTER,
            "modified-sauter": cls.MODIFIED_SAUTER,
            "msauter": cls.MODIFIED_SAUTER,
            "lorentzian": cls.LORENTZIAN,
            "rectangular": cls.RECTANGULAR,
            "rect": cls.RECTANGULAR,
        }
        key = name.strip().lower()
        if key not in aliases:
            raise DomainError(f"unknown pulse kind '{name}'")
        return aliases[key]


@dataclass(frozen=True)
class WeakPulse:
    """Weak pulse riding on the strong static field.

    ``N`` is the super-Gaussian order parameter (profile exponent 4N+2) and
    is required exactly for that kind; the rectangular barrier is its
    declared N -> infinity limit and carries no N.
    """

    kind: PulseKind
    omega: float = 1.0
    N: Optional[int] = None

    def __post_init__(self) -> None:
        if not (self.omega > 0.0):
            raise DomainError(f"WeakPulse: omega must be > 0, got {self.omega}")
        if self.kind is PulseKind.SUPER_GAUSSIAN:
            if self.N is None or int(self.N) != self.N or self.N < 1:
                raise DomainError("WeakPulse: super-Gaussian needs integer N >= 1")
            object.__setattr__(self, "N", int(self.N))
        elif self.N is not None:
            raise DomainError(f"WeakPulse: kind {self.kind.value} carries no N")

    @property
    def order(self) -> int:
        """Profile exponent 4N+2 (super-Gaussian only)."""
        if self.kind is not PulseKind.SUPER_GAUSSIAN:
            raise UnsupportedPulseError("order is defined for the super-Gaussian only")
        return 4 * self.N + 2


@dataclass(frozen=True)
class FieldScales:
    """Strong-field scales: E as a fraction of E_S = m^2, ratio eps, omega.

    The combined Keldysh parameter gamma = m*omega/E reduces to
    omega/E_over_ES with m = 1.
    """

    E_over_ES: float
    eps: float
    omega: float
    m: float = field(default=1.0, init=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.E_over_ES < 1.0):
            raise DomainError(f"FieldScales: E_over_ES must be in (0,1), got {self.E_over_ES}")
        if not (0.0 <= self.eps <= 0.1):
            raise DomainError(f"FieldScales: eps must be in [0, 0.1], got {self.eps}")
        if not (self.omega > 0.0):
            raise DomainError(f"FieldScales: omega must be > 0, got {self.omega}")

    @property
    def gamma(self) -> float:
        return self.omega / self.E_over_ES

    @classmethod
    def from_gamma(cls, E_over_ES: float, eps: float, gamma: float) -> "FieldScales":
        if not (gamma > 0.0):
            raise DomainError(f"FieldScales: gamma must be > 0, got {gamma}")
        return cls(E_over_ES=E_over_ES, eps=eps, omega=gamma * E_over_ES)


# ---------------------------------------------------------------------------
# Minkowski profiles
# ---------------------------------------------------------------------------

def profile(pulse: WeakPulse, t: Union[float, np.ndarray]):
    """Minkowski weak profile g(t); accepts scalars or arrays."""
    tau = pulse.omega * np.asarray(t, dtype=float)
    kind = pulse.kind
    if kind is PulseKind.SUPER_GAUSSIAN:
        with np.errstate(over="ignore"):  # tau^M -> inf gives exp(-inf) = 0
            out = np.exp(-(tau ** (4 * pulse.N + 2)))
    elif kind is PulseKind.GAUSSIAN:
        out = np.exp(-(tau ** 2))
    elif kind is PulseKind.SAUTER:
        out = 1.0 / np.cosh(tau) ** 2
    elif kind is PulseKind.MODIFIED_SAUTER:
        out = 1.0 / np.cosh(tau)
    elif kind is PulseKind.LORENTZIAN:
        out = (1.0 + tau ** 2) ** (-1.5)
    elif kind is PulseKind.RECTANGULAR:
        out = (np.abs(tau) <= 1.0).astype(float)
    else:  # pragma: no cover
        raise UnsupportedPulseError(f"profile: unhandled kind {kind}")
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Euclidean continuations
# ---------------------------------------------------------------------------

def euclidean_profile(pulse: WeakPulse, x4: float) -> float:
    """Euclidean continuation of the profile, g(i x4); equals G'(x4).

    For the super-Gaussian this is exp((omega x4)^(4N+2)) exactly.  Pole
    kinds (Sauter-like at omega x4 = pi/2, Lorentzian at omega x4 = 1,
    rectangular wall at omega x4 = 1) raise once the pole is reached.
    """
    y = pulse.omega * x4
    kind = pulse.kind
    if kind is PulseKind.SUPER_GAUSSIAN:
        w = y ** (4 * pulse.N + 2)
        if w > EXP_BUDGET:
            raise DomainError(
                f"euclidean_profile: exponent {w:g} exceeds budget {EXP_BUDGET:g}"
            )
        return math.exp(w)
    if kind is PulseKind.GAUSSIAN:
        if y * y > EXP_BUDGET:
            raise DomainError("euclidean_profile: Gaussian exponent overflow")
        return math.exp(y * y)
    if kind is PulseKind.LORENTZIAN:
        if abs(y) >= 1.0:
            raise DomainError("euclidean_profile: Lorentzian pole at |omega x4| >= 1")
        return (1.0 - y * y) ** (-1.5)
    if kind is PulseKind.SAUTER:
        if abs(y) >= 0.5 * math.pi:
            raise DomainError("euclidean_profile: Sauter pole at |omega x4| >= pi/2")
        return 1.0 / math.cos(y) ** 2
    if kind is PulseKind.MODIFIED_SAUTER:
        if abs(y) >= 0.5 * math.pi:
            raise DomainError("euclidean_profile: pole at |omega x4| >= pi/2")
        return 1.0 / math.cos(y)
    if kind is PulseKind.RECTANGULAR:
        if abs(y) >= 1.0:
            raise DomainError("euclidean_profile: rectangular wall at |omega x4| >= 1")
        return 1.0
    raise UnsupportedPulseError(f"euclidean_profile: unhandled kind {kind}")  # pragma: no cover


def euclidean_potential(pulse: WeakPulse, x4: float) -> float:
    """Weak Euclidean potential G(x4) = int_0^x4 exp((omega s)^(4N+2)) ds.

    Evaluated through the real continuation of the generalized exponential
    integral.  The real part alone differs from the manifestly real integral
    by a constant, which is restored here:

        G(x4) = [Gamma(1/M) cos(pi/M) - y * Re E_p(-y^M)] / (M * omega),

    with M = 4N+2, p = (M-1)/M and y = omega*x4.  Only the super-Gaussian
    carries this closed form.

    Raises
    ------
    DomainError
        If (omega x4)^(4N+2) exceeds the exponent budget (~700); callers
        must stay in the bracketed regime.
    UnsupportedPulseError
        For kinds other than the super-Gaussian.
    """
    if pulse.kind is not PulseKind.SUPER_GAUSSIAN:
        raise UnsupportedPulseError(
            "euclidean_potential: closed form exists for the super-Gaussian only"
        )
    if x4 < 0.0:
        return -euclidean_potential(pulse, -x4)
    if x4 == 0.0:
        return 0.0
    M = 4 * pulse.N + 2
    y = pulse.omega * x4
    u = y ** M
    if u == 0.0:
        # y^M underflowed: the integrand is 1 + O(u), so G(x4) = x4 here
        return x4
    if u > EXP_BUDGET:
        raise DomainError(
            f"euclidean_potential: (omega x4)^M = {u:g} exceeds budget {EXP_BUDGET:g}"
        )
    p = (M - 1.0) / M
    rho = 1.0 / M
    const = math.gamma(rho) * math.cos(math.pi * rho)
    return (const - y * specfun.expint_re(p, u)) / (M * pulse.omega)


# ---------------------------------------------------------------------------
# Fourier transforms (rescaled: x -> omega * gtilde(omega x))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralFunction:
    """Rescaled Fourier transform of a weak pulse.

    Calling it with x = varpi/omega returns omega * gtilde(omega x), which
    is dimensionless; ``kappa`` is the Gaussian-to-rectangle width ratio of
    the super-Gaussian construction (0 for the exact rectangular limit).
    """

    kind: PulseKind
    kappa: float = 0.0

    def __call__(self, x: Union[float, np.ndarray]):
        xs = np.asarray(x, dtype=float)
        kind = self.kind
        if kind is PulseKind.LORENTZIAN:
            flat = np.abs(np.atleast_1d(xs))
            vals = np.array(
                [xi * specfun.bessel_k1(xi) if xi > 0.0 else 1.0 for xi in flat]
            )
            out = _SQRT_2_OVER_PI * vals.reshape(xs.shape)
        elif kind is PulseKind.SAUTER:
            with np.errstate(over="ignore"):
                core = np.where(
                    xs != 0.0,
                    xs / np.sinh(0.5 * math.pi * np.where(xs != 0.0, xs, 1.0)),
                    2.0 / math.pi,
                )
            out = _SQRT_PI_OVER_2 * core
        elif kind is PulseKind.MODIFIED_SAUTER:
            with np.errstate(over="ignore"):  # cosh -> inf gives 0
                out = _SQRT_PI_OVER_2 / np.cosh(0.5 * math.pi * xs)
        elif kind in (PulseKind.SUPER_GAUSSIAN, PulseKind.RECTANGULAR):
            sinc = np.where(xs != 0.0, np.sin(xs) / np.where(xs != 0.0, xs, 1.0), 1.0)
            out = _SQRT_2_OVER_PI * sinc * np.exp(-0.25 * (self.kappa * xs) ** 2)
        elif kind is PulseKind.GAUSSIAN:
            out = np.exp(-0.25 * xs ** 2) / math.sqrt(2.0)
        else:  # pragma: no cover
            raise UnsupportedPulseError(f"SpectralFunction: unhandled kind {kind}")
        return out if out.ndim else float(out)


def kappa_of_order(N: int) -> float:
    """Width ratio of the convolution construction: kappa = 1/N."""
    if int(N) != N or N < 1:
        raise DomainError(f"kappa_of_order: N must be a positive integer, got {N}")
    return 1.0 / N


def spectral_function(pulse: WeakPulse) -> SpectralFunction:
    """Rescaled transform x -> omega*gtilde(omega x) for the pulse kind."""
    if pulse.kind is PulseKind.SUPER_GAUSSIAN:
        return SpectralFunction(pulse.kind, kappa_of_order(pulse.N))
    return SpectralFunction(pulse.kind, 0.0)


def convolution_transform_check(kappa: float, x_grid) -> np.ndarray:
    """Numerical transform of the normalized Gaussian-rectangle convolution.

    Validation oracle for the closed-form super-Gaussian transform: the
    convolution (Gaussian of width kappa) x (rectangle of half-width 1) is
    normalized to unit peak and cosine-transformed on a dense grid.  Grid
    spacing kappa/8 and a domain of at least 12 rectangle widths resolve
    both scales; a bandwidth check guards the requested x values.

    Raises
    ------
    DomainError
        If kappa is outside (0, 0.5].
    GridError
        If the sampling cannot resolve cos(x * tau) for the largest x.
    """
    if not (0.0 < kappa <= 0.5):
        raise DomainError(f"convolution_transform_check: kappa must be in (0, 0.5], got {kappa}")
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    dtau = kappa / 8.0
    if xs.size and np.max(np.abs(xs)) * dtau > 0.5:
        raise GridError(
            "convolution_transform_check: grid spacing violates the bandwidth "
            f"criterion for x_max={np.max(np.abs(xs)):g}"
        )
    L = max(6.0, 1.0 + 10.0 * kappa)
    tau = np.arange(0.0, L + dtau, dtau)
    # exact convolution value (the transform stays numerical)
    conv = 0.5 * (erf((tau + 1.0) / kappa) - erf((tau - 1.0) / kappa))
    conv /= erf(1.0 / kappa)  # unit peak
    # cosine transform: sqrt(2/pi) * int_0^L conv(tau) cos(x tau) dtau
    weights = np.full_like(tau, dtau)
    weights[0] = 0.5 * dtau
    weights[-1] = 0.5 * dtau
    out = _SQRT_2_OVER_PI * (np.cos(np.outer(xs, tau)) @ (conv * weights))
    return out
