"""Nonperturbative track: stationary tunnelling action and its oracles.

Three independent routes to the leading tunnelling exponent (reported in
units of E_S/E throughout):

1. ``stationary_action``: the closed form pi for gamma below the critical
   threshold, else 2 x sqrt(1-x^2) + 2 arcsin(x), with the reflection
   fraction x built from the threshold gamma_crit, and for the
   super-Gaussian a correction shift delta = xi * gamma_crit obtained from
   a truncated series solution of the reflection equation.
2. ``reflection_solve``: the transcendental reflection equation
   eps * G(x4*) = gamma/omega solved exactly (log-domain root find).
3. ``shoot_instanton``: direct integration of the closed Euclidean
   instanton orbit (a genuine ODE boundary-value solve, no reflection-point
   algebra), used as the numerical oracle for the other two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import specfun
from .backgrounds import (
    EXP_BUDGET,
    FieldScales,
    PulseKind,
    WeakPulse,
    euclidean_potential,
)
from .errors import (
    BracketError,
    DomainError,
    ShootingError,
    UnsupportedPulseError,
)

__all__ = [
    "Branch",
    "StationaryAction",
    "CorrectionBlock",
    "ReflectionSolution",
    "InstantonLoop",
    "critical_gamma",
    "sg_critical_gamma",
    "correction_block",
    "xi",
    "delta_shift",
    "stationary_action",
    "action_curve",
    "reflection_solve",
    "shoot_instanton",
]


class Branch(Enum):
    STATIC = "static"
    DYNAMICAL = "dynamical"


@dataclass(frozen=True)
class StationaryAction:
    """Closed-form stationary action at one gamma (units E_S/E)."""

    gamma: float
    action: float
    branch: Branch
    x4_frac: float       # reflection point over loop radius, clamped to <= 1
    gamma_crit: float
    delta: float
    xi: float


@dataclass(frozen=True)
class CorrectionBlock:
    """Ingredients of the truncated-series reflection correction.

    ``xi = -numerator / (alpha * denominator)`` and the super-Gaussian
    shift is delta = xi * gamma_crit.  ``ei0/ei1/ei2`` are the real
    exponential-integral values at orders p, p-1, p-2 with p=(4N+1)/(4N+2),
    argument -alpha, and alpha = ln(1/eps) for every N.
    """

    alpha: float
    ei0: float
    ei1: float
    ei2: float
    denominator: float
    numerator: float


@dataclass(frozen=True)
class ReflectionSolution:
    """Exact reflection-equation solve: y_star = omega*x4*."""

    y_star: float
    residual: float
    action: float
    branch: Branch


@dataclass(frozen=True)
class InstantonLoop:
    """Discretized closed Euclidean orbit (physical units, m = 1)."""

    u: np.ndarray
    x3: np.ndarray
    x4: np.ndarray
    v3: np.ndarray
    v4: np.ndarray
    a: float
    action: float
    closure_defect: float


# ---------------------------------------------------------------------------
# thresholds and the correction block
# ---------------------------------------------------------------------------

def sg_critical_gamma(N: int, eps: float) -> float:
    """Critical gamma for the super-Gaussian: (ln(1/eps))^(1/(4N+2))."""
    if not (0.0 < eps < 1.0):
        raise DomainError(f"sg_critical_gamma: eps must be in (0,1), got {eps}")
    if int(N) != N or N < 1:
        raise DomainError(f"sg_critical_gamma: N must be a positive integer, got {N}")
    return math.log(1.0 / eps) ** (1.0 / (4 * N + 2))


def critical_gamma(pulse: WeakPulse, eps: float) -> float:
    """Threshold gamma above which the weak pulse lowers the action."""
    kind = pulse.kind
    if kind is PulseKind.SUPER_GAUSSIAN:
        return sg_critical_gamma(pulse.N, eps)
    if kind in (PulseKind.RECTANGULAR, PulseKind.LORENTZIAN):
        if not (0.0 < eps < 1.0):
            raise DomainError(f"critical_gamma: eps must be in (0,1), got {eps}")
        return 1.0
    if kind in (PulseKind.SAUTER, PulseKind.MODIFIED_SAUTER):
        return 0.5 * math.pi
    raise UnsupportedPulseError(f"critical_gamma: no threshold for kind {kind}")


def correction_block(N: int, eps: float) -> CorrectionBlock:
    """Coefficients of the truncated quadratic for the reflection shift.

    The sign of the square root is fixed so that xi -> 0 at large order
    and matches the exact reflection solver at N = 1 (the other root is its
    negative: the linear coefficient of the quadratic vanishes identically
    through the recurrence nu*E_(nu+1)(z) + z*E_nu(z) = e^(-z)).
    """
    if int(N) != N or N < 1:
        raise DomainError(f"correction_block: N must be a positive integer, got {N}")
    if not (0.0 < eps <= 0.1):
        raise DomainError(f"correction_block: eps must be in (0, 0.1], got {eps}")
    alpha = math.log(1.0 / eps)
    p = (4 * N + 1) / (4 * N + 2)
    ei0 = specfun.expint_re(p, alpha)
    ei1 = specfun.expint_re(p - 1.0, alpha)
    ei2 = specfun.expint_re(p - 2.0, alpha)
    denom = 2.0 * eps * (2 * N + 1) * (
        2.0 * alpha * ei2 + 4.0 * alpha * N * ei2 + 4.0 * N * ei1 + 3.0 * ei1
    )
    if denom == 0.0 or not math.isfinite(denom):
        raise DomainError(f"correction_block: degenerate denominator for N={N}, eps={eps}")
    linear = (
        2.0 * alpha * ei1 * eps + 4.0 * alpha * N * ei1 * eps
        + 4.0 * N + ei0 * eps + 2.0
    )
    inside = (
        (eps * (2.0 * alpha * ei1 + ei0) + 4.0 * N * (alpha * ei1 * eps + 1.0) + 2.0) ** 2
        - 4.0 * alpha * eps * (2 * N + 1) * (4.0 * N + ei0 * eps + 2.0)
        * (2.0 * alpha * (2 * N + 1) * ei2 + (4 * N + 3) * ei1)
    )
    if inside < 0.0:
        raise DomainError(
            f"correction_block: no real root of the truncated quadratic (N={N}, eps={eps})"
        )
    numer = linear + math.sqrt(inside)
    return CorrectionBlock(alpha, ei0, ei1, ei2, denom, numer)


def xi(N: int, eps: float) -> float:
    """Reflection-shift parameter xi = -numerator/(alpha*denominator)."""
    block = correction_block(N, eps)
    return -block.numerator / (block.alpha * block.denominator)


def delta_shift(N: int, eps: float) -> float:
    """Shift delta = xi * gamma_crit entering the reflection fraction."""
    return xi(N, eps) * sg_critical_gamma(N, eps)


# ---------------------------------------------------------------------------
# closed-form stationary action
# ---------------------------------------------------------------------------

def _dynamical_action(x: float) -> float:
    """2 x sqrt(1 - x^2) + 2 arcsin(x) for x in [0, 1]."""
    return 2.0 * x * math.sqrt(max(0.0, 1.0 - x * x)) + 2.0 * math.asin(x)


def stationary_action(pulse: WeakPulse, scales: FieldScales) -> StationaryAction:
    """Closed-form stationary action for the assisted strong field.

    Kind dispatch: super-Gaussian uses the threshold
    (ln(1/eps))^(1/(4N+2)) with the shift delta from the truncated series;
    the rectangular limit and the Lorentzian share the threshold 1 with no
    shift; Sauter and (for eps < 1e-2) the modified Sauter put the
    reflection point at pi/2 over gamma.  The Gaussian has no closed form
    on this track.
    """
    gamma = scales.gamma
    eps = scales.eps
    kind = pulse.kind
    if kind is PulseKind.GAUSSIAN:
        raise UnsupportedPulseError(
            "stationary_action: the Gaussian weak pulse has no closed form here"
        )
    if kind is PulseKind.SUPER_GAUSSIAN:
        gcrit = sg_critical_gamma(pulse.N, eps)
        xival = xi(pulse.N, eps)
        delta = xival * gcrit
    elif kind in (PulseKind.RECTANGULAR, PulseKind.LORENTZIAN):
        gcrit, delta, xival = 1.0, 0.0, 0.0
    elif kind in (PulseKind.SAUTER, PulseKind.MODIFIED_SAUTER):
        gcrit, delta, xival = 0.5 * math.pi, 0.0, 0.0
    else:  # pragma: no cover
        raise UnsupportedPulseError(f"stationary_action: unhandled kind {kind}")
    x_frac = (gcrit + delta) / (gamma + delta)
    branch = Branch.STATIC if gamma < gcrit else Branch.DYNAMICAL
    x_frac = min(1.0, x_frac)
    action = math.pi if branch is Branch.STATIC else _dynamical_action(x_frac)
    return StationaryAction(gamma, action, branch, x_frac, gcrit, delta, xival)


def action_curve(
    pulse: WeakPulse,
    eps: float,
    gamma_grid: Sequence[float],
    E_over_ES: float = 0.05,
) -> list[StationaryAction]:
    """Vectorized ``stationary_action`` over a gamma grid.

    The action in units E_S/E depends on gamma only, so ``E_over_ES`` just
    fixes the bookkeeping scale of the FieldScales objects.
    """
    return [
        stationary_action(pulse, FieldScales.from_gamma(E_over_ES, eps, g))
        for g in gamma_grid
    ]


# ---------------------------------------------------------------------------
# exact reflection equation
# ---------------------------------------------------------------------------

def _ghat(N: int, y: float) -> float:
    """Dimensionless weak potential int_0^y exp(s^(4N+2)) ds."""
    return euclidean_potential(WeakPulse(PulseKind.SUPER_GAUSSIAN, omega=1.0, N=N), y)


def reflection_solve(pulse: WeakPulse, scales: FieldScales) -> ReflectionSolution:
    """Solve eps * G(x4*) = gamma/omega exactly (super-Gaussian).

    The root is found in u = (omega x4)^(4N+2) with a log-scaled residual:
    G grows double-exponentially, so linear-domain bisection underflows.
    Below the critical gamma the strong-field circle is unobstructed and a
    static marker is returned.

    Raises
    ------
    BracketError
        If the bracket u in [0, alpha+20] contains no sign change.
    """
    if pulse.kind is not PulseKind.SUPER_GAUSSIAN:
        raise UnsupportedPulseError("reflection_solve: super-Gaussian only")
    gamma = scales.gamma
    eps = scales.eps
    if eps <= 0.0:
        raise DomainError("reflection_solve: eps must be positive")
    N = pulse.N
    M = 4 * N + 2
    gcrit = sg_critical_gamma(N, eps)
    if gamma < gcrit:
        return ReflectionSolution(math.nan, 0.0, math.pi, Branch.STATIC)
    alpha = math.log(1.0 / eps)
    lngamma = math.log(gamma)

    def resid(u: float) -> float:
        y = u ** (1.0 / M)
        return math.log(eps * _ghat(N, y)) - lngamma

    u_hi = min(alpha + 20.0, EXP_BUDGET - 1.0)
    try:
        u_star = specfun.solve_bracketed(resid, 1e-10, u_hi, tol=1e-13)
    except BracketError as exc:
        raise BracketError(
            f"reflection_solve: no root in u bracket [0, {u_hi:g}] for "
            f"gamma={gamma:g}, eps={eps:g}, N={N}"
        ) from exc
    y_star = u_star ** (1.0 / M)
    residual = abs(eps * _ghat(N, y_star) - gamma) / gamma
    y = min(1.0, y_star / gamma)
    return ReflectionSolution(y_star, residual, _dynamical_action(y), Branch.DYNAMICAL)


# ---------------------------------------------------------------------------
# instanton orbit (shooting oracle)
# ---------------------------------------------------------------------------

def _make_orbit_rhs(gamma: float, M: int, eps: float):
    """Tangent-angle form of the instanton equations, rescaled to radius 1.

    dX3/dth = cos(th)/h, dX4/dth = sin(th)/h with h = 1 + eps G'(X4), plus
    quadrature states for arclength and the two action integrals.  The
    exponent of G' is capped far inside the wall so trial orbits stay
    finite during the root search.
    """
    if eps == 0.0:
        def rhs(th: float, s):
            X3, X4 = s[0], s[1]
            c, sn = math.cos(th), math.sin(th)
            return (c, sn, 1.0, X4 * c, 0.0)
        return rhs
    wall_cap = math.log(1e12 / eps)
    log_cap = math.log(wall_cap)

    def rhs(th: float, s):
        X3, X4 = s[0], s[1]
        c, sn = math.cos(th), math.sin(th)
        y = abs(gamma * X4)
        if y > 0.0:
            lnu = M * math.log(y)
            u = math.exp(lnu) if lnu < log_cap else wall_cap
            gp = math.exp(u if u < wall_cap else wall_cap)
        else:
            gp = 0.0
        h = 1.0 + eps * gp
        return (c / h, sn / h, 1.0 / h, X4 * c / h, X3 * gp * sn / h)

    return rhs


def _integrate_orbit(rhs, X4max: float, th_end: float, rtol: float, dense: bool = False):
    sol = solve_ivp(
        rhs, (math.pi, th_end), [0.0, X4max, 0.0, 0.0, 0.0],
        method="DOP853", rtol=rtol, atol=1e-14,
        first_step=1e-10, max_step=0.05, dense_output=dense,
    )
    if not sol.success:
        raise ShootingError(f"instanton orbit integration failed: {sol.message}")
    return sol


def _turning_height(N: int, eps: float, gamma: float) -> float:
    """Apex height estimate from X4 + eps*G(X4) = radius (dimensionless y)."""
    M = 4 * N + 2
    y_cap = (EXP_BUDGET - 5.0) ** (1.0 / M)
    hi = min(gamma, 0.999 * y_cap)
    f = lambda y: y + eps * _ghat(N, y) - gamma
    if f(hi) < 0.0:
        # wall too far right to matter at this gamma; apex is the free circle
        return gamma
    return specfun.solve_bracketed(f, 1e-12, hi, tol=1e-14)


def shoot_instanton(
    pulse: WeakPulse,
    scales: FieldScales,
    tol: float = 1e-10,
    n_nodes: int = 1024,
) -> InstantonLoop:
    """Integrate the closed Euclidean orbit and return loop plus action.

    The instanton equations are integrated in tangent-angle form (an exact
    reparameterization of the unit-speed equations; the wall layer is
    smooth there, while the u-parameterized system is numerically stiff).
    The apex height is the single shooting parameter, fixed by requiring
    the orbit to close; the speed a is the total arclength and the action
    follows from the orbit quadratures

        W0 = a + oint X4 dX3 - eps * oint X3 G'(X4) dX4   (units E_S/E),

    which touch only the elementary wall profile G', keeping this oracle
    independent of the exponential-integral machinery.

    For eps = 0 the orbit is the free circle (the apex is degenerate under
    vertical translations and is pinned analytically).

    Raises
    ------
    ShootingError
        If no closing apex height is bracketed or the integration fails.
    """
    eps = scales.eps
    gamma = scales.gamma
    if eps > 0.0 and pulse.kind is not PulseKind.SUPER_GAUSSIAN:
        raise UnsupportedPulseError("shoot_instanton: super-Gaussian (or eps=0) only")
    M = 4 * pulse.N + 2 if pulse.kind is PulseKind.SUPER_GAUSSIAN else 2
    rhs = _make_orbit_rhs(gamma, M, eps)
    rtol = min(1e-12, max(1e-13, 0.01 * tol))

    if eps == 0.0:
        X4star = 1.0
    else:
        y_t = _turning_height(pulse.N, eps, gamma)
        u_t = max(1.0, y_t ** M)
        dy = y_t / (M * u_t)  # wall e-fold scale in y

        def resid(X4max: float) -> float:
            return float(_integrate_orbit(rhs, X4max, 2.0 * math.pi, rtol).y[0, -1])

        X0 = y_t / gamma
        bracket = None
        for width in (1.5, 3.0, 6.0, 9.0):
            lo = X0 - width * dy / gamma
            hi = X0 + min(width, 8.0) * dy / gamma
            try:
                rlo, rhi = resid(lo), resid(hi)
            except ShootingError:
                continue
            if rlo == 0.0:
                bracket = (lo, lo)
                break
            if rlo * rhi <= 0.0:
                bracket = (lo, hi)
                break
        if bracket is None:
            raise ShootingError(
                f"shoot_instanton: no closing apex bracketed near X4={X0:g} "
                f"(gamma={gamma:g}, eps={eps:g}, N={pulse.N})"
            )
        if bracket[0] == bracket[1]:
            X4star = bracket[0]
        else:
            X4star = specfun.solve_bracketed(resid, bracket[0], bracket[1], tol=tol)

    sol = _integrate_orbit(rhs, X4star, 3.0 * math.pi, rtol, dense=True)
    X3e, X4e, arclen, area_term, coupling = (float(v) for v in sol.y[:, -1])
    action = arclen + area_term - eps * coupling
    closure = math.hypot(X3e, X4e - X4star)

    # sample the orbit evenly in the worldline parameter u = s/a
    th_dense = np.linspace(math.pi, 3.0 * math.pi, max(4 * n_nodes, 2048))
    states = sol.sol(th_dense)
    u_dense = states[2] / arclen
    u_dense[0], u_dense[-1] = 0.0, 1.0
    u = np.linspace(0.0, 1.0, n_nodes)
    th_at_u = np.interp(u, u_dense, th_dense)
    nodes = sol.sol(th_at_u)

    E = scales.E_over_ES  # m = 1: loop radius m/E
    radius = 1.0 / E
    a_phys = arclen * radius
    return InstantonLoop(
        u=u,
        x3=nodes[0] * radius,
        x4=nodes[1] * radius,
        v3=a_phys * np.cos(th_at_u),
        v4=a_phys * np.sin(th_at_u),
        a=a_phys,
        action=action,
        closure_defect=closure * radius,
    )
