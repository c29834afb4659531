"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line.  Criteria 4 and 5 contain stated
bounds that the implemented closed forms measurably miss; they are asserted
as stated (not loosened) and their failure messages carry the measured
values.
"""

import math

import numpy as np
import pytest

from schwinger_kit.backgrounds import (
    FieldScales,
    PulseKind,
    SpectralFunction,
    WeakPulse,
    convolution_transform_check,
)
from schwinger_kit.perturbative import (
    OrderConfig,
    first_order_exponent,
    higher_order_exponent,
    integral_condition,
    saddle_scan,
)
from schwinger_kit.specfun import bessel_k1, expint_re, integrate_semiline, phi_integral
from schwinger_kit.worldline import (
    Branch,
    critical_gamma,
    reflection_solve,
    sg_critical_gamma,
    shoot_instanton,
    stationary_action,
    xi,
)

SQRT_PI_OVER_2 = math.sqrt(0.5 * math.pi)


def _sg(N: int) -> WeakPulse:
    return WeakPulse(PulseKind.SUPER_GAUSSIAN, omega=1.0, N=N)


def _scales(eps: float, gamma: float) -> FieldScales:
    return FieldScales.from_gamma(0.05, eps, gamma)


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def test_criterion_01_static_limit_exact():
    rng = np.random.default_rng(1)
    failures = []
    for _ in range(20):
        N = int(rng.integers(1, 120))
        eps = float(10.0 ** rng.uniform(-6.0, -1.3))
        gamma = float(sg_critical_gamma(N, eps) * rng.uniform(0.05, 0.999))
        r = stationary_action(_sg(N), _scales(eps, gamma))
        if r.action != math.pi or r.branch is not Branch.STATIC:
            failures.append((N, eps, gamma, r.action))
    _report(1, "static-limit", not failures, f"(20 random points, tolerance: exact)")
    assert not failures, failures


def test_criterion_02_branch_continuity():
    worst = 0.0
    for N, eps in ((1, 1e-2), (2, 5e-3), (20, 1e-3), (200, 1e-4)):
        gcrit = sg_critical_gamma(N, eps)
        lo = stationary_action(_sg(N), _scales(eps, gcrit * (1 - 1e-13))).action
        hi = stationary_action(_sg(N), _scales(eps, gcrit)).action
        worst = max(worst, abs(hi - lo))
    _report(2, "branch-continuity", worst < 1e-12, f"(|dW| = {worst:.2e})")
    assert worst < 1e-12


def test_criterion_03_action_curves():
    eps = 5e-3
    grid = np.linspace(1.2, 10.0, 200)
    curves = {}
    for N in (2, 5, 20, 100, 3000):
        curves[N] = np.array(
            [stationary_action(_sg(N), _scales(eps, float(g))).action for g in grid]
        )
    sauter = np.array(
        [stationary_action(WeakPulse(PulseKind.SAUTER), _scales(eps, float(g))).action
         for g in grid]
    )
    lorentz = np.array(
        [stationary_action(WeakPulse(PulseKind.LORENTZIAN), _scales(eps, float(g))).action
         for g in grid]
    )
    above = grid > 0.5 * math.pi
    a_ok = bool(np.all(curves[2][above] < sauter[above]))
    dev = np.max(np.abs(curves[3000] - lorentz) / lorentz)
    b_ok = bool(dev < 0.01)
    c_ok = all(
        bool(np.all((lorentz <= curves[N] + 1e-15) & (curves[N] <= sauter + 1e-15)))
        for N in (2, 5, 20, 100)
    )
    _report(3, "action-curve-reproduction", a_ok and b_ok and c_ok,
            f"(N=2 below Sauter: {a_ok}; N=3000 vs Lorentzian max rel dev "
            f"{dev:.4f} < 1%: {b_ok}; band: {c_ok})")
    assert a_ok and b_ok and c_ok


def test_criterion_04_xi_curves():
    eps_set = (5e-3, 1e-3, 5e-4, 1e-4)
    orders = (1, 2, 5, 10, 20, 50, 100, 200)
    table = {e: [xi(n, e) for n in orders] for e in eps_set}

    decreasing = all(
        all(a > b for a, b in zip(vals, vals[1:])) for vals in table.values()
    )

    def spread(n_idx: int) -> float:
        vals = [table[e][n_idx] for e in eps_set]
        return (max(vals) - min(vals)) / min(vals)

    s1, s100 = spread(0), spread(orders.index(100))
    tail = {e: table[e][-1] for e in eps_set}
    tail_ok = all(v < 1e-2 for v in tail.values())
    ok = decreasing and (s1 > 0.10) and (s100 < 0.02) and tail_ok
    _report(4, "xi-reproduction", ok,
            f"(decreasing: {decreasing}; spread N=1 {s1:.3f} > 10%: {s1 > 0.10}; "
            f"spread N=100 {s100:.3f} < 2%: {s100 < 0.02}; "
            f"xi(200) = {min(tail.values()):.4f}..{max(tail.values()):.4f} < 1e-2: {tail_ok})")
    assert decreasing
    assert s1 > 0.10
    # the two clauses below measure the truncated-series block itself: its
    # root scales like 1/sqrt(alpha(2N+1)), so the relative eps-spread is
    # N-independent (~32%) and xi(200) sits near 0.02 for these eps
    assert s100 < 0.02, (
        f"relative eps-spread at N=100 measures {s100:.3f}, not < 0.02 "
        f"(absolute spread does shrink: {max(table[e][orders.index(100)] for e in eps_set) - min(table[e][orders.index(100)] for e in eps_set):.4f})"
    )
    assert tail_ok, f"xi(N=200) measures {tail}, not < 1e-2"


def test_criterion_05_oracle_triangle():
    eps = 1e-3
    rows = []
    bad = []
    for N in (20, 50):
        for gamma in (1.5, 2.0, 3.0, 5.0):
            sc = _scales(eps, gamma)
            w_closed = stationary_action(_sg(N), sc).action
            w_refl = reflection_solve(_sg(N), sc).action
            w_shoot = shoot_instanton(_sg(N), sc).action
            trio = {"closed": w_closed, "reflection": w_refl, "shooting": w_shoot}
            rows.append((N, gamma, trio))
            for a in trio:
                for b in trio:
                    if a < b:
                        dev = abs(trio[a] - trio[b]) / min(trio[a], trio[b])
                        if dev > 0.02:
                            bad.append(f"N={N} gamma={gamma} {a}/{b}: {dev:.4f}")
    _report(5, "oracle-triangle", not bad,
            f"({len(bad)} of 24 pairwise checks exceed 2%)" if bad else "(all pairs within 2%)")
    assert not bad, (
        "pairwise deviations beyond 2%: " + "; ".join(bad)
        + " -- the reflection and shooting routes agree throughout; the "
        "closed-form shift overestimates the reflection point at these orders"
    )


def test_criterion_06_constant_field_circle():
    scales = FieldScales(0.05, 0.0, omega=0.1)
    loop = shoot_instanton(_sg(1), scales)
    R = 1.0 / scales.E_over_ES
    radius_dev = float(np.max(np.abs(np.hypot(loop.x3, loop.x4) - R))) / R
    ok = (
        abs(loop.action - math.pi) < 1e-6
        and radius_dev < 1e-8
        and loop.closure_defect < 1e-6 * loop.a
    )
    _report(6, "constant-field-circle", ok,
            f"(|W - pi| = {abs(loop.action - math.pi):.2e}, radius dev {radius_dev:.2e})")
    assert ok


def test_criterion_07_integral_identities():
    vals = {}
    for kind in (PulseKind.LORENTZIAN, PulseKind.SAUTER,
                 PulseKind.MODIFIED_SAUTER, PulseKind.RECTANGULAR):
        vals[kind.value] = integral_condition(WeakPulse(kind))
    flat_ok = all(abs(v - SQRT_PI_OVER_2) < 1e-6 for v in vals.values())
    sg_vals = [integral_condition(_sg(n)) for n in (1, 2, 4, 10)]
    sg_ok = all(v < SQRT_PI_OVER_2 for v in sg_vals) and all(
        a < b for a, b in zip(sg_vals, sg_vals[1:])
    )
    _report(7, "integral-identities", flat_ok and sg_ok,
            f"(max dev {max(abs(v - SQRT_PI_OVER_2) for v in vals.values()):.2e}; "
            f"SG strictly below and increasing: {sg_ok})")
    assert flat_ok, vals
    assert sg_ok, sg_vals


def _exponent_threshold(kind: PulseKind, lo: float, hi: float) -> float:
    pulse = WeakPulse(kind)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if first_order_exponent(pulse, _scales(1e-3, mid)) < math.pi - 1e-12:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_criterion_08_perturbative_thresholds():
    t_sau = _exponent_threshold(PulseKind.SAUTER, 1.2, 2.2)
    t_lor = _exponent_threshold(PulseKind.LORENTZIAN, 0.8, 1.6)
    t_rec = _exponent_threshold(PulseKind.RECTANGULAR, 0.8, 1.6)
    ok = (
        abs(t_sau - 0.5 * math.pi) < 1e-3
        and abs(t_lor - 1.0) < 1e-3
        and abs(t_rec - 1.0) < 1e-3
        and abs(t_sau - critical_gamma(WeakPulse(PulseKind.SAUTER), 1e-3)) < 1e-3
        and abs(t_lor - critical_gamma(WeakPulse(PulseKind.LORENTZIAN), 1e-3)) < 1e-3
    )
    _report(8, "perturbative-thresholds", ok,
            f"(sauter {t_sau:.5f} vs pi/2; lorentzian {t_lor:.5f}; rectangular {t_rec:.5f})")
    assert ok


def test_criterion_09_saddle_validity_dichotomy():
    small_ok = True
    worst_small = 0.0
    for E in (1e-4, 1e-6):
        diags = saddle_scan(E, np.linspace(1.1, 3.0, 25))
        m = max(abs(d.derivative_at_sp) for d in diags)
        worst_small = max(worst_small, m)
        small_ok = small_ok and m < 1e-2
    diags = saddle_scan(1e-2, np.linspace(2.0, 5.0, 31))
    breakdown = max(abs(d.derivative_at_sp) for d in diags)
    big_ok = breakdown > 1e-2
    _report(9, "saddle-validity-dichotomy", small_ok and big_ok,
            f"(max residual small-E {worst_small:.2e} < 1e-2; "
            f"E=1e-2 reaches {breakdown:.3f} > 1e-2)")
    assert small_ok and big_ok


def test_criterion_10_photon_order_independence():
    E = 1e-4
    worst = 0.0
    for gamma in (1.5, 2.0, 4.0):
        sigma = math.sqrt(1.0 - 1.0 / gamma ** 2)
        sc = FieldScales.from_gamma(E, 1e-3, gamma)
        per_kind = {}
        for kind in (PulseKind.LORENTZIAN, PulseKind.RECTANGULAR):
            vals = [
                higher_order_exponent(WeakPulse(kind), sc, OrderConfig(n, max(1, n // 2), sigma))
                for n in (1, 2, 3)
            ]
            rel = (max(vals) - min(vals)) / abs(vals[0])
            worst = max(worst, rel)
            per_kind[kind] = vals[0]
        cross = abs(per_kind[PulseKind.LORENTZIAN] - per_kind[PulseKind.RECTANGULAR]) / abs(
            per_kind[PulseKind.LORENTZIAN]
        )
        worst = max(worst, cross)
    _report(10, "photon-order-independence", worst < 1e-10, f"(worst rel dev {worst:.2e})")
    assert worst < 1e-10


def test_criterion_11_convolution_validation():
    xs = np.linspace(0.0, 20.0, 201)
    worst = 0.0
    for kappa in (0.1, 0.05):
        oracle = convolution_transform_check(kappa, xs)
        closed = SpectralFunction(PulseKind.SUPER_GAUSSIAN, kappa)(xs)
        worst = max(worst, float(np.max(np.abs(oracle - closed))))
    _report(11, "convolution-validation", worst < 1e-3, f"(max dev {worst:.2e})")
    assert worst < 1e-3


def test_criterion_12_special_function_substrate():
    worst = 0.0
    for N in (1, 2, 5, 20):
        M = 4 * N + 2
        rho = 1.0 / M
        y_hi = min(2.0, 0.995 * 690.0 ** (1.0 / M))
        for y in np.linspace(0.2, y_hi, 7):
            u = float(y) ** M
            via_expint = (
                math.gamma(rho) * math.cos(math.pi * rho) - float(y) * expint_re(1.0 - rho, u)
            ) / M
            via_phi = phi_integral(rho, u) / M
            worst = max(worst, abs(via_expint - via_phi) / abs(via_phi))
    k1_moment = integrate_semiline(
        lambda x: x * bessel_k1(x) if x > 0 else 1.0, tol=1e-10
    ).value
    k1_ok = abs(k1_moment - 0.5 * math.pi) < 1e-9
    _report(12, "special-function-substrate", worst < 1e-8 and k1_ok,
            f"(identity worst rel {worst:.2e}; K1 moment dev "
            f"{abs(k1_moment - 0.5 * math.pi):.2e})")
    assert worst < 1e-8
    assert k1_ok
