"""Golden-value checks shared by the verify CLI command and the test suite.

Each check compares a computed quantity against its pinned value at a fixed
tolerance.  Expected values are closed forms where one exists; optimizer
cross-checks recompute the optimum from scratch.
"""

from __future__ import annotations

import numpy as np

from . import binary, binary_attacks as ba, imperfections as imp
from . import ternary, ternary_attacks as ta

SQRT2 = np.sqrt(2.0)


def _check(name: str, expected: float, actual: float, tolerance: float,
           mode: str = "abs") -> dict:
    """One comparison record; `mode` is 'abs' (|a-e| <= tol), 'ge' or 'le'."""
    if mode == "abs":
        passed = abs(actual - expected) <= tolerance
    elif mode == "ge":
        passed = actual >= expected - tolerance
    elif mode == "le":
        passed = actual <= expected + tolerance
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return {
        "name": name,
        "expected": float(expected),
        "actual": float(actual),
        "tolerance": float(tolerance),
        "mode": mode,
        "pass": bool(passed),
    }


def binary_checks() -> list[dict]:
    checks = []
    kappa_star, p_star = ba.grid_refine_argmax(ba.p_correct_two_state, 0.0, np.pi)
    checks.append(_check("two_state_bound", ba.BINARY_BOUND, p_star, 1e-9))
    checks.append(_check("two_state_argmax", 3 * np.pi / 8, kappa_star, 1e-4))
    grid = np.linspace(0.0, np.pi, 1001)
    forms = np.max(np.abs([ba.p_correct_two_state(k) - ba.p_correct_two_state_closed(k)
                           for k in grid]))
    checks.append(_check("two_state_forms_agree", 0.0, forms, 1e-12))
    checks.append(_check("four_state_bound", ba.BINARY_BOUND,
                         ba.four_state_optimum()[2], 1e-9))
    marg = ba.four_state_marginals(*ba.four_state_optimum()[:2])
    checks.append(_check("four_state_marginals", 0.25, max(marg), 1e-12))
    omega_star, p_omega = ba.grid_refine_argmax(ba.p_correct_random_pol, 0.0, np.pi / 2)
    # The maximum coincides with the two-state bound; 0.85 is its 2-decimal
    # display value, so the rounded check carries a half-ulp band.
    checks.append(_check("random_pol_max", ba.BINARY_BOUND, p_omega, 1e-9))
    checks.append(_check("random_pol_max_rounded", 0.85, p_omega, 5e-3))
    checks.append(_check("random_pol_argmax", np.pi / 8, omega_star, 1e-3))
    checks.append(_check("random_pol_balance",
                         0.0, abs(ba.random_pol_balance(np.pi / 8)), 1e-12))
    checks.append(_check("bb84_bit_success", ba.BINARY_BOUND,
                         ba.bb84_bit_success(ba.BB84_OPTIMUM_KAPPA), 1e-9))
    checks.append(_check("bb84_state_reproduction", 0.4268,
                         ba.bb84_analysis(ba.BB84_OPTIMUM_KAPPA)[1], 1e-4))
    checks.append(_check("helstrom_agreement", ba.helstrom(1 / SQRT2), p_star, 1e-9))
    checks.append(_check("b_pole_standard", ba.BINARY_BOUND,
                         ba.b_pole_envelope(np.pi / 4), 1e-9))
    env_min = min(ba.b_pole_envelope(g) for g in np.linspace(-np.pi / 2, np.pi / 2, 100))
    checks.append(_check("b_pole_envelope_min", 0.5, env_min, 1e-9, mode="ge"))
    checks.append(_check("efficiency_standard", 0.25, binary.efficiency(), 1e-12))
    return checks


def ternary_checks() -> list[dict]:
    checks = []
    checks.append(_check("method1_sift", 3 / 16, ternary.method1_sift_probability(), 1e-12))
    checks.append(_check("method1_eta_bin", 0.1486,
                         ternary.efficiency_metrics("M1")[1], 1e-4))
    checks.append(_check("method2_sift", 9 / 16, ternary.method2_sift_probability(), 1e-12))
    checks.append(_check("method2_eta_bin", 0.2971,
                         ternary.efficiency_metrics("M2")[1], 1e-4))
    from fractions import Fraction

    worst = Fraction(0)
    for pattern in (("H", "V", "V"), ("V", "H", "V"), ("V", "V", "H")):
        post = ternary.announcement_posterior(pattern)
        worst = max(worst, max(abs(p - Fraction(1, 3)) for p in post))
    checks.append(_check("announcement_uniformity", 0.0, float(worst), 0.0))

    povm0 = ta.SymmetricPovm(0.0)
    r_star, best = ba.grid_refine_argmax(
        lambda r: ta.single_photon_map_success(ta.SymmetricPovm(r)),
        -1.5, 1.5, points=200)
    checks.append(_check("single_photon_bound", 2 / 3, best, 1e-9))
    checks.append(_check("single_photon_argmax", 0.0, r_star, 1e-4))
    fractions = ta.pattern_probabilities(povm0)
    checks.append(_check("q1_fraction", 3 / 52, fractions.q1, 1e-12))
    checks.append(_check("q2_fraction", 0.5769, fractions.q2, 1e-3))
    checks.append(_check("q3_fraction", 0.3654, fractions.q3, 1e-3))
    checks.append(_check("conditional_q1", 1 / 6, ta.conditional_success("Q1", povm0), 1e-12))
    checks.append(_check("conditional_q2", 0.400, ta.conditional_success("Q2", povm0), 1e-3))
    checks.append(_check("conditional_q3", 0.8205, ta.conditional_success("Q3", povm0), 1e-3))
    total = ta.total_success(povm0)
    checks.append(_check("total_success", 0.54, total, 0.02))
    checks.append(_check("oracle_vs_decomposition", total, ta.oracle_map_success(), 0.02))
    checks.append(_check("strategy_a", 0.3854, ta.strategy_a_success(), 1e-3))
    checks.append(_check("strategy_b_ceiling", 0.5, ta.strategy_b_success().ceiling, 0.0))
    checks.append(_check("naive_composite", 2 / 9, ta.naive_composite_bound().value, 0.0))
    checks.append(_check("fourth_detector", 0.0,
                         float(np.max(ta.fourth_detector_check(povm0))), 1e-12))
    return checks


def imperfection_checks() -> list[dict]:
    checks = []
    ideal = imp.ImperfectionParams()
    worst = 0.0
    for case, expected_p2 in (("neither", 0.0), ("both", 0.0),
                              ("alice_only", 0.5), ("bob_only", 0.5)):
        worst = max(worst,
                    abs(imp.detection_probs(case, ideal)[1] - expected_p2),
                    abs(imp.simulate_imperfect(case, ideal)[1] - expected_p2))
    checks.append(_check("ideal_reduction", 0.0, worst, 1e-12))

    worst = 0.0
    values = (0.0, 0.05, 0.2, 0.5)
    for sigma in values:
        for gamma in values:
            for dtheta in values:
                params = imp.ImperfectionParams(
                    delta2=dtheta, sigma_u=sigma, sigma_l=sigma,
                    beta_B=np.pi / 4 + gamma, mu_B=np.pi / 4 + gamma)
                for case in ("neither", "both", "bob_only"):
                    closed = imp.detection_probs(case, params)
                    sim = imp.simulate_imperfect(case, params)
                    worst = max(worst, abs(closed[1] - sim[1]))
    checks.append(_check("closed_vs_simulation_grid", 0.0, worst, 1e-9))

    v, p_exact, p_small = imp.visibility(0.1, 0.1)
    checks.append(_check("visibility_value", np.cos(0.2), v, 1e-12))
    checks.append(_check("visibility_p2", (1 - np.cos(0.2)) / 2, p_exact, 1e-12))
    # Taylor remainder of cos: exact-minus-quadratic leakage is -(d^4)/48 + O(d^6),
    # so the error-to-d^4 ratio stays near 1/48 on (0, 0.3).
    worst_ratio = 0.0
    for d in np.linspace(0.01, 0.3, 30):
        _, pe, ps = imp.visibility(d / 2, d / 2)
        worst_ratio = max(worst_ratio, abs(pe - ps) / d ** 4)
    checks.append(_check("small_angle_error_order", 1 / 24, worst_ratio, 0.0, mode="le"))
    return checks


SUITES = {
    "binary": binary_checks,
    "ternary": ternary_checks,
    "imperfections": imperfection_checks,
}


def run_suite(suite: str) -> list[dict]:
    if suite == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn())
        return out
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return SUITES[suite]()
