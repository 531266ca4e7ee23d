"""Closed-form detector statistics against the extended-basis simulation."""

import numpy as np
import pytest

from qeraser import imperfections as imp
from qeraser.binary import BinaryRoundConfig, detection_probabilities

P = imp.ImperfectionParams
QP = np.pi / 4

GRID = (0.0, 0.05, 0.2, 0.5)


def params_for(case, sigma=0.0, gamma=0.0, dtheta=0.0, delta1=0.0):
    """Natural parameterization: rotator offset `gamma` on the active party."""
    kwargs = dict(delta1=delta1, delta2=delta1 + dtheta, sigma_u=sigma, sigma_l=sigma)
    if case in ("both", "bob_only"):
        kwargs.update(beta_B=QP + gamma, mu_B=QP + gamma)
    elif case == "alice_only":
        kwargs.update(beta_A=QP + gamma, mu_A=QP + gamma)
    return P(**kwargs)


class TestIdealReduction:
    @pytest.mark.parametrize("case,bits", [
        ("neither", (0, 0)), ("both", (1, 1)),
        ("alice_only", (1, 0)), ("bob_only", (0, 1))])
    def test_reduces_to_ideal_pipeline(self, case, bits):
        ideal = detection_probabilities(BinaryRoundConfig(*bits))
        assert imp.detection_probs(case, P()) == pytest.approx(ideal, abs=1e-12)
        assert imp.simulate_imperfect(case, P()) == pytest.approx(ideal, abs=1e-12)


class TestClosedVsSimulation:
    def test_neither_exact_for_any_deviations(self):
        for sigma in GRID:
            for d1 in (-0.2, 0.0, 0.1):
                for d2 in (-0.1, 0.0, 0.3):
                    params = P(delta1=d1, delta2=d2, sigma_u=sigma, sigma_l=sigma)
                    closed = imp.detection_probs("neither", params)
                    sim = imp.simulate_imperfect("neither", params)
                    assert closed == pytest.approx(sim, abs=1e-12)

    @pytest.mark.parametrize("case", ["both", "alice_only", "bob_only"])
    def test_active_cases_exact_on_grid(self, case):
        # sigma x gamma x dtheta grid with the first splitter ideal: this is
        # the domain where the leading-order forms are exact identities.
        for sigma in GRID:
            for gamma in GRID:
                for dtheta in GRID:
                    params = params_for(case, sigma, gamma, dtheta)
                    closed = imp.detection_probs(case, params)
                    sim = imp.simulate_imperfect(case, params)
                    assert closed == pytest.approx(sim, abs=1e-9)

    def test_first_splitter_offset_breaks_leading_order_only(self):
        # With delta1 != 0 the active-case forms are leading-order: the
        # residual is bounded by ~8 s^4 in the largest deviation s.
        for d1 in (0.05, 0.1, 0.2):
            for dtheta in (0.0, 0.1, 0.3):
                for gamma in (0.0, 0.2, 0.5):
                    params = params_for("both", 0.1, gamma, dtheta, delta1=d1)
                    closed = imp.detection_probs("both", params)
                    sim = imp.simulate_imperfect("both", params)
                    s = max(d1, dtheta, gamma, 0.1)
                    assert abs(closed[1] - sim[1]) <= 8.0 * s ** 4

    def test_closed_form_requires_symmetric_sigma(self):
        with pytest.raises(ValueError):
            imp.detection_probs("neither", P(sigma_u=0.1, sigma_l=0.2))

    def test_closed_form_requires_matched_rotators(self):
        with pytest.raises(ValueError):
            imp.detection_probs("both", P(beta_A=0.7, mu_A=0.8))

    def test_simulation_handles_asymmetric_sigma(self):
        params = P(sigma_u=0.3, sigma_l=0.1, delta1=0.05, delta2=-0.02)
        p1, p2 = imp.simulate_imperfect("both", params)
        assert p1 + p2 == pytest.approx(1.0, abs=1e-12)


class TestSpotValues:
    def test_both_gamma_leak(self):
        params = P(beta_B=QP + 0.1, mu_B=QP + 0.1)
        assert imp.detection_probs("both", params)[1] == pytest.approx(
            np.sin(0.1) ** 2, abs=1e-12)

    def test_alice_only_ideal_angle_splits_evenly(self):
        assert imp.detection_probs("alice_only", P())[1] == pytest.approx(0.5, abs=1e-12)

    def test_full_decoherence_half(self):
        params = P(sigma_u=np.pi / 2, sigma_l=np.pi / 2)
        assert imp.detection_probs("neither", params)[1] == pytest.approx(0.5, abs=1e-12)
        assert imp.simulate_imperfect("neither", params)[1] == pytest.approx(0.5, abs=1e-12)


class TestInvariants:
    def test_probability_conservation_extended_space(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            params = P(
                delta1=rng.uniform(-0.3, 0.3), delta2=rng.uniform(-0.3, 0.3),
                sigma_u=rng.uniform(0, 0.8), sigma_l=rng.uniform(0, 0.8),
                beta_A=rng.uniform(0, 1.5), mu_A=rng.uniform(0, 1.5),
                beta_B=rng.uniform(0, 1.5), mu_B=rng.uniform(0, 1.5))
            for case in imp.CASES:
                p1, p2 = imp.simulate_imperfect(case, params)
                assert p1 + p2 == pytest.approx(1.0, abs=1e-12)

    def test_leak_monotone_in_mismatch(self):
        gammas = np.linspace(0, np.pi / 4, 40)
        leaks = [imp.detection_probs("both", P(beta_B=QP + g, mu_B=QP + g))[1]
                 for g in gammas]
        assert all(b >= a - 1e-12 for a, b in zip(leaks, leaks[1:]))

    def test_single_party_cases_coincide_at_equal_angles(self):
        for angle in (0.3, QP, 1.1):
            alice = imp.detection_probs(
                "alice_only", P(beta_A=angle, mu_A=angle))
            bob = imp.detection_probs("bob_only", P(beta_B=angle, mu_B=angle))
            assert alice == pytest.approx(bob, abs=1e-15)


class TestVisibility:
    def test_ideal(self):
        assert imp.visibility(0.0, 0.0) == (1.0, 0.0, 0.0)

    def test_small_offsets(self):
        v, p_exact, p_small = imp.visibility(0.1, 0.1)
        assert v == pytest.approx(np.cos(0.2), abs=1e-15)
        assert p_exact == pytest.approx((1 - np.cos(0.2)) / 2, abs=1e-15)
        assert p_exact == pytest.approx(0.00997, abs=1e-5)
        assert p_small == pytest.approx(0.01, abs=1e-12)

    def test_small_angle_error_is_quartic(self):
        # cos Taylor remainder: exact - quadratic = -(d^4)/48 + O(d^6).
        for d in np.linspace(0.01, 0.3, 30):
            _, p_exact, p_small = imp.visibility(d / 2, d / 2)
            ratio = abs(p_exact - p_small) / d ** 4
            assert ratio < 1 / 24
        mid = abs(imp.visibility(0.1, 0.1)[1] - imp.visibility(0.1, 0.1)[2]) / 0.2 ** 4
        assert mid == pytest.approx(1 / 48, rel=0.05)

    def test_matches_full_pipeline_residual_rotation(self):
        # Oracle: a 4-dim state whose upper arm acquired the net rotation.
        from qeraser.core import (
            STANDARD_BASIS, beam_splitter, born_probability, diag_pol, ket,
            path_conditioned, path_group_projector, rotation2, tensor)

        for total in (0.1, 0.35):
            paths = tensor(ket("U", ("U", "L")), diag_pol(+1))
            state = beam_splitter(np.pi / 4) @ paths
            residual = path_conditioned({"U": rotation2(total)}, STANDARD_BASIS)
            out = beam_splitter(np.pi / 4) @ residual @ state
            p2 = born_probability(out, path_group_projector(["L"], STANDARD_BASIS))
            assert p2 == pytest.approx(imp.visibility(total, 0.0)[1], abs=1e-12)
