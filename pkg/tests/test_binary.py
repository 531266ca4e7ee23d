"""Binary protocol: channel states, four-case statistics, sifting, efficiency."""

import numpy as np
import pytest

from qeraser.binary import (
    BinaryRoundConfig,
    channel_state,
    detection_probabilities,
    efficiency,
    efficiency_from_pipeline,
    pre_bs2_state,
    sift,
)
from qeraser.core import STANDARD_BASIS, beam_splitter, superposition

SQRT2 = np.sqrt(2.0)


class TestChannelState:
    def test_bit_one_plus(self):
        v = channel_state(1, +1, np.pi / 4).vector
        expected = superposition(
            {("U", "V"): 1 / SQRT2, ("L", "H"): 1 / SQRT2}, STANDARD_BASIS)
        assert np.max(np.abs(v.amplitudes - expected.amplitudes)) < 1e-12

    def test_overlap_half_power(self):
        c0 = channel_state(0, +1, np.pi / 4).vector
        c1 = channel_state(1, +1, np.pi / 4).vector
        assert c1.inner(c0) == pytest.approx(1 / SQRT2, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.3, np.pi / 4, 1.1])
    def test_cross_overlap_vanishes_only_at_quarter_pi(self, theta):
        c0 = channel_state(0, +1, theta).vector
        c1m = channel_state(1, -1, theta).vector
        expected = (np.cos(theta) ** 2 - np.sin(theta) ** 2) / SQRT2
        assert c1m.inner(c0) == pytest.approx(expected, abs=1e-12)

    def test_labels(self):
        assert channel_state(0, +1).label == "phi0+"
        assert channel_state(1, -1).label == "phi1-"


class TestDetectionProbabilities:
    @pytest.mark.parametrize("bits,expected", [
        ((0, 0), (1.0, 0.0)),
        ((1, 1), (1.0, 0.0)),
        ((1, 0), (0.5, 0.5)),
        ((0, 1), (0.5, 0.5)),
    ])
    def test_four_cases(self, bits, expected):
        p = detection_probabilities(BinaryRoundConfig(*bits))
        assert p == pytest.approx(expected, abs=1e-12)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            cfg = BinaryRoundConfig(
                int(rng.integers(2)), int(rng.integers(2)),
                theta=float(rng.uniform(0.1, 1.4)),
                gamma_A=float(rng.uniform(-1.5, 1.5)),
                gamma_B=float(rng.uniform(-1.5, 1.5)),
                initial_pol_sign=int(rng.choice([-1, 1])))
            p1, p2 = detection_probabilities(cfg)
            assert p1 + p2 == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("gamma", [0.2, 0.9, np.pi / 3])
    def test_general_gamma_mismatch(self, gamma):
        p1, _ = detection_probabilities(BinaryRoundConfig(1, 0, gamma_A=gamma))
        assert p1 == pytest.approx(np.cos(gamma) ** 2, abs=1e-12)

    @pytest.mark.parametrize("gamma", [np.pi / 4, 0.6])
    def test_announcement_neutrality(self, gamma):
        # The two mismatched cases are statistically identical; the pipeline
        # reproduces them to within a couple of ulps.
        p10 = detection_probabilities(
            BinaryRoundConfig(1, 0, gamma_A=gamma, gamma_B=gamma))
        p01 = detection_probabilities(
            BinaryRoundConfig(0, 1, gamma_A=gamma, gamma_B=gamma))
        assert p10 == pytest.approx(p01, abs=1e-15)

    def test_pre_bs2_case10_matches_channel_state(self):
        got = pre_bs2_state(BinaryRoundConfig(1, 0))
        assert got.equals_up_to_phase(channel_state(1, +1).vector, atol=1e-12)

    def test_post_bs2_case10_expansion(self):
        out = beam_splitter(np.pi / 4) @ pre_bs2_state(BinaryRoundConfig(1, 0))
        expected = superposition({
            ("U", "V"): 0.5, ("L", "V"): 0.5, ("L", "H"): -0.5, ("U", "H"): 0.5,
        }, STANDARD_BASIS)
        assert out.equals_up_to_phase(expected, atol=1e-12)


class TestSift:
    def test_only_d2_emits(self):
        rounds = [(1, 0, 2), (0, 0, 1), (1, 0, 1)]
        assert sift(rounds) == [1]

    def test_convention(self):
        assert sift([(1, 0, 2)]) == [1]
        assert sift([(0, 1, 2)]) == [0]

    def test_matched_rounds_never_reach_d2_ideally(self):
        rng = np.random.default_rng(11)
        rounds = []
        for _ in range(2000):
            a, b = int(rng.integers(2)), int(rng.integers(2))
            _, p2 = detection_probabilities(BinaryRoundConfig(a, b))
            detector = 2 if rng.random() < p2 else 1
            if a == b:
                assert detector == 1
            rounds.append((a, b, detector))
        key = sift(rounds)
        assert all(bit in (0, 1) for bit in key)

    def test_sift_rate_quarter(self):
        # Independent sampling oracle: mismatch with probability 1/2, then a
        # fair D2 coin; the empirical rate must sit within 4 sigma of 1/4.
        rng = np.random.default_rng(3)
        n = 200_000
        a = rng.integers(0, 2, n)
        b = rng.integers(0, 2, n)
        d2 = (a != b) & (rng.random(n) < 0.5)
        rate = d2.mean()
        se = np.sqrt(0.25 * 0.75 / n)
        assert abs(rate - 0.25) < 4 * se
        rounds = zip(a.tolist(), b.tolist(), np.where(d2, 2, 1).tolist())
        assert len(sift(rounds)) == int(d2.sum())


class TestEfficiency:
    def test_standard_quarter(self):
        assert efficiency(np.pi / 4, np.pi / 4, np.pi / 4) == pytest.approx(0.25, abs=1e-12)

    def test_zero_rotation_carries_nothing(self):
        assert efficiency(0.0, 0.0, np.pi / 4) == pytest.approx(0.0, abs=1e-15)

    def test_orthogonal_rotation_half(self):
        # Cross-check via the detector pipeline: mismatch splits fully.
        assert efficiency(np.pi / 2, np.pi / 2, np.pi / 4) == pytest.approx(0.5, abs=1e-12)
        assert efficiency_from_pipeline(np.pi / 2, np.pi / 2) == pytest.approx(0.5, abs=1e-9)

    def test_closed_form_matches_pipeline_on_grid(self):
        for gamma in np.linspace(-np.pi / 2, np.pi / 2, 50):
            assert efficiency(gamma, gamma) == pytest.approx(
                efficiency_from_pipeline(gamma, gamma), abs=1e-9)
