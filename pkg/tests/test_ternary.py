"""Trine encoding, Bob's compensations, both key-distribution methods."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qeraser import ternary as t

SQ3 = np.sqrt(3.0)

# Post-rotation pair states per (signal, operation) cell, as (h, v) amplitude
# pairs for the first and second photon.  Regenerated in the tests from
# trine_state + rotator composition; kept here as the expected fixture.
S_H, S_UP, S_DN = (1.0, 0.0), (-0.5, SQ3 / 2), (-0.5, -SQ3 / 2)
METHOD1_TABLE = {
    ("0", 0): (S_UP, S_DN), ("0", 1): (S_DN, S_H), ("0", 2): (S_H, S_UP),
    ("0p", 0): (S_DN, S_UP), ("0p", 1): (S_H, S_DN), ("0p", 2): (S_UP, S_H),
    ("1", 0): (S_H, S_UP), ("1", 1): (S_UP, S_DN), ("1", 2): (S_DN, S_H),
    ("1p", 0): (S_UP, S_H), ("1p", 1): (S_DN, S_UP), ("1p", 2): (S_H, S_DN),
    ("2", 0): (S_H, S_DN), ("2", 1): (S_UP, S_H), ("2", 2): (S_DN, S_UP),
    ("2p", 0): (S_DN, S_H), ("2p", 1): (S_H, S_UP), ("2p", 2): (S_UP, S_DN),
}


class TestTrineStates:
    def test_first_state_is_horizontal(self):
        assert np.allclose(t.trine_state(0).amplitudes, [1, 0], atol=1e-15)

    def test_pairwise_overlap(self):
        for i in range(3):
            for j in range(3):
                expected = 1.0 if i == j else -0.5
                assert t.trine_state(i).inner(t.trine_state(j)).real == pytest.approx(
                    expected, abs=1e-12)

    def test_resolution_of_identity(self):
        acc = np.zeros((2, 2), dtype=complex)
        for i in range(3):
            v = t.trine_state(i).amplitudes
            acc += (2.0 / 3.0) * np.outer(v, v.conj())
        assert np.max(np.abs(acc - np.eye(2))) < 1e-12


class TestPermutations:
    def test_six_orderings(self):
        assert len(t.ALL_ORDERINGS) == 6
        assert t.ALL_ORDERINGS[0] == (0, 1, 2)

    def test_group_closure_and_inverse(self):
        perms = set(t.ALL_ORDERINGS)
        for p in perms:
            assert t.compose(p, t.inverse(p)) == (0, 1, 2)
            for q in perms:
                assert t.compose(p, q) in perms


class TestMeasureAfterBob:
    def test_matched(self):
        assert t.measure_after_bob(1, 1) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_mismatched(self):
        assert t.measure_after_bob(0, 1) == pytest.approx((0.25, 0.75), abs=1e-12)

    def test_average_v_probability_half(self):
        pv = np.mean([t.measure_after_bob(a, b)[1] for a in range(3) for b in range(3)])
        assert pv == pytest.approx(0.5, abs=1e-12)


class TestMethod1:
    def test_table_regenerated_from_rotations(self):
        for (signal, bob), (first, second) in METHOD1_TABLE.items():
            got = t.method1_pair_states(signal, bob)
            for state, (h, v) in zip(got, (first, second)):
                assert np.allclose(state.amplitudes, [h, v], atol=1e-12)

    def test_double_v_only_on_matching_cells(self):
        for signal in t.METHOD1_SIGNALS:
            for bob in range(3):
                pv1, pv2 = t.method1_v_probabilities(signal, bob)
                joint = pv1 * pv2
                if t.method1_signal_value(signal) == bob:
                    assert joint == pytest.approx(9 / 16, abs=1e-12)
                else:
                    assert joint == pytest.approx(0.0, abs=1e-12)

    def test_sift_probability(self):
        assert t.method1_sift_probability() == pytest.approx(3 / 16, abs=1e-12)

    def test_round_sampling_statistics(self):
        rng = np.random.default_rng(5)
        n = 40_000
        hits = sum(t.method1_round("1", 1, rng) == ("V", "V") for _ in range(n))
        se = np.sqrt((9 / 16) * (7 / 16) / n)
        assert abs(hits / n - 9 / 16) < 4 * se


class TestMethod2:
    def test_pattern_probabilities_sum_to_one(self):
        for sigma in t.ALL_ORDERINGS:
            for bob in range(3):
                total = sum(
                    t.method2_pattern_probability(sigma, bob, pattern)
                    for pattern in product("HV", repeat=3))
                assert total == Fraction(1)

    def test_deterministic_h_slot_matches_orderings(self):
        for sigma in t.ALL_ORDERINGS:
            for bob in range(3):
                p_h = t.method2_slot_h_probabilities(sigma, bob)
                certain = [i for i, p in enumerate(p_h) if abs(p - 1.0) < 1e-12]
                assert certain == [sigma.index(bob)]

    def test_example_pattern_probability(self):
        # First ordering, first operation: H certain in slot 1, V twice at 3/4.
        p = t.method2_pattern_probability((0, 1, 2), 0, ("H", "V", "V"))
        assert p == Fraction(9, 16)

    def test_sift_probability_exact(self):
        for sigma in t.ALL_ORDERINGS:
            for bob in range(3):
                sift = sum(
                    t.method2_pattern_probability(sigma, bob, pattern)
                    for pattern in product("HV", repeat=3)
                    if t.is_sifted(pattern))
                assert sift == Fraction(9, 16)

    def test_all_h_probability(self):
        p = t.method2_pattern_probability((0, 1, 2), 0, ("H", "H", "H"))
        assert p == Fraction(1, 16)

    def test_round_sampling(self):
        rng = np.random.default_rng(9)
        group = t.PhotonGroup((2, 0, 1))
        n = 30_000
        sifted = sum(t.is_sifted(t.method2_round(group, 1, rng)) for _ in range(n))
        se = np.sqrt((9 / 16) * (7 / 16) / n)
        assert abs(sifted / n - 9 / 16) < 4 * se

    def test_photon_group_validation(self):
        with pytest.raises(ValueError):
            t.PhotonGroup((0, 0, 1))


class TestExtractKey:
    def test_examples(self):
        assert t.extract_key((0, 1, 2), ("H", "V", "V")) == 0
        assert t.extract_key((1, 2, 0), ("V", "V", "H")) == 0
        assert t.extract_key((0, 1, 2), ("V", "V", "V")) is None

    def test_exhaustive_agreement_with_bob(self):
        for sigma in t.ALL_ORDERINGS:
            for bob in range(3):
                pattern = tuple(
                    "H" if slot == sigma.index(bob) else "V" for slot in range(3))
                assert t.extract_key(sigma, pattern) == bob

    def test_rejects_multiple_h(self):
        assert t.extract_key((0, 1, 2), ("H", "H", "V")) is None


class TestAnnouncement:
    @pytest.mark.parametrize("pattern", [
        ("H", "V", "V"), ("V", "H", "V"), ("V", "V", "H")])
    def test_posterior_uniform_exact(self, pattern):
        assert t.announcement_posterior(pattern) == (Fraction(1, 3),) * 3

    def test_two_orderings_per_operation(self):
        for pattern in [("H", "V", "V"), ("V", "H", "V"), ("V", "V", "H")]:
            h_slot = pattern.index("H")
            for bob in range(3):
                consistent = [s for s in t.ALL_ORDERINGS if s[h_slot] == bob]
                assert len(consistent) == 2

    def test_rejects_unsifted(self):
        with pytest.raises(ValueError):
            t.announcement_posterior(("H", "H", "V"))


class TestEfficiency:
    def test_method1(self):
        raw, binary_equiv = t.efficiency_metrics("M1")
        assert raw == pytest.approx(3 / 32, abs=1e-15)
        assert binary_equiv == pytest.approx(0.1486, abs=1e-4)

    def test_method2(self):
        raw, binary_equiv = t.efficiency_metrics("M2")
        assert raw == pytest.approx(3 / 16, abs=1e-15)
        assert binary_equiv == pytest.approx(0.2971, abs=1e-4)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            t.efficiency_metrics("M3")
