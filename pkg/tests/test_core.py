"""State/operator algebra: construction, products, Born rule, key identities."""

import numpy as np
import pytest

from qeraser import core
from qeraser.binary import channel_state
from qeraser.core import (
    STANDARD_BASIS,
    LinearMap,
    StateVector,
    beam_splitter,
    born_probability,
    diag_pol,
    encoder,
    ket,
    path_group_projector,
    projector,
    rotator,
    superposition,
    tensor,
)

RNG = np.random.default_rng(20240817)
SQRT2 = np.sqrt(2.0)


def random_state(dim, basis):
    amps = RNG.normal(size=dim) + 1j * RNG.normal(size=dim)
    return StateVector(amps / np.linalg.norm(amps), basis)


class TestTensor:
    def test_basis_product(self):
        v = tensor(ket("U", ("U", "L")), ket("H", ("H", "V")))
        assert v.basis == STANDARD_BASIS
        assert v.amplitude(("U", "H")) == 1.0
        assert np.allclose(np.delete(v.amplitudes, 0), 0.0)

    def test_uniform_superposition(self):
        paths = StateVector(np.array([1, 1]) / SQRT2, ("U", "L"))
        v = tensor(paths, diag_pol(+1))
        assert np.allclose(v.amplitudes, 0.5, atol=1e-15)

    def test_norm_multiplicative(self):
        for _ in range(100):
            a = random_state(2, ("U", "L"))
            b = random_state(2, ("H", "V"))
            assert abs(tensor(a, b).norm() - a.norm() * b.norm()) < 1e-12

    def test_dimension_overflow(self):
        big = StateVector(np.ones(8) / np.sqrt(8), tuple(f"m{i}" for i in range(8)))
        with pytest.raises(ValueError):
            tensor(tensor(big, big), ket("H", ("H", "V")))


class TestBeamSplitter:
    def test_balanced_on_diagonal_input(self):
        state = beam_splitter(np.pi / 4) @ tensor(ket("U", ("U", "L")), diag_pol(+1))
        expected = tensor(StateVector(np.array([1, 1]) / SQRT2, ("U", "L")), diag_pol(+1))
        assert np.allclose(state.amplitudes, expected.amplitudes, atol=1e-15)

    def test_theta_zero_is_path_sign_flip(self):
        bs = beam_splitter(0.0)
        u = bs @ tensor(ket("U", ("U", "L")), ket("H", ("H", "V")))
        ell = bs @ tensor(ket("L", ("U", "L")), ket("H", ("H", "V")))
        assert u.amplitude(("U", "H")) == pytest.approx(1.0, abs=1e-15)
        assert ell.amplitude(("L", "H")) == pytest.approx(-1.0, abs=1e-15)

    @pytest.mark.parametrize("theta", [0.1, 0.7, 1.3])
    def test_unitarity(self, theta):
        m = beam_splitter(theta).matrix
        assert np.max(np.abs(m.conj().T @ m - np.eye(4))) < 1e-12


class TestRotator:
    def test_left_rotation_of_h(self):
        out = rotator("L", np.pi / 4) @ ket("H", ("H", "V"))
        assert np.allclose(out.amplitudes, [1 / SQRT2, 1 / SQRT2], atol=1e-15)

    @pytest.mark.parametrize("phi", [np.pi / 4, 2 * np.pi / 3])
    def test_right_inverts_left(self, phi):
        m = (rotator("R", phi) @ rotator("L", phi)).matrix
        assert np.max(np.abs(m - np.eye(2))) < 1e-12

    def test_trine_angle_rotation(self):
        out = rotator("L", 2 * np.pi / 3) @ ket("H", ("H", "V"))
        assert np.allclose(out.amplitudes, [-0.5, np.sqrt(3) / 2], atol=1e-15)


class TestEncoder:
    def test_bob_cancels_alice(self):
        m = (encoder("Bob") @ encoder("Alice")).matrix
        assert np.linalg.norm(m - np.eye(4)) < 1e-12

    def test_alice_tags_uniform_input(self):
        # Symbolic expansion of the path-conditioned rotation on the uniform
        # input: the upper arm maps |D> to |V|, the lower arm to |H>.
        state = tensor(StateVector(np.array([1, 1]) / SQRT2, ("U", "L")), diag_pol(+1))
        out = encoder("Alice") @ state
        expected = superposition(
            {("U", "V"): 1 / SQRT2, ("L", "H"): 1 / SQRT2}, STANDARD_BASIS)
        assert out.equals_up_to_phase(expected, atol=1e-12)

    def test_nonideal_angles_leave_residual(self):
        off = np.pi / 4 + 0.01
        m = (encoder("Bob") @ encoder("Alice", off, off)).matrix
        assert np.linalg.norm(m - np.eye(4)) > 1e-3


class TestBornProbability:
    def test_matched_case_goes_to_d1(self):
        state = tensor(StateVector(np.array([1, 1]) / SQRT2, ("U", "L")), diag_pol(+1))
        out = beam_splitter(np.pi / 4) @ encoder("Bob") @ encoder("Alice") @ state
        d1 = path_group_projector(["U"], STANDARD_BASIS)
        assert born_probability(out, d1) == pytest.approx(1.0, abs=1e-12)

    def test_self_projector_is_one(self):
        v = random_state(4, STANDARD_BASIS)
        assert born_probability(v, projector(v)) == pytest.approx(1.0, abs=1e-12)
        assert born_probability(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_channel_overlap_probability(self):
        c0 = channel_state(0, +1).vector
        c1 = channel_state(1, +1).vector
        assert abs(c1.inner(c0)) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_rejects_unnormalized(self):
        bad = StateVector(np.array([1.0, 1.0, 0, 0]), STANDARD_BASIS)
        with pytest.raises(ValueError):
            born_probability(bad, path_group_projector(["U"], STANDARD_BASIS))

    def test_complete_effects_sum_to_one(self):
        d1 = path_group_projector(["U"], STANDARD_BASIS)
        d2 = path_group_projector(["L"], STANDARD_BASIS)
        for _ in range(20):
            v = random_state(4, STANDARD_BASIS)
            assert born_probability(v, d1) + born_probability(v, d2) == pytest.approx(1.0, abs=1e-12)


class TestInvariants:
    def test_flagged_unitary_rejects_nonunitary(self):
        with pytest.raises(ValueError):
            LinearMap(np.diag([1.0, 2.0]), ("H", "V"), unitary=True)

    def test_unitaries_preserve_norm(self):
        ops = [beam_splitter(0.3), encoder("Alice", 0.5, 0.9), encoder("Bob")]
        for _ in range(30):
            v = random_state(4, STANDARD_BASIS)
            for op in ops:
                assert abs((op @ v).norm() - 1.0) < 1e-12

    def test_inner_product_table(self):
        c0p = channel_state(0, +1).vector
        c0m = channel_state(0, -1).vector
        c1p = channel_state(1, +1).vector
        c1m = channel_state(1, -1).vector
        assert abs(c0m.inner(c0p)) < 1e-12
        assert c1p.inner(c0p) == pytest.approx(1 / SQRT2, abs=1e-12)
        assert abs(c1m.inner(c0p)) < 1e-12
        assert abs(c1p.inner(c0m)) < 1e-12

    def test_no_cloning_overlaps(self):
        # At a generic splitter angle all four cross-polarization pairs are
        # strictly non-orthogonal and non-identical, so |x| = x^2 is insoluble.
        theta = 0.5
        states = {(b, s): channel_state(b, s, theta).vector
                  for b in (0, 1) for s in (+1, -1)}
        pairs = [((0, 1), (1, 1)), ((0, -1), (1, -1)), ((0, 1), (1, -1)), ((0, -1), (1, 1))]
        for a, b in pairs:
            ov = states[a].overlap(states[b])
            assert 0.0 < ov < 1.0
