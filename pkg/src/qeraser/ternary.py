"""Trine-state key distribution: encoding, Bob's compensations, sifting.

Three polarization states 120 degrees apart are the alphabet.  Method I ships
them as pairs (six signals); Method II ships all three per group in a secret
temporal order sigma, and the position of the deterministic H click tells
Alice which compensation Bob applied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import POL_BASIS, StateVector, born_probability, ket, pol_state, rotator

TRINE_ANGLES = (0.0, 2.0 * np.pi / 3.0, -2.0 * np.pi / 3.0)

#: The six orderings of (A1, A2, A3), indexed 0..5; entries are 0-based trine
#: indices listed per temporal slot.
ALL_ORDERINGS: tuple[tuple[int, int, int], ...] = tuple(
    itertools.permutations((0, 1, 2))
)

LOG2_3 = np.log2(3.0)

V, H = "V", "H"


def trine_state(i: int) -> StateVector:
    """Polarization state A_{i+1} at angle 0, +120 or -120 degrees from H."""
    return pol_state(TRINE_ANGLES[i])


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p . q)(t) = p[q[t]] on 0-based slot maps."""
    return tuple(p[q[t]] for t in range(len(q)))


def inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for t, v in enumerate(p):
        inv[v] = t
    return tuple(inv)


def bob_compensation_angle(j: int) -> float:
    """Rotation Bob applies for operation B_{j+1}.

    Derived from the matched-state requirement: B_j must bring A_j back to
    |H> (net identity on the matched state), so the angle is minus A_j's
    polarization angle.
    """
    return -TRINE_ANGLES[j]


def state_after_bob(state_index: int, bob: int) -> StateVector:
    rot = rotator("L", bob_compensation_angle(bob), POL_BASIS)
    return rot @ trine_state(state_index)


def measure_after_bob(state_index: int, bob: int) -> tuple[float, float]:
    """(P(H), P(V)) for one photon after Bob's compensation.

    Matched pairs give (1, 0); mismatched give (1/4, 3/4).
    """
    out = state_after_bob(state_index, bob)
    p_h = born_probability(out, ket("H", POL_BASIS))
    return p_h, 1.0 - p_h


# ---------------------------------------------------------------------------
# Method I: photon pairs drawn from the trine alphabet
# ---------------------------------------------------------------------------

#: Alice's six pair signals, as (first, second) trine indices.  The unprimed
#: and primed variants of a value carry the same state pair in opposite order.
METHOD1_SIGNALS: dict[str, tuple[int, int]] = {
    "0": (0, 1), "0p": (1, 0),
    "1": (2, 0), "1p": (0, 2),
    "2": (2, 1), "2p": (1, 2),
}

#: Bob's Method I operations, as rotation angles applied to both photons.
METHOD1_BOB_ANGLES: dict[int, float] = {
    0: 2.0 * np.pi / 3.0,
    1: -2.0 * np.pi / 3.0,
    2: 0.0,
}


def method1_signal_value(signal: str) -> int:
    return int(signal[0])


def method1_pair_states(signal: str, bob: int) -> tuple[StateVector, StateVector]:
    """Both photons' post-rotation states for one (signal, bob) cell."""
    rot = rotator("L", METHOD1_BOB_ANGLES[bob], POL_BASIS)
    return tuple(rot @ trine_state(i) for i in METHOD1_SIGNALS[signal])


def method1_v_probabilities(signal: str, bob: int) -> tuple[float, float]:
    """Per-photon P(V) for the pair; a matched cell has no deterministic H."""
    pv = []
    for out in method1_pair_states(signal, bob):
        pv.append(1.0 - born_probability(out, ket("H", POL_BASIS)))
    return tuple(pv)


def method1_round(signal: str, bob: int, rng: np.random.Generator) -> tuple[str, str]:
    """Sample the two-photon H/V outcome for one Method I signal."""
    pv1, pv2 = method1_v_probabilities(signal, bob)
    u = rng.random(2)
    return (V if u[0] < pv1 else H, V if u[1] < pv2 else H)


def method1_sift_probability() -> float:
    """P(double V) over uniform signal and operation choices: 3/16."""
    total = 0.0
    for signal in METHOD1_SIGNALS:
        for bob in METHOD1_BOB_ANGLES:
            pv1, pv2 = method1_v_probabilities(signal, bob)
            total += pv1 * pv2
    return total / (len(METHOD1_SIGNALS) * len(METHOD1_BOB_ANGLES))


# ---------------------------------------------------------------------------
# Method II: three-photon groups in a secret temporal order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhotonGroup:
    """A three-photon signal: each trine state once, in temporal order sigma."""

    sigma: tuple[int, int, int]

    def __post_init__(self):
        if sorted(self.sigma) != [0, 1, 2]:
            raise ValueError("sigma must order each trine state exactly once")

    def states(self) -> tuple[int, int, int]:
        return self.sigma


def method2_slot_h_probabilities(sigma: Sequence[int], bob: int) -> tuple[float, ...]:
    """P(H) per temporal slot; exactly one slot is deterministic."""
    return tuple(measure_after_bob(s, bob)[0] for s in sigma)


def method2_round(group: PhotonGroup, bob: int,
                  rng: np.random.Generator) -> tuple[str, str, str]:
    """Sample the three-slot detection pattern for one group."""
    p_h = method2_slot_h_probabilities(group.sigma, bob)
    u = rng.random(3)
    return tuple(H if u[t] < p_h[t] else V for t in range(3))


def method2_pattern_probability(sigma: Sequence[int], bob: int,
                                pattern: Sequence[str]) -> Fraction:
    """Exact probability of a detection pattern, in rational arithmetic."""
    prob = Fraction(1)
    for slot, outcome in enumerate(pattern):
        p_h = Fraction(1) if sigma[slot] == bob else Fraction(1, 4)
        prob *= p_h if outcome == H else 1 - p_h
    return prob


def is_sifted(pattern: Sequence[str]) -> bool:
    """Key-generating patterns have exactly two V detections."""
    return sum(1 for o in pattern if o == V) == 2


def extract_key(sigma: Sequence[int], pattern: Sequence[str]) -> Optional[int]:
    """Alice's key symbol (Bob's operation index) from a sifted pattern.

    The single H slot marks the photon Bob's compensation matched, so the
    state index there is his operation: 0 for B1, 1 for B2, 2 for B3.
    Patterns without exactly one H are rejected (None).  Under imperfections
    a probabilistic photon can fake the H slot; the symbol is still emitted
    and any mismatch with Bob's true operation surfaces as QBER downstream.
    """
    h_slots = [t for t, o in enumerate(pattern) if o == H]
    if len(h_slots) != 1:
        return None
    return sigma[h_slots[0]]


def announcement_posterior(pattern: Sequence[str]) -> tuple[Fraction, Fraction, Fraction]:
    """P(Bob = B_j | announced pattern), by exact enumeration.

    Uniform priors over the 6 orderings and 3 operations; the result is
    uniform for every sifted pattern, so the announcement leaks nothing.
    """
    if not is_sifted(pattern):
        raise ValueError("posterior is defined for sifted (two-V) patterns")
    weights = [Fraction(0)] * 3
    for sigma in ALL_ORDERINGS:
        for bob in range(3):
            weights[bob] += method2_pattern_probability(sigma, bob, pattern)
    total = sum(weights)
    return tuple(w / total for w in weights)


def method2_sift_probability() -> float:
    """P(exactly two V) = (3/4)^2 for every (sigma, bob) pair."""
    return 9.0 / 16.0


def efficiency_metrics(method: str) -> tuple[float, float]:
    """(eta_raw, eta_bin) for 'M1' or 'M2'.

    eta_raw = P_sift / m is the per-photon symbol yield; eta_bin scales it by
    log2(3) to express bits per photon for comparison with binary protocols.
    """
    if method == "M1":
        p_sift, m = 3.0 / 16.0, 2
    elif method == "M2":
        p_sift, m = 9.0 / 16.0, 3
    else:
        raise ValueError("method must be 'M1' or 'M2'")
    return p_sift / m, (LOG2_3 / m) * p_sift
