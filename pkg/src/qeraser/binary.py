"""Binary quantum-eraser protocol: channel states, detection statistics, sifting.

The round pipeline is BS1 -> Alice encoder -> Bob encoder -> BS2 -> detectors,
with the ``U`` output port routed to D1 and ``L`` to D2.  A D2 click occurs
only when exactly one party encoded, which is what makes sifting automatic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    STANDARD_BASIS,
    StateVector,
    beam_splitter,
    born_probability,
    diag_pol,
    encoder,
    ket,
    path_group_projector,
    tensor,
)

QUARTER_PI = np.pi / 4


@dataclass(frozen=True)
class BinaryRoundConfig:
    """One protocol round: both encoding bits plus apparatus angles.

    The standard configuration is ``theta = gamma_A = gamma_B = pi/4``;
    ``gamma_*`` generalize the 45-degree rotators to arbitrary encoding
    strength (the security-efficiency trade-off knob).
    """

    alice_bit: int
    bob_bit: int
    theta: float = QUARTER_PI
    initial_pol_sign: int = +1
    gamma_A: float = QUARTER_PI
    gamma_B: float = QUARTER_PI


@dataclass(frozen=True)
class ChannelState:
    label: str
    vector: StateVector


_CHANNEL_LABELS = {(0, +1): "phi0+", (0, -1): "phi0-", (1, +1): "phi1+", (1, -1): "phi1-"}


def initial_state(theta: float, pol_sign: int = +1) -> StateVector:
    """Source photon |U>|D(+/-)> after BS1."""
    return beam_splitter(theta) @ tensor(ket("U", ("U", "L")), diag_pol(pol_sign))


def channel_state(alice_bit: int, pol_sign: int = +1,
                  theta: float = QUARTER_PI) -> ChannelState:
    """In-flight state after Alice's (in)action, before Bob.

    For bit 1 this is cos(t)|U>|V> + sin(t)|L>|H> (and the |A>-seeded
    analogue for negative polarization sign); for bit 0 the polarization is
    untouched.
    """
    if alice_bit not in (0, 1) or pol_sign not in (+1, -1):
        raise ValueError("alice_bit must be 0/1 and pol_sign +1/-1")
    state = initial_state(theta, pol_sign)
    if alice_bit == 1:
        state = encoder("Alice") @ state
    return ChannelState(_CHANNEL_LABELS[(alice_bit, pol_sign)], state)


def pre_bs2_state(config: BinaryRoundConfig) -> StateVector:
    """State arriving at BS2 after both parties' (in)actions."""
    state = initial_state(config.theta, config.initial_pol_sign)
    if config.alice_bit == 1:
        state = encoder("Alice", config.gamma_A, config.gamma_A) @ state
    if config.bob_bit == 1:
        state = encoder("Bob", config.gamma_B, config.gamma_B) @ state
    return state


_D1 = path_group_projector(["U"], STANDARD_BASIS)
_D2 = path_group_projector(["L"], STANDARD_BASIS)


def detection_probabilities(config: BinaryRoundConfig) -> tuple[float, float]:
    """(P(D1), P(D2)) for one round through the full pipeline."""
    out = beam_splitter(config.theta) @ pre_bs2_state(config)
    return born_probability(out, _D1), born_probability(out, _D2)


def sift(round_outcomes: Iterable[tuple[int, int, int]]) -> list[int]:
    """Extract raw key bits from (alice_bit, bob_bit, detector) records.

    Only D2 clicks (detector == 2) contribute.  The fixed convention maps
    (Alice=1, Bob=0) -> 1 and (Alice=0, Bob=1) -> 0, i.e. the key bit equals
    Alice's bit; on Bob's side the same bit is reconstructed as 1 - bob_bit.
    """
    return [alice for alice, _bob, detector in round_outcomes if detector == 2]


def efficiency(gamma_A: float = QUARTER_PI, gamma_B: float = QUARTER_PI,
               theta: float = QUARTER_PI) -> float:
    """Key bits per photon for the generalized binary eraser.

    Closed form 0.5 * [1 - (cos(gA) cos^2(t) + cos(gB) sin^2(t))^2]; the
    leading 1/2 is the probability that the parties' choices mismatch.  At
    gamma_A = gamma_B and theta = pi/4 this reduces to sin^2(gamma_A) / 2,
    and it equals the value reconstructed from detection_probabilities.
    """
    ct, st = np.cos(theta) ** 2, np.sin(theta) ** 2
    return 0.5 * (1.0 - (np.cos(gamma_A) * ct + np.cos(gamma_B) * st) ** 2)


def efficiency_from_pipeline(gamma_A: float = QUARTER_PI,
                             gamma_B: float = QUARTER_PI,
                             theta: float = QUARTER_PI) -> float:
    """Efficiency rebuilt from the four-case detector statistics.

    Averages P(D2) over the two mismatched cases with their 1/4 priors; the
    matched cases contribute no key bits.
    """
    total = 0.0
    for bits in ((1, 0), (0, 1)):
        cfg = BinaryRoundConfig(*bits, theta=theta, gamma_A=gamma_A, gamma_B=gamma_B)
        total += detection_probabilities(cfg)[1]
    return 0.25 * total
