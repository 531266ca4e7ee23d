"""Binary and ternary quantum-eraser key distribution toolkit."""

from .binary import BinaryRoundConfig, channel_state, detection_probabilities, efficiency, sift
from .binary_attacks import (
    BINARY_BOUND,
    b_pole,
    b_pole_envelope,
    bb84_analysis,
    helstrom,
    p_correct_four_state,
    p_correct_random_pol,
    p_correct_two_state,
)
from .core import LinearMap, StateVector, beam_splitter, born_probability, encoder, rotator, tensor
from .imperfections import ImperfectionParams, detection_probs, simulate_imperfect, visibility
from .montecarlo import RunConfig, RunStats, eve_intercept_resend, run
from .ternary import (
    PhotonGroup,
    announcement_posterior,
    efficiency_metrics,
    extract_key,
    measure_after_bob,
    method1_round,
    method2_round,
    trine_state,
)
from .ternary_attacks import (
    SymmetricPovm,
    conditional_success,
    detection_matrix,
    fourth_detector_check,
    naive_composite_bound,
    oracle_map_success,
    pattern_probabilities,
    strategy_a_success,
    strategy_b_success,
    total_success,
)

__version__ = "0.1.0"
