"""Eve's optimal attack on three-photon trine groups.

The in-flight states live in a 4-dim path-polarization space but span only a
2-dim plane, where they form a trine.  Eve's symmetric three-detector POVM is
parameterized by the single ratio r = lambda12/lambda10; the per-photon
outcome table is a circulant matrix in r, and her task is to infer the secret
ordering sigma from three independent outcomes.

Two computation routes are kept deliberately separate:

* closed forms in u+- = 1 +- sqrt(3) r, matching the published pattern-class
  fractions (these drop selected high-order terms, e.g. the class total
  normalizes to (13 + 36 r^2 + 27 r^4)/4);
* exact enumeration over all 27 outcome triples, which is the authority for
  acceptance and for the MAP oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import STANDARD_BASIS, StateVector, superposition
from .ternary import ALL_ORDERINGS

SQRT3 = np.sqrt(3.0)


# ---------------------------------------------------------------------------
# Channel states and the orthonormal frame
# ---------------------------------------------------------------------------

def phi_frame() -> tuple[StateVector, ...]:
    """Orthonormal 4-dim frame: symmetric/antisymmetric path x H/V combos."""
    s = 1.0 / np.sqrt(2.0)
    return (
        superposition({("U", "H"): s, ("L", "H"): s}, STANDARD_BASIS),
        superposition({("U", "V"): s, ("L", "V"): s}, STANDARD_BASIS),
        superposition({("U", "V"): s, ("L", "V"): -s}, STANDARD_BASIS),
        superposition({("U", "H"): s, ("L", "H"): -s}, STANDARD_BASIS),
    )


def channel_states() -> tuple[StateVector, StateVector, StateVector]:
    """(psi0, psi+, psi-): the trine as seen in the transmission channel.

    Each is (|U>|p> + |L>|p'>)/sqrt(2) with p rotated by 0/+120/-120 degrees
    in the upper arm and the opposite way in the lower arm; in the phi frame
    they occupy only the (phi0, phi2) plane.
    """
    s = 1.0 / np.sqrt(2.0)
    half, w = 0.5, SQRT3 / 2.0
    psi0 = superposition({("U", "H"): s, ("L", "H"): s}, STANDARD_BASIS)
    psi_p = superposition({("U", "H"): -half * s, ("U", "V"): w * s,
                           ("L", "H"): -half * s, ("L", "V"): -w * s}, STANDARD_BASIS)
    psi_m = superposition({("U", "H"): -half * s, ("U", "V"): -w * s,
                           ("L", "H"): -half * s, ("L", "V"): w * s}, STANDARD_BASIS)
    return psi0, psi_p, psi_m


@dataclass(frozen=True)
class SymmetricPovm:
    """Three-detector measurement obeying the trine's 120-degree symmetry.

    Completeness on the 2-dim signal plane fixes lambda10^2 + lambda12^2 =
    2/3, so the whole family is the single ratio r = lambda12 / lambda10.
    """

    r: float

    @property
    def lambda10(self) -> float:
        return np.sqrt(2.0 / (3.0 * (1.0 + self.r ** 2)))

    @property
    def lambda12(self) -> float:
        return self.r * self.lambda10

    def u_plus(self) -> float:
        return 1.0 + SQRT3 * self.r

    def u_minus(self) -> float:
        return 1.0 - SQRT3 * self.r


def detection_matrix(povm: SymmetricPovm) -> np.ndarray:
    """P(detector j | state i); rows are (psi0, psi+, psi-) and sum to 1.

    The symmetric family is circulant: the diagonal carries lambda10^2 and
    the off-diagonals carry lambda10^2 u+-^2 / 4.
    """
    d = povm.lambda10 ** 2
    p = d * povm.u_plus() ** 2 / 4.0
    q = d * povm.u_minus() ** 2 / 4.0
    return np.array([
        [d, p, q],
        [q, d, p],
        [p, q, d],
    ])


def measurement_vectors(povm: SymmetricPovm) -> tuple[StateVector, ...]:
    """(alpha1..alpha4) as orthonormal 4-dim vectors.

    The signal-plane components follow the symmetry ansatz (detector k+1 is
    the 120-degree rotation of detector k); equal auxiliary components along
    phi1 make the first three mutually orthogonal, and alpha4 is their
    orthogonal complement.
    """
    phi = phi_frame()
    v1 = np.array([povm.lambda10, povm.lambda12])
    rot = rotation_120_matrix()[np.ix_((0, 2), (0, 2))].real
    v2 = rot @ v1
    v3 = rot @ v2
    aux = 1.0 / SQRT3
    vecs = []
    for v in (v1, v2, v3):
        amps = (v[0] * phi[0].amplitudes + v[1] * phi[2].amplitudes
                + aux * phi[1].amplitudes)
        vecs.append(StateVector(amps, STANDARD_BASIS))
    stack = np.array([v.amplitudes for v in vecs])
    _, _, vh = np.linalg.svd(stack)
    alpha4 = StateVector(vh[-1].conj(), STANDARD_BASIS)
    return (*vecs, alpha4)


def rotation_120_matrix() -> np.ndarray:
    """120-degree rotation in the (phi0, phi2) plane, identity elsewhere."""
    c, s = -0.5, SQRT3 / 2.0
    return np.array([
        [c, 0.0, -s, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [s, 0.0, c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])


def fourth_detector_check(povm: SymmetricPovm) -> np.ndarray:
    """|<alpha4|psi_i>| for the three channel states; all vanish."""
    alpha4 = measurement_vectors(povm)[3]
    return np.array([alpha4.overlap(psi) for psi in channel_states()])


def single_photon_map_success(povm: SymmetricPovm) -> float:
    """Best per-photon identification rate: mean over states of max_j P(j|i)."""
    m = detection_matrix(povm)
    return float(np.mean(np.max(m, axis=1)))


# ---------------------------------------------------------------------------
# Pattern classes for three-photon groups
# ---------------------------------------------------------------------------

class PatternClassFractions(NamedTuple):
    q1: float
    q2: float
    q3: float


def _pq(povm: SymmetricPovm) -> tuple[float, float]:
    """Off-diagonal table entries in units of lambda10^2."""
    return povm.u_plus() ** 2 / 4.0, povm.u_minus() ** 2 / 4.0


def pattern_probabilities(povm: SymmetricPovm) -> PatternClassFractions:
    """Closed-form class fractions (Q1/QT, Q2/QT, Q3/QT).

    Q1 (one detector thrice) is exact; Q2 and Q3 drop their highest-order
    u-terms, and QT is the sum of the three as kept, which collapses to
    (13 + 36 r^2 + 27 r^4)/4.  At r = 0 this yields 3/52, 30/52, 19/52.
    """
    p, q = _pq(povm)
    q1 = 3.0 * p * q
    q2 = 3.0 * ((p + q) + (p ** 2 + q ** 2))
    q3 = 1.0 + 3.0 * p * q
    qt = q1 + q2 + q3
    return PatternClassFractions(q1 / qt, q2 / qt, q3 / qt)


def pattern_subclass_fractions(povm: SymmetricPovm) -> tuple[float, ...]:
    """(Q1, Q21, Q22, Q23, Q3)/QT with Q2 split by which pair doubled up.

    Under the symmetry ansatz the three sub-patterns (the +/- pair, the
    0/+ pair, the 0/- pair sharing a detector) carry equal weight.
    """
    p, q = _pq(povm)
    q1 = 3.0 * p * q
    q2i = (p + q) + (p ** 2 + q ** 2)
    q3 = 1.0 + 3.0 * p * q
    qt = q1 + 3.0 * q2i + q3
    return (q1 / qt, q2i / qt, q2i / qt, q2i / qt, q3 / qt)


def pattern_probabilities_exact(povm: SymmetricPovm) -> PatternClassFractions:
    """Class fractions by exhaustive enumeration of the 27 outcome triples."""
    m = detection_matrix(povm)
    totals = [0.0, 0.0, 0.0]
    for outcome in itertools.product(range(3), repeat=3):
        prob = m[0, outcome[0]] * m[1, outcome[1]] * m[2, outcome[2]]
        distinct = len(set(outcome))
        totals[distinct - 1] += prob
    return PatternClassFractions(*totals)


def conditional_success(pattern_class: str, povm: SymmetricPovm) -> float:
    """P(Eve recovers sigma | class), matching the published truncations.

    'Q1': uniform guess over the six orderings, exactly 1/6.
    'Q2': the unique click fixes one state, the double click leaves a
          two-fold ambiguity; the truncated form peaks at 0.4 for r = 0.
    'Q3': all three detectors fire; the identity assignment dominates with
          probability lambda10^6 / Q3 (exact Q3), 0.8205 at r = 0.
    """
    p, q = _pq(povm)
    if pattern_class == "Q1":
        return 1.0 / 6.0
    if pattern_class == "Q2":
        up2 = povm.u_plus() ** 2
        um2 = povm.u_minus() ** 2
        return 0.5 * (up2 + um2) / (up2 + um2 + 0.25 * (up2 ** 2 + um2 ** 2))
    if pattern_class == "Q3":
        return 1.0 / (1.0 + 3.0 * p * q + p ** 3 + q ** 3)
    raise ValueError("pattern_class must be 'Q1', 'Q2' or 'Q3'")


def conditional_success_exact(pattern_class: str, povm: SymmetricPovm) -> float:
    """Same conditionals from the MAP oracle's exact enumeration."""
    per_class = _map_success_by_class(detection_matrix(povm))
    weights = pattern_probabilities_exact(povm)
    idx = {"Q1": 0, "Q2": 1, "Q3": 2}[pattern_class]
    return per_class[idx] / weights[idx]


def total_success(povm: SymmetricPovm) -> float:
    """Eve's overall ordering-recovery rate: sum of class weight x conditional."""
    fractions = pattern_probabilities(povm)
    return (fractions.q1 * conditional_success("Q1", povm)
            + fractions.q2 * conditional_success("Q2", povm)
            + fractions.q3 * conditional_success("Q3", povm))


def optimize_total_success(lo: float = -1.5, hi: float = 1.5) -> tuple[float, float]:
    """Argmax of total_success over the POVM ratio, by grid + refinement."""
    from .binary_attacks import grid_refine_argmax

    def f(r: float) -> float:
        return total_success(SymmetricPovm(r))

    return grid_refine_argmax(f, lo, hi, points=3001, xatol=1e-9)


# ---------------------------------------------------------------------------
# The brute-force MAP oracle
# ---------------------------------------------------------------------------

def map_ordering_success(prob_matrix: np.ndarray) -> float:
    """Ground-truth success of MAP guessing over 6 orderings x 27 outcomes.

    `prob_matrix[i, j]` is P(outcome j | state i) for one photon; rows must
    sum to 1.  Eve sees the ordered outcome triple and picks the ordering
    with the largest likelihood; ties do not affect the value.
    """
    m = np.asarray(prob_matrix, dtype=float)
    total = 0.0
    for outcome in itertools.product(range(m.shape[1]), repeat=3):
        likelihoods = [
            m[sigma[0], outcome[0]] * m[sigma[1], outcome[1]] * m[sigma[2], outcome[2]]
            for sigma in ALL_ORDERINGS
        ]
        total += max(likelihoods) / 6.0
    return total


def _map_success_by_class(m: np.ndarray) -> tuple[float, float, float]:
    """MAP success mass split by number of distinct detectors in the outcome."""
    totals = [0.0, 0.0, 0.0]
    for outcome in itertools.product(range(3), repeat=3):
        best = max(
            m[s[0], outcome[0]] * m[s[1], outcome[1]] * m[s[2], outcome[2]]
            for s in ALL_ORDERINGS
        )
        totals[len(set(outcome)) - 1] += best / 6.0
    return tuple(totals)


def oracle_map_success(povm: Optional[SymmetricPovm] = None) -> float:
    """Exact MAP success for the r = 0 POVM (or a supplied one)."""
    return map_ordering_success(detection_matrix(povm or SymmetricPovm(0.0)))


def map_guess_table(povm: SymmetricPovm) -> dict[tuple[int, int, int], int]:
    """Outcome triple -> index into ALL_ORDERINGS of the MAP guess.

    Ties break to the lowest ordering index; the tie set always shares the
    likelihood, so the success value is unaffected.
    """
    m = detection_matrix(povm)
    table = {}
    for outcome in itertools.product(range(3), repeat=3):
        likelihoods = [
            m[s[0], outcome[0]] * m[s[1], outcome[1]] * m[s[2], outcome[2]]
            for s in ALL_ORDERINGS
        ]
        table[outcome] = int(np.argmax(likelihoods))
    return table


# ---------------------------------------------------------------------------
# Auxiliary intercept strategies and the coarse estimate
# ---------------------------------------------------------------------------

class StrategyBReport(NamedTuple):
    ceiling: float
    discriminator_quality: float
    map_value: float


def strategy_a_success() -> float:
    """H/V measurement per photon: 9/16 x 1/2 + 6/16 x 1/4 + 1/16 x 1/6.

    The H-aligned photon always fires H; the pattern with one H pins its
    slot but leaves the other two states swapped half the time, extra H
    clicks degrade the guess further.
    """
    return (9.0 / 16.0) * 0.5 + (6.0 / 16.0) * 0.25 + (1.0 / 16.0) / 6.0


def strategy_b_success() -> StrategyBReport:
    """Two-state-focused measurement at 15 degrees from H.

    The idealized argument caps the ordering success at 1/2; the report also
    carries the pairwise discriminator quality cos^2(15 deg) and the exact
    MAP value of the actual measurement, which stays below the cap.
    """
    angle = np.deg2rad(15.0)
    quality = np.cos(angle) ** 2
    # P(outcome M1 | state) for the three trine states under the 15-degree basis.
    p_m1 = np.array([
        np.cos(0.0 - angle) ** 2,
        np.cos(2.0 * np.pi / 3.0 - angle) ** 2,
        np.cos(-2.0 * np.pi / 3.0 - angle) ** 2,
    ])
    m = np.column_stack([p_m1, 1.0 - p_m1])
    return StrategyBReport(0.5, float(quality), map_ordering_success(m))


class NaiveBoundReport(NamedTuple):
    value: float
    single_photon: float
    assignment: float
    is_underestimate: bool


def naive_composite_bound() -> NaiveBoundReport:
    """(2/3) x (1/3) = 2/9: the strict identify-everything estimate.

    Factorizing state identification and ordering assignment understates
    Eve's power (the two are correlated, and she only needs the symbol), so
    the value is flagged as an underestimate.
    """
    return NaiveBoundReport(2.0 / 9.0, 2.0 / 3.0, 1.0 / 3.0, True)
