"""Apparatus imperfections: beam-splitter offsets, decoherence, rotator errors.

Two routes are provided for every encoding case.  `detection_probs` evaluates
the closed-form detector probabilities (exact for the no-encoder case, and
leading-order in the deviations otherwise); `simulate_imperfect` propagates
the full state on an extended basis with decohered path modes and is the
oracle the closed forms are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ATOL_IDENTITY,
    LinearMap,
    POLARIZATIONS,
    StateVector,
    product_basis,
    rotation2,
)

QUARTER_PI = np.pi / 4

CASES = ("neither", "both", "alice_only", "bob_only")

# Extended path modes: Du/Dl are the decohered arms travelling alongside U/L;
# du1/dl1 exit toward D1 and du2/dl2 toward D2 after the output splitter.
_PATHS = ("U", "L", "Du", "Dl", "du1", "du2", "dl1", "dl2")
EXTENDED_BASIS = product_basis(_PATHS, POLARIZATIONS)

_D1_MODES = ("U", "du1", "dl1")
_D2_MODES = ("L", "du2", "dl2")


@dataclass(frozen=True)
class ImperfectionParams:
    """Deviations from the ideal apparatus; all-zero reproduces the ideal case.

    Beam splitters sit at pi/4 + delta; sigma_u/sigma_l leak path amplitude
    into non-interfering modes; the four rotator angles default to the ideal
    pi/4 (beta = upper arm, mu = lower arm).
    """

    delta1: float = 0.0
    delta2: float = 0.0
    sigma_u: float = 0.0
    sigma_l: float = 0.0
    beta_A: float = QUARTER_PI
    mu_A: float = QUARTER_PI
    beta_B: float = QUARTER_PI
    mu_B: float = QUARTER_PI

    @property
    def delta_theta(self) -> float:
        return self.delta2 - self.delta1

    @property
    def gamma_mismatch(self) -> float:
        """Residual Alice-Bob rotation mismatch on the upper arm."""
        return self.mu_B - self.beta_A


def _require_symmetric_sigma(params: ImperfectionParams) -> float:
    if abs(params.sigma_u - params.sigma_l) > ATOL_IDENTITY:
        raise ValueError("closed forms require symmetric decoherence sigma_u == sigma_l")
    return params.sigma_u


def detection_probs(case: str, params: ImperfectionParams) -> tuple[float, float]:
    """Closed-form (P(D1), P(D2)) for the four encoding cases.

    The no-encoder case is exact for any deviations.  The active cases
    assume beta_A == mu_A and beta_B == mu_B and are leading-order in the
    beam-splitter deviations; they are exact at delta1 = delta2 = 0, which
    is where the simulation cross-check pins them at 1e-9.
    """
    sigma = _require_symmetric_sigma(params)
    dtheta = params.delta_theta
    if case == "neither":
        theta1 = QUARTER_PI + params.delta1
        theta2 = theta1 + dtheta
        p2 = (np.sin(dtheta) ** 2
              + 0.5 * np.sin(sigma) ** 2 * np.sin(2 * theta1) * np.sin(2 * theta2))
    elif case in ("both", "alice_only", "bob_only"):
        if case == "both":
            if (abs(params.beta_A - params.mu_A) > ATOL_IDENTITY
                    or abs(params.beta_B - params.mu_B) > ATOL_IDENTITY):
                raise ValueError("closed form for 'both' needs beta == mu per party")
            angle = params.gamma_mismatch
        elif case == "alice_only":
            if abs(params.beta_A - params.mu_A) > ATOL_IDENTITY:
                raise ValueError("closed form for 'alice_only' needs beta_A == mu_A")
            angle = params.mu_A
        else:
            if abs(params.beta_B - params.mu_B) > ATOL_IDENTITY:
                raise ValueError("closed form for 'bob_only' needs beta_B == mu_B")
            angle = params.mu_B
        leak = np.sin(angle) ** 2 * np.cos(sigma) ** 2 + 0.5 * np.sin(sigma) ** 2
        p2 = np.sin(dtheta) ** 2 + leak * np.cos(2 * dtheta)
    else:
        raise ValueError(f"unknown case {case!r}")
    return 1.0 - p2, p2


# ---------------------------------------------------------------------------
# Full-state simulation on the extended basis
# ---------------------------------------------------------------------------

def _initial_extended_state(params: ImperfectionParams) -> StateVector:
    """Post-BS1 state with per-arm decoherence leakage, |D>-polarized."""
    theta1 = QUARTER_PI + params.delta1
    d = 1.0 / np.sqrt(2.0)
    amps = np.zeros(len(EXTENDED_BASIS), dtype=complex)
    weights = {
        "U": np.cos(theta1) * np.cos(params.sigma_u),
        "Du": np.cos(theta1) * np.sin(params.sigma_u),
        "L": np.sin(theta1) * np.cos(params.sigma_l),
        "Dl": np.sin(theta1) * np.sin(params.sigma_l),
    }
    for path, w in weights.items():
        for pol in POLARIZATIONS:
            amps[EXTENDED_BASIS.index((path, pol))] = w * d
    return StateVector(amps, EXTENDED_BASIS)


def _encoder_extended(party: str, params: ImperfectionParams) -> LinearMap:
    """Imperfect T'_A or T'_B; decohered arms see the same rotators."""
    if party == "Alice":
        upper, lower = rotation2(params.beta_A), rotation2(-params.mu_A)
    else:
        upper, lower = rotation2(-params.mu_B), rotation2(params.beta_B)
    n = len(EXTENDED_BASIS)
    mat = np.eye(n, dtype=complex)
    for path, block in (("U", upper), ("Du", upper), ("L", lower), ("Dl", lower)):
        idx = [EXTENDED_BASIS.index((path, pol)) for pol in POLARIZATIONS]
        mat[np.ix_(idx, idx)] = block
    return LinearMap(mat, EXTENDED_BASIS, unitary=True)


def _bs2_extended(params: ImperfectionParams) -> LinearMap:
    """Output splitter: mixes U/L and fans Du/Dl into their output modes.

    An isometry on the populated input modes (the du*/dl* columns are unused
    by protocol states), so output probabilities still sum to 1.
    """
    theta2 = QUARTER_PI + params.delta2
    c, s = np.cos(theta2), np.sin(theta2)
    n = len(EXTENDED_BASIS)
    mat = np.zeros((n, n), dtype=complex)

    def block(src: str, images: dict[str, float]) -> None:
        for pol in POLARIZATIONS:
            col = EXTENDED_BASIS.index((src, pol))
            for dst, w in images.items():
                mat[EXTENDED_BASIS.index((dst, pol)), col] = w

    block("U", {"U": c, "L": s})
    block("L", {"U": s, "L": -c})
    block("Du", {"du1": c, "du2": s})
    block("Dl", {"dl1": s, "dl2": -c})
    return LinearMap(mat, EXTENDED_BASIS, unitary=False)


def _group_probability(state: StateVector, modes: tuple[str, ...]) -> float:
    total = 0.0
    for i, (path, _pol) in enumerate(EXTENDED_BASIS):
        if path in modes:
            total += abs(state.amplitudes[i]) ** 2
    return total


def simulate_imperfect(case: str, params: ImperfectionParams) -> tuple[float, float]:
    """(P(D1), P(D2)) by exact propagation on the extended basis."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    state = _initial_extended_state(params)
    if case in ("both", "alice_only"):
        state = _encoder_extended("Alice", params) @ state
    if case in ("both", "bob_only"):
        state = _encoder_extended("Bob", params) @ state
    out = _bs2_extended(params) @ state
    p1 = _group_probability(out, _D1_MODES)
    p2 = _group_probability(out, _D2_MODES)
    return p1, p2


def visibility(delta_A: float, delta_B: float) -> tuple[float, float, float]:
    """Interference contrast under a residual arm rotation delta_A + delta_B.

    Returns (V, P(D2) exact, P(D2) small-angle): V = |cos(dA + dB)|,
    exact leakage (1 - cos(dA + dB))/2, quadratic approximation
    (dA + dB)^2 / 4 with O(delta^4) error.
    """
    total = delta_A + delta_B
    v = abs(np.cos(total))
    p_exact = 0.5 * (1.0 - np.cos(total))
    p_small = total ** 2 / 4.0
    return v, p_exact, p_small
