"""Trial-based verification of the protocols, with optional intercept-resend.

Randomness is counter-based: trials are split into fixed blocks and block b
of a run draws from ``Philox(key=(seed, b))``, so tallies are identical no
matter how blocks are scheduled across threads.  All tallies are integers and
merge by addition; derived rates are computed once at the end, which makes
two runs with the same config byte-identical.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .binary import BinaryRoundConfig, detection_probabilities
from .binary_attacks import (
    BB84_OPTIMUM_KAPPA,
    TWO_STATE_OPTIMUM_KAPPA,
    bb84_measurement,
    bb84_states,
    two_state_measurement,
)
from .core import born_probability
from .imperfections import ImperfectionParams, simulate_imperfect
from .ternary import ALL_ORDERINGS, METHOD1_SIGNALS, method1_v_probabilities
from .ternary_attacks import SymmetricPovm, detection_matrix, map_guess_table

BLOCK_SIZE = 1 << 14

PROTOCOLS = ("binary", "ternary_m1", "ternary_m2", "bb84")
EVE_STRATEGIES = ("none", "optimal_binary", "trine_map", "hv_strategy_a")

_VALID_EVE = {
    "binary": ("none", "optimal_binary"),
    "bb84": ("none", "optimal_binary"),
    "ternary_m1": ("none",),
    "ternary_m2": ("none", "trine_map", "hv_strategy_a"),
}


def thread_count() -> int:
    """Worker cap from QERASER_THREADS (default 1)."""
    raw = os.environ.get("QERASER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RunConfig:
    protocol: str
    trials: int
    seed: int
    eve: str = "none"
    imperfections: Optional[ImperfectionParams] = None

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.eve not in _VALID_EVE[self.protocol]:
            raise ValueError(f"eve={self.eve!r} not supported for {self.protocol}")
        if self.imperfections is not None and self.protocol != "binary":
            raise ValueError("imperfection parameters apply to the binary protocol only")


def _se(p: float, n: int) -> float:
    return float(np.sqrt(max(p * (1.0 - p), 0.0) / n)) if n > 0 else 0.0


@dataclass
class RunStats:
    """Integer tallies plus rates derived from them."""

    config: dict
    trials: int
    detector_counts: dict
    sift_count: int
    key_symbol_counts: dict
    key_agreement_count: int
    matched_count: int = 0
    matched_d2_count: int = 0
    eve_success_count: Optional[int] = None
    eve_outcome_counts: dict = field(default_factory=dict)
    pattern_op_counts: dict = field(default_factory=dict)

    def rates(self) -> dict:
        n = self.trials
        out = {
            "sift_rate": self.sift_count / n,
            "sift_rate_se": _se(self.sift_count / n, n),
        }
        if self.sift_count:
            agree = self.key_agreement_count / self.sift_count
            out["key_agreement_rate"] = agree
            out["qber"] = 1.0 - agree
            out["qber_se"] = _se(1.0 - agree, self.sift_count)
        for name, count in sorted(self.detector_counts.items()):
            out[f"detector_rate.{name}"] = count / n
        if self.eve_success_count is not None:
            p = self.eve_success_count / n
            out["eve_success_rate"] = p
            out["eve_success_rate_se"] = _se(p, n)
            total = sum(self.eve_outcome_counts.values())
            for name, count in sorted(self.eve_outcome_counts.items()):
                out[f"eve_outcome_rate.{name}"] = count / total
        if self.matched_count:
            out["matched_d2_rate"] = self.matched_d2_count / self.matched_count
        return out

    def to_dict(self) -> dict:
        payload = {
            "config": self.config,
            "trials": self.trials,
            "detector_counts": dict(sorted(self.detector_counts.items())),
            "sift_count": self.sift_count,
            "key_symbol_counts": dict(sorted(self.key_symbol_counts.items())),
            "key_agreement_count": self.key_agreement_count,
            "matched_count": self.matched_count,
            "matched_d2_count": self.matched_d2_count,
            "rates": self.rates(),
        }
        if self.eve_success_count is not None:
            payload["eve_success_count"] = self.eve_success_count
            payload["eve_outcome_counts"] = dict(sorted(self.eve_outcome_counts.items()))
        if self.pattern_op_counts:
            payload["pattern_op_counts"] = dict(sorted(self.pattern_op_counts.items()))
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(block)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# Per-block kernels (vectorized; integers out)
# ---------------------------------------------------------------------------

def _binary_case_p2(imperfections: Optional[ImperfectionParams]) -> np.ndarray:
    """P(D2) for cases indexed by (alice_bit, bob_bit) flattened as 2a + b."""
    if imperfections is None:
        table = [detection_probabilities(BinaryRoundConfig(a, b))[1]
                 for a in (0, 1) for b in (0, 1)]
    else:
        case_of = {(0, 0): "neither", (0, 1): "bob_only",
                   (1, 0): "alice_only", (1, 1): "both"}
        table = [simulate_imperfect(case_of[(a, b)], imperfections)[1]
                 for a in (0, 1) for b in (0, 1)]
    return np.array(table)


def _eve_two_state_table() -> np.ndarray:
    """P(alpha1 fires | alice_bit) at the optimal kappa."""
    a1, _ = two_state_measurement(TWO_STATE_OPTIMUM_KAPPA)
    from .binary import channel_state

    return np.array([
        born_probability(channel_state(0, +1).vector, a1),
        born_probability(channel_state(1, +1).vector, a1),
    ])


def _binary_block(cfg: RunConfig, n: int, rng: np.random.Generator,
                  p2_cases: np.ndarray, eve_p1: Optional[np.ndarray]) -> Counter:
    c: Counter = Counter()
    a = rng.integers(0, 2, n)
    b = rng.integers(0, 2, n)
    if cfg.eve == "optimal_binary":
        # Two-state channel: Eve measures, guesses, resends her guess.
        fire1 = rng.random(n) < eve_p1[a]
        guess = np.where(fire1, 0, 1)
        c["eve_outcome.alpha1"] = int(fire1.sum())
        c["eve_outcome.alpha2"] = int(n - fire1.sum())
        c["eve_success"] = int((guess == a).sum())
        p2 = np.where(guess != b, 0.5, 0.0)
    else:
        p2 = p2_cases[2 * a + b]
    d2 = rng.random(n) < p2
    matched = a == b
    c["detector.D1"] = int(n - d2.sum())
    c["detector.D2"] = int(d2.sum())
    c["sift"] = int(d2.sum())
    c["matched"] = int(matched.sum())
    c["matched_d2"] = int((matched & d2).sum())
    # Convention: key bit equals Alice's bit; Bob reconstructs 1 - b.
    c["key.0"] = int((d2 & (a == 0)).sum())
    c["key.1"] = int((d2 & (a == 1)).sum())
    c["agree"] = int((d2 & (a == 1 - b)).sum())
    return c


def _m1_tables() -> tuple[np.ndarray, np.ndarray]:
    signals = list(METHOD1_SIGNALS)
    pv = np.array([[method1_v_probabilities(sig, bob) for bob in range(3)]
                   for sig in signals])
    values = np.array([int(sig[0]) for sig in signals])
    return pv, values


def _ternary_m1_block(cfg: RunConfig, n: int, rng: np.random.Generator,
                      pv: np.ndarray, values: np.ndarray) -> Counter:
    c: Counter = Counter()
    sig = rng.integers(0, 6, n)
    bob = rng.integers(0, 3, n)
    u = rng.random((n, 2))
    v = u < pv[sig, bob]
    for first in (False, True):
        for second in (False, True):
            name = ("V" if first else "H") + ("V" if second else "H")
            c[f"detector.{name}"] = int(((v[:, 0] == first) & (v[:, 1] == second)).sum())
    sifted = v[:, 0] & v[:, 1]
    c["sift"] = int(sifted.sum())
    c["agree"] = int((sifted & (values[sig] == bob)).sum())
    for symbol in range(3):
        c[f"key.{symbol}"] = int((sifted & (values[sig] == symbol)).sum())
    return c


def _hv_guess_tables() -> tuple[np.ndarray, np.ndarray]:
    """Consistent-ordering lists per H/V outcome pattern for the H-focused Eve.

    Returns (table, lengths): table[pattern, k] lists ordering indices
    consistent with 'slots reading H include the H-aligned state'; lengths
    are 2, 4 or 6, all dividing 12, so a uniform draw mod length is unbiased.
    """
    table = np.zeros((8, 6), dtype=np.int64)
    lengths = np.zeros(8, dtype=np.int64)
    for bits in range(8):
        h_slots = {t for t in range(3) if (bits >> (2 - t)) & 1}
        consistent = [i for i, sigma in enumerate(ALL_ORDERINGS)
                      if sigma.index(0) in h_slots]
        if not consistent:
            consistent = list(range(6))
        lengths[bits] = len(consistent)
        table[bits, :len(consistent)] = consistent
    return table, lengths


def _ternary_m2_block(cfg: RunConfig, n: int, rng: np.random.Generator,
                      orderings: np.ndarray, map_table: Optional[np.ndarray],
                      eve_cum: Optional[np.ndarray],
                      hv_tables: Optional[tuple[np.ndarray, np.ndarray]]) -> Counter:
    c: Counter = Counter()
    sigma_idx = rng.integers(0, 6, n)
    bob = rng.integers(0, 3, n)
    states = orderings[sigma_idx]

    if cfg.eve == "trine_map":
        u = rng.random((n, 3))
        out = ((u >= eve_cum[states][:, :, 0]).astype(np.int64)
               + (u >= eve_cum[states][:, :, 1]).astype(np.int64))
        for j in range(3):
            c[f"eve_outcome.alpha{j + 1}"] = int((out == j).sum())
        guess_idx = map_table[out[:, 0] * 9 + out[:, 1] * 3 + out[:, 2]]
        c["eve_success"] = int((guess_idx == sigma_idx).sum())
        received = orderings[guess_idx]
    elif cfg.eve == "hv_strategy_a":
        p_h = np.where(states == 0, 1.0, 0.25)
        is_h = rng.random((n, 3)) < p_h
        c["eve_outcome.H"] = int(is_h.sum())
        c["eve_outcome.V"] = int(3 * n - is_h.sum())
        bits = is_h[:, 0] * 4 + is_h[:, 1] * 2 + is_h[:, 2] * 1
        table, lengths = hv_tables
        pick = rng.integers(0, 12, n) % lengths[bits]
        guess_idx = table[bits, pick]
        c["eve_success"] = int((guess_idx == sigma_idx).sum())
        received = orderings[guess_idx]
    else:
        received = states

    p_h_bob = np.where(received == bob[:, None], 1.0, 0.25)
    is_h = rng.random((n, 3)) < p_h_bob
    pattern_bits = is_h[:, 0] * 4 + is_h[:, 1] * 2 + is_h[:, 2] * 1
    names = ["".join("H" if (bits >> (2 - t)) & 1 else "V" for t in range(3))
             for bits in range(8)]
    counts = np.bincount(pattern_bits, minlength=8)
    for bits in range(8):
        c[f"detector.{names[bits]}"] = int(counts[bits])

    sifted = is_h.sum(axis=1) == 1
    c["sift"] = int(sifted.sum())
    h_slot = np.argmax(is_h, axis=1)
    key_alice = states[np.arange(n), h_slot]
    agree = sifted & (key_alice == bob)
    c["agree"] = int(agree.sum())
    for symbol in range(3):
        c[f"key.{symbol}"] = int((sifted & (key_alice == symbol)).sum())
    for bits in range(8):
        if names[bits].count("H") != 1:
            continue
        mask = sifted & (pattern_bits == bits)
        for op in range(3):
            c[f"pattern_op.{names[bits]}|B{op + 1}"] = int((mask & (bob == op)).sum())
    return c


def _bb84_tables() -> tuple[np.ndarray, np.ndarray]:
    """Eve's alpha1 firing probability per state, and P(Bob reads 1 | resent, basis)."""
    a1, a2 = bb84_measurement(BB84_OPTIMUM_KAPPA)
    states = bb84_states()
    fire1 = np.array([born_probability(st, a1) for st in states])
    basis_one = [bb84_states()[1], bb84_states()[3]]  # |V>, |A>
    read_one = np.array([[abs(one.inner(vec)) ** 2 for one in basis_one]
                         for vec in (a1, a2)])
    return fire1, read_one


def _bb84_block(cfg: RunConfig, n: int, rng: np.random.Generator,
                fire1: Optional[np.ndarray], read_one: Optional[np.ndarray]) -> Counter:
    c: Counter = Counter()
    a_bit = rng.integers(0, 2, n)
    a_basis = rng.integers(0, 2, n)
    b_basis = rng.integers(0, 2, n)
    if cfg.eve == "optimal_binary":
        state_idx = 2 * a_basis + a_bit
        f1 = rng.random(n) < fire1[state_idx]
        guess = np.where(f1, 0, 1)
        c["eve_outcome.alpha1"] = int(f1.sum())
        c["eve_outcome.alpha2"] = int(n - f1.sum())
        c["eve_success"] = int((guess == a_bit).sum())
        resent = np.where(f1, 0, 1)
        outcome = rng.random(n) < read_one[resent, b_basis]
    else:
        coin = rng.random(n) < 0.5
        outcome = np.where(a_basis == b_basis, a_bit.astype(bool), coin)
    sifted = a_basis == b_basis
    c["detector.0"] = int((~outcome).sum())
    c["detector.1"] = int(outcome.sum())
    c["sift"] = int(sifted.sum())
    c["agree"] = int((sifted & (outcome == a_bit.astype(bool))).sum())
    c["key.0"] = int((sifted & (a_bit == 0)).sum())
    c["key.1"] = int((sifted & (a_bit == 1)).sum())
    return c


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def run(config: RunConfig) -> RunStats:
    """Simulate `config.trials` protocol rounds and tally the outcomes."""
    blocks = [(i, min(BLOCK_SIZE, config.trials - i * BLOCK_SIZE))
              for i in range((config.trials + BLOCK_SIZE - 1) // BLOCK_SIZE)]

    if config.protocol == "binary":
        p2_cases = _binary_case_p2(config.imperfections)
        eve_p1 = _eve_two_state_table() if config.eve == "optimal_binary" else None

        def kernel(i, n):
            return _binary_block(config, n, _block_rng(config.seed, i), p2_cases, eve_p1)
    elif config.protocol == "ternary_m1":
        pv, values = _m1_tables()

        def kernel(i, n):
            return _ternary_m1_block(config, n, _block_rng(config.seed, i), pv, values)
    elif config.protocol == "ternary_m2":
        orderings = np.array(ALL_ORDERINGS)
        map_table = None
        eve_cum = None
        hv_tables = None
        if config.eve == "trine_map":
            povm = SymmetricPovm(0.0)
            m = detection_matrix(povm)
            eve_cum = np.cumsum(m, axis=1)[:, :2]
            guesses = map_guess_table(povm)
            map_table = np.array([guesses[o] for o in
                                  itertools.product(range(3), repeat=3)])
        elif config.eve == "hv_strategy_a":
            hv_tables = _hv_guess_tables()

        def kernel(i, n):
            return _ternary_m2_block(config, n, _block_rng(config.seed, i),
                                     orderings, map_table, eve_cum, hv_tables)
    else:
        fire1, read_one = _bb84_tables() if config.eve == "optimal_binary" else (None, None)

        def kernel(i, n):
            return _bb84_block(config, n, _block_rng(config.seed, i), fire1, read_one)

    workers = thread_count()
    totals: Counter = Counter()
    if workers == 1:
        for i, n in blocks:
            totals.update(kernel(i, n))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for counter in pool.map(lambda bn: kernel(*bn), blocks):
                totals.update(counter)

    return _assemble(config, totals)


def _assemble(config: RunConfig, totals: Counter) -> RunStats:
    def bucket(prefix: str) -> dict:
        plen = len(prefix)
        return {k[plen:]: int(v) for k, v in totals.items() if k.startswith(prefix)}

    config_echo = {
        "protocol": config.protocol,
        "trials": config.trials,
        "seed": config.seed,
        "eve": config.eve,
    }
    if config.imperfections is not None:
        config_echo["imperfections"] = vars(config.imperfections)
    eve_counts = bucket("eve_outcome.")
    return RunStats(
        config=config_echo,
        trials=config.trials,
        detector_counts=bucket("detector."),
        sift_count=int(totals["sift"]),
        key_symbol_counts=bucket("key."),
        key_agreement_count=int(totals["agree"]),
        matched_count=int(totals["matched"]),
        matched_d2_count=int(totals["matched_d2"]),
        eve_success_count=int(totals["eve_success"]) if config.eve != "none" else None,
        eve_outcome_counts=eve_counts,
        pattern_op_counts=bucket("pattern_op."),
    )


# ---------------------------------------------------------------------------
# Single-shot intercept-resend reference (scalar, for tests and inspection)
# ---------------------------------------------------------------------------

def eve_intercept_resend(strategy: str, payload, rng: np.random.Generator):
    """Measure one in-flight payload and produce (resent, guess).

    `payload` is an Alice bit (0/1) for 'optimal_binary' or an ordering
    tuple of trine indices for the group strategies.  The resent object
    mirrors what Bob would receive: a channel-state label for the binary
    case, or a tuple of trine indices in Eve's guessed order.
    """
    if strategy == "optimal_binary":
        p1 = _eve_two_state_table()[payload]
        guess = 0 if rng.random() < p1 else 1
        return f"phi{guess}+", guess
    if strategy == "trine_map":
        povm = SymmetricPovm(0.0)
        m = detection_matrix(povm)
        outcome = tuple(int(rng.choice(3, p=m[s])) for s in payload)
        guess_idx = map_guess_table(povm)[outcome]
        return ALL_ORDERINGS[guess_idx], guess_idx
    if strategy == "hv_strategy_a":
        table, lengths = _hv_guess_tables()
        is_h = [rng.random() < (1.0 if s == 0 else 0.25) for s in payload]
        bits = is_h[0] * 4 + is_h[1] * 2 + is_h[2] * 1
        guess_idx = int(table[bits, rng.integers(0, lengths[bits])])
        return ALL_ORDERINGS[guess_idx], guess_idx
    raise ValueError(f"unknown strategy {strategy!r}")
