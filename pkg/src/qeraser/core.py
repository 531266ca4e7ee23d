"""Complex linear algebra over small labeled Hilbert spaces.

States and operators live on explicit labeled bases (path modes tensored with
polarization), so every amplitude index has a physical meaning.  The basis
ordering for the standard interferometer space is fixed as

    (U,H), (U,V), (L,H), (L,V)

and decohered path modes, when present, are appended after ``U`` and ``L`` so
that ideal-case code never touches them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

# Tolerance policy: analytic identities at 1e-12, composed pipelines
# (several matrix products) at 1e-9.
ATOL_IDENTITY = 1e-12
ATOL_PIPELINE = 1e-9

# Everything in the protocol fits in path 8 x pol 2 x optional ancilla 2.
MAX_DIM = 32

PATH_MODES = ("U", "L")
POLARIZATIONS = ("H", "V")

# Extended path modes for the decoherence model: Du/Dl are decohered arms
# before the output beam splitter, du*/dl* the corresponding output modes.
DECOHERED_PATH_MODES = ("U", "L", "Du", "Dl", "du1", "du2", "dl1", "dl2")

Label = Union[str, tuple]


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector over a labeled basis."""

    amplitudes: np.ndarray
    basis: tuple

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != len(self.basis):
            raise ValueError(
                f"{amps.shape[0]} amplitudes for {len(self.basis)} basis labels"
            )
        if amps.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {amps.shape[0]} exceeds MAX_DIM={MAX_DIM}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis", tuple(self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n, self.basis)

    def inner(self, other: "StateVector") -> complex:
        """Return <self|other>."""
        self._check_basis(other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def overlap(self, other: "StateVector") -> float:
        """Return |<self|other>|."""
        return abs(self.inner(other))

    def amplitude(self, label: Label) -> complex:
        return complex(self.amplitudes[self.basis.index(label)])

    def equals_up_to_phase(self, other: "StateVector", atol: float = ATOL_IDENTITY) -> bool:
        """Global-phase equivalence for normalized states: |<a|b>| = 1."""
        return abs(self.overlap(other) - 1.0) < atol

    def _check_basis(self, basis: tuple) -> None:
        if tuple(basis) != self.basis:
            raise ValueError("basis mismatch between operands")


@dataclass(frozen=True)
class LinearMap:
    """Complex matrix acting on StateVectors sharing its basis."""

    matrix: np.ndarray
    basis: tuple
    unitary: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        n = len(self.basis)
        if mat.shape != (n, n):
            raise ValueError(f"matrix shape {mat.shape} does not match basis size {n}")
        if self.unitary:
            dev = np.max(np.abs(mat.conj().T @ mat - np.eye(n)))
            if dev > ATOL_IDENTITY:
                raise ValueError(f"map flagged unitary violates M^dag M = I by {dev:.3e}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "basis", tuple(self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def apply(self, state: StateVector) -> StateVector:
        state._check_basis(self.basis)
        return StateVector(self.matrix @ state.amplitudes, self.basis)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Return self . other (other acts first)."""
        if self.basis != other.basis:
            raise ValueError("basis mismatch between maps")
        return LinearMap(self.matrix @ other.matrix, self.basis,
                         unitary=self.unitary and other.unitary)

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return self.compose(other)
        if isinstance(other, StateVector):
            return self.apply(other)
        return NotImplemented

    def dagger(self) -> "LinearMap":
        return LinearMap(self.matrix.conj().T, self.basis, unitary=self.unitary)


def product_basis(paths: Iterable[str] = PATH_MODES,
                  pols: Iterable[str] = POLARIZATIONS) -> tuple:
    """Path (x) polarization basis, path-major: (U,H),(U,V),(L,H),(L,V),..."""
    return tuple((p, s) for p in paths for s in pols)


STANDARD_BASIS = product_basis()
POL_BASIS = POLARIZATIONS


def ket(label: Label, basis: tuple) -> StateVector:
    amps = np.zeros(len(basis), dtype=complex)
    amps[tuple(basis).index(label)] = 1.0
    return StateVector(amps, basis)


def superposition(terms: Mapping[Label, complex], basis: tuple) -> StateVector:
    amps = np.zeros(len(basis), dtype=complex)
    for label, amp in terms.items():
        amps[tuple(basis).index(label)] += amp
    return StateVector(amps, basis)


def pol_state(angle: float) -> StateVector:
    """Linear polarization at `angle` from H, as cos|H> + sin|V>."""
    return StateVector(np.array([np.cos(angle), np.sin(angle)]), POL_BASIS)


# |D> and |A>, the diagonal/anti-diagonal polarizations.
def diag_pol(sign: int = +1) -> StateVector:
    return StateVector(np.array([1.0, float(sign)]) / np.sqrt(2.0), POL_BASIS)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; labels combine as flat tuples."""
    dim = a.dim * b.dim
    if dim > MAX_DIM:
        raise ValueError(f"tensor dimension {dim} exceeds MAX_DIM={MAX_DIM}")

    def flat(label: Label) -> tuple:
        return label if isinstance(label, tuple) else (label,)

    basis = tuple(flat(la) + flat(lb) for la in a.basis for lb in b.basis)
    return StateVector(np.kron(a.amplitudes, b.amplitudes), basis)


def rotation2(phi: float) -> np.ndarray:
    """Counterclockwise polarization rotation in the (H, V) basis."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _paths_of(basis: tuple) -> tuple:
    seen = []
    for label in basis:
        if label[0] not in seen:
            seen.append(label[0])
    return tuple(seen)


def path_operator(path_matrix: np.ndarray, basis: tuple = STANDARD_BASIS,
                  unitary: bool = True) -> LinearMap:
    """Lift an operator on the path modes to the path (x) pol space."""
    return LinearMap(np.kron(np.asarray(path_matrix, dtype=complex), np.eye(2)),
                     basis, unitary=unitary)


def polarization_operator(pol_matrix: np.ndarray, basis: tuple = STANDARD_BASIS,
                          unitary: bool = True) -> LinearMap:
    n_paths = len(_paths_of(basis))
    return LinearMap(np.kron(np.eye(n_paths), np.asarray(pol_matrix, dtype=complex)),
                     basis, unitary=unitary)


def beam_splitter(theta: float, basis: tuple = STANDARD_BASIS) -> LinearMap:
    """Beam splitter on the (U, L) path pair; identity on polarization.

    Convention (same for BS1 and BS2):
        |U> -> cos(theta)|U> + sin(theta)|L>
        |L> -> sin(theta)|U> - cos(theta)|L>

    Alternative sign conventions differ only by relabeling the two output
    detectors and are not implemented.
    """
    if _paths_of(basis) != PATH_MODES:
        raise ValueError("beam_splitter expects a basis over the (U, L) path pair")
    c, s = np.cos(theta), np.sin(theta)
    bs2 = np.array([[c, s], [s, -c]], dtype=complex)
    return path_operator(bs2, basis)


def rotator(direction: str, phi: float, basis: tuple = POL_BASIS) -> LinearMap:
    """Polarization rotator S_L (counterclockwise) or S_R = S_L^dagger.

    On a 2-dim polarization basis it is the bare rotation; on a product basis
    it acts on every path mode.
    """
    if direction not in ("L", "R"):
        raise ValueError("direction must be 'L' or 'R'")
    mat = rotation2(phi if direction == "L" else -phi)
    if basis == POL_BASIS or all(not isinstance(b, tuple) for b in basis):
        return LinearMap(mat, basis, unitary=True)
    return polarization_operator(mat, basis)


def path_conditioned(pol_by_path: Mapping[str, np.ndarray],
                     basis: tuple = STANDARD_BASIS) -> LinearMap:
    """Block-diagonal map applying a 2x2 polarization matrix per path mode.

    Path modes missing from `pol_by_path` get the identity.
    """
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for path in _paths_of(basis):
        block = np.asarray(pol_by_path.get(path, np.eye(2)), dtype=complex)
        idx = [basis.index((path, pol)) for pol in POLARIZATIONS]
        mat[np.ix_(idx, idx)] = block
    return LinearMap(mat, basis, unitary=True)


def encoder(party: str, upper: float = np.pi / 4, lower: float = np.pi / 4,
            basis: tuple = STANDARD_BASIS) -> LinearMap:
    """Path-conditioned polarization rotation for Alice or Bob.

    Alice rotates the upper arm counterclockwise (S_L) and the lower arm
    clockwise (S_R); Bob does the opposite, so ideal settings give
    T_B T_A = I.
    """
    if party == "Alice":
        upper_mat, lower_mat = rotation2(upper), rotation2(-lower)
    elif party == "Bob":
        upper_mat, lower_mat = rotation2(-upper), rotation2(lower)
    else:
        raise ValueError("party must be 'Alice' or 'Bob'")
    return path_conditioned({"U": upper_mat, "L": lower_mat}, basis)


def projector(vec: StateVector) -> LinearMap:
    amps = vec.amplitudes
    return LinearMap(np.outer(amps, amps.conj()), vec.basis, unitary=False)


def path_group_projector(paths: Iterable[str], basis: tuple) -> LinearMap:
    """Projector onto all basis labels whose path mode is in `paths`."""
    wanted = set(paths)
    diag = np.array([1.0 if label[0] in wanted else 0.0 for label in basis])
    return LinearMap(np.diag(diag.astype(complex)), basis, unitary=False)


def born_probability(state: StateVector,
                     effect: Union[LinearMap, StateVector]) -> float:
    """Born-rule probability of `effect` (projector or effect operator).

    The input state must be normalized to within 1e-9.
    """
    n = state.norm()
    if abs(n - 1.0) > ATOL_PIPELINE:
        raise ValueError(f"state norm {n} is not 1 within {ATOL_PIPELINE}")
    if isinstance(effect, StateVector):
        p = abs(effect.inner(state)) ** 2
    else:
        state._check_basis(effect.basis)
        p = float(np.real(np.vdot(state.amplitudes, effect.matrix @ state.amplitudes)))
    return float(min(max(p, 0.0), 1.0))
