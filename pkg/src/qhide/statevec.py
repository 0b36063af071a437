"""Real-amplitude state vectors for 2- and 3-qubit registers.

Index convention: data qubit 1 is the most significant bit of the basis
index, data qubit 2 the next, and (for 3-qubit registers) the extra
marking qubit is the least significant bit, so index = q1*4 + q2*2 + a.
"""

from __future__ import annotations

import numpy as np

NORM_ATOL = 1e-12
SEPARABILITY_ATOL = 1e-9


class NotSeparable(ValueError):
    """The extra qubit is entangled with the data register."""


class StateVector:
    """Immutable normalized state over 2 or 3 qubits with signed real amplitudes."""

    __slots__ = ("qubit_count", "_amps")

    def __init__(self, amplitudes):
        amps = np.array(amplitudes, dtype=float)
        if amps.shape == (4,):
            qubit_count = 2
        elif amps.shape == (8,):
            qubit_count = 3
        else:
            raise ValueError(f"expected 4 or 8 amplitudes, got shape {amps.shape}")
        norm = float(np.dot(amps, amps))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"amplitudes are not normalized (norm^2 = {norm})")
        amps /= np.sqrt(norm)
        amps.flags.writeable = False
        self.qubit_count = qubit_count
        self._amps = amps

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return 1 << self.qubit_count

    def amplitude_list(self) -> list[float]:
        """Amplitudes in basis-index order, for JSON serialization."""
        return [float(a) for a in self._amps]

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.qubit_count == other.qubit_count and np.array_equal(
            self._amps, other._amps
        )

    def __hash__(self):
        return hash((self.qubit_count, self._amps.tobytes()))

    def __repr__(self):
        return f"StateVector({self._amps.tolist()})"

    def isclose(self, other: "StateVector", atol: float = NORM_ATOL) -> bool:
        return self.qubit_count == other.qubit_count and bool(
            np.allclose(self._amps, other._amps, rtol=0.0, atol=atol)
        )


def basis_state(qubit_count: int, index: int) -> StateVector:
    amps = np.zeros(1 << qubit_count)
    amps[index] = 1.0
    return StateVector(amps)


def uniform_data_state() -> StateVector:
    """The 2-qubit state with all four amplitudes equal to 1/2."""
    return StateVector([0.5, 0.5, 0.5, 0.5])


def _require_qubits(state: StateVector, n: int):
    if state.qubit_count != n:
        raise ValueError(f"expected a {n}-qubit register, got {state.qubit_count}")


def _hadamard_pair_matrix() -> np.ndarray:
    w = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return np.kron(w, w)


def g_matrix() -> np.ndarray:
    """Explicit 4x4 diffusion matrix (W (x) W)(2|0><0| - I)(W (x) W)."""
    w2 = _hadamard_pair_matrix()
    refl = 2.0 * np.outer(np.eye(4)[0], np.eye(4)[0]) - np.eye(4)
    return w2 @ refl @ w2


def dp_matrix() -> np.ndarray:
    """Explicit 8x8 matrix (W (x) W (x) I)(2|0><0| - I)(W (x) W (x) I)."""
    w2i = np.kron(_hadamard_pair_matrix(), np.eye(2))
    refl = 2.0 * np.outer(np.eye(8)[0], np.eye(8)[0]) - np.eye(8)
    return w2i @ refl @ w2i


_DP = dp_matrix()


def apply_g(state: StateVector) -> StateVector:
    """Inversion about the mean on the 2-qubit data register."""
    _require_qubits(state, 2)
    amps = state.amplitudes
    mean = float(amps.sum()) / 4.0
    return StateVector(2.0 * mean - amps)


def apply_dp(state: StateVector) -> StateVector:
    """Partial diffusion: inversion about the mean on the extra-qubit-|0>
    subspace, sign flip on the |1> subspace."""
    _require_qubits(state, 3)
    return StateVector(_DP @ state.amplitudes)


def apply_oracle(state: StateVector, oracle) -> StateVector:
    """Flip the extra qubit on every basis state whose data bits are marked."""
    _require_qubits(state, 3)
    out = np.empty(8)
    amps = state.amplitudes
    for x in range(4):
        f = 1 if oracle.evaluate(x) else 0
        out[2 * x + f] = amps[2 * x]
        out[2 * x + (1 - f)] = amps[2 * x + 1]
    return StateVector(out)


def measurement_distribution(state: StateVector) -> dict[int, float]:
    """Born-rule probability for every basis index."""
    amps = state.amplitudes
    return {i: float(amps[i] * amps[i]) for i in range(state.dim)}


def measure(state: StateVector, rng) -> tuple[int, StateVector]:
    """Sample a basis index and return it with the collapsed state."""
    probs = state.amplitudes ** 2
    r = float(rng.random())
    acc = 0.0
    outcome = state.dim - 1
    for i, p in enumerate(probs):
        acc += float(p)
        if r < acc:
            outcome = i
            break
    return outcome, basis_state(state.qubit_count, outcome)


def extract_data_register(state: StateVector) -> StateVector:
    """Factor out and drop the extra qubit of a separable 3-qubit state.

    The returned 2-qubit factor is sign-canonicalized so its first
    nonzero amplitude is positive.
    """
    _require_qubits(state, 3)
    m = state.amplitudes.reshape(4, 2)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s[1] > SEPARABILITY_ATOL:
        raise NotSeparable(
            f"extra qubit is entangled with the data register "
            f"(second singular value {s[1]:.3e})"
        )
    data = u[:, 0].copy()
    # Canonical form: amplitudes below tolerance are exactly zero.
    data[np.abs(data) < NORM_ATOL] = 0.0
    for a in data:
        if abs(a) > NORM_ATOL:
            if a < 0:
                data = -data
            break
    return StateVector(data)


def bit_at(index: int, position: int) -> int:
    """Bit of a 2-qubit basis index: position 1 is the most significant."""
    if position not in (1, 2):
        raise ValueError(f"position must be 1 or 2, got {position}")
    return (index >> (2 - position)) & 1


def make_rng(seed) -> np.random.Generator:
    """Seedable deterministic random stream used by every sampling operation."""
    return np.random.default_rng(seed)
