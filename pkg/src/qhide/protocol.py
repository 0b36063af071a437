"""Oracle catalog, key schedule and the Alice/Bob state machines.

A key entry is a pair (action, position): action "H" hides the message
pair (the transmitted superposition carries the complementary states),
"N" sends it in the clear; position selects which data qubit carries the
message bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from qhide import statevec as sv
from qhide.statevec import StateVector

HIDE = "H"
NO_HIDE = "N"
ACTIONS = (HIDE, NO_HIDE)
POSITIONS = (1, 2)


class MalformedKey(ValueError):
    """Key text does not match ([HN][12])+."""


class KeyExhausted(ValueError):
    """Message is longer than the key and cycling is disabled."""


def _check_bit(bit):
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")


def _check_position(position):
    if position not in POSITIONS:
        raise ValueError(f"position must be 1 or 2, got {position!r}")


def _check_action(action):
    if action not in ACTIONS:
        raise ValueError(f"action must be 'H' or 'N', got {action!r}")


@dataclass(frozen=True)
class PairOracle:
    """Balanced boolean function on the four data basis states, marking
    exactly two of them."""

    marked: frozenset

    def __post_init__(self):
        if not isinstance(self.marked, frozenset):
            object.__setattr__(self, "marked", frozenset(self.marked))
        if len(self.marked) != 2 or not self.marked <= {0, 1, 2, 3}:
            raise ValueError(f"oracle must mark exactly two basis states, got {set(self.marked)}")

    def evaluate(self, x: int) -> int:
        return 1 if x in self.marked else 0

    def complement(self) -> "PairOracle":
        return PairOracle(frozenset({0, 1, 2, 3}) - self.marked)


@dataclass(frozen=True)
class Frame:
    """The 2-qubit payload that travels per message bit."""

    payload: StateVector

    def to_json_dict(self) -> dict:
        return {"amps": self.payload.amplitude_list()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Frame":
        return cls(StateVector(data["amps"]))

    def support(self) -> frozenset:
        amps = self.payload.amplitudes
        return frozenset(i for i in range(4) if abs(amps[i]) > sv.NORM_ATOL)


def oracle_for(bit: int, position: int, action: str) -> PairOracle:
    """One of the eight oracles: marks the transmitted pair of basis states."""
    _check_bit(bit)
    _check_position(position)
    _check_action(action)
    plain = frozenset(x for x in range(4) if sv.bit_at(x, position) == bit)
    oracle = PairOracle(plain)
    return oracle.complement() if action == HIDE else oracle


def alice_prepare(bit: int, position: int, action: str) -> Frame:
    """Run the preparation pipeline and return the 2-qubit frame.

    Starts from the uniform data register with the extra qubit in |0>,
    applies the chosen oracle, then the partial diffusion, then checks
    the extra qubit is separable and drops it.
    """
    oracle = oracle_for(bit, position, action)
    amps = [0.0] * 8
    for x in range(4):
        amps[2 * x] = 0.5  # uniform data (x) |0>
    state = StateVector(amps)
    state = sv.apply_oracle(state, oracle)
    state = sv.apply_dp(state)
    return Frame(sv.extract_data_register(state))


def bob_decode(frame: Frame, action: str, position: int, rng) -> int:
    """Decode one frame with the key entry shared with Alice."""
    _check_action(action)
    _check_position(position)
    state = frame.payload
    if action == HIDE:
        state = sv.apply_g(state)
    outcome, _ = sv.measure(state, rng)
    return sv.bit_at(outcome, position)


_KEY_TOKEN = re.compile(r"[HN][12]")


@dataclass(frozen=True)
class SecretKey:
    """Ordered (action, position) entries shared by Alice and Bob."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise MalformedKey("key must have at least one entry")
        for action, position in self.entries:
            _check_action(action)
            _check_position(position)

    def __len__(self):
        return len(self.entries)

    def entry(self, i: int, cycle: bool = False) -> tuple:
        if i >= len(self.entries):
            if not cycle:
                raise KeyExhausted(
                    f"key has {len(self.entries)} entries but bit {i} was requested"
                )
            i %= len(self.entries)
        return self.entries[i]

    def format(self) -> str:
        return "".join(f"{a}{p}" for a, p in self.entries)


def parse_key(text: str) -> SecretKey:
    if not text or not re.fullmatch(r"(?:[HN][12])+", text):
        raise MalformedKey(f"key must match ([HN][12])+, got {text!r}")
    entries = tuple((tok[0], int(tok[1])) for tok in _KEY_TOKEN.findall(text))
    return SecretKey(entries)


def parse_message(text: str) -> list[int]:
    if not re.fullmatch(r"[01]*", text):
        raise ValueError(f"message must be a string of 0/1 characters, got {text!r}")
    return [int(c) for c in text]


def transmit_message(bits, key: SecretKey, channel, rng, cycle_key: bool = False) -> list[int]:
    """Send each bit through Alice -> channel -> Bob and collect Bob's bits.

    `channel` is a callable (Frame, rng) -> Frame, or None for a clean
    wire. The same key entry drives both ends of each frame.
    """
    received = []
    for i, bit in enumerate(bits):
        action, position = key.entry(i, cycle=cycle_key)
        frame = alice_prepare(bit, position, action)
        if channel is not None:
            frame = channel(frame, rng)
        received.append(bob_decode(frame, action, position, rng))
    return received
