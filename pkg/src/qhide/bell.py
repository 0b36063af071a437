"""Protocol variations: direct classical frames, Bell-basis encoding,
Bell-pair hiding, and dummy frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

from qhide import statevec as sv
from qhide.protocol import Frame

_H = 1.0 / math.sqrt(2.0)

BELL_AMPLITUDES = {
    "phi+": (_H, 0.0, 0.0, _H),
    "phi-": (_H, 0.0, 0.0, -_H),
    "psi+": (0.0, _H, _H, 0.0),
    "psi-": (0.0, _H, -_H, 0.0),
}
BELL_KINDS = tuple(BELL_AMPLITUDES)


class UnhideablePhase(ValueError):
    """Diffusion only negates a minus-sign Bell state; it cannot hide it."""


class NotClassical(ValueError):
    """Direct decoding needs a single basis state, not a superposition."""


def prepare_bell(kind: str) -> Frame:
    if kind not in BELL_AMPLITUDES:
        raise ValueError(f"unknown Bell state {kind!r}")
    return Frame(sv.StateVector(BELL_AMPLITUDES[kind]))


def classify_bell(frame: Frame) -> str | None:
    """Name of the Bell state this frame equals (up to global sign), else None."""
    for kind, amps in BELL_AMPLITUDES.items():
        target = sv.StateVector(amps)
        if frame.payload.isclose(target) or frame.payload.isclose(
            sv.StateVector([-a for a in amps])
        ):
            return kind
    return None


def hide_bell(frame: Frame) -> Frame:
    """Swap the two plus-sign Bell states via the diffusion operator."""
    kind = classify_bell(frame)
    if kind is None:
        raise ValueError("frame is not a Bell state")
    if kind in ("phi-", "psi-"):
        raise UnhideablePhase(f"{kind} picks up only a global sign under diffusion")
    return Frame(sv.apply_g(frame.payload))


def encode_direct(bit1: int, bit2: int) -> Frame:
    for b in (bit1, bit2):
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
    return Frame(sv.basis_state(2, (bit1 << 1) | bit2))


def decode_direct(frame: Frame, rng) -> tuple[int, int]:
    if len(frame.support()) != 1:
        raise NotClassical("frame carries a superposition, not a basis state")
    outcome, _ = sv.measure(frame.payload, rng)
    return sv.bit_at(outcome, 1), sv.bit_at(outcome, 2)


def dummy_frame(rng) -> Frame:
    """A uniformly random Bell state, sent to confuse an eavesdropper."""
    kind = BELL_KINDS[int(rng.random() * 4.0) % 4]
    return prepare_bell(kind)


@dataclass(frozen=True)
class ExtendedSymbol:
    """One unit of the extended stream: raw bits, a Bell state, or a dummy."""

    kind: str  # "raw", "bell" or "dummy"
    bits: tuple | None = None
    state: str | None = None

    def __post_init__(self):
        if self.kind == "raw":
            if self.bits is None or len(self.bits) != 2:
                raise ValueError("raw symbols carry exactly two bits")
        elif self.kind == "bell":
            if self.state not in BELL_AMPLITUDES:
                raise ValueError(f"unknown Bell state {self.state!r}")
        elif self.kind != "dummy":
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    def to_json_dict(self) -> dict:
        if self.kind == "raw":
            return {"kind": "raw", "bits": f"{self.bits[0]}{self.bits[1]}"}
        if self.kind == "bell":
            return {"kind": "bell", "state": self.state}
        return {"kind": "dummy"}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExtendedSymbol":
        kind = data["kind"]
        if kind == "raw":
            bits = data["bits"]
            return cls("raw", bits=(int(bits[0]), int(bits[1])))
        if kind == "bell":
            return cls("bell", state=data["state"])
        return cls("dummy")
