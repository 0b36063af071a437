"""Intercept-resend eavesdropper strategies.

Eve either measures a frame directly ("M") or applies the diffusion
operator first ("GM"), reads her guess from one position of the outcome,
then resends either the collapsed state ("SM") or a freshly prepared
superposition of her own choosing ("PS").
"""

from __future__ import annotations

from dataclasses import dataclass

from qhide import protocol, statevec as sv
from qhide.protocol import Frame

MEASURE = "M"
DIFFUSE_MEASURE = "GM"
RESEND_MEASURED = "SM"
RESEND_PREPARED = "PS"


@dataclass(frozen=True)
class ResendPolicy:
    kind: str  # "SM" or "PS"
    ps_choice: tuple | None = None  # (bit, position, hide action) iff kind == "PS"

    def __post_init__(self):
        if self.kind not in (RESEND_MEASURED, RESEND_PREPARED):
            raise ValueError(f"resend kind must be 'SM' or 'PS', got {self.kind!r}")
        if (self.kind == RESEND_PREPARED) != (self.ps_choice is not None):
            raise ValueError("ps_choice is required exactly when kind is 'PS'")


@dataclass(frozen=True)
class EveStrategy:
    action: str  # "M" or "GM"
    read_position: int
    resend: ResendPolicy

    def __post_init__(self):
        if self.action not in (MEASURE, DIFFUSE_MEASURE):
            raise ValueError(f"action must be 'M' or 'GM', got {self.action!r}")
        if self.read_position not in (1, 2):
            raise ValueError(f"read_position must be 1 or 2, got {self.read_position!r}")

    def to_json_dict(self) -> dict:
        if self.resend.kind == RESEND_MEASURED:
            resend = "SM"
        else:
            bit, position, hide = self.resend.ps_choice
            resend = {"PS": {"bit": bit, "position": position, "hide": hide}}
        return {"action": self.action, "read_position": self.read_position, "resend": resend}

    @classmethod
    def from_json_dict(cls, data: dict) -> "EveStrategy":
        resend = data["resend"]
        if resend == "SM":
            policy = ResendPolicy(RESEND_MEASURED)
        else:
            ps = resend["PS"]
            policy = ResendPolicy(RESEND_PREPARED, (ps["bit"], ps["position"], ps["hide"]))
        return cls(data["action"], data["read_position"], policy)


@dataclass(frozen=True)
class EveRecord:
    guessed_bit: int
    resent: Frame


@dataclass(frozen=True)
class StrategyPriors:
    """Sampling weights for random_strategy; defaults are uniform."""

    p_gm: float = 0.5
    p_position1: float = 0.5
    p_ps: float = 0.5
    p_ps_bit1: float = 0.5
    p_ps_position1: float = 0.5
    p_ps_hide: float = 0.5

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")


UNIFORM_PRIORS = StrategyPriors()


def random_strategy(rng, priors: StrategyPriors = UNIFORM_PRIORS) -> EveStrategy:
    """Sample every choice of the strategy independently from the priors."""
    action = DIFFUSE_MEASURE if rng.random() < priors.p_gm else MEASURE
    read_position = 1 if rng.random() < priors.p_position1 else 2
    if rng.random() < priors.p_ps:
        bit = 1 if rng.random() < priors.p_ps_bit1 else 0
        position = 1 if rng.random() < priors.p_ps_position1 else 2
        hide = protocol.HIDE if rng.random() < priors.p_ps_hide else protocol.NO_HIDE
        policy = ResendPolicy(RESEND_PREPARED, (bit, position, hide))
    else:
        policy = ResendPolicy(RESEND_MEASURED)
    return EveStrategy(action, read_position, policy)


def eve_intercept(frame: Frame, strategy: EveStrategy, rng) -> EveRecord:
    """Intercept one frame: measure (after optional diffusion), guess, resend."""
    state = frame.payload
    if strategy.action == DIFFUSE_MEASURE:
        state = sv.apply_g(state)
    outcome, collapsed = sv.measure(state, rng)
    guessed = sv.bit_at(outcome, strategy.read_position)
    if strategy.resend.kind == RESEND_MEASURED:
        resent = Frame(collapsed)
    else:
        bit, position, hide = strategy.resend.ps_choice
        resent = protocol.alice_prepare(bit, position, hide)
    return EveRecord(guessed, resent)


def make_eve_channel(strategy: EveStrategy | None = None,
                     priors: StrategyPriors = UNIFORM_PRIORS):
    """Channel transform for transmit_message.

    With a fixed strategy, every frame is intercepted the same way; with
    strategy None, Eve re-randomizes her strategy per frame.
    """

    def channel(frame: Frame, rng) -> Frame:
        s = strategy if strategy is not None else random_strategy(rng, priors)
        return eve_intercept(frame, s, rng).resent

    return channel
