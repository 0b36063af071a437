"""Eavesdropping action-tree evaluation.

Two first-class leaf models:
  * "paper"   — the published combinatorial counting rules, exact rationals;
  * "quantum" — ground truth by Born-rule enumeration over every branch.
Plus a seeded Monte Carlo estimator that runs the simulated pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from qhide import backend, protocol, statevec as sv
from qhide.protocol import Frame, HIDE, NO_HIDE

RESEND_KINDS = ("SM", "PS-H", "PS-N")
_RESEND_CODE = {"SM": 0, "PS-H": 1, "PS-N": 2}

# Published claims, in order of appearance, with the computed quantity
# each one is checked against.
CLAIM_KEYS = (
    ("eve_reads_correct", Fraction(1, 4)),
    ("eve_prepares_correct_superposition", Fraction(1, 8)),
    ("detect_given_hide", Fraction(61, 64)),      # 95.3125%
    ("detect_given_no_hide", Fraction(55, 64)),   # 85.9375%
    ("no_detect_per_bit", Fraction(3, 16)),       # 18.75%
    ("detect_per_bit", Fraction(13, 16)),         # 81.25%
    ("secure_fraction", Fraction(3, 4)),          # 75%
)


@dataclass(frozen=True)
class Scenario:
    alice_action: str  # "H" or "N"
    eve_action: str    # "M" or "GM"
    resend: str        # "SM", "PS-H" or "PS-N"

    def __post_init__(self):
        if self.alice_action not in (HIDE, NO_HIDE):
            raise ValueError(f"bad alice_action {self.alice_action!r}")
        if self.eve_action not in ("M", "GM"):
            raise ValueError(f"bad eve_action {self.eve_action!r}")
        if self.resend not in RESEND_KINDS:
            raise ValueError(f"bad resend kind {self.resend!r}")

    def to_json_dict(self) -> dict:
        return {"alice": self.alice_action, "eve": self.eve_action, "resend": self.resend}


def enumerate_leaves() -> list[Scenario]:
    """The 12 scenarios in canonical order: H before N, M before GM,
    SM / PS-H / PS-N within each."""
    return [
        Scenario(alice, eve, resend)
        for alice in (HIDE, NO_HIDE)
        for eve in ("M", "GM")
        for resend in RESEND_KINDS
    ]


@dataclass(frozen=True)
class BranchPriors:
    """Edge weights of the action tree; defaults are its printed labels.

    The PS weight 1 - p_sm is split evenly between the PS-H and PS-N
    sub-branches.
    """

    p_hide: Fraction = Fraction(1, 2)
    p_gm: Fraction = Fraction(1, 2)
    p_sm: Fraction = Fraction(1, 2)

    def alice_prior(self, action: str) -> Fraction:
        return self.p_hide if action == HIDE else 1 - self.p_hide

    def eve_prior(self, action: str) -> Fraction:
        return self.p_gm if action == "GM" else 1 - self.p_gm

    def resend_prior(self, kind: str) -> Fraction:
        if kind == "SM":
            return self.p_sm
        return (1 - self.p_sm) / 2


DEFAULT_PRIORS = BranchPriors()


def leaf_probability_paper(s: Scenario) -> Fraction:
    """Bob-correct probability under the published counting rules."""
    if s.resend == "SM":
        bob_applies_g = s.alice_action == HIDE
        if bob_applies_g:
            # Diffusing a resent basis state: "random state" 1/4 times
            # correct-position 1/2.
            return Fraction(1, 8)
        # Direct measurement after SM succeeds only when Eve measured
        # directly too.
        return Fraction(1) if s.eve_action == "M" else Fraction(0)
    # PS: correct only when Eve's hide guess matches Alice's action,
    # then 1/2 for the bit times 1/2 for the position.
    matches = (s.resend == "PS-H") == (s.alice_action == HIDE)
    return Fraction(1, 4) if matches else Fraction(0)


def _as_fraction(x: float, max_den: int = 4096) -> Fraction:
    """Snap a float that is known to be rational with a small denominator."""
    f = Fraction(x).limit_denominator(max_den)
    if abs(float(f) - x) > 1e-9:
        raise ValueError(f"{x} is not close to a small rational")
    return f


def _bob_correct_prob(resent: Frame, alice_action: str, position: int, bit: int) -> Fraction:
    state = resent.payload
    if alice_action == HIDE:
        state = sv.apply_g(state)
    dist = sv.measurement_distribution(state)
    total = sum(p for idx, p in dist.items() if sv.bit_at(idx, position) == bit)
    return _as_fraction(total)


def leaf_probability_quantum(s: Scenario, bit: int | None = None,
                             position: int | None = None) -> Fraction:
    """Exact Bob-correct probability by enumerating every branch.

    Alice's bit and position are uniform unless pinned via the keyword
    arguments (used by the symmetry checks); Eve's residual choices are
    uniform; measurement branches carry their Born weights.
    """
    bits = (bit,) if bit is not None else (0, 1)
    positions = (position,) if position is not None else (1, 2)
    total = Fraction(0)
    w_alice = Fraction(1, len(bits) * len(positions))
    for b in bits:
        for p in positions:
            frame = protocol.alice_prepare(b, p, s.alice_action)
            if s.resend == "SM":
                meas = frame.payload
                if s.eve_action == "GM":
                    meas = sv.apply_g(meas)
                for idx, pr in sv.measurement_distribution(meas).items():
                    if pr <= sv.NORM_ATOL:
                        continue
                    resent = Frame(sv.basis_state(2, idx))
                    total += w_alice * _as_fraction(pr) * _bob_correct_prob(
                        resent, s.alice_action, p, b
                    )
            else:
                hide = HIDE if s.resend == "PS-H" else NO_HIDE
                w_ps = Fraction(1, 4)
                for ps_bit in (0, 1):
                    for ps_pos in (1, 2):
                        resent = protocol.alice_prepare(ps_bit, ps_pos, hide)
                        total += w_alice * w_ps * _bob_correct_prob(
                            resent, s.alice_action, p, b
                        )
    return total


def monte_carlo_leaf(s: Scenario, trials: int, rng) -> tuple[float, float]:
    """Seeded Monte Carlo estimate of the Bob-correct probability."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    uniforms = rng.random((trials, 7))
    successes = backend.run_trials(
        1 if s.alice_action == HIDE else 0,
        1 if s.eve_action == "GM" else 0,
        _RESEND_CODE[s.resend],
        uniforms,
    )
    p = successes / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


def eve_correct_strict() -> Fraction:
    """Eve-correct probability under the strict-match reading: her
    measurement style must suit Alice's action and her read position
    must be the message position."""
    total = Fraction(0)
    w = Fraction(1, 16)
    for alice_action in (HIDE, NO_HIDE):
        for eve_action in ("M", "GM"):
            for position in (1, 2):
                for read_position in (1, 2):
                    compatible = (eve_action == "GM") == (alice_action == HIDE)
                    if compatible and read_position == position:
                        total += w
    return total


def eve_correct_quantum() -> Fraction:
    """Exact probability Eve's guessed bit equals the sent bit, uniform
    over Alice's action/bit/position and Eve's action/read position."""
    total = Fraction(0)
    w = Fraction(1, 32)
    for alice_action in (HIDE, NO_HIDE):
        for b in (0, 1):
            for p in (1, 2):
                frame = protocol.alice_prepare(b, p, alice_action)
                for eve_action in ("M", "GM"):
                    meas = frame.payload
                    if eve_action == "GM":
                        meas = sv.apply_g(meas)
                    dist = sv.measurement_distribution(meas)
                    for read_position in (1, 2):
                        for idx, pr in dist.items():
                            if pr <= sv.NORM_ATOL:
                                continue
                            if sv.bit_at(idx, read_position) == b:
                                total += w * _as_fraction(pr)
    return total


def eve_prepares_correct_superposition() -> Fraction:
    """Probability a uniform PS guess reproduces Alice's exact frame."""
    total = Fraction(0)
    w = Fraction(1, 64)
    for alice_action in (HIDE, NO_HIDE):
        for b in (0, 1):
            for p in (1, 2):
                for guess_action in (HIDE, NO_HIDE):
                    for gb in (0, 1):
                        for gp in (1, 2):
                            if (guess_action, gb, gp) == (alice_action, b, p):
                                total += w
    return total


@dataclass(frozen=True)
class LeafResult:
    scenario: Scenario
    paper: Fraction
    quantum: Fraction
    mc: float | None = None
    mc_stderr: float | None = None

    def to_json_dict(self) -> dict:
        d = {
            "scenario": self.scenario.to_json_dict(),
            "paper": str(self.paper),
            "quantum": str(self.quantum),
        }
        if self.mc is not None:
            d["mc"] = self.mc
            d["stderr"] = self.mc_stderr
        return d


@dataclass(frozen=True)
class AggregateReport:
    mode: str  # "paper" or "quantum"
    bob_correct_given_hide: Fraction
    bob_correct_given_no_hide: Fraction
    eve_correct_strict: Fraction
    eve_correct_quantum: Fraction
    per_bit_no_detect: Fraction
    detect_after_k_bits: dict
    paper_claims: list

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "bob_correct_given_hide": str(self.bob_correct_given_hide),
            "bob_correct_given_no_hide": str(self.bob_correct_given_no_hide),
            "eve_correct_strict": str(self.eve_correct_strict),
            "eve_correct_quantum": str(self.eve_correct_quantum),
            "per_bit_no_detect": str(self.per_bit_no_detect),
            "detect_after_k_bits": {str(k): str(v) for k, v in self.detect_after_k_bits.items()},
            "paper_claims": [
                {
                    "name": c["name"],
                    "claimed": str(c["claimed"]),
                    "computed": str(c["computed"]),
                    "matched": c["matched"],
                }
                for c in self.paper_claims
            ],
        }


def aggregate(mode: str, priors: BranchPriors = DEFAULT_PRIORS, k_max: int = 10,
              leaves: dict | None = None) -> AggregateReport:
    """Fold the leaf values under the branch priors into the summary
    metrics, and check every published claim against its computed
    counterpart with exact rational equality."""
    if mode not in ("paper", "quantum"):
        raise ValueError(f"mode must be 'paper' or 'quantum', got {mode!r}")
    if leaves is None:
        evaluate = leaf_probability_paper if mode == "paper" else leaf_probability_quantum
        leaves = {s: evaluate(s) for s in enumerate_leaves()}

    def bob_correct_given(action: str) -> Fraction:
        return sum(
            priors.eve_prior(s.eve_action) * priors.resend_prior(s.resend) * leaves[s]
            for s in leaves
            if s.alice_action == action
        )

    bob_h = bob_correct_given(HIDE)
    bob_n = bob_correct_given(NO_HIDE)
    per_bit = priors.alice_prior(HIDE) * bob_h + priors.alice_prior(NO_HIDE) * bob_n
    detect_curve = {k: 1 - per_bit ** k for k in range(0, k_max + 1)}

    strict = eve_correct_strict()
    computed = {
        "eve_reads_correct": strict,
        "eve_prepares_correct_superposition": eve_prepares_correct_superposition(),
        "detect_given_hide": 1 - bob_h,
        "detect_given_no_hide": 1 - bob_n,
        "no_detect_per_bit": per_bit,
        "detect_per_bit": 1 - per_bit,
        "secure_fraction": 1 - strict,
    }
    claims = [
        {"name": name, "claimed": claimed, "computed": computed[name],
         "matched": computed[name] == claimed}
        for name, claimed in CLAIM_KEYS
    ]

    return AggregateReport(
        mode=mode,
        bob_correct_given_hide=bob_h,
        bob_correct_given_no_hide=bob_n,
        eve_correct_strict=strict,
        eve_correct_quantum=eve_correct_quantum(),
        per_bit_no_detect=per_bit,
        detect_after_k_bits=detect_curve,
        paper_claims=claims,
    )


@dataclass(frozen=True)
class TreeReport:
    leaves: list
    priors: BranchPriors
    aggregates: dict  # mode -> AggregateReport

    def to_json_dict(self) -> dict:
        return {
            "leaves": [leaf.to_json_dict() for leaf in self.leaves],
            "priors": {
                "p_hide": str(self.priors.p_hide),
                "p_gm": str(self.priors.p_gm),
                "p_sm": str(self.priors.p_sm),
            },
            "aggregates": {m: a.to_json_dict() for m, a in self.aggregates.items()},
        }

    def to_csv_rows(self) -> list[list]:
        rows = [["alice", "eve", "resend", "paper", "quantum", "mc", "stderr"]]
        for leaf in self.leaves:
            rows.append([
                leaf.scenario.alice_action,
                leaf.scenario.eve_action,
                leaf.scenario.resend,
                str(leaf.paper),
                str(leaf.quantum),
                "" if leaf.mc is None else repr(leaf.mc),
                "" if leaf.mc_stderr is None else repr(leaf.mc_stderr),
            ])
        return rows


def build_tree_report(trials: int | None = None, rng=None,
                      priors: BranchPriors = DEFAULT_PRIORS, k_max: int = 10) -> TreeReport:
    """Evaluate all 12 leaves; include Monte Carlo columns when trials is set."""
    leaves = []
    quantum_by_scenario = {}
    for s in enumerate_leaves():
        paper = leaf_probability_paper(s)
        quantum = leaf_probability_quantum(s)
        quantum_by_scenario[s] = quantum
        mc = stderr = None
        if trials is not None:
            mc, stderr = monte_carlo_leaf(s, trials, rng)
        leaves.append(LeafResult(s, paper, quantum, mc, stderr))
    aggregates = {
        "paper": aggregate("paper", priors, k_max),
        "quantum": aggregate("quantum", priors, k_max, leaves=quantum_by_scenario),
    }
    return TreeReport(leaves, priors, aggregates)
