from fractions import Fraction

import pytest

from qhide import adversary, analysis, protocol, statevec as sv
from qhide.analysis import (
    BranchPriors, Scenario, aggregate, build_tree_report, enumerate_leaves,
    leaf_probability_paper, leaf_probability_quantum, monte_carlo_leaf,
)

F = Fraction

PAPER_VECTOR = [F(1, 8), F(1, 4), F(0), F(1, 8), F(1, 4), F(0),
                F(1), F(0), F(1, 4), F(0), F(0), F(1, 4)]

# Hand-derived ground truth: Eve's resend is either a basis state (SM,
# uniform read after Bob's diffusion -> 1/2) or a pair independent of
# her measurement (PS -> 1/2 by the position/bit case split); the only
# non-1/2 leaves are the two deterministic direct-measurement paths.
QUANTUM_VECTOR = [F(1, 2)] * 6 + [F(1), F(1, 2), F(1, 2), F(0), F(1, 2), F(1, 2)]


def test_canonical_leaf_order():
    leaves = enumerate_leaves()
    assert len(leaves) == 12
    assert leaves[0] == Scenario("H", "M", "SM")
    assert leaves[6] == Scenario("N", "M", "SM")
    assert leaves[-1] == Scenario("N", "GM", "PS-N")


def test_paper_leaf_vector():
    assert [leaf_probability_paper(s) for s in enumerate_leaves()] == PAPER_VECTOR


def test_paper_vector_shape():
    assert PAPER_VECTOR.count(F(0)) == 5
    assert PAPER_VECTOR.count(F(1)) == 1
    assert sum(1 for p in PAPER_VECTOR if 0 < p < 1) == 6


def test_quantum_leaf_vector():
    assert [leaf_probability_quantum(s) for s in enumerate_leaves()] == QUANTUM_VECTOR


def test_quantum_leaf_symmetry_under_relabeling():
    for s in enumerate_leaves():
        overall = leaf_probability_quantum(s)
        for bit in (0, 1):
            for position in (1, 2):
                assert leaf_probability_quantum(s, bit=bit, position=position) == overall


def test_monte_carlo_matches_quantum():
    rng = sv.make_rng(77)
    for s in enumerate_leaves():
        est, stderr = monte_carlo_leaf(s, 20000, rng)
        exact = float(leaf_probability_quantum(s))
        assert abs(est - exact) <= max(3 * stderr, 1e-12)


def test_monte_carlo_deterministic_leaves():
    rng = sv.make_rng(1)
    est, stderr = monte_carlo_leaf(Scenario("N", "M", "SM"), 5000, rng)
    assert est == 1.0 and stderr == 0.0
    est, stderr = monte_carlo_leaf(Scenario("N", "GM", "SM"), 5000, rng)
    assert est == 0.0 and stderr == 0.0


def test_monte_carlo_is_seed_deterministic():
    s = Scenario("H", "M", "PS-N")
    a = monte_carlo_leaf(s, 10000, sv.make_rng(42))
    b = monte_carlo_leaf(s, 10000, sv.make_rng(42))
    assert a == b


def test_monte_carlo_rejects_bad_trials():
    with pytest.raises(ValueError):
        monte_carlo_leaf(Scenario("H", "M", "SM"), 0, sv.make_rng(0))


def _object_pipeline_estimate(s, trials, rng):
    """Independent estimator through the full Alice/Eve/Bob objects."""
    hits = 0
    for _ in range(trials):
        bit = int(rng.random() < 0.5)
        position = 1 if rng.random() < 0.5 else 2
        read_position = 1 if rng.random() < 0.5 else 2
        if s.resend == "SM":
            policy = adversary.ResendPolicy("SM")
        else:
            hide = "H" if s.resend == "PS-H" else "N"
            ps_bit = int(rng.random() < 0.5)
            ps_pos = 1 if rng.random() < 0.5 else 2
            policy = adversary.ResendPolicy("PS", (ps_bit, ps_pos, hide))
        strategy = adversary.EveStrategy(s.eve_action, read_position, policy)
        frame = protocol.alice_prepare(bit, position, s.alice_action)
        record = adversary.eve_intercept(frame, strategy, rng)
        hits += protocol.bob_decode(record.resent, s.alice_action, position, rng) == bit
    return hits / trials


@pytest.mark.parametrize("s", [
    Scenario("H", "M", "SM"),
    Scenario("H", "GM", "PS-H"),
    Scenario("N", "M", "PS-N"),
    Scenario("N", "GM", "SM"),
])
def test_kernel_agrees_with_object_pipeline(s):
    rng = sv.make_rng(31)
    trials = 20000
    est = _object_pipeline_estimate(s, trials, rng)
    exact = float(leaf_probability_quantum(s))
    stderr = (exact * (1 - exact) / trials) ** 0.5
    assert abs(est - exact) <= max(4 * stderr, 1e-12)


def test_eve_correct_values():
    assert analysis.eve_correct_strict() == F(1, 4)
    assert analysis.eve_correct_quantum() == F(1, 2)
    assert analysis.eve_prepares_correct_superposition() == F(1, 8)


def test_aggregate_paper_mode():
    agg = aggregate("paper")
    assert agg.bob_correct_given_hide == F(1, 8)
    assert agg.bob_correct_given_no_hide == F(5, 16)
    assert agg.per_bit_no_detect == F(7, 32)
    assert agg.detect_after_k_bits[0] == 0
    assert agg.detect_after_k_bits[1] == F(25, 32)


def test_aggregate_quantum_mode():
    agg = aggregate("quantum")
    assert agg.bob_correct_given_hide == F(1, 2)
    assert agg.bob_correct_given_no_hide == F(1, 2)
    assert agg.per_bit_no_detect == F(1, 2)
    assert agg.detect_after_k_bits[3] == F(7, 8)


def test_aggregate_claim_flags():
    # The three claims that follow from the strict-match counting are
    # reproduced exactly; the four detection aggregates are not
    # derivable from the published leaf values under uniform priors.
    for mode in ("paper", "quantum"):
        flags = {c["name"]: c["matched"] for c in aggregate(mode).paper_claims}
        assert flags["eve_reads_correct"]
        assert flags["eve_prepares_correct_superposition"]
        assert flags["secure_fraction"]
        assert not flags["detect_given_hide"]
        assert not flags["detect_given_no_hide"]
        assert not flags["no_detect_per_bit"]
        assert not flags["detect_per_bit"]


def test_detect_curve_monotone():
    for mode in ("paper", "quantum"):
        curve = aggregate(mode, k_max=20).detect_after_k_bits
        values = [curve[k] for k in sorted(curve)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] > F(99, 100)


def test_custom_priors():
    priors = BranchPriors(p_hide=F(1), p_gm=F(0), p_sm=F(1))
    agg = aggregate("paper", priors)
    # Only the (H, M, SM) leaf survives these degenerate priors.
    assert agg.per_bit_no_detect == F(1, 8)


def test_tree_report_serialization():
    report = build_tree_report(trials=1000, rng=sv.make_rng(5))
    data = report.to_json_dict()
    assert len(data["leaves"]) == 12
    first = data["leaves"][0]
    assert first["scenario"] == {"alice": "H", "eve": "M", "resend": "SM"}
    assert first["paper"] == "1/8"
    assert first["quantum"] == "1/2"
    assert 0.0 <= first["mc"] <= 1.0
    rows = report.to_csv_rows()
    assert rows[0][:3] == ["alice", "eve", "resend"]
    assert len(rows) == 13


def test_invalid_scenario_rejected():
    with pytest.raises(ValueError):
        Scenario("X", "M", "SM")
    with pytest.raises(ValueError):
        Scenario("H", "Z", "SM")
    with pytest.raises(ValueError):
        Scenario("H", "M", "PS")
