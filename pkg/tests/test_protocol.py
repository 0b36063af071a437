import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhide import protocol, statevec as sv
from qhide.protocol import (
    Frame, KeyExhausted, MalformedKey, PairOracle, alice_prepare, bob_decode,
    oracle_for, parse_key, transmit_message,
)

H = 1.0 / math.sqrt(2.0)

ALL_TRIPLES = [(b, p, a) for b in (0, 1) for p in (1, 2) for a in ("H", "N")]


def expected_support(bit, position, action):
    plain = {x for x in range(4) if sv.bit_at(x, position) == bit}
    return plain if action == "N" else set(range(4)) - plain


def test_oracle_for_examples():
    assert oracle_for(0, 1, "N").marked == {0, 1}
    assert oracle_for(0, 1, "H").marked == {2, 3}
    assert oracle_for(1, 2, "N").marked == {1, 3}


def test_oracle_complement_laws():
    for b in (0, 1):
        for p in (1, 2):
            n = oracle_for(b, p, "N")
            h = oracle_for(b, p, "H")
            assert h == n.complement()
            assert oracle_for(1 - b, p, "N") == h
            assert n.complement().complement() == n


def test_eight_oracles_cover_four_marked_sets():
    marked = {oracle_for(b, p, a).marked for b, p, a in ALL_TRIPLES}
    assert len(marked) == 4
    for b in (0, 1):
        for p in (1, 2):
            assert oracle_for(b, p, "N").marked in marked
            assert oracle_for(b, p, "H").marked in marked


def test_pair_oracle_validation():
    with pytest.raises(ValueError):
        PairOracle(frozenset({0}))
    with pytest.raises(ValueError):
        PairOracle(frozenset({0, 1, 2}))
    with pytest.raises(ValueError):
        PairOracle(frozenset({0, 7}))


@pytest.mark.parametrize("bit,position,action", ALL_TRIPLES)
def test_alice_prepare_matches_target_superposition(bit, position, action):
    frame = alice_prepare(bit, position, action)
    support = expected_support(bit, position, action)
    amps = frame.payload.amplitudes
    for x in range(4):
        target = H if x in support else 0.0
        assert abs(amps[x] - target) < 1e-12
    assert frame.support() == oracle_for(bit, position, action).marked


def test_alice_prepare_named_examples():
    assert np.allclose(alice_prepare(0, 1, "N").payload.amplitudes, [H, H, 0, 0], atol=1e-12)
    assert np.allclose(alice_prepare(0, 1, "H").payload.amplitudes, [0, 0, H, H], atol=1e-12)
    assert np.allclose(alice_prepare(1, 1, "H").payload.amplitudes, [H, H, 0, 0], atol=1e-12)


@pytest.mark.parametrize("bit,position,action", ALL_TRIPLES)
def test_round_trip_exact_distribution(bit, position, action):
    frame = alice_prepare(bit, position, action)
    state = frame.payload
    if action == "H":
        state = sv.apply_g(state)
    dist = sv.measurement_distribution(state)
    correct = sum(p for idx, p in dist.items() if sv.bit_at(idx, position) == bit)
    assert Fraction(correct).limit_denominator(16) == 1


@pytest.mark.parametrize("bit,position,action", ALL_TRIPLES)
def test_round_trip_sampled(bit, position, action):
    rng = sv.make_rng(hash((bit, position, action)) % 2**32)
    frame = alice_prepare(bit, position, action)
    for _ in range(500):
        assert bob_decode(frame, action, position, rng) == bit


@pytest.mark.parametrize("bit,position", [(b, p) for b in (0, 1) for p in (1, 2)])
def test_hiding_secrecy(bit, position):
    # Every state in an H-frame's support carries the flipped bit, so a
    # direct read at the message position is wrong with certainty.
    frame = alice_prepare(bit, position, "H")
    dist = sv.measurement_distribution(frame.payload)
    leak = sum(p for idx, p in dist.items() if sv.bit_at(idx, position) == bit)
    assert leak == 0


def test_bob_decode_examples():
    rng = sv.make_rng(5)
    assert bob_decode(Frame(sv.StateVector([0, 0, H, H])), "H", 1, rng) == 0
    assert bob_decode(Frame(sv.StateVector([H, H, 0, 0])), "N", 1, rng) == 0
    assert bob_decode(Frame(sv.basis_state(2, 1)), "N", 2, rng) == 1


def test_parse_key():
    key = parse_key("H1H2N1")
    assert key.entries == (("H", 1), ("H", 2), ("N", 1))
    assert parse_key("N2").entries == (("N", 2),)
    assert key.format() == "H1H2N1"


@pytest.mark.parametrize("bad", ["", "H3", "H", "H1X", "h1", "H1N", "12"])
def test_parse_key_rejects_malformed(bad):
    with pytest.raises(MalformedKey):
        parse_key(bad)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("HN"), st.sampled_from([1, 2])),
                min_size=1, max_size=12))
def test_key_format_parse_round_trip(entries):
    text = "".join(f"{a}{p}" for a, p in entries)
    assert parse_key(text).entries == tuple(entries)


def test_transmit_identity_channel():
    rng = sv.make_rng(0)
    key = parse_key("N1N1N1")
    assert transmit_message([0, 1, 0], key, None, rng) == [0, 1, 0]
    assert transmit_message([1], parse_key("H2"), None, rng) == [1]
    assert transmit_message([], parse_key("H1"), None, rng) == []


def test_transmit_key_exhaustion_and_cycling():
    rng = sv.make_rng(0)
    key = parse_key("N1H2")
    with pytest.raises(KeyExhausted):
        transmit_message([0, 1, 1], key, None, rng)
    assert transmit_message([0, 1, 1], key, None, rng, cycle_key=True) == [0, 1, 1]


def test_frame_json_round_trip():
    frame = alice_prepare(1, 2, "H")
    again = Frame.from_json_dict(frame.to_json_dict())
    assert again.payload.isclose(frame.payload)


def test_parse_message():
    assert protocol.parse_message("0110") == [0, 1, 1, 0]
    with pytest.raises(ValueError):
        protocol.parse_message("012")
