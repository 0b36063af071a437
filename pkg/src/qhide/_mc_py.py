"""Pure-Python Monte Carlo kernel.

Mirror of the compiled kernel in _mc_cy.pyx: both consume the same
7-uniform-per-trial layout and must return identical counts for
identical input, so backend choice never changes results for a seed.

Per-trial uniform layout:
  u0 Alice's bit            u1 Alice's position
  u2 Eve's read position (drawn for parity with the full pipeline)
  u3 Eve's measurement branch
  u4 PS bit guess           u5 PS position guess
  u6 Bob's measurement branch
"""

RESEND_SM = 0
RESEND_PS_H = 1
RESEND_PS_N = 2


def run_trials(alice_hide: int, eve_gm: int, resend_code: int, uniforms) -> int:
    """Count trials where Bob's decoded bit equals Alice's bit.

    `uniforms` is an (n, 7) float64 array of independent U[0,1) draws.
    """
    successes = 0
    for u0, u1, _u2, u3, u4, u5, u6 in uniforms.tolist():
        b = 0 if u0 < 0.5 else 1
        p = 1 if u1 < 0.5 else 2
        # Alice's frame is the uniform pair with bit c at position p.
        c = b ^ alice_hide

        if resend_code == RESEND_SM:
            # Eve's (optionally diffused) measurement collapses onto the
            # pair with bit c^eve_gm at p; the other bit is uniform.
            cm = c ^ eve_gm
            o = 0 if u3 < 0.5 else 1
            idx = (cm << 1) | o if p == 1 else (o << 1) | cm
            kind = 0  # basis state
            v = q = 0
        else:
            hide = 1 if resend_code == RESEND_PS_H else 0
            ps_b = 0 if u4 < 0.5 else 1
            q = 1 if u5 < 0.5 else 2
            v = ps_b ^ hide
            kind = 1  # uniform pair with bit v at position q
            idx = 0

        if alice_hide:
            # Bob applies the diffusion operator first: a basis state
            # spreads uniformly over all four states, a pair maps to the
            # complementary pair.
            if kind == 0:
                kind = 2
            else:
                v ^= 1

        if kind == 0:
            out = idx
        elif kind == 1:
            o = 0 if u6 < 0.5 else 1
            out = (v << 1) | o if q == 1 else (o << 1) | v
        else:
            out = int(u6 * 4.0)
            if out > 3:
                out = 3

        bob_bit = (out >> 1) & 1 if p == 1 else out & 1
        if bob_bit == b:
            successes += 1
    return successes
