# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Monte Carlo kernel; must stay in lockstep with _mc_py.py."""


def run_trials(int alice_hide, int eve_gm, int resend_code, double[:, ::1] uniforms):
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef Py_ssize_t i
    cdef int successes = 0
    cdef int b, p, c, cm, o, idx, kind, v, q, out, bob_bit, hide, ps_b
    cdef double u6

    for i in range(n):
        b = 0 if uniforms[i, 0] < 0.5 else 1
        p = 1 if uniforms[i, 1] < 0.5 else 2
        c = b ^ alice_hide
        idx = 0
        v = 0
        q = 0

        if resend_code == 0:  # SM
            cm = c ^ eve_gm
            o = 0 if uniforms[i, 3] < 0.5 else 1
            idx = (cm << 1) | o if p == 1 else (o << 1) | cm
            kind = 0
        else:
            hide = 1 if resend_code == 1 else 0
            ps_b = 0 if uniforms[i, 4] < 0.5 else 1
            q = 1 if uniforms[i, 5] < 0.5 else 2
            v = ps_b ^ hide
            kind = 1

        if alice_hide:
            if kind == 0:
                kind = 2
            else:
                v ^= 1

        u6 = uniforms[i, 6]
        if kind == 0:
            out = idx
        elif kind == 1:
            o = 0 if u6 < 0.5 else 1
            out = (v << 1) | o if q == 1 else (o << 1) | v
        else:
            out = <int>(u6 * 4.0)
            if out > 3:
                out = 3

        bob_bit = (out >> 1) & 1 if p == 1 else out & 1
        if bob_bit == b:
            successes += 1
    return successes
