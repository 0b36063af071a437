import numpy as np
import pytest

from qhide import _mc_py, backend


def test_a_backend_is_selected():
    assert backend.name in ("cython", "python")
    assert callable(backend.run_trials)


@pytest.mark.skipif(backend.name != "cython", reason="compiled kernel not built")
def test_kernels_agree_exactly():
    from qhide import _mc_cy

    rng = np.random.default_rng(1234)
    uniforms = rng.random((5000, 7))
    for hide in (0, 1):
        for gm in (0, 1):
            for resend in (0, 1, 2):
                pure = _mc_py.run_trials(hide, gm, resend, uniforms)
                compiled = _mc_cy.run_trials(hide, gm, resend, uniforms)
                assert pure == compiled


def test_pure_kernel_deterministic_scenarios():
    rng = np.random.default_rng(0)
    uniforms = rng.random((2000, 7))
    # (N, M, SM) always succeeds; (N, GM, SM) never does.
    assert _mc_py.run_trials(0, 0, 0, uniforms) == 2000
    assert _mc_py.run_trials(0, 1, 0, uniforms) == 0
