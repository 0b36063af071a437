"""Monte Carlo kernel selection: compiled extension when available,
pure-Python fallback otherwise.

Set QHIDE_BACKEND=python or QHIDE_BACKEND=cython to force one.
"""

from __future__ import annotations

import os

_forced = os.environ.get("QHIDE_BACKEND")
if _forced not in (None, "", "cython", "python"):
    raise RuntimeError(f"QHIDE_BACKEND must be 'cython' or 'python', got {_forced!r}")

name = None
run_trials = None

if _forced in (None, "", "cython"):
    try:
        from qhide._mc_cy import run_trials as _compiled
        name, run_trials = "cython", _compiled
    except ImportError:
        if _forced == "cython":
            raise

if run_trials is None:
    from qhide._mc_py import run_trials as _pure
    name, run_trials = "python", _pure
