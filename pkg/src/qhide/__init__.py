"""qhide: exact simulator and eavesdropping analysis for the
state-hiding transmission protocol."""

from qhide.backend import name as mc_backend

__version__ = "0.1.0"
__all__ = ["mc_backend", "__version__"]
