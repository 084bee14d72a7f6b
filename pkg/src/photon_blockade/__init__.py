"""Photon blockade from a three-body photon-qubit-qubit interaction."""

from __future__ import annotations

__version__ = "0.1.0"

from .kernels import active_backend, available_backends, use_backend
from .models import JcParams, TpbParams, solve

__all__ = [
    "__version__",
    "JcParams",
    "TpbParams",
    "solve",
    "active_backend",
    "available_backends",
    "use_backend",
]
