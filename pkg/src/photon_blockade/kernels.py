"""Backend selection for the hot superoperator-assembly kernel.

The compiled extension is used when it was built; otherwise the numpy
implementation is used. Both produce the same matrix to rounding.
"""

from __future__ import annotations

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py.assemble}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled.assemble

_active = "compiled" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active


def use_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    _active = name


def assemble_liouvillian(heff: np.ndarray, rates, jumps, backend: str | None = None) -> np.ndarray:
    fn = _BACKENDS[backend or _active]
    heff = np.ascontiguousarray(heff, dtype=np.complex128)
    d = heff.shape[0]
    rates = np.ascontiguousarray(rates, dtype=np.float64).reshape(-1)
    jumps = np.ascontiguousarray(jumps, dtype=np.complex128).reshape(len(rates), d, d)
    return fn(heff, rates, jumps)
