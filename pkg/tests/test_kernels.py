from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photon_blockade import kernels
from photon_blockade.dynamics import trace_functional

needs_compiled = pytest.mark.skipif(
    "compiled" not in kernels.available_backends(), reason="compiled extension not built"
)


def random_inputs(seed: int, d: int, m: int, sparse: bool):
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    jumps = rng.normal(size=(m, d, d)) + 1j * rng.normal(size=(m, d, d))
    if sparse:
        jumps *= rng.random(size=jumps.shape) < 0.2
        h *= rng.random(size=h.shape) < 0.3
    rates = rng.random(m)
    return h, rates, jumps


@needs_compiled
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 9), st.integers(0, 4), st.booleans())
def test_compiled_matches_python(seed, d, m, sparse):
    h, r, j = random_inputs(seed, d, m, sparse)
    a = kernels.assemble_liouvillian(h, r, j, backend="compiled")
    b = kernels.assemble_liouvillian(h, r, j, backend="python")
    assert np.max(np.abs(a - b)) <= 1e-13 * max(1.0, np.max(np.abs(b)))


def test_python_backend_matches_kron_definition():
    h, r, j = random_inputs(3, 5, 2, False)
    d = 5
    eye = np.eye(d)
    heff = h
    expected = -1j * np.kron(eye, heff) + 1j * np.kron(heff.conj(), eye)
    for rate, c in zip(r, j):
        expected += rate * np.kron(c.conj(), c)
    got = kernels.assemble_liouvillian(h, r, j, backend="python")
    np.testing.assert_allclose(got, expected, atol=1e-13)


def test_lindblad_form_annihilates_trace():
    rng = np.random.default_rng(1)
    d = 6
    H = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = H + H.conj().T
    cs = rng.normal(size=(3, d, d)) + 1j * rng.normal(size=(3, d, d))
    r = np.array([0.3, 1.0, 2.0])
    heff = H - 0.5j * sum(rate * c.conj().T @ c for rate, c in zip(r, cs))
    for backend in kernels.available_backends():
        L = kernels.assemble_liouvillian(heff, r, cs, backend=backend)
        assert np.max(np.abs(trace_functional(d) @ L)) <= 1e-12 * np.max(np.abs(L))


def test_backend_switching():
    before = kernels.active_backend()
    try:
        kernels.use_backend("python")
        assert kernels.active_backend() == "python"
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")
    finally:
        kernels.use_backend(before)
