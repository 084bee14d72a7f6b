"""Pure-numpy fallback for the compiled superoperator assembly."""

from __future__ import annotations

import numpy as np


def assemble(heff: np.ndarray, rates: np.ndarray, jumps: np.ndarray) -> np.ndarray:
    """L = -i (I kron Heff) + i (conj(Heff) kron I) + sum_k r_k conj(c_k) kron c_k.

    Built as a rank-4 tensor T[b, a, e, c] so that reshaping to (d*d, d*d)
    gives column-stacked indices a + d*b (rows) and c + d*e (columns).
    """
    heff = np.asarray(heff, dtype=complex)
    d = heff.shape[0]
    eye = np.eye(d)
    T = -1j * np.einsum("be,ac->baec", eye, heff)
    T += 1j * np.einsum("be,ac->baec", heff.conj(), eye)
    if len(rates):
        jumps = np.asarray(jumps, dtype=complex)
        T += np.einsum("k,kbe,kac->baec", np.asarray(rates, dtype=float), jumps.conj(), jumps)
    return T.reshape(d * d, d * d)
