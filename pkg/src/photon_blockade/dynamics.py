"""Lindblad superoperators, steady states, time evolution and photon correlations.

Vectorization is column-stacking: ``vec(A rho B) = (B^T kron A) vec(rho)``,
implemented as ``rho.reshape(-1, order="F")``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .hilbert import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    HilbertSpace,
    Operator,
    SpaceMismatchError,
    Tolerances,
    operators_for,
)
from .kernels import assemble_liouvillian


class SteadyStateError(RuntimeError):
    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class UndefinedCorrelationError(ValueError):
    pass


@dataclass(frozen=True)
class Channel:
    rate: float
    collapse: Operator

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError(f"channel rate must be >= 0, got {self.rate}")


@dataclass(frozen=True, eq=False)
class Liouvillian:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.space.total_dim
        return (self.matrix @ vec(rho)).reshape(d, d, order="F")


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def trace_functional(d: int) -> np.ndarray:
    """Row vector t with t @ vec(rho) = Tr(rho)."""
    return np.eye(d).reshape(-1, order="F")


def build_liouvillian(
    H: Operator,
    channels: Sequence[Channel],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Liouvillian:
    if not H.is_hermitian(tol.hamiltonian_hermitian):
        raise ValueError("Hamiltonian is not Hermitian")
    space = H.space
    d = space.total_dim
    active = []
    for ch in channels:
        if ch.collapse.space != space:
            raise SpaceMismatchError(f"channel on {ch.collapse.space}, Hamiltonian on {space}")
        if ch.rate > 0:
            active.append(ch)
    heff = np.array(H.matrix)
    for ch in active:
        c = ch.collapse.matrix
        heff = heff - 0.5j * ch.rate * (c.conj().T @ c)
    rates = np.array([ch.rate for ch in active], dtype=float)
    jumps = (
        np.stack([ch.collapse.matrix for ch in active])
        if active
        else np.zeros((0, d, d), dtype=complex)
    )
    return Liouvillian(space, assemble_liouvillian(heff, rates, jumps))


def thermal_channels(
    kappa: float,
    gamma: float,
    n_th: float,
    space: HilbertSpace,
    cavity_n_th: float | None = None,
    qubit_n_th: float | None = None,
) -> list[Channel]:
    """Cavity channel at position 0, one pair of channels for every qubit factor.

    ``cavity_n_th`` / ``qubit_n_th`` override the shared occupation per channel
    family; pass 0 to keep a family at zero temperature.
    """
    nc = n_th if cavity_n_th is None else cavity_n_th
    nq = n_th if qubit_n_th is None else qubit_n_th
    for n in (n_th, nc, nq):
        if n < 0:
            raise ValueError(f"thermal occupation must be >= 0, got {n}")
    a, lowers = operators_for(space)
    chans = [Channel(kappa * (nc + 1), a)]
    if nc > 0:
        chans.append(Channel(kappa * nc, a.dag()))
    for sm in lowers:
        chans.append(Channel(gamma * (nq + 1), sm))
        if nq > 0:
            chans.append(Channel(gamma * nq, sm.dag()))
    return chans


def steady_state(L: Liouvillian, tol: Tolerances = DEFAULT_TOLERANCES, rel_residual: float = 1e-8) -> DensityMatrix:
    """Unique null vector of L with unit trace.

    Row 0 of L is replaced by the trace functional and the square system is
    solved directly; the residual is then checked on the unmodified L.
    """
    d = L.space.total_dim
    M = np.array(L.matrix)
    M[0, :] = trace_functional(d)
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    norm_L = np.linalg.norm(L.matrix)
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SteadyStateError(f"singular steady-state system: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SteadyStateError("non-finite steady-state solution")
    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = float(np.linalg.norm(L.matrix @ vec(rho)))
    if residual > rel_residual * norm_L:
        raise SteadyStateError("steady state not unique or ill-conditioned", residual)
    try:
        return DensityMatrix(L.space, rho, tol)
    except ValueError as exc:
        raise SteadyStateError(str(exc), residual) from exc


def evolve(L: Liouvillian, rho0: DensityMatrix, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    if t < 0:
        raise ValueError(f"negative time {t}")
    if t == 0:
        return rho0
    d = L.space.total_dim
    x = scipy.linalg.expm(L.matrix * t) @ vec(rho0.matrix)
    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    if abs(np.trace(rho) - 1.0) > 1e-8:
        raise RuntimeError(f"trace drifted to {np.trace(rho)}")
    return DensityMatrix(L.space, rho, Tolerances(tol.hermitian, 1e-8, tol.min_eigenvalue))


class Propagator:
    """Applies exp(L t) to a fixed vector for many t.

    Uses one eigendecomposition of L. If the eigenbasis is too ill-conditioned
    to reproduce L, falls back to stepping with cached matrix exponentials.
    """

    def __init__(self, L: Liouvillian, cond_limit: float = 1e10):
        self.L = L
        self._eig = None
        w, V = np.linalg.eig(L.matrix)
        cond = np.linalg.cond(V)
        if np.isfinite(cond) and cond < cond_limit:
            self._eig = (w, V)

    def series(self, x0: np.ndarray, times: Sequence[float]) -> list[np.ndarray]:
        times = [float(t) for t in times]
        if any(t < 0 for t in times):
            raise ValueError("times must be non-negative")
        out: list[np.ndarray | None] = [None] * len(times)
        if self._eig is not None:
            w, V = self._eig
            coef = np.linalg.solve(V, x0)
            for i, t in enumerate(times):
                out[i] = x0.copy() if t == 0 else V @ (np.exp(w * t) * coef)
            return out  # type: ignore[return-value]
        order = np.argsort(times, kind="stable")
        x, t_prev = x0.copy(), 0.0
        for i in order:
            dt = times[i] - t_prev
            if dt > 0:
                x = scipy.linalg.expm(self.L.matrix * dt) @ x
                t_prev = times[i]
            out[i] = x.copy()
        return out  # type: ignore[return-value]


def _number_moments(rho: np.ndarray, a: np.ndarray) -> tuple[float, float]:
    ad = a.conj().T
    n1 = np.einsum("ij,ji->", ad @ a, rho).real
    n2 = np.einsum("ij,ji->", ad @ ad @ a @ a, rho).real
    return float(n1), float(n2)


def g2_zero(rho: DensityMatrix, a: Operator, min_photons: float = 1e-300) -> float:
    if a.space != rho.space:
        raise SpaceMismatchError(f"{a.space} vs {rho.space}")
    n1, n2 = _number_moments(rho.matrix, a.matrix)
    if not n1 > min_photons:
        raise UndefinedCorrelationError(f"mean photon number {n1:.3e} too small")
    return n2 / n1**2


def g2_tau(
    L: Liouvillian,
    rho: DensityMatrix,
    a: Operator,
    t_grid: Sequence[float],
    propagator: Propagator | None = None,
) -> list[tuple[float, float]]:
    """Delayed correlation by the quantum regression theorem.

    g2(t) = Tr[a^dag a exp(L t)(a rho a^dag)] / <a^dag a>^2.
    """
    if a.space != rho.space or L.space != rho.space:
        raise SpaceMismatchError("L, rho and a must share a space")
    A = a.matrix
    d = rho.space.total_dim
    n1, _ = _number_moments(rho.matrix, A)
    if not n1 > 0:
        raise UndefinedCorrelationError(f"mean photon number {n1:.3e} too small")
    num_op = A.conj().T @ A
    prop = propagator or Propagator(L)
    jumped = vec(A @ rho.matrix @ A.conj().T)
    out = []
    for t, x in zip(t_grid, prop.series(jumped, t_grid)):
        val = np.einsum("ij,ji->", num_op, unvec(x, d)).real
        out.append((float(t), float(val / n1**2)))
    return out
