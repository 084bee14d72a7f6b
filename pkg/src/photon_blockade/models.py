"""Three-body (TPB) and dual-driven Jaynes-Cummings models.

Qubit 2 is the driven, high-frequency qubit of the three-body model, and the
resonance is w2 = w1 + w_a. All rates and detunings share one unit, usually
the photon decay rate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import dynamics
from .dynamics import Channel, Liouvillian, UndefinedCorrelationError
from .hilbert import DensityMatrix, Operator, operators_for, photon_qubits_space


@dataclass(frozen=True)
class TpbParams:
    delta: float = 0.0
    J: float = 0.1
    omega: float = 0.1
    kappa: float = 1.0
    gamma: float = 0.1
    n_th: float = 0.0
    n_max: int = 5
    # per-family thermal overrides; None means use n_th
    n_th_cavity: float | None = None
    n_th_qubits: float | None = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        for name in ("J", "omega", "gamma", "n_th"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")

    def with_(self, **kw) -> TpbParams:
        return replace(self, **kw)


@dataclass(frozen=True)
class JcParams:
    delta0: float = 0.0
    G: float = 0.1
    omega_c: float = 0.001
    omega_q: float = 0.0
    kappa_a: float = 1.0
    gamma_q: float = 0.01
    n_th: float = 0.0
    n_max: int = 5
    n_th_cavity: float | None = None
    n_th_qubits: float | None = None

    def __post_init__(self):
        if not self.kappa_a > 0:
            raise ValueError("kappa_a must be positive")
        for name in ("G", "omega_c", "omega_q", "gamma_q", "n_th"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")

    @property
    def ratio(self) -> float:
        """Drive ratio lambda = omega_q / omega_c."""
        return self.omega_q / self.omega_c if self.omega_c else float("inf")

    @classmethod
    def with_ratio(cls, ratio: float, omega_c: float, **kw) -> JcParams:
        return cls(omega_c=omega_c, omega_q=ratio * omega_c, **kw)

    def with_(self, **kw) -> JcParams:
        return replace(self, **kw)


@dataclass(frozen=True)
class Observables:
    N: float
    Npair: float
    g2_0: float
    S: float

    @property
    def g2_defined(self) -> bool:
        return np.isfinite(self.g2_0)


def build_tpb(p: TpbParams) -> tuple[Operator, list[Channel]]:
    space = photon_qubits_space(p.n_max, 2)
    a, (s1, s2) = operators_for(space)
    ad, s1p, s2p = a.dag(), s1.dag(), s2.dag()
    H = (
        p.delta * (s1p @ s1)
        + p.delta * (s2p @ s2)
        + p.J * (ad @ s1p @ s2 + a @ s1 @ s2p)
        + p.omega * (s2p + s2)
    )
    chans = dynamics.thermal_channels(
        p.kappa, p.gamma, p.n_th, space, p.n_th_cavity, p.n_th_qubits
    )
    return H, chans


def build_jc_dual(p: JcParams) -> tuple[Operator, list[Channel]]:
    space = photon_qubits_space(p.n_max, 1)
    a, (sm,) = operators_for(space)
    ad, sp = a.dag(), sm.dag()
    H = (
        p.delta0 * (ad @ a + sp @ sm)
        + p.G * (a @ sp + ad @ sm)
        + p.omega_c * (ad + a)
        + p.omega_q * (sp + sm)
    )
    chans = dynamics.thermal_channels(
        p.kappa_a, p.gamma_q, p.n_th, space, p.n_th_cavity, p.n_th_qubits
    )
    return H, chans


def photon_annihilator(H: Operator) -> Operator:
    a, _ = operators_for(H.space)
    return a


def observables_of(rho: DensityMatrix, a: Operator, kappa: float) -> Observables:
    ad = a.dag()
    N = float(np.einsum("ij,ji->", (ad @ a).matrix, rho.matrix).real)
    pair = float(np.einsum("ij,ji->", (ad @ ad @ a @ a).matrix, rho.matrix).real) / 2.0
    g2 = 2.0 * pair / N**2 if N > 0 else float("nan")
    return Observables(N=N, Npair=pair, g2_0=g2, S=kappa * N)


@dataclass(frozen=True, eq=False)
class Solution:
    H: Operator
    channels: list[Channel]
    L: Liouvillian
    rho: DensityMatrix
    a: Operator
    obs: Observables

    def g2_tau(self, t_grid) -> list[tuple[float, float]]:
        if not self.obs.N > 0:
            raise UndefinedCorrelationError("no photons in steady state")
        return dynamics.g2_tau(self.L, self.rho, self.a, t_grid)


def solve(p: TpbParams | JcParams, rel_residual: float = 1e-8) -> Solution:
    """Full numerical steady state of either model."""
    if isinstance(p, TpbParams):
        H, chans = build_tpb(p)
        kappa = p.kappa
    else:
        H, chans = build_jc_dual(p)
        kappa = p.kappa_a
    L = dynamics.build_liouvillian(H, chans)
    rho = dynamics.steady_state(L, rel_residual=rel_residual)
    a = photon_annihilator(H)
    return Solution(H, chans, L, rho, a, observables_of(rho, a, kappa))


def interaction_term(p: TpbParams) -> Operator:
    """Three-body exchange J (a^dag s1+ s2- + a s1- s2+) alone."""
    H, _ = build_tpb(p.with_(delta=0.0, omega=0.0))
    return H


def ground_state(space) -> DensityMatrix:
    ket = np.zeros(space.total_dim, dtype=complex)
    ket[0] = 1.0
    return DensityMatrix.from_ket(space, ket)


__all__ = [
    "TpbParams",
    "JcParams",
    "Observables",
    "Solution",
    "build_tpb",
    "build_jc_dual",
    "observables_of",
    "solve",
    "interaction_term",
    "ground_state",
    "photon_annihilator",
]
