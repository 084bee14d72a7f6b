"""Closed-form photon statistics for the three-body and dual-driven JC models.

The three-body results live in a fixed 10-state truncation (at most two
photons). Its basis order differs from the numerical tensor-product order:

    v0 |0,g,g>  v1 |0,e,g>  v2 |0,g,e>  v3 |0,e,e>  v4 |1,g,g>
    v5 |1,e,g>  v6 |1,g,e>  v7 |1,e,e>  v8 |2,g,g>  v9 |2,e,g>

with labels ``|n, qubit1, qubit2>``. Decimal coefficients of the asymptotic
two-photon formulas are kept exactly as published.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import DensityMatrix, HilbertSpace
from .models import JcParams, TpbParams

SQRT2 = np.sqrt(2.0)

TRUNCATED_BASIS: tuple[tuple[int, int, int], ...] = (
    (0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0),
    (1, 1, 0), (1, 0, 1), (1, 1, 1), (2, 0, 0), (2, 1, 0),
)
TRUNCATED_SPACE = HilbertSpace((10,))
PHOTONS = np.array([s[0] for s in TRUNCATED_BASIS])


class PoleError(ZeroDivisionError):
    pass


class NoRealSolutionError(ValueError):
    pass


class WeakDriveWarning(UserWarning):
    pass


def full_index(state: tuple[int, int, int]) -> int:
    """Index of a truncated-basis state in the numerical [n_max+1, 2, 2] ordering."""
    n, q1, q2 = state
    return (n * 2 + q1) * 2 + q2


# --- three-body model, exact 10-state steady state -------------------------

def tpb_heff_matrix(p: TpbParams) -> np.ndarray:
    """Non-Hermitian effective Hamiltonian in the truncated basis."""
    dt = p.delta - 0.5j * p.gamma
    J, W, hk = p.J, p.omega, 0.5j * p.kappa
    s2J = SQRT2 * J
    z = 0
    return np.array([
        [z, z,  W,      z,      z,   z,       z,       z,            z,         z],
        [z, dt, z,      W,      z,   z,       z,       z,            z,         z],
        [W, z,  dt,     z,      z,   J,       z,       z,            z,         z],
        [z, W,  z,      2 * dt, z,   z,       z,       z,            z,         z],
        [z, z,  z,      z,      -hk, z,       W,       z,            z,         z],
        [z, z,  J,      z,      z,   dt - hk, z,       W,            z,         z],
        [z, z,  z,      z,      W,   z,       dt - hk, z,            z,         s2J],
        [z, z,  z,      z,      z,   W,       z,       2 * dt - hk,  z,         z],
        [z, z,  z,      z,      z,   z,       z,       z,            -2 * hk,   z],
        [z, z,  z,      z,      z,   z,       s2J,     z,            z,         dt - 2 * hk],
    ], dtype=complex)


# a|v_k> = c |v_j>  as (k, j, c); qubit lowering as (k, j)
_PHOTON_LOWER = ((4, 0, 1.0), (5, 1, 1.0), (6, 2, 1.0), (7, 3, 1.0), (8, 4, SQRT2), (9, 5, SQRT2))
_QUBIT1_LOWER = ((1, 0), (3, 2), (5, 4), (7, 6), (9, 8))
_QUBIT2_LOWER = ((2, 0), (3, 1), (6, 4), (7, 5))


def cavity_jump(rho: np.ndarray, kappa: float) -> np.ndarray:
    """kappa * a rho a^dag projected on the truncated basis."""
    out = np.zeros((10, 10), dtype=complex)
    for k, i, ci in _PHOTON_LOWER:
        for l, j, cj in _PHOTON_LOWER:
            out[i, j] += ci * cj * rho[k, l]
    return kappa * out


def qubit_jumps(rho: np.ndarray, gamma: float) -> np.ndarray:
    """gamma * (s1- rho s1+ + s2- rho s2+) projected on the truncated basis."""
    out = np.zeros((10, 10), dtype=complex)
    for moves in (_QUBIT1_LOWER, _QUBIT2_LOWER):
        for k, i in moves:
            for l, j in moves:
                out[i, j] += rho[k, l]
    return gamma * out


def truncated_rhs(rho: np.ndarray, p: TpbParams, heff: np.ndarray | None = None) -> np.ndarray:
    h = tpb_heff_matrix(p) if heff is None else heff
    return (
        -1j * (h @ rho - rho @ h.conj().T)
        + cavity_jump(rho, p.kappa)
        + qubit_jumps(rho, p.gamma)
    )


def tpb_truncated_steady(p: TpbParams) -> DensityMatrix:
    if p.n_th != 0:
        raise ValueError("the truncated analytic solve is zero-temperature only")
    heff = tpb_heff_matrix(p)
    d = 10
    M = np.empty((d * d, d * d), dtype=complex)
    for col in range(d * d):
        unit = np.zeros(d * d, dtype=complex)
        unit[col] = 1.0
        M[:, col] = truncated_rhs(unit.reshape(d, d, order="F"), p, heff).reshape(-1, order="F")
    A = M.copy()
    A[0, :] = np.eye(d).reshape(-1, order="F")
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"truncated steady-state system is singular: {exc}") from exc
    rho = x.reshape(d, d, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix(TRUNCATED_SPACE, rho)


@dataclass(frozen=True)
class TruncatedObservables:
    N: float
    Npair: float
    rho55: float
    rho99: float


def truncated_observables(rho: DensityMatrix) -> TruncatedObservables:
    pops = rho.populations()
    return TruncatedObservables(
        N=float(PHOTONS @ pops),
        Npair=float(pops[8] + pops[9]),
        rho55=float(pops[5]),
        rho99=float(pops[9]),
    )


# --- three-body model, asymptotic formulas ---------------------------------

def tpb_N_approx(p: TpbParams) -> float:
    J, D, W, k, g = p.J, p.delta, p.omega, p.kappa, p.gamma
    alpha = J**2 * k / g + 3 * k**2 / 4
    return J**2 * W**2 / ((J**2 - D**2) ** 2 + D**2 * k**2 / 4 + J**2 * k * g + alpha * W**2)


def tpb_Npair_weak(p: TpbParams) -> float:
    """Two-photon population for J << kappa."""
    J, D, W, k, g = p.J, p.delta, p.omega, p.kappa, p.gamma
    M1 = D**8 * g * k**-5 + D**10 * (0.07 * g * k**-7 + 0.5 * g**2 * k**-8)
    M2 = D**14 * (20 * g**2 * k**-2 + 230 * g**3 * k**-3) + D**16 * (
        17 * J**2 * g * k**-5
        + 130 * J**2 * g**2 * k**-6
        + 4 * g**2 * k**-4
        + 40 * g**3 * k**-5
        + 170 * g**4 * k**-6
    )
    Xi = 2 * J**6 * k * g**3 + 42 * J**6 * g**4 + J**4 * k**2 * g**4
    Theta = (
        2 * J**4 * k**2
        + 1.5 * J**2 * k**3 * g
        + 500 * J**2 * k * g**3
        + 6 * k**3 * g**3
        + 80 * k**2 * g**4
    )
    num = 21 * J**4 * g**2 * ((J**2 * g**2 + M1) * W**4 + (1.5 * J**2 + 6.5 * g**2) * W**6)
    den = k**4 * (Xi + 28 * J**2 * k**2 * g**4 * W**2 + Theta * W**4) + M2
    return num / den


def tpb_Npair_strong(p: TpbParams) -> float:
    """Two-photon population for J >> kappa. Can come out negative near |delta| = J."""
    J, D, W, k, g = p.J, p.delta, p.omega, p.kappa, p.gamma
    L1 = D**4 * J**4 * (22 * k**2 + 158 * k * g + 431 * g**2) + D**2 * J**6 * k * (3 * k + 21 * g)
    L2 = D**8 * (26 * k**2 + 189 * k * g + 506 * g**2) - D**6 * J**2 * (
        52 * k**2 + 372 * k * g + 567 * g**2
    )
    L3 = (
        D**8 * J**8 * (153 * J**2 + 91 * k**2 + 806 * k * g)
        - D**6 * J**10 * (75 * J**2 + 208 * k**2)
        + D**4 * J**12 * (15 * J**2 + 38 * k**2 + 370 * k * g)
    )
    L4 = (
        D**16 * (4 * J**2 + k**2 + 10 * k * g)
        + D**14 * J**2 * (-30 * J**2 + 11 * k**2 + 92 * k * g)
        + D**12 * J**4 * (97 * J**2 - 260 * W**2 - 32 * k**2 - 302 * k * g)
        + D**10 * J**6 * (-165 * J**2 + 391 * W**2)
    )
    pref = 2 * J**6 * W**4 * g / (5 * k**3)
    return pref * (L1 + L2 + 7 * J**6 * k**2 * g**2) / (L3 + L4 + 25 * J**14 * k * g**3)


@dataclass(frozen=True)
class TpbAnalytic:
    N: float
    Npair: float
    g2_0: float
    branch: str  # "weak" or "strong"


def tpb_analytic(p: TpbParams, strong_threshold: float = 1.0) -> TpbAnalytic:
    """Asymptotic N, two-photon population and g2(0).

    The two-photon branch switches from the weak- to the strong-coupling
    formula at J / kappa = ``strong_threshold``.
    """
    N = tpb_N_approx(p)
    if N <= 0:
        raise ZeroDivisionError("analytic mean photon number vanishes")
    branch = "strong" if p.J / p.kappa >= strong_threshold else "weak"
    pair = tpb_Npair_strong(p) if branch == "strong" else tpb_Npair_weak(p)
    return TpbAnalytic(N=N, Npair=pair, g2_0=2 * pair / N**2, branch=branch)


def tpb_g2_analytic(p: TpbParams, strong_threshold: float = 1.0) -> float:
    return tpb_analytic(p, strong_threshold).g2_0


# --- dual-driven Jaynes-Cummings model ------------------------------------

@dataclass(frozen=True)
class JcAmplitudes:
    C_0e: complex
    C_1g: complex
    C_1e: complex
    C_2g: complex
    C: complex
    D: complex
    ratio: float

    @property
    def N(self) -> float:
        return abs(self.C_1g) ** 2 + abs(self.C_1e) ** 2 + 2 * abs(self.C_2g) ** 2

    @property
    def Npair(self) -> float:
        return abs(self.C_2g) ** 2

    @property
    def g2_0(self) -> float:
        return 2 * abs(self.C_2g) ** 2 / abs(self.C_1g) ** 4

    @property
    def weak(self) -> bool:
        return max(abs(self.C_0e), abs(self.C_1g)) < 0.1


def _complex_detunings(p: JcParams) -> tuple[complex, complex]:
    return p.delta0 - 0.5j * p.kappa_a, p.delta0 - 0.5j * p.gamma_q


def jc_amplitudes(p: JcParams) -> JcAmplitudes:
    if not p.omega_c > 0:
        raise ValueError("the amplitude solution needs a cavity drive (omega_c > 0)")
    if p.omega_c > 0.05 * max(p.G, p.kappa_a):
        warnings.warn(
            "cavity drive outside the weak-drive regime of the amplitude solution",
            WeakDriveWarning,
            stacklevel=2,
        )
    dc, dq = _complex_detunings(p)
    G, Wc, Wq, lam = p.G, p.omega_c, p.omega_q, p.ratio
    C = G**2 - dc * dq
    D = dc * (dc + dq) - G**2
    if C == 0 or D == 0:
        raise PoleError("auxiliary denominator vanishes")
    s = dc + dq
    c0e = (Wq * dc - Wc * G) / C
    c1g = (Wc * dq - Wq * G) / C
    c1e = Wc**2 / (C * D) * (G * s - lam * (dc * s + G**2) + lam**2 * G * dc)
    c2g = SQRT2 * Wc**2 / (2 * C * D) * (-dq * s + 2 * lam * G * s - (1 + lam**2) * G**2)
    return JcAmplitudes(c0e, c1g, c1e, c2g, C, D, lam)


@dataclass(frozen=True)
class JcG2Terms:
    A: float  # bracket whose square is |A|^2
    B_real: float
    B_imag: float
    C2: float
    D2: float

    @property
    def A2(self) -> float:
        return self.A**2

    @property
    def B2(self) -> float:
        return self.B_real**2 + self.B_imag**2


def jc_g2_terms(p: JcParams) -> JcG2Terms:
    D0, G, k, g = p.delta0, p.G, p.kappa_a, p.gamma_q
    lam = p.ratio
    if not np.isfinite(lam):
        raise ValueError("g2 terms need a cavity drive (finite drive ratio)")
    A = (D0 - lam * G) ** 2 + g**2 / 4
    B_re = -2 * D0**2 + 4 * lam * G * D0 - (1 + lam**2) * G**2 + g * (k + g) / 4
    B_im = D0 * (k + 3 * g) / 2 - lam * G * (k + g)
    C2 = (G**2 - D0**2 + k * g / 4) ** 2 + D0**2 * (k + g) ** 2 / 4
    D2 = (2 * D0**2 - G**2 - k * (k + g) / 4) ** 2 + D0**2 * (3 * k + g) ** 2 / 4
    return JcG2Terms(A, B_re, B_im, C2, D2)


def jc_g2(p: JcParams) -> float:
    t = jc_g2_terms(p)
    if t.A == 0 or t.D2 == 0:
        raise PoleError("g2 denominator vanishes")
    return t.B2 * t.C2 / (t.A2 * t.D2)


def cpb_optimal_detuning(G: float) -> tuple[float, float]:
    if not G > 0:
        raise ValueError("G must be positive")
    return (G, -G)


def upb_detuning(ratio: float, G: float, kappa_a: float, gamma_q: float) -> float:
    """Detuning that zeroes the imaginary part of the two-photon amplitude."""
    return 2 * ratio * G * (kappa_a + gamma_q) / (kappa_a + 3 * gamma_q)


def upb_optimal(G: float, kappa_a: float, gamma_q: float) -> tuple[float, float]:
    """(ratio, detuning) that zero the two-photon amplitude."""
    k, g = kappa_a, gamma_q
    num = G**2 - g * (k + g) / 4
    den = G**2 * (16 * g * (k + g) / (k + 3 * g) ** 2 - 1)
    if den == 0:
        raise NoRealSolutionError("optimal ratio diverges")
    rad = num / den
    if rad < 0:
        raise NoRealSolutionError(f"negative radicand {rad:.3e}: no real optimal drive ratio")
    lam = float(np.sqrt(rad))
    return lam, upb_detuning(lam, G, k, g)


def upb_single_drive_G(kappa_a: float, gamma_q: float) -> float:
    if not (kappa_a > 0 and gamma_q > 0):
        raise ValueError("rates must be positive")
    return float(np.sqrt(gamma_q * (kappa_a + gamma_q)) / 2)
