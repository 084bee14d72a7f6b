"""Coupling strengths of a flux-biased three-junction coupler between a CPW
resonator and two transmons.

Energies are passed and returned as frequencies E/h in GHz. Lengths are in
metres, per-length line constants in SI units. Qubit labels follow the
circuit layout: qubit 1 is the high-frequency transmon (about 10 GHz), so
it plays the role of the driven qubit 2 of the three-body model.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import constants

HBAR = constants.hbar
PLANCK = constants.h
FLUX_QUANTUM = constants.physical_constants["mag. flux quantum"][0]

MAX_ASPECT = 0.05  # largest allowed d / l
TRANSMON_RATIO = 20.0


def _positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")


def line_constants(impedance: float = 50.0, length: float = 10e-3, f1_ghz: float = 6.0) -> tuple[float, float]:
    """(c0, l0) per unit length giving the requested impedance and fundamental."""
    _positive(impedance=impedance, length=length, f1_ghz=f1_ghz)
    velocity = length * 2 * math.pi * f1_ghz * 1e9 / math.pi
    return 1.0 / (impedance * velocity), impedance / velocity


_C0, _L0 = line_constants()


@dataclass(frozen=True)
class CircuitParams:
    E_J: float = 20.0
    alpha: float = 0.0
    beta: float = 1.0
    eta: float = 5.0
    d: float = 20e-6
    l: float = 10e-3
    c0: float = _C0
    l0: float = _L0
    E_J1: float = 45.0
    E_C1: float = 0.3
    E_J2: float = 10.0
    E_C2: float = 0.2
    phi_ext1: float = 0.5  # units of the flux quantum
    phi_ext2: float = 0.5

    def __post_init__(self):
        _positive(
            E_J=self.E_J, eta=self.eta, d=self.d, l=self.l, c0=self.c0, l0=self.l0,
            E_J1=self.E_J1, E_C1=self.E_C1, E_J2=self.E_J2, E_C2=self.E_C2,
        )
        if self.d / self.l > MAX_ASPECT:
            raise ValueError(f"segment d/l = {self.d / self.l:.3g} exceeds {MAX_ASPECT}")
        for i, (ej, ec) in enumerate(((self.E_J1, self.E_C1), (self.E_J2, self.E_C2)), 1):
            if ej / ec < TRANSMON_RATIO:
                warnings.warn(f"transmon {i}: E_J/E_C = {ej / ec:.3g} below the transmon regime", stacklevel=3)


def transmon_frequency(E_J: float, E_C: float) -> float:
    """Fundamental transition frequency sqrt(8 E_C E_J) - E_C."""
    if E_J <= 0 or E_C < 0:
        raise ValueError("energies must be positive")
    if E_C == 0:
        warnings.warn("E_C = 0: degenerate transmon, frequency is zero", stacklevel=2)
        return 0.0
    return math.sqrt(8 * E_C * E_J) - E_C


def phase_zpf(E_J: float, E_C: float) -> float:
    _positive(E_J=E_J, E_C=E_C)
    return (2 * E_C / E_J) ** 0.25


def cpw_fundamental(l: float, c0: float, l0: float) -> tuple[float, float]:
    """(angular frequency, impedance) of the lowest resonator mode."""
    _positive(l=l, c0=c0, l0=l0)
    omega1 = math.pi / (l * math.sqrt(l0 * c0))
    return omega1, 1.0 / (c0 * l * omega1)


def phi_x_zpf(eta: float, d: float, l: float, Z1: float) -> float:
    """Zero-point amplitude of the resonator phase across the coupled segment."""
    _positive(eta=eta, d=d, l=l, Z1=Z1)
    if d / l > MAX_ASPECT:
        raise ValueError(f"segment d/l = {d / l:.3g} exceeds {MAX_ASPECT}")
    return eta * 2 * math.sqrt(2) * math.pi**2 * d / (FLUX_QUANTUM * l) * math.sqrt(HBAR * Z1 / 2)


def couplings(E_J: float, phi_ext1: float, phi_x: float, phi_1: float, phi_2: float) -> tuple[float, float, float]:
    """(J, g1, g2) in the frequency unit of E_J.

    ``phi_ext1`` is the loop flux in units of the flux quantum; the junction
    phase offset is pi times that value.
    """
    # half a flux quantum is the quarter-period bias where sin peaks
    theta = math.pi * phi_ext1
    s, c = math.sin(theta), math.cos(theta)
    if phi_ext1 % 1 == 0:
        s = 0.0
    elif phi_ext1 % 1 == 0.5:
        c = 0.0
    J = E_J * s * phi_x * phi_1 * phi_2
    return J, E_J * c * phi_x * phi_1, E_J * c * phi_x * phi_2


def cancellation(alpha: float) -> tuple[float, float]:
    """(beta, phi_ext2 in radians) that remove the static two-body terms."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    beta = math.hypot(alpha, 1.0)
    return beta, math.acos(-alpha / beta)


def cancellation_residuals(alpha: float, beta: float, phi_ext2: float) -> tuple[float, float]:
    return alpha + beta * math.cos(phi_ext2), 1.0 - beta * math.sin(phi_ext2)


@dataclass(frozen=True)
class CircuitReport:
    f1: float  # GHz
    f2: float
    f_cavity: float
    Z1: float  # ohm
    phi_x: float
    phi_1: float
    phi_2: float
    J: float  # GHz
    g1: float
    g2: float


def evaluate(p: CircuitParams) -> CircuitReport:
    omega1, Z1 = cpw_fundamental(p.l, p.c0, p.l0)
    px = phi_x_zpf(p.eta, p.d, p.l, Z1)
    p1, p2 = phase_zpf(p.E_J1, p.E_C1), phase_zpf(p.E_J2, p.E_C2)
    J, g1, g2 = couplings(p.E_J, p.phi_ext1, px, p1, p2)
    return CircuitReport(
        f1=transmon_frequency(p.E_J1, p.E_C1),
        f2=transmon_frequency(p.E_J2, p.E_C2),
        f_cavity=omega1 / (2 * math.pi) / 1e9,
        Z1=Z1, phi_x=px, phi_1=p1, phi_2=p2, J=J, g1=g1, g2=g2,
    )


def detuning_figure_of_merit(p: CircuitParams, n_flux: int = 201) -> float:
    """max over flux of |g_j| / |detuning_j| for the two residual couplings.

    Small values mean the two-body exchanges are suppressed by detuning.
    """
    base = evaluate(p)
    det1 = abs(base.f1 - base.f_cavity)
    det2 = abs(base.f_cavity - base.f2)
    worst = 0.0
    for k in range(n_flux):
        _, g1, g2 = couplings(p.E_J, k / (n_flux - 1), base.phi_x, base.phi_1, base.phi_2)
        worst = max(worst, abs(g1) / det1, abs(g2) / det2)
    return worst


CONSTANTS_NOTE = (
    f"hbar={HBAR!r} J s; h={PLANCK!r} J s; Phi0={FLUX_QUANTUM!r} Wb (CODATA via scipy.constants)"
)
