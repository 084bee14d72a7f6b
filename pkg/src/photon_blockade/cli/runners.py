"""The five CLI commands as pure functions from a Config to a Table."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from .. import analytics, circuit
from ..dynamics import SteadyStateError, UndefinedCorrelationError
from ..hilbert import DensityMatrixError
from ..models import JcParams, TpbParams, solve
from .config import Config, ConfigError
from .grid import axis_names, read_axis

NAN = float("nan")
# failures recorded per row instead of aborting the run
SOLVER_ERRORS = (
    SteadyStateError,
    UndefinedCorrelationError,
    DensityMatrixError,
    np.linalg.LinAlgError,
    ZeroDivisionError,
    ArithmeticError,
    analytics.NoRealSolutionError,
    RuntimeError,
)


@dataclass
class Table:
    columns: list[str]
    rows: list[tuple[list[float], str]]
    notes: list[tuple[str, str]] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(status != "ok" for _, status in self.rows)


def evaluate_rows(fn: Callable, points: Sequence, n_cols: int, workers: int) -> list[tuple[list[float], str]]:
    """Run ``fn`` on every point; results stay in input order."""

    def guarded(pt):
        try:
            vals, errors = fn(pt)
        except SOLVER_ERRORS as exc:
            return [NAN] * n_cols, f"error:{type(exc).__name__}"
        return vals, "ok" if not errors else "error:" + "+".join(errors)

    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(guarded, points))
    return [guarded(p) for p in points]


# --- shared parameter readers ----------------------------------------------

def _channel_overrides(cfg: Config, key: str = "thermal.channels") -> dict:
    mode = cfg.str(key, "all", {"all", "cavity", "qubits"})
    if mode == "cavity":
        return {"n_th_qubits": 0.0}
    if mode == "qubits":
        return {"n_th_cavity": 0.0}
    return {}


def _read_fields(cfg: Config, prefix: str, cls, skip=()) -> dict:
    out = {}
    for f in fields(cls):
        if f.name in skip or f.name.startswith("n_th_"):
            continue
        key = f"{prefix}.{f.name}"
        out[f.name] = cfg.int(key, f.default) if f.name == "n_max" else cfg.float(key, f.default)
    return out


@dataclass(frozen=True)
class JcMechanism:
    """Jaynes-Cummings comparison settings, scaled by the coupling G."""

    kind: str  # "cpb" or "upb"
    drive_over_G: float
    ratio: float
    gamma_q: float
    delta0_over_G: float = 1.0

    def params(self, G: float, n_th: float = 0.0, n_max: int = 5, extra=None) -> JcParams:
        omega_c = self.drive_over_G * G
        if self.kind == "upb":
            delta0 = analytics.upb_detuning(self.ratio, G, 1.0, self.gamma_q)
        else:
            delta0 = self.delta0_over_G * G
        return JcParams(
            delta0=delta0,
            G=G,
            omega_c=omega_c,
            omega_q=self.ratio * omega_c,
            kappa_a=1.0,
            gamma_q=self.gamma_q,
            n_th=n_th,
            n_max=n_max,
            **(extra or {}),
        )


def read_mechanism(cfg: Config, kind: str) -> JcMechanism:
    m = JcMechanism(
        kind=kind,
        drive_over_G=cfg.float(f"{kind}.drive_over_G", 0.01),
        ratio=cfg.float(f"{kind}.ratio", 0.0 if kind == "cpb" else 5.0),
        gamma_q=cfg.float(f"{kind}.gamma_q", 0.01),
        delta0_over_G=cfg.float(f"{kind}.delta0_over_G", 1.0) if kind == "cpb" else 1.0,
    )
    if not (m.drive_over_G > 0 and m.gamma_q >= 0 and m.ratio >= 0):
        raise ConfigError(f"{kind}: drive_over_G must be positive, gamma_q and ratio non-negative")
    return m


# --- sweep -----------------------------------------------------------------

SWEEP_AXES = ("delta", "omega", "gamma", "J", "kappa_over_J", "n_th")
SWEEP_OUTPUTS = ("N", "Npair", "g2_0", "S", "S_over_J", "g2_tau")
_JC_AXIS_FIELD = {"delta": "delta0", "omega": "omega_c", "gamma": "gamma_q", "J": "G", "n_th": "n_th"}


def run_sweep(cfg: Config, workers: int) -> Table:
    model = cfg.str("model", "tpb", {"tpb", "jc"})
    solver = cfg.str("solver", "numeric", {"numeric", "analytic", "both"})
    outputs = cfg.list("outputs", ["N", "Npair", "g2_0"])
    for o in outputs:
        if o not in SWEEP_OUTPUTS:
            raise ConfigError(f"unknown output {o!r}; sweep supports {', '.join(SWEEP_OUTPUTS)}")
    if "g2_tau" in outputs and solver == "analytic":
        raise ConfigError("g2_tau needs the numeric solver")
    tau = cfg.float("g2_tau.tau", 1.0) if "g2_tau" in outputs else None
    rel_residual = cfg.float("tolerances.rel_residual", 1e-8)
    threshold = cfg.float("analytic.strong_threshold", 1.0) if model == "tpb" and solver != "numeric" else 1.0

    names = axis_names(cfg, "axis")
    if not names:
        raise ConfigError("sweep needs at least one axis.<name>.* entry")
    if len(names) > 2:
        raise ConfigError(f"at most two axes, got {names}")
    for n in names:
        if n == "phi_ext1":
            raise ConfigError("phi_ext1 axes belong to the circuit command")
        if n not in SWEEP_AXES:
            raise ConfigError(f"unknown axis {n!r}; choose from {', '.join(SWEEP_AXES)}")
    axes = [read_axis(cfg, "axis", n) for n in names]

    cls = TpbParams if model == "tpb" else JcParams
    base = _read_fields(cfg, "params", cls)
    base.update(_channel_overrides(cfg))
    ratio = cfg.float("params.ratio", NAN) if model == "jc" and cfg.has("params.ratio") else None
    rule = cfg.str("params.delta0_rule", "fixed", {"fixed", "cpb", "upb"}) if model == "jc" else "fixed"
    drive_over_G = cfg.float("params.omega_c_over_G", NAN) if model == "jc" and cfg.has("params.omega_c_over_G") else None

    def params_at(point: tuple[float, ...]):
        kw = dict(base)
        for axis, v in zip(axes, point):
            if model == "tpb":
                if axis.name == "kappa_over_J":
                    kw["J"] = kw["kappa"] / v
                else:
                    kw[axis.name] = v
            elif axis.name == "kappa_over_J":
                kw["G"] = kw["kappa_a"] / v
            else:
                kw[_JC_AXIS_FIELD[axis.name]] = v
        if model == "jc":
            if drive_over_G is not None:
                kw["omega_c"] = drive_over_G * kw["G"]
            if ratio is not None:
                kw["omega_q"] = ratio * kw["omega_c"]
            if rule == "cpb":
                kw["delta0"] = kw["G"]
            elif rule == "upb":
                kw["delta0"] = analytics.upb_detuning(
                    kw["omega_q"] / kw["omega_c"], kw["G"], kw["kappa_a"], kw["gamma_q"]
                )
        return cls(**kw)

    solvers = ["numeric", "analytic"] if solver == "both" else [solver]
    columns = [a.name for a in axes]
    for o in outputs:
        for s in solvers:
            if o == "g2_tau" and s == "analytic":
                continue
            columns.append(o if len(solvers) == 1 else f"{o}_{s}")

    points = list(itertools.product(*(a.values for a in axes)))
    try:
        grid_params = [params_at(pt) for pt in points]
    except ValueError as exc:
        raise ConfigError(f"invalid parameters on the grid: {exc}") from None

    def row(i):
        point, p = points[i], grid_params[i]
        kappa, coupling = (p.kappa, p.J) if model == "tpb" else (p.kappa_a, p.G)
        results, errors = {}, []
        for s in solvers:
            try:
                results[s] = _observe(p, s, kappa, coupling, tau, rel_residual, threshold)
            except SOLVER_ERRORS as exc:
                errors.append(f"{s}:{type(exc).__name__}")
                results[s] = {}
        vals = list(point)
        for o in outputs:
            for s in solvers:
                if o == "g2_tau" and s == "analytic":
                    continue
                vals.append(results[s].get(o, NAN))
        return vals, errors

    table = Table(columns, evaluate_rows(row, range(len(points)), len(columns), workers))
    table.notes.append(("grid.size", str(len(points))))
    return table


def _observe(p, solver, kappa, coupling, tau, rel_residual, threshold) -> dict[str, float]:
    if solver == "numeric":
        sol = solve(p, rel_residual)
        o = sol.obs
        out = {"N": o.N, "Npair": o.Npair, "g2_0": o.g2_0, "S": o.S}
        if tau is not None:
            out["g2_tau"] = sol.g2_tau([tau])[0][1]
    elif isinstance(p, TpbParams):
        a = analytics.tpb_analytic(p, threshold)
        out = {"N": a.N, "Npair": a.Npair, "g2_0": a.g2_0, "S": kappa * a.N}
    else:
        amp = analytics.jc_amplitudes(p)
        out = {"N": amp.N, "Npair": amp.Npair, "g2_0": analytics.jc_g2(p), "S": kappa * amp.N}
    out["S_over_J"] = out["S"] / coupling if coupling > 0 else NAN
    return out


# --- compare ---------------------------------------------------------------

def _tpb_best(p: TpbParams, rule: str, rel_residual: float):
    if rule == "zero":
        return solve(p, rel_residual), 0.0
    if rule == "resonant":
        return solve(p.with_(delta=p.J), rel_residual), p.J
    candidates = [(solve(p.with_(delta=d), rel_residual), d) for d in (0.0, p.J)]
    return max(candidates, key=lambda c: c[0].obs.N)


def run_compare(cfg: Config, workers: int) -> Table:
    axis = read_axis(cfg, "grid", "kappa_over_J", (0.01, 100.0, 41, "log"))
    n_max = cfg.int("n_max", 5)
    rel_residual = cfg.float("tolerances.rel_residual", 1e-8)
    tg = cfg.float("tpb.gamma", 0.01)
    tw = cfg.float("tpb.omega", 0.01)
    rule = cfg.str("tpb.delta_rule", "best", {"best", "zero", "resonant"})
    cpb, upb = read_mechanism(cfg, "cpb"), read_mechanism(cfg, "upb")

    def row(kj):
        J = 1.0 / kj
        errors = []
        vals = [kj]
        g2s = []
        delta_used = NAN
        for name in ("tpb", "cpb", "upb"):
            try:
                if name == "tpb":
                    sol, delta_used = _tpb_best(TpbParams(J=J, gamma=tg, omega=tw, n_max=n_max), rule, rel_residual)
                elif name == "cpb":
                    sol = solve(cpb.params(J, n_max=n_max), rel_residual)
                else:
                    sol = solve(upb.params(J, n_max=n_max), rel_residual)
                vals.append(sol.obs.S / J)
                g2s.append(sol.obs.g2_0)
            except SOLVER_ERRORS as exc:
                errors.append(f"{name}:{type(exc).__name__}")
                vals.append(NAN)
                g2s.append(NAN)
        return vals + g2s + [delta_used], errors

    columns = ["kappa_over_J", "S_tpb_over_J", "S_cpb_over_J", "S_upb_over_J", "g2_tpb", "g2_cpb", "g2_upb", "delta_tpb"]
    return Table(columns, evaluate_rows(row, list(axis.values), len(columns), workers))


# --- g2tau -----------------------------------------------------------------

def _time_grid(cfg: Config) -> list[float]:
    axis = read_axis(cfg, "grid", "t", (0.01, 1000.0, 101, "log"))
    times = list(axis.values)
    if cfg.bool("grid.include_zero", True) and times[0] != 0.0:
        times = [0.0] + times
    if any(t < 0 for t in times):
        raise ConfigError("times must be non-negative")
    return times


def run_g2tau(cfg: Config, workers: int) -> Table:
    times = _time_grid(cfg)
    n_max = cfg.int("n_max", 5)
    rel_residual = cfg.float("tolerances.rel_residual", 1e-8)
    tpb = TpbParams(
        delta=cfg.float("tpb.delta", 0.0),
        J=cfg.float("tpb.J", 0.1),
        gamma=cfg.float("tpb.gamma", 0.01),
        omega=cfg.float("tpb.omega", 0.01),
        n_max=n_max,
    )
    cpb = read_mechanism(cfg, "cpb").params(cfg.float("cpb.G", 20.0), n_max=n_max)
    upb = read_mechanism(cfg, "upb").params(cfg.float("upb.G", 0.1), n_max=n_max)

    def trace(p):
        sol = solve(p, rel_residual)
        return [v for _, v in sol.g2_tau(times)], []

    mech = evaluate_rows(trace, [tpb, cpb, upb], len(times), workers)
    rows = []
    for i, t in enumerate(times):
        errs = [f"{name}:{st[6:]}" for name, (_, st) in zip(("tpb", "cpb", "upb"), mech) if st != "ok"]
        rows.append(([t] + [vals[i] for vals, _ in mech], "ok" if not errs else "error:" + "+".join(errs)))
    return Table(["t", "g2_tpb", "g2_cpb", "g2_upb"], rows)


# --- thermal ---------------------------------------------------------------

def crossing(n_grid: Sequence[float], g2: Sequence[float], level: float) -> float:
    """Smallest positive n where g2 reaches ``level``, log-log interpolated.

    NaN if never reached; the first positive grid point if already above it.
    """
    pts = [(n, g) for n, g in zip(n_grid, g2) if n > 0 and np.isfinite(g) and g > 0]
    for i, (n, g) in enumerate(pts):
        if g >= level:
            if i == 0:
                return n
            n0, g0 = pts[i - 1]
            f = (math.log(level) - math.log(g0)) / (math.log(g) - math.log(g0))
            return math.exp(math.log(n0) + f * (math.log(n) - math.log(n0)))
    return NAN


def run_thermal(cfg: Config, workers: int) -> Table:
    axis = read_axis(cfg, "grid", "n_th", (1e-12, 1e-2, 41, "log"))
    grid = list(axis.values)
    if cfg.bool("grid.include_zero", True) and grid[0] != 0.0:
        grid = [0.0] + grid
    level = cfg.float("threshold", 1e-2)
    n_max = cfg.int("n_max", 5)
    rel_residual = cfg.float("tolerances.rel_residual", 1e-8)
    extra = _channel_overrides(cfg)
    tpb0 = TpbParams(
        delta=cfg.float("tpb.delta", 0.0),
        J=cfg.float("tpb.J", 0.1),
        gamma=cfg.float("tpb.gamma", 0.01),
        omega=cfg.float("tpb.omega", 0.01),
        n_max=n_max,
        **extra,
    )
    G_cpb = cfg.float("cpb.G", 20.0)
    G_upb = cfg.float("upb.G", 0.01)
    cpb, upb = read_mechanism(cfg, "cpb"), read_mechanism(cfg, "upb")

    def row(n):
        vals, errors = [n], []
        for name in ("tpb", "cpb", "upb"):
            try:
                if name == "tpb":
                    p = tpb0.with_(n_th=n)
                elif name == "cpb":
                    p = cpb.params(G_cpb, n, n_max, extra)
                else:
                    p = upb.params(G_upb, n, n_max, extra)
                vals.append(solve(p, rel_residual).obs.g2_0)
            except SOLVER_ERRORS as exc:
                errors.append(f"{name}:{type(exc).__name__}")
                vals.append(NAN)
        return vals, errors

    rows = evaluate_rows(row, grid, 4, workers)
    table = Table(["n_th", "g2_tpb", "g2_cpb", "g2_upb"], rows)
    for j, name in enumerate(("tpb", "cpb", "upb"), 1):
        c = crossing(grid, [v[j] for v, _ in rows], level)
        table.notes.append((f"crossing.{name}", repr(c)))
    return table


# --- circuit ---------------------------------------------------------------

def run_circuit(cfg: Config, workers: int) -> Table:
    axis = read_axis(cfg, "grid", "phi_ext1", (0.0, 1.0, 101, "linear"))
    if min(axis.values) < 0 or max(axis.values) > 1:
        raise ConfigError("phi_ext1 grid must lie in [0, 1] flux quanta")
    ej_list = cfg.float_list("circuit.E_J_list", [20.0, 15.0, 10.0])
    length = cfg.float("circuit.l", 10e-3)
    c0, l0 = circuit.line_constants(
        cfg.float("circuit.impedance", 50.0), length, cfg.float("circuit.f_cavity", 6.0)
    )
    try:
        params = circuit.CircuitParams(
            E_J=ej_list[0],
            alpha=cfg.float("circuit.alpha", 0.0),
            eta=cfg.float("circuit.eta", 5.0),
            d=cfg.float("circuit.d", 20e-6),
            l=length,
            c0=c0,
            l0=l0,
            E_J1=cfg.float("circuit.E_J1", 45.0),
            E_C1=cfg.float("circuit.E_C1", 0.3),
            E_J2=cfg.float("circuit.E_J2", 10.0),
            E_C2=cfg.float("circuit.E_C2", 0.2),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    base = circuit.evaluate(params)
    beta, phi2 = circuit.cancellation(params.alpha)

    def row(point):
        ej, flux = point
        J, g1, g2 = circuit.couplings(ej, flux, base.phi_x, base.phi_1, base.phi_2)
        return [ej, flux, J * 1e3, g1 * 1e3, g2 * 1e3], []

    points = [(ej, f) for ej in ej_list for f in axis.values]
    table = Table(["E_J_GHz", "phi_ext1", "J_MHz", "g1_MHz", "g2_MHz"], evaluate_rows(row, points, 5, workers))
    table.notes += [
        ("constants", circuit.CONSTANTS_NOTE),
        ("derived.c0_F_per_m", repr(c0)),
        ("derived.l0_H_per_m", repr(l0)),
        ("derived.f1_GHz", repr(base.f1)),
        ("derived.f2_GHz", repr(base.f2)),
        ("derived.f_cavity_GHz", repr(base.f_cavity)),
        ("derived.Z1_ohm", repr(base.Z1)),
        ("derived.phi_x", repr(base.phi_x)),
        ("derived.phi_1", repr(base.phi_1)),
        ("derived.phi_2", repr(base.phi_2)),
        ("derived.beta", repr(beta)),
        ("derived.phi_ext2_rad", repr(phi2)),
        ("derived.detuning_figure_of_merit", repr(circuit.detuning_figure_of_merit(params))),
    ]
    return table


COMMANDS: dict[str, Callable[[Config, int], Table]] = {
    "sweep": run_sweep,
    "compare": run_compare,
    "g2tau": run_g2tau,
    "thermal": run_thermal,
    "circuit": run_circuit,
}
