from __future__ import annotations

import pytest

from photon_blockade.cli.config import Config, ConfigError
from photon_blockade.cli.grid import make_axis
from photon_blockade.cli.main import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_SOLVER, run
from photon_blockade.cli.runners import crossing

SWEEP = """\
# small TPB detuning sweep
model = tpb
solver = both
outputs = N, g2_0, S_over_J
params.J = 0.1
params.gamma = 0.1
params.omega = 0.1     # drive
axis.delta.min = -0.5
axis.delta.max = 0.5
axis.delta.count = 5
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def data_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_parse_grammar():
    cfg = Config.parse("a = 1\n# note\n\nb.c = x y  # trailing\n")
    assert cfg.str("a") == "1"
    assert cfg.str("b.c") == "x y"
    with pytest.raises(ConfigError, match=":2"):
        Config.parse("a = 1\nnot a pair\n", "f.cfg")
    with pytest.raises(ConfigError, match="duplicate"):
        Config.parse("a = 1\na = 2\n")
    with pytest.raises(ConfigError, match="invalid key"):
        Config.parse("a..b = 1\n")


def test_typed_access_errors_carry_location():
    cfg = Config.parse("x = abc\n", "f.cfg")
    with pytest.raises(ConfigError, match="f.cfg:1"):
        cfg.float("x")


def test_axis_validation():
    with pytest.raises(ConfigError):
        make_axis("delta", 1.0, 1.0, 2)
    with pytest.raises(ConfigError):
        make_axis("delta", 0.0, 1.0, 1)
    with pytest.raises(ConfigError):
        make_axis("omega", 0.0, 1.0, 3, "log")
    ax = make_axis("omega", 1e-3, 1e-1, 3, "log")
    assert ax.values == pytest.approx((1e-3, 1e-2, 1e-1))


def test_sweep_runs_and_is_byte_identical(tmp_path):
    cfg = write(tmp_path, SWEEP)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["sweep", "--config", str(cfg), "--out", str(out1)]) == EXIT_OK
    assert run(["sweep", "--config", str(cfg), "--out", str(out2), "--workers", "3"]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    header, rows = data_rows(out1.read_text())
    assert header == ["delta", "N_numeric", "N_analytic", "g2_0_numeric", "g2_0_analytic",
                      "S_over_J_numeric", "S_over_J_analytic", "status"]
    assert len(rows) == 5
    assert all(r[-1] == "ok" for r in rows)
    assert rows[2][0] == "0.0000000000000000e+00"
    text = out1.read_text()
    assert "# params.kappa = 1.0" in text
    assert "# photon-blockade" in text


def test_set_override_and_row_major_order(tmp_path):
    cfg = write(tmp_path, SWEEP + "axis.omega.min = 0.01\naxis.omega.max = 0.1\naxis.omega.count = 2\n")
    out = tmp_path / "o.csv"
    rc = run(["sweep", "--config", str(cfg), "--out", str(out), "--set", "axis.delta.count=3", "--set", "solver=numeric"])
    assert rc == EXIT_OK
    header, rows = data_rows(out.read_text())
    assert header[:2] == ["delta", "omega"]
    assert [(float(r[0]), float(r[1])) for r in rows] == [
        (-0.5, 0.01), (-0.5, 0.1), (0.0, 0.01), (0.0, 0.1), (0.5, 0.01), (0.5, 0.1)
    ]


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, SWEEP + "params.bogus = 1\n")
    assert run(["sweep", "--config", str(bad)]) == EXIT_CONFIG
    assert "bogus" in capsys.readouterr().err
    zero = write(tmp_path, SWEEP.replace("axis.delta.max = 0.5", "axis.delta.max = -0.5"))
    assert run(["sweep", "--config", str(zero)]) == EXIT_CONFIG
    assert run(["sweep", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO
    cfg = write(tmp_path, SWEEP)
    assert run(["sweep", "--config", str(cfg), "--out", str(tmp_path / "no" / "dir.csv")]) == EXIT_IO
    assert run(["sweep", "--config", str(cfg), "--workers", "0"]) == EXIT_CONFIG


def test_solver_failures_are_flagged(tmp_path):
    # the analytic N vanishes without drive, so g2 cannot be formed
    text = SWEEP.replace("params.omega = 0.1     # drive", "params.omega = 0.0")
    cfg = write(tmp_path, text)
    out = tmp_path / "f.csv"
    assert run(["sweep", "--config", str(cfg), "--out", str(out), "--set", "solver=analytic"]) == EXIT_SOLVER
    _, rows = data_rows(out.read_text())
    assert len(rows) == 5
    assert all(r[-1].startswith("error:") for r in rows)
    assert all(r[1] == "nan" for r in rows)


def test_worker_env(tmp_path, monkeypatch):
    cfg = write(tmp_path, SWEEP)
    monkeypatch.setenv("PHOTON_BLOCKADE_WORKERS", "2")
    assert run(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == EXIT_OK
    monkeypatch.setenv("PHOTON_BLOCKADE_WORKERS", "many")
    assert run(["sweep", "--config", str(cfg)]) == EXIT_CONFIG


def test_jc_sweep_with_upb_rule(tmp_path):
    text = """\
model = jc
solver = both
params.G = 0.1
params.gamma_q = 0.01
params.omega_c = 0.001
params.ratio = 5
params.delta0_rule = upb
axis.gamma.min = 0.005
axis.gamma.max = 0.02
axis.gamma.count = 3
"""
    out = tmp_path / "jc.csv"
    assert run(["sweep", "--config", str(write(tmp_path, text)), "--out", str(out)]) == EXIT_OK
    header, rows = data_rows(out.read_text())
    n_num, n_an = header.index("N_numeric"), header.index("N_analytic")
    for r in rows:
        assert float(r[n_an]) == pytest.approx(float(r[n_num]), rel=0.05)


def test_circuit_command(tmp_path):
    out = tmp_path / "c.csv"
    assert run(["circuit", "--out", str(out), "--set", "grid.phi_ext1.count=5", "--set", "circuit.E_J_list=20"]) == 0
    header, rows = data_rows(out.read_text())
    assert header == ["E_J_GHz", "phi_ext1", "J_MHz", "g1_MHz", "g2_MHz", "status"]
    mid = rows[2]
    assert float(mid[1]) == 0.5 and float(mid[3]) == 0 and float(mid[4]) == 0
    assert float(mid[2]) > 10
    assert run(["circuit", "--set", "grid.phi_ext1.max=1.5"]) == EXIT_CONFIG


def test_crossing_interpolation():
    n = [0.0, 1e-6, 1e-5, 1e-4]
    g = [1e-4, 1e-3, 1e-3, 1e-1]
    assert crossing(n, g, 1e-2) == pytest.approx(10**-4.5)
    assert crossing(n, g, 1.0) != crossing(n, g, 1.0)  # nan when never reached
    assert crossing(n, [1, 1, 1, 1], 1e-2) == 1e-6


def column(text, name):
    header, rows = data_rows(text)
    j = header.index(name)
    return [float(r[j]) for r in rows]


def test_tpb_sweep_numeric_and_analytic_within_factor_two(tmp_path):
    out = tmp_path / "both.csv"
    cfg = write(tmp_path, SWEEP.replace("axis.delta.count = 5", "axis.delta.count = 11"))
    assert run(["sweep", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    for num, ana in zip(column(text, "g2_0_numeric"), column(text, "g2_0_analytic")):
        assert 0.5 <= ana / num <= 2.0, (num, ana)


def test_weak_coupling_sweep_has_broad_window(tmp_path):
    text = """\
model = tpb
outputs = g2_0
params.J = 0.01
params.gamma = 0.01
params.omega = 0.01
axis.delta.min = -3
axis.delta.max = 3
axis.delta.count = 25
"""
    out = tmp_path / "weak.csv"
    assert run(["sweep", "--config", str(write(tmp_path, text)), "--out", str(out)]) == EXIT_OK
    assert max(column(out.read_text(), "g2_0")) < 0.1


def test_g2tau_traces_settle(tmp_path):
    out = tmp_path / "tau.csv"
    assert run(["g2tau", "--out", str(out), "--set", "grid.t.count=41"]) == EXIT_OK
    text = out.read_text()
    assert column(text, "t")[0] == 0.0
    for name in ("g2_tpb", "g2_cpb", "g2_upb"):
        assert abs(column(text, name)[-1] - 1) <= 1e-2
    assert max(column(text, "g2_upb")) > 1


def test_thermal_zero_row_matches_zero_temperature_sweep(tmp_path):
    out = tmp_path / "th.csv"
    assert run(["thermal", "--out", str(out), "--set", "grid.n_th.count=3"]) == EXIT_OK
    text = out.read_text()
    assert column(text, "n_th")[0] == 0.0
    assert "# crossing.tpb" in text
    sweep = tmp_path / "zero.csv"
    zero_cfg = "model = tpb\noutputs = g2_0\nparams.J = 0.1\nparams.gamma = 0.01\nparams.omega = 0.01\n" \
               "axis.n_th.min = 0\naxis.n_th.max = 1e-3\naxis.n_th.count = 2\n"
    assert run(["sweep", "--config", str(write(tmp_path, zero_cfg)), "--out", str(sweep)]) == EXIT_OK
    assert column(text, "g2_tpb")[0] == pytest.approx(column(sweep.read_text(), "g2_0")[0], abs=1e-10)


def test_circuit_columns_symmetric_about_half_flux(tmp_path):
    out = tmp_path / "flux.csv"
    assert run(["circuit", "--out", str(out), "--set", "grid.phi_ext1.count=21", "--set", "circuit.E_J_list=20"]) == 0
    text = out.read_text()
    J, g1, g2 = (column(text, k) for k in ("J_MHz", "g1_MHz", "g2_MHz"))
    assert abs(J[10]) == max(abs(x) for x in J)
    for k in range(1, 11):
        assert J[10 + k] == pytest.approx(J[10 - k], rel=1e-12)
        assert g1[10 + k] == pytest.approx(-g1[10 - k], rel=1e-12)
        assert g2[10 + k] == pytest.approx(-g2[10 - k], rel=1e-12)
