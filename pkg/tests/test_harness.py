import json

import numpy as np
import pytest

from becscat.born_scattering import CrossSectionCurve
from becscat.cli import main
from becscat.errors import (
    DatasetFileError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidInputError,
    NonConvergenceError,
)
from becscat.gpe_solver import SolverConfig
from becscat.harness import (
    CUTOFF_NUMERICAL,
    Dataset,
    PhysicalParams,
    SweepConfig,
    detect_oscillation_period,
    emit_dataset,
    fit_exponential,
    fit_power_law,
    gamma_from_physical,
    read_dataset,
    run_figure1,
    run_figure2,
    run_figure3,
    run_figure4,
    solve_states,
    worker_count,
)
from becscat.thomas_fermi import tf_radius

RB87 = PhysicalParams(atom_mass=1.443e-25, trap_frequency=2 * np.pi * 100, scattering_length=5.3e-9, atom_count=1e4)


def small_config(**kw):
    base = dict(
        gammas=(0.1, 10.0), ks=(0.2, 1.2, 5.0), figure4_gammas=(0.1, 10.0), grid_n=512, n_k=24,
        k_min=0.05, k_max=10.0, n_q=201, n_universal=30, profile_stride=4,
    )
    base.update(kw)
    return SweepConfig(**base)


@pytest.fixture(scope="module")
def small_states():
    cfg = small_config()
    return solve_states(cfg.gammas, cfg)


# -- physical units ---------------------------------------------------------------


def test_gamma_from_physical():
    gamma, a_osc = gamma_from_physical(RB87)
    assert a_osc == pytest.approx(1.078e-6, rel=1e-3)
    assert gamma == pytest.approx(49.2, rel=2e-3)


def test_gamma_definition_and_linearity():
    params = PhysicalParams(1.0, 1.0, 1.0, 1.0)
    a_osc = gamma_from_physical(params)[1]
    unit = PhysicalParams(1.0, 1.0, a_osc, 1.0)
    assert gamma_from_physical(unit)[0] == pytest.approx(1.0, rel=1e-15)
    doubled = PhysicalParams(RB87.atom_mass, RB87.trap_frequency, RB87.scattering_length, 2e4)
    assert gamma_from_physical(doubled)[0] == pytest.approx(2 * gamma_from_physical(RB87)[0], rel=1e-15)


def test_gamma_rejects_nonpositive():
    with pytest.raises(InvalidInputError):
        gamma_from_physical(PhysicalParams(1.0, -1.0, 1.0, 1.0))


# -- configuration and datasets -------------------------------------------------------


def test_sweep_defaults():
    cfg = SweepConfig()
    assert cfg.gammas == (0.1, 1.0, 10.0, 100.0, 1000.0)
    assert cfg.ks == (0.2, 1.2, 5.0)
    assert cfg.k_grid.size == 200
    assert cfg.k_grid[0] == pytest.approx(1e-2) and cfg.k_grid[-1] == pytest.approx(1e2)


@pytest.mark.parametrize(
    "kw", [{"gammas": ()}, {"gammas": (1.0, -1.0)}, {"ks": (1.0, 1.0)}, {"format": "xml"}, {"n_q": 1}]
)
def test_sweep_rejects(kw):
    with pytest.raises(InvalidConfigError):
        SweepConfig(**kw)


def test_sweep_config_json_roundtrip(tmp_path):
    cfg = small_config(solver=SolverConfig(tol_residual=1e-7))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert SweepConfig.from_json(path) == cfg
    with pytest.raises(InvalidConfigError):
        SweepConfig.from_dict({"gamma": [1.0]})


def test_dataset_validation():
    with pytest.raises(InvalidConfigError):
        Dataset("x", {"a": [1.0, 2.0], "b": [1.0]}, {"a": "1", "b": "1"}, {})
    with pytest.raises(InvalidConfigError):
        Dataset("x", {"a": [1.0]}, {}, {})


def test_worker_env(monkeypatch):
    monkeypatch.setenv("BECSCAT_WORKERS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("BECSCAT_WORKERS", "zero")
    with pytest.raises(InvalidConfigError):
        worker_count()
    monkeypatch.delenv("BECSCAT_WORKERS")
    assert worker_count() >= 1


# -- serialization --------------------------------------------------------------------


def awkward_dataset():
    rng = np.random.default_rng(7)
    return Dataset(
        "demo",
        {"x": rng.normal(size=50) * 1e-300, "y": np.array([0.1 + 0.2, np.pi, -0.0, 1e308, 5e-324] * 10)},
        {"x": "a_w", "y": "1"},
        {"figure": "demo", "config": {"nested": [1, 2.5]}, "note": "a=b"},
    )


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_roundtrip_bitwise(tmp_path, fmt):
    ds = awkward_dataset()
    back = read_dataset(emit_dataset(ds, fmt, tmp_path / f"demo.{fmt}"))
    assert back.name == ds.name and back.units == ds.units and back.provenance == ds.provenance
    for key in ds.columns:
        assert back[key].tobytes() == ds[key].tobytes()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_empty_dataset(tmp_path, fmt):
    ds = Dataset("empty", {"a": [], "b": []}, {"a": "1", "b": "1"}, {"figure": "none"})
    path = emit_dataset(ds, fmt, tmp_path / f"empty.{fmt}")
    if fmt == "csv":
        lines = path.read_text().splitlines()
        assert lines[-1] == "a,b"
        assert all(line.startswith("# ") for line in lines[:-1])
    back = read_dataset(path)
    assert len(back) == 0 and list(back.columns) == ["a", "b"]


def test_csv_layout(tmp_path):
    text = emit_dataset(awkward_dataset(), "csv", tmp_path / "d.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == '# name="demo"'
    header = lines.index("x,y")
    assert all(line.startswith("# ") for line in lines[:header])
    assert len(lines) - header - 1 == 50


def test_emit_bad_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(DatasetFileError) as info:
        emit_dataset(awkward_dataset(), "csv", blocker / "sub" / "d.csv")
    assert info.value.path == blocker / "sub" / "d.csv"


def test_byte_determinism(tmp_path, small_states):
    cfg = small_config()
    first = emit_dataset(run_figure2(cfg, dict(small_states))["figure2"], "csv", tmp_path / "a.csv")
    second = emit_dataset(run_figure2(cfg, solve_states(cfg.gammas, cfg))["figure2"], "csv", tmp_path / "b.csv")
    assert first.read_bytes() == second.read_bytes()


# -- fits and periods -------------------------------------------------------------------


def curve(x, y):
    return CrossSectionCurve(x, y, 1.0, "tf", "sigma_k")


def test_fit_power_law_recovers_generator():
    x = np.geomspace(1, 50, 20)
    p, a, rms = fit_power_law(curve(x, 7 * x**-2.0), (1, 50))
    assert p == pytest.approx(-2.0, abs=1e-12)
    assert a == pytest.approx(7.0, rel=1e-12)
    assert rms <= 1e-12


def test_fit_exponential_recovers_generator():
    x = np.linspace(1, 10, 30)
    b, a, rms = fit_exponential(curve(x, 3 * np.exp(-0.7 * x)), (1, 10))
    assert (b, a) == pytest.approx((0.7, 3.0), rel=1e-12)
    assert rms <= 1e-12


def test_fit_errors():
    x = np.linspace(1, 2, 5)
    with pytest.raises(InsufficientDataError):
        fit_power_law(curve(x, x), (1, 2))
    x = np.linspace(1, 2, 10)
    with pytest.raises(InvalidInputError):
        fit_power_law(curve(x, np.zeros(10)), (1, 2))


def test_period_synthetic():
    p = 0.37
    x = np.linspace(0, 10, 20001)
    found = detect_oscillation_period(curve(x, np.sin(np.pi * x / p) ** 2 + 1e-3), (0.5, 9.5))
    assert found == pytest.approx(p, abs=1e-6)


def test_period_needs_minima():
    x = np.linspace(0, 1, 101)
    with pytest.raises(InsufficientDataError):
        detect_oscillation_period(curve(x, np.sin(3 * x) ** 2 + 1), (0, 1))


# -- figure runners ---------------------------------------------------------------------


def test_figure1_examples(sweep_states):
    out = run_figure1(SweepConfig(), sweep_states)
    b = out["figure1b"]
    row = b.rows_for(0.1)
    assert row["mu_num"][0] == pytest.approx(1.58, abs=0.01)
    assert row["mu_tf"][0] == pytest.approx(0.5 * 1.5**0.4, rel=1e-15)
    assert row["rel_gap"][0] > 0.5
    assert b.rows_for(1000.0)["rel_gap"][0] <= 0.03
    assert np.all(b["mu_num"] >= 1.5)
    a = out["figure1a"]
    for g in SweepConfig().gammas:
        rows = a.rows_for(g)
        assert rows["r"][0] == 0.0
        assert rows["psi_num"][0] == 1.0 and rows["psi_tf"][0] == 1.0
    assert a.provenance["config"] == SweepConfig().to_dict()
    assert "code_version" in a.provenance


def test_figure2_examples(sweep_states):
    ds = run_figure2(SweepConfig(), sweep_states)["figure2"]
    sel = (ds["gamma"] == 0.1) & (ds["k"] == 0.2)
    ratio = ds["sigma_num"][sel][0] / (16 * np.pi * 0.01)
    assert 0.8 <= ratio <= 1.0
    for g in SweepConfig().gammas:
        rows = ds.rows_for(g)
        order = np.argsort(rows["k"])
        assert np.all(np.diff(rows["sigma_num"][order]) < 0)
        assert np.all(np.diff(rows["sigma_tf"][order]) < 0)
    assert np.all(ds["sigma_num"] >= 0) and np.all(ds["sigma_tf"] >= 0)


def test_figure3_small(small_states):
    cfg = small_config()
    out = run_figure3(cfg, dict(small_states))
    b = out["figure3b"]
    assert b.provenance["cutoff_numerical"] == CUTOFF_NUMERICAL
    for g in cfg.gammas:
        rows = b.rows_for(g)
        r_mu = np.sqrt(2 * small_states[g].mu)
        assert np.all(rows["cutoff_num"] == r_mu)
        assert r_mu != pytest.approx(tf_radius(g), rel=1e-3)
        assert rows["sigma_tilde_num"][0] == pytest.approx(16 * np.pi, rel=0.02)
    tf_rows = [b.rows_for(g) for g in cfg.gammas]
    kt = np.geomspace(0.5, 5, 10)
    interp = [np.interp(kt, r["k_tilde_tf"], r["sigma_tilde_tf"]) for r in tf_rows]
    assert np.allclose(interp[0], interp[1], rtol=1e-2)
    assert np.all(out["figure3a"]["sigma_num"] >= 0)


def test_figure4_small(small_states):
    cfg = small_config()
    ds = run_figure4(cfg, dict(small_states))["figure4"]
    forward = [ds.rows_for(g)["dsdo_num"][0] for g in cfg.figure4_gammas]
    assert forward == pytest.approx([4 * g * g for g in cfg.figure4_gammas], rel=1e-8)
    assert forward[0] < forward[1]
    assert np.all(ds["dsdo_num"] >= 0) and np.all(ds["dsdo_tf"] >= 0)


def test_gamma_order_independent(small_states):
    fwd = run_figure2(small_config(), dict(small_states))["figure2"]
    rev = run_figure2(small_config(gammas=(10.0, 0.1)), dict(small_states))["figure2"]
    for g in (0.1, 10.0):
        a, b = fwd.rows_for(g), rev.rows_for(g)
        for key in a:
            assert np.array_equal(a[key], b[key])


def test_runner_reports_nonconvergence():
    cfg = small_config(gammas=(10.0,), solver=SolverConfig(max_steps=20))
    with pytest.raises(NonConvergenceError) as info:
        run_figure1(cfg)
    assert info.value.gamma == 10.0


# -- command line -------------------------------------------------------------------


def test_cli_ground_state(capsys):
    assert main(["ground-state", "--gamma", "1", "--grid-n", "256"]) == 0
    out = capsys.readouterr().out
    assert "mu" in out and "2.06" in out


def test_cli_figure_writes_files(tmp_path):
    cfg = small_config(gammas=(1.0,), figure4_gammas=(1.0,))
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg.to_dict()))
    out = tmp_path / "out"
    assert main(["figure4", "--config", str(cfg_path), "--out", str(out), "--format", "json"]) == 0
    ds = read_dataset(out / "figure4.json")
    assert ds.provenance["config"]["figure4_gammas"] == [1.0]
    assert ds.provenance["config"]["output_dir"] == str(out)


def test_cli_flags_override_config(tmp_path):
    from becscat.cli import build_parser, config_from_args

    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(small_config().to_dict()))
    args = build_parser().parse_args(["figure2", "--config", str(cfg_path), "--gamma", "3", "--n-q", "99"])
    cfg = config_from_args(args)
    assert cfg.gammas == (3.0,) and cfg.n_q == 99 and cfg.grid_n == 512


def test_cli_exit_codes(tmp_path):
    assert main(["ground-state", "--gamma", "-1"]) == 1
    assert main(["figure1", "--config", str(tmp_path / "missing.json")]) == 1
    cfg = small_config(gammas=(10.0,), solver=SolverConfig(max_steps=20))
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg.to_dict()))
    assert main(["ground-state", "--config", str(cfg_path)]) == 2
