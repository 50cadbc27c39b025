"""Parameter sweeps that regenerate the four figure datasets, plus the
tail and oscillation diagnostics used to characterize them.

Every dataset is in long format (one row per sample, a ``gamma`` column
where curves for several interaction strengths are stacked) and carries a
provenance mapping that echoes the full configuration.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import constants

from . import __version__
from .born_scattering import (
    CrossSectionCurve,
    default_q_grid,
    form_factor_table,
    scaled_point,
    tf_form_factor_table,
    tf_total_cross_section,
    total_cross_sections,
    universal_tf_cross_section,
)
from .errors import (
    DatasetFileError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidInputError,
)
from .gpe_solver import GroundState, SolverConfig, build_grid, default_r_max, solve_ground_state
from .grid import origin_slope
from .thomas_fermi import cutoff_radius_from_mu, tf_chemical_potential, tf_radius

log = logging.getLogger(__name__)

WORKERS_ENV = "BECSCAT_WORKERS"
FIGURE1_GAMMAS = (0.1, 1.0, 10.0, 100.0, 1000.0)
FIGURE2_KS = (0.2, 1.2, 5.0)
FIGURE4_GAMMAS = (0.1, 10.0, 1000.0)
CUTOFF_NUMERICAL = "R_mu = sqrt(2 mu_num)"
CUTOFF_TF = "R = (15 gamma)^(1/5)"


# -- physical parameters -----------------------------------------------------


@dataclass(frozen=True)
class PhysicalParams:
    """SI inputs: mass [kg], trap frequency [rad/s], scattering length [m]."""

    atom_mass: float
    trap_frequency: float
    scattering_length: float
    atom_count: float


def gamma_from_physical(params: PhysicalParams) -> tuple[float, float]:
    """Return ``(Gamma, a_w)`` with ``Gamma = N a_s / a_w``, ``a_w`` in metres."""
    values = (params.atom_mass, params.trap_frequency, params.scattering_length, params.atom_count)
    if not all(np.isfinite(v) and v > 0 for v in values):
        raise InvalidInputError(f"physical parameters must all be positive: {params}")
    a_osc = np.sqrt(constants.hbar / (params.atom_mass * params.trap_frequency))
    return params.atom_count * params.scattering_length / a_osc, float(a_osc)


# -- configuration -------------------------------------------------------------


def _positive_unique(name: str, values: Iterable[float]) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not out:
        raise InvalidConfigError(f"{name} must not be empty")
    if any(not (np.isfinite(v) and v > 0) for v in out):
        raise InvalidConfigError(f"{name} entries must be positive: {out}")
    if len(set(out)) != len(out):
        raise InvalidConfigError(f"{name} entries must be distinct: {out}")
    return out


@dataclass(frozen=True)
class SweepConfig:
    gammas: tuple[float, ...] = FIGURE1_GAMMAS
    ks: tuple[float, ...] = FIGURE2_KS
    figure4_gammas: tuple[float, ...] = FIGURE4_GAMMAS
    k_min: float = 1e-2
    k_max: float = 1e2
    n_k: int = 200
    q_max: float = 10.0  # figure 4 momentum-transfer range
    n_q: int = 2001
    grid_n: int = 4096
    r_max: float | None = None
    profile_stride: int = 8
    n_universal: int = 400
    solver: SolverConfig = field(default_factory=SolverConfig)
    output_dir: str = "results"
    format: str = "csv"

    def __post_init__(self):
        for name in ("gammas", "ks", "figure4_gammas"):
            object.__setattr__(self, name, _positive_unique(name, getattr(self, name)))
        if not 0 < self.k_min < self.k_max:
            raise InvalidConfigError("need 0 < k_min < k_max")
        if self.n_k < 2 or self.n_q < 2 or self.profile_stride < 1 or self.n_universal < 2:
            raise InvalidConfigError("n_k, n_q, n_universal must be >= 2, profile_stride >= 1")
        if not self.q_max > 0:
            raise InvalidConfigError("q_max must be positive")
        if self.r_max is not None and not self.r_max > 0:
            raise InvalidConfigError("r_max must be positive")
        if self.format not in ("csv", "json"):
            raise InvalidConfigError(f"format must be csv or json, got {self.format!r}")
        if isinstance(self.solver, Mapping):
            object.__setattr__(self, "solver", SolverConfig(**self.solver))
        build_grid(self.grid_n, self.r_max or 1.0)

    @property
    def k_grid(self) -> np.ndarray:
        return np.logspace(np.log10(self.k_min), np.log10(self.k_max), self.n_k)

    def grid_for(self, gamma: float):
        return build_grid(self.grid_n, self.r_max or default_r_max(gamma))

    def to_dict(self) -> dict:
        return {
            "gammas": list(self.gammas),
            "ks": list(self.ks),
            "figure4_gammas": list(self.figure4_gammas),
            "k_min": self.k_min,
            "k_max": self.k_max,
            "n_k": self.n_k,
            "q_max": self.q_max,
            "n_q": self.n_q,
            "grid_n": self.grid_n,
            "r_max": self.r_max,
            "profile_stride": self.profile_stride,
            "n_universal": self.n_universal,
            "solver": self.solver.to_dict(),
            "output_dir": self.output_dir,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SweepConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidConfigError(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**dict(data))

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        try:
            with open(path) as fh:
                return cls.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfigError(f"cannot read config {path}: {exc}") from exc


# -- datasets ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    columns: dict = field(repr=False)
    units: dict
    provenance: dict = field(repr=False)

    def __post_init__(self):
        cols = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        lengths = {v.shape for v in cols.values()}
        if len(lengths) > 1 or any(v.ndim != 1 for v in cols.values()):
            raise InvalidConfigError(f"dataset {self.name}: columns differ in length")
        missing = set(cols) - set(self.units)
        if missing:
            raise InvalidConfigError(f"dataset {self.name}: no units for {sorted(missing)}")
        object.__setattr__(self, "columns", cols)

    def __len__(self):
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def __getitem__(self, name):
        return self.columns[name]

    def rows_for(self, gamma: float) -> dict:
        mask = self.columns["gamma"] == gamma
        return {k: v[mask] for k, v in self.columns.items()}


def _provenance(figure: str, config: SweepConfig, **extra) -> dict:
    out = {"figure": figure, "code_version": __version__, "config": config.to_dict()}
    out.update(extra)
    return out


# -- parallel solves ----------------------------------------------------------


def worker_count() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        try:
            n = int(value)
        except ValueError:
            raise InvalidConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}")
        if n < 1:
            raise InvalidConfigError(f"{WORKERS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def _map(fn, items: Sequence):
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def solve_states(gammas: Iterable[float], config: SweepConfig, states: dict | None = None) -> dict:
    """Ground states keyed by gamma; entries already in ``states`` are reused."""
    states = {} if states is None else states
    todo = [g for g in dict.fromkeys(float(g) for g in gammas) if g not in states]
    solved = _map(lambda g: solve_ground_state(g, config.grid_for(g), config.solver), todo)
    states.update(zip(todo, solved))
    return states


def _numerical_cutoff(state: GroundState) -> float:
    return cutoff_radius_from_mu(state.mu)


# -- figures -----------------------------------------------------------------


def run_figure1(config: SweepConfig, states: dict | None = None) -> dict[str, Dataset]:
    """Order parameters normalized to one at the origin (a) and mu(Gamma) (b)."""
    states = solve_states(config.gammas, config, states)
    part_a = {"gamma": [], "r": [], "psi_num": [], "psi_tf": []}
    mu_num, mu_tf = [], []
    for gamma in config.gammas:
        state = states[gamma]
        profile = state.profile
        r = profile.r[:: config.profile_stride]
        u = profile.u[:: config.profile_stride]
        psi = np.empty_like(r)
        psi[1:] = u[1:] / r[1:]
        psi[0] = origin_slope(profile)
        psi /= psi[0]
        radius = tf_radius(gamma)
        psi_tf = np.sqrt(np.clip(1.0 - (r / radius) ** 2, 0.0, None))
        part_a["gamma"].append(np.full(r.size, gamma))
        part_a["r"].append(r)
        part_a["psi_num"].append(psi)
        part_a["psi_tf"].append(psi_tf)
        mu_num.append(state.mu)
        mu_tf.append(tf_chemical_potential(gamma))
    mu_num, mu_tf = np.array(mu_num), np.array(mu_tf)
    fig_a = Dataset(
        "figure1a",
        {k: np.concatenate(v) for k, v in part_a.items()},
        {"gamma": "1", "r": "a_w", "psi_num": "psi0(r)/psi0(0)", "psi_tf": "psi0(r)/psi0(0)"},
        _provenance("figure1a", config),
    )
    fig_b = Dataset(
        "figure1b",
        {
            "gamma": np.array(config.gammas),
            "mu_num": mu_num,
            "mu_tf": mu_tf,
            "rel_gap": np.abs(mu_num - mu_tf) / mu_num,
            "residual": np.array([states[g].residual for g in config.gammas]),
        },
        {"gamma": "1", "mu_num": "hbar*w", "mu_tf": "hbar*w", "rel_gap": "1", "residual": "1"},
        _provenance("figure1b", config),
    )
    return {"figure1a": fig_a, "figure1b": fig_b}


def _numerical_table(state: GroundState, k_max: float):
    radius = max(_numerical_cutoff(state), tf_radius(state.gamma))
    q_max, n_q = default_q_grid(k_max, radius)
    return form_factor_table(state.profile, q_max, n_q)


def run_figure2(config: SweepConfig, states: dict | None = None) -> dict[str, Dataset]:
    """Total cross sections versus gamma at the fixed wave numbers ``config.ks``."""
    states = solve_states(config.gammas, config, states)
    ks = np.array(config.ks)

    def one(gamma):
        table = _numerical_table(states[gamma], ks.max())
        return total_cross_sections(gamma, table, ks), tf_total_cross_section(gamma, ks)

    results = _map(one, config.gammas)
    cols = {"k": [], "gamma": [], "sigma_num": [], "sigma_tf": []}
    for i, k in enumerate(ks):
        for gamma, (num, tf) in zip(config.gammas, results):
            cols["k"].append(k)
            cols["gamma"].append(gamma)
            cols["sigma_num"].append(num[i])
            cols["sigma_tf"].append(tf[i])
    ds = Dataset(
        "figure2",
        cols,
        {"k": "1/a_w", "gamma": "1", "sigma_num": "a_w^2", "sigma_tf": "a_w^2"},
        _provenance("figure2", config),
    )
    return {"figure2": ds}


def sigma_curves(state: GroundState, ks) -> tuple[CrossSectionCurve, CrossSectionCurve]:
    """Numerical and TF ``sigma(k)`` curves for one ground state."""
    ks = np.asarray(ks, dtype=float)
    gamma = state.gamma
    table = _numerical_table(state, ks.max())
    num = CrossSectionCurve(
        ks, total_cross_sections(gamma, table, ks), gamma, "numerical", "sigma_k",
        {"cutoff": _numerical_cutoff(state), "cutoff_rule": CUTOFF_NUMERICAL, "n_q": table.q_nodes.size},
    )
    tf = CrossSectionCurve(
        ks, tf_total_cross_section(gamma, ks), gamma, "tf", "sigma_k",
        {"cutoff": tf_radius(gamma), "cutoff_rule": CUTOFF_TF},
    )
    return num, tf


def scale_curve(curve: CrossSectionCurve) -> CrossSectionCurve:
    """Map a ``sigma_k`` curve to universal coordinates with its own cutoff."""
    k_tilde, sigma_tilde = scaled_point(
        curve.values, curve.gamma, curve.metadata["cutoff"], curve.abscissa
    )
    return CrossSectionCurve(k_tilde, sigma_tilde, curve.gamma, curve.method, "scaled", curve.metadata)


def run_figure3(config: SweepConfig, states: dict | None = None) -> dict[str, Dataset]:
    """sigma(k) per gamma (a), the same in universal coordinates (b), and the
    universal TF curve itself."""
    states = solve_states(config.gammas, config, states)
    ks = config.k_grid
    curves = _map(lambda g: sigma_curves(states[g], ks), config.gammas)

    part_a = {"gamma": [], "k": [], "sigma_num": [], "sigma_tf": []}
    part_b = {
        "gamma": [], "k": [], "cutoff_num": [], "k_tilde_num": [], "sigma_tilde_num": [],
        "cutoff_tf": [], "k_tilde_tf": [], "sigma_tilde_tf": [],
    }
    for gamma, (num, tf) in zip(config.gammas, curves):
        n = ks.size
        part_a["gamma"].append(np.full(n, gamma))
        part_a["k"].append(ks)
        part_a["sigma_num"].append(num.values)
        part_a["sigma_tf"].append(tf.values)
        snum, stf = scale_curve(num), scale_curve(tf)
        part_b["gamma"].append(np.full(n, gamma))
        part_b["k"].append(ks)
        part_b["cutoff_num"].append(np.full(n, num.metadata["cutoff"]))
        part_b["k_tilde_num"].append(snum.abscissa)
        part_b["sigma_tilde_num"].append(snum.values)
        part_b["cutoff_tf"].append(np.full(n, tf.metadata["cutoff"]))
        part_b["k_tilde_tf"].append(stf.abscissa)
        part_b["sigma_tilde_tf"].append(stf.values)

    radii = [tf_radius(g) for g in config.gammas] + [
        _numerical_cutoff(states[g]) for g in config.gammas
    ]
    k_tilde = np.logspace(
        np.log10(config.k_min * min(radii)), np.log10(config.k_max * max(radii)), config.n_universal
    )
    fig_a = Dataset(
        "figure3a",
        {k: np.concatenate(v) for k, v in part_a.items()},
        {"gamma": "1", "k": "1/a_w", "sigma_num": "a_w^2", "sigma_tf": "a_w^2"},
        _provenance("figure3a", config),
    )
    fig_b = Dataset(
        "figure3b",
        {k: np.concatenate(v) for k, v in part_b.items()},
        {
            "gamma": "1", "k": "1/a_w", "cutoff_num": "a_w", "k_tilde_num": "1",
            "sigma_tilde_num": "1", "cutoff_tf": "a_w", "k_tilde_tf": "1", "sigma_tilde_tf": "1",
        },
        _provenance(
            "figure3b", config, cutoff_numerical=CUTOFF_NUMERICAL, cutoff_tf=CUTOFF_TF,
            sigma_tilde="sigma / gamma^2", k_tilde="k * cutoff",
        ),
    )
    universal = Dataset(
        "figure3b_universal",
        {"k_tilde": k_tilde, "sigma_tilde": universal_tf_cross_section(k_tilde)},
        {"k_tilde": "1", "sigma_tilde": "1"},
        _provenance("figure3b_universal", config),
    )
    return {"figure3a": fig_a, "figure3b": fig_b, "figure3b_universal": universal}


def dsdo_curves(state: GroundState, q_max: float, n_q: int) -> tuple[CrossSectionCurve, CrossSectionCurve]:
    gamma = state.gamma
    num_table = form_factor_table(state.profile, q_max, n_q)
    tf_table = tf_form_factor_table(gamma, q_max, n_q)
    meta_num = {"cutoff": _numerical_cutoff(state), "cutoff_rule": CUTOFF_NUMERICAL}
    meta_tf = {"cutoff": tf_radius(gamma), "cutoff_rule": CUTOFF_TF}
    return (
        CrossSectionCurve(num_table.q_nodes, 4 * gamma**2 * num_table.s_values**2,
                          gamma, "numerical", "dsdo_q", meta_num),
        CrossSectionCurve(tf_table.q_nodes, 4 * gamma**2 * tf_table.s_values**2,
                          gamma, "tf", "dsdo_q", meta_tf),
    )


def run_figure4(config: SweepConfig, states: dict | None = None) -> dict[str, Dataset]:
    """dsigma/dOmega versus momentum transfer q; no k enters in first Born."""
    states = solve_states(config.figure4_gammas, config, states)
    curves = _map(lambda g: dsdo_curves(states[g], config.q_max, config.n_q), config.figure4_gammas)
    cols = {"gamma": [], "q": [], "dsdo_num": [], "dsdo_tf": []}
    for gamma, (num, tf) in zip(config.figure4_gammas, curves):
        cols["gamma"].append(np.full(num.abscissa.size, gamma))
        cols["q"].append(num.abscissa)
        cols["dsdo_num"].append(num.values)
        cols["dsdo_tf"].append(tf.values)
    ds = Dataset(
        "figure4",
        {k: np.concatenate(v) for k, v in cols.items()},
        {"gamma": "1", "q": "1/a_w", "dsdo_num": "a_w^2/sr", "dsdo_tf": "a_w^2/sr"},
        _provenance("figure4", config),
    )
    return {"figure4": ds}


FIGURES = {
    "figure1": run_figure1,
    "figure2": run_figure2,
    "figure3": run_figure3,
    "figure4": run_figure4,
}


def run_all(config: SweepConfig, states: dict | None = None) -> dict[str, Dataset]:
    states = solve_states(config.gammas + config.figure4_gammas, config, states)
    out = {}
    for run in FIGURES.values():
        out.update(run(config, states))
    return out


# -- diagnostics --------------------------------------------------------------


def _windowed(curve: CrossSectionCurve, window, min_points: int = 8):
    lo, hi = window
    part = curve.window(lo, hi)
    if part.abscissa.size < min_points:
        raise InsufficientDataError(
            f"window [{lo:g}, {hi:g}] holds {part.abscissa.size} points, need {min_points}"
        )
    if np.any(part.values <= 0) or np.any(part.abscissa <= 0):
        raise InvalidInputError("log fits need strictly positive samples")
    return part.abscissa, part.values


def fit_power_law(curve: CrossSectionCurve, window) -> tuple[float, float, float]:
    """Least-squares ``y = A x^p`` in log-log space; returns ``(p, A, rms)``.

    ``rms`` is the root-mean-square residual of ``ln y``.
    """
    x, y = _windowed(curve, window)
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    rms = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return float(slope), float(np.exp(intercept)), rms


def fit_exponential(curve: CrossSectionCurve, window) -> tuple[float, float, float]:
    """Least-squares ``y = A exp(-b x)`` in log-linear space; returns ``(b, A, rms)``."""
    x, y = _windowed(curve, window)
    ly = np.log(y)
    slope, intercept = np.polyfit(x, ly, 1)
    rms = float(np.sqrt(np.mean((ly - (slope * x + intercept)) ** 2)))
    return float(-slope), float(np.exp(intercept)), rms


def _local_extrema(y: np.ndarray, kind: str) -> np.ndarray:
    mid = y[1:-1]
    if kind == "max":
        mask = (mid > y[:-2]) & (mid >= y[2:])
    else:
        mask = (mid < y[:-2]) & (mid <= y[2:])
    return np.nonzero(mask)[0] + 1


def envelope(curve: CrossSectionCurve) -> CrossSectionCurve:
    """Curve through the local maxima (the oscillation envelope)."""
    idx = _local_extrema(curve.values, "max")
    return CrossSectionCurve(
        curve.abscissa[idx], curve.values[idx], curve.gamma, curve.method, curve.kind,
        {**curve.metadata, "envelope": True},
    )


def detect_oscillation_period(curve: CrossSectionCurve, window) -> float:
    """Mean spacing of successive local minima inside ``window``.

    Each minimum is refined by a parabola through its three samples.
    """
    lo, hi = window
    x, y = curve.abscissa, curve.values
    idx = _local_extrema(y, "min")
    idx = idx[(x[idx] >= lo) & (x[idx] <= hi)]
    if idx.size < 4:
        raise InsufficientDataError(
            f"found {idx.size} minima in [{lo:g}, {hi:g}], need at least 4"
        )
    y0, y1, y2 = y[idx - 1], y[idx], y[idx + 1]
    h_left = x[idx] - x[idx - 1]
    h_right = x[idx + 1] - x[idx]
    # vertex of the parabola through three (possibly unequally spaced) points
    num = h_left**2 * (y2 - y1) - h_right**2 * (y0 - y1)
    den = h_left * (y2 - y1) + h_right * (y0 - y1)
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(den != 0, -0.5 * num / den, 0.0)
    positions = x[idx] + shift
    return float((positions[-1] - positions[0]) / (positions.size - 1))


# -- serialization -----------------------------------------------------------


def _encode(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def _format_csv(dataset: Dataset) -> str:
    buf = io.StringIO()
    buf.write(f"# name={_encode(dataset.name)}\n")
    for key in sorted(dataset.provenance):
        buf.write(f"# {key}={_encode(dataset.provenance[key])}\n")
    buf.write(f"# units={_encode(dataset.units)}\n")
    names = list(dataset.columns)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*(dataset.columns[n] for n in names)):
        writer.writerow([format(float(v), ".17g") for v in row])
    return buf.getvalue()


def _format_json(dataset: Dataset) -> str:
    payload = {
        "provenance": {**dataset.provenance, "name": dataset.name, "units": dataset.units},
        "columns": {k: [float(v) for v in vals] for k, vals in dataset.columns.items()},
    }
    return json.dumps(payload, indent=1) + "\n"


def emit_dataset(dataset: Dataset, format: str, path) -> Path:
    """Write ``dataset`` as CSV or JSON; returns the path written."""
    if format == "csv":
        text = _format_csv(dataset)
    elif format == "json":
        text = _format_json(dataset)
    else:
        raise InvalidConfigError(f"format must be csv or json, got {format!r}")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise DatasetFileError(f"cannot write {path}: {exc}", path=path) from exc
    return path


def read_dataset(path) -> Dataset:
    """Parse a file written by :func:`emit_dataset` (format from the suffix)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DatasetFileError(f"cannot read {path}: {exc}", path=path) from exc
    if path.suffix == ".json":
        payload = json.loads(text)
        prov = dict(payload["provenance"])
        name, units = prov.pop("name"), prov.pop("units")
        return Dataset(name, {k: np.array(v, dtype=float) for k, v in payload["columns"].items()}, units, prov)
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = json.loads(value)
        else:
            body.append(line)
    name, units = meta.pop("name"), meta.pop("units")
    rows = list(csv.reader(body))
    header, data = rows[0], rows[1:]
    columns = {h: np.array([float(r[i]) for r in data], dtype=float) for i, h in enumerate(header)}
    return Dataset(name, columns, units, meta)


def emit_all(datasets: Mapping[str, Dataset], config: SweepConfig) -> list[Path]:
    out_dir = Path(config.output_dir)
    return [
        emit_dataset(ds, config.format, out_dir / f"{name}.{config.format}")
        for name, ds in datasets.items()
    ]
