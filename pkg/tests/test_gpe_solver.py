import numpy as np
import pytest

from becscat.errors import InvalidConfigError, NonConvergenceError, UnsupportedRegimeError
from becscat.gpe_solver import (
    SolverConfig,
    apply_imaginary_time_step,
    build_grid,
    chemical_potential,
    default_grid,
    default_r_max,
    energy_breakdown,
    gpe_residual,
    initial_profile,
    residual_profile,
    solve_ground_state,
)
from becscat.grid import RadialProfile, normalize
from becscat.thomas_fermi import tf_chemical_potential, tf_profile, tf_radius

PERTURBATIVE_SLOPE = np.sqrt(2 / np.pi)  # int u0^4/r^2 dr for the Gaussian


def l2_distance(a, b):
    return np.sqrt(a.grid.integrate((a.u - b.u) ** 2))


def test_perturbative_slope_oracle():
    from scipy.integrate import quad
    # u0 = 2 pi^-1/4 r exp(-r^2/2)
    val, _ = quad(lambda r: 16 / np.pi * r**2 * np.exp(-2 * r * r), 0, np.inf)
    assert val == pytest.approx(PERTURBATIVE_SLOPE, rel=1e-12)


# -- configuration ------------------------------------------------------------


def test_config_defaults():
    cfg = SolverConfig()
    assert (cfg.dtau_initial, cfg.dtau_min, cfg.tol_mu, cfg.tol_residual) == (1e-2, 1e-4, 1e-10, 1e-8)
    assert (cfg.max_steps, cfg.check_interval) == (200_000, 50)


@pytest.mark.parametrize(
    "kwargs",
    [{"tol_mu": 0.0}, {"tol_residual": -1.0}, {"dtau_min": 0.1}, {"max_steps": 0}, {"dtau_initial": float("nan")}],
)
def test_config_rejects(kwargs):
    with pytest.raises(InvalidConfigError):
        SolverConfig(**kwargs)


def test_default_r_max():
    assert default_r_max(0.0) == 8.0
    assert default_r_max(1 / 15) == 8.0
    assert default_r_max(1000.0) == pytest.approx(2 * 15000**0.2, rel=1e-15)
    assert default_r_max(1000.0) == pytest.approx(13.68, abs=0.01)


# -- seeds and single steps ---------------------------------------------------


def test_initial_profile_gaussian(gaussian_grid):
    prof = initial_profile(0.0, gaussian_grid)
    r = gaussian_grid.r
    exact = 2 * np.pi**-0.25 * r * np.exp(-r * r / 2)
    assert l2_distance(prof, RadialProfile(gaussian_grid, exact)) < 1e-10
    assert prof.is_normalized()


def test_initial_profile_tf():
    grid = default_grid(1000.0)
    prof = initial_profile(1000.0, grid)
    density = prof.density()
    assert np.argmax(density) < 5
    support = grid.r[prof.u > 1e-6 * prof.u.max()]
    assert support.max() == pytest.approx(tf_radius(1000.0), abs=5 * grid.dr)
    assert prof.origin_zero and prof.edge_zero and prof.is_normalized()


@pytest.mark.parametrize("gamma", [0.0, 0.5, 3.0, 100.0])
def test_initial_profile_boundary(gamma):
    prof = initial_profile(gamma, build_grid(256, default_r_max(gamma)))
    assert prof.u[0] == 0.0 and prof.u[-1] == 0.0


def test_step_keeps_gaussian_fixed(gaussian_profile):
    out = apply_imaginary_time_step(gaussian_profile, 1e-3, 0.0)
    assert l2_distance(out, gaussian_profile) <= 1e-8


@pytest.mark.parametrize("gamma", [0.0, 10.0, 1000.0])
def test_step_preserves_norm(gamma):
    grid = build_grid(512, default_r_max(gamma))
    rng = np.random.default_rng(1)
    raw = RadialProfile(grid, np.abs(rng.normal(size=512)) * np.sin(np.pi * grid.r / grid.r_max))
    out = apply_imaginary_time_step(normalize(raw), 1e-2, gamma)
    assert abs(out.norm() - 1.0) <= 1e-10


def test_step_lowers_energy_of_excited_state(gaussian_grid):
    # an exact eigenstate is a fixed point, so seed a small ground-state part
    r = gaussian_grid.r
    shape = r * (1.5 - r * r) * np.exp(-r * r / 2)
    pure = normalize(RadialProfile(gaussian_grid, shape))
    assert chemical_potential(pure, 0.0) == pytest.approx(3.5, abs=1e-8)
    excited = normalize(RadialProfile(gaussian_grid, shape + 1e-3 * r * np.exp(-r * r / 2)))
    out = apply_imaginary_time_step(excited, 1e-2, 0.0)
    assert energy_breakdown(out, 0.0).total < energy_breakdown(excited, 0.0).total


def test_step_rejects_nonpositive_dtau(gaussian_profile):
    with pytest.raises(InvalidConfigError):
        apply_imaginary_time_step(gaussian_profile, 0.0, 1.0)


def test_energy_decreases_along_iteration():
    gamma = 10.0
    grid = build_grid(1024, default_r_max(gamma))
    prof = initial_profile(gamma, grid)
    energies = []
    for _ in range(300):
        energies.append(energy_breakdown(prof, gamma).total)
        prof = apply_imaginary_time_step(prof, 1e-2, gamma)
        assert abs(prof.norm() - 1.0) <= 1e-10
    assert np.all(np.diff(energies) <= 1e-12)


# -- diagnostics ----------------------------------------------------------------


def test_chemical_potential_gaussian(gaussian_profile):
    assert chemical_potential(gaussian_profile, 0.0) == pytest.approx(1.5, abs=1e-6)


def test_energy_breakdown_gaussian(gaussian_profile):
    e = energy_breakdown(gaussian_profile, 0.0)
    assert e.kinetic == pytest.approx(0.75, abs=1e-8)
    assert e.trap == pytest.approx(0.75, abs=1e-8)
    assert e.interaction == 0.0


def test_gaussian_residual(gaussian_profile):
    assert gpe_residual(gaussian_profile, 1.5, 0.0) <= 1e-6


def test_tf_residual_peaks_at_edge():
    gamma = 1000.0
    grid = default_grid(gamma)
    prof = normalize(tf_profile(gamma, grid))
    mu = tf_chemical_potential(gamma)
    assert gpe_residual(prof, mu, gamma) > 1e-4
    where = grid.r[np.argmax(np.abs(residual_profile(prof, mu, gamma)))]
    assert where == pytest.approx(tf_radius(gamma), abs=0.05)


# -- converged states -------------------------------------------------------------


def test_noninteracting_ground_state(gaussian_grid):
    gs = solve_ground_state(0.0, gaussian_grid)
    r = gaussian_grid.r
    exact = RadialProfile(gaussian_grid, 2 * np.pi**-0.25 * r * np.exp(-r * r / 2))
    assert gs.converged
    assert gs.mu == pytest.approx(1.5, abs=1e-6)
    assert l2_distance(gs.profile, exact) <= 1e-6


def test_weak_interaction_limit():
    gs = solve_ground_state(1e-4, build_grid(4096, 8.0))
    r = gs.profile.r
    exact = RadialProfile(gs.grid, 2 * np.pi**-0.25 * r * np.exp(-r * r / 2))
    assert l2_distance(gs.profile, exact) <= 1e-4


def test_perturbative_mu(sweep_states):
    assert sweep_states[0.1].mu == pytest.approx(1.5 + 0.1 * PERTURBATIVE_SLOPE, rel=0.01)


def test_converged_contract(sweep_states):
    for gamma, gs in sweep_states.items():
        assert gs.converged
        assert gs.residual <= SolverConfig().tol_residual
        assert gpe_residual(gs.profile, gs.mu, gamma) <= 1.05e-8
        assert gs.mu >= 1.5
        assert abs(gs.profile.norm() - 1.0) <= 1e-10
        assert np.all(gs.profile.u >= 0.0)


def test_mu_monotone_and_above_tf(sweep_states):
    gammas = sorted(sweep_states)
    mus = [sweep_states[g].mu for g in gammas]
    assert np.all(np.diff(mus) > 0)
    for g in gammas:
        assert sweep_states[g].mu > tf_chemical_potential(g)


def test_mu_close_to_tf_at_large_gamma(sweep_states):
    assert sweep_states[1000.0].mu == pytest.approx(23.41, rel=0.03)


def test_energy_identities(sweep_states):
    for gamma, gs in sweep_states.items():
        e = gs.energy
        assert min(e.kinetic, e.trap, e.interaction) >= 0
        assert abs(e.virial) <= 1e-4 * gs.mu
        assert e.chemical_potential == pytest.approx(gs.mu, rel=1e-8)
        assert chemical_potential(gs.profile, gamma) == pytest.approx(
            e.kinetic + e.trap + 2 * e.interaction, rel=1e-8
        )


def test_kinetic_negligible_at_large_gamma(sweep_states):
    gs = sweep_states[1000.0]
    assert gs.energy.kinetic / gs.mu < 0.05


def test_interior_approaches_tf(sweep_states):
    gaps = []
    for gamma in (10.0, 100.0, 1000.0):
        gs = sweep_states[gamma]
        tf = tf_profile(gamma, gs.grid)
        inside = gs.profile.r <= 0.8 * tf_radius(gamma)
        gaps.append(np.max(np.abs(gs.profile.u - tf.u)[inside]))
    assert gaps[0] > gaps[1] > gaps[2]


def test_deterministic():
    grid = build_grid(512, default_r_max(10.0))
    a = solve_ground_state(10.0, grid)
    b = solve_ground_state(10.0, grid)
    assert np.array_equal(a.profile.u, b.profile.u)
    assert (a.mu, a.residual, a.steps_taken) == (b.mu, b.residual, b.steps_taken)


def test_non_convergence_carries_best_iterate():
    grid = build_grid(256, default_r_max(10.0))
    with pytest.raises(NonConvergenceError) as info:
        solve_ground_state(10.0, grid, SolverConfig(max_steps=100))
    err = info.value
    assert err.gamma == 10.0
    assert not err.state.converged
    assert err.residual == err.state.residual > 1e-8
    assert err.state.profile.is_normalized()


def test_attractive_rejected():
    with pytest.raises(UnsupportedRegimeError):
        solve_ground_state(-1.0, build_grid(64, 8.0))
