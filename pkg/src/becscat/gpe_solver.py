"""Ground states of the radial Gross-Pitaevskii equation.

In trap units the reduced radial function ``u(r)`` of the s-wave condensate
obeys

    (-1/2 d^2/dr^2 + r^2/2 + Gamma u^2/r^2 - mu) u = 0,   int u^2 dr = 1,

with ``u(0) = u(r_max) = 0``.  The ground state is found by imaginary-time
propagation with a symmetric (Strang) split of the potential and kinetic
propagators; the kinetic factor is diagonal in the discrete sine basis, which
carries the Dirichlet boundary conditions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.fft import dst
from scipy.ndimage import gaussian_filter1d

from .errors import InvalidConfigError, NonConvergenceError, UnsupportedRegimeError
from .grid import RadialGrid, RadialProfile, build_grid, derivative, normalize, origin_slope
from .thomas_fermi import tf_profile

log = logging.getLogger(__name__)

DEFAULT_NODES = 4096

__all__ = [
    "SolverConfig",
    "EnergyBreakdown",
    "GroundState",
    "build_grid",
    "normalize",
    "default_r_max",
    "default_grid",
    "initial_profile",
    "apply_kinetic",
    "apply_imaginary_time_step",
    "chemical_potential",
    "energy_breakdown",
    "gpe_residual",
    "residual_profile",
    "solve_ground_state",
    "relax_at_fixed_step",
]


@dataclass(frozen=True)
class SolverConfig:
    """Step schedule and stopping rules for :func:`solve_ground_state`.

    ``dtau`` starts at ``dtau_initial`` and is halved (down to ``dtau_min``)
    whenever the chemical potential stops moving between checks.
    """

    dtau_initial: float = 1e-2
    dtau_min: float = 1e-4
    tol_mu: float = 1e-10
    tol_residual: float = 1e-8
    max_steps: int = 200_000
    check_interval: int = 50

    def __post_init__(self):
        for name in ("dtau_initial", "dtau_min", "tol_mu", "tol_residual"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidConfigError(f"{name} must be positive, got {value}")
        if self.dtau_min > self.dtau_initial:
            raise InvalidConfigError("dtau_min must not exceed dtau_initial")
        if self.max_steps < 1 or self.check_interval < 1:
            raise InvalidConfigError("max_steps and check_interval must be >= 1")

    def to_dict(self) -> dict:
        return {
            "dtau_initial": self.dtau_initial,
            "dtau_min": self.dtau_min,
            "tol_mu": self.tol_mu,
            "tol_residual": self.tol_residual,
            "max_steps": self.max_steps,
            "check_interval": self.check_interval,
        }


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-particle energies in units of hbar*omega."""

    kinetic: float
    trap: float
    interaction: float

    @property
    def total(self) -> float:
        return self.kinetic + self.trap + self.interaction

    @property
    def chemical_potential(self) -> float:
        return self.kinetic + self.trap + 2.0 * self.interaction

    @property
    def virial(self) -> float:
        """``2 E_kin - 2 E_trap + 3 E_int``; zero for a stationary state."""
        return 2.0 * self.kinetic - 2.0 * self.trap + 3.0 * self.interaction


@dataclass(frozen=True)
class GroundState:
    gamma: float
    profile: RadialProfile = field(repr=False)
    mu: float
    energy: EnergyBreakdown
    residual: float
    steps_taken: int
    converged: bool
    final_dtau: float = float("nan")

    @property
    def grid(self) -> RadialGrid:
        return self.profile.grid


def default_r_max(gamma: float) -> float:
    """Box radius: twice the TF radius, never below 8 trap lengths."""
    return max(8.0, 2.0 * (15.0 * max(float(gamma), 0.0)) ** 0.2)


def default_grid(gamma: float, n: int = DEFAULT_NODES) -> RadialGrid:
    return build_grid(n, default_r_max(gamma))


def initial_profile(gamma: float, grid: RadialGrid) -> RadialProfile:
    """Deterministic seed for the relaxation.

    Harmonic-oscillator ground state for ``gamma < 1``; otherwise the TF
    profile with its edge kink blurred over one grid spacing.
    """
    r = grid.r
    if gamma < 1:
        u = r * np.exp(-0.5 * r * r)
    else:
        u = gaussian_filter1d(tf_profile(gamma, grid).u, sigma=1.0, mode="constant")
    return normalize(RadialProfile(grid, u))


@lru_cache(maxsize=32)
def _kinetic_spectrum(grid: RadialGrid) -> np.ndarray:
    # -1/2 d^2/dr^2 on sin(pi m r / r_max), m = 1 .. n-2
    m = np.arange(1, grid.n - 1)
    spectrum = 0.5 * (np.pi * m / grid.r_max) ** 2
    spectrum.flags.writeable = False
    return spectrum


def _sine(values: np.ndarray) -> np.ndarray:
    # orthonormal DST-I is its own inverse
    return dst(values, type=1, norm="ortho")


def apply_kinetic(u: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """``-1/2 u''`` evaluated spectrally with Dirichlet ends."""
    out = np.zeros(grid.n)
    out[1:-1] = _sine(_kinetic_spectrum(grid) * _sine(u[1:-1]))
    return out


def _potential(u: np.ndarray, grid: RadialGrid, gamma: float) -> np.ndarray:
    r = grid.r
    w = np.empty(grid.n)
    w[1:] = 0.5 * r[1:] ** 2 + gamma * (u[1:] / r[1:]) ** 2
    # u ~ c r near the origin, so u^2/r^2 -> (du/dr)^2 at r = 0
    w[0] = gamma * ((u[1] - u[0]) / grid.dr) ** 2
    return w


class _Stepper:
    """Strang step with the kinetic factor cached for the current dtau."""

    def __init__(self, grid: RadialGrid, gamma: float, dtau: float):
        self.grid = grid
        self.gamma = gamma
        self.set_dtau(dtau)

    def set_dtau(self, dtau: float):
        self.dtau = dtau
        self.kinetic_factor = np.exp(-dtau * _kinetic_spectrum(self.grid))

    def __call__(self, u: np.ndarray) -> np.ndarray:
        # both half steps use the pre-step density: the mid-step iterate is
        # unnormalized and would shift W by O(dtau)
        half = np.exp(-0.5 * self.dtau * _potential(u, self.grid, self.gamma))
        v = half * u
        v[1:-1] = _sine(self.kinetic_factor * _sine(v[1:-1]))
        v *= half
        v[0] = 0.0
        v[-1] = 0.0
        return v / np.sqrt(np.dot(self.grid.weights, v * v))


def apply_imaginary_time_step(
    profile: RadialProfile, dtau: float, gamma: float
) -> RadialProfile:
    """One step ``exp(-W dtau/2) exp(-T dtau) exp(-W dtau/2)`` plus renormalization."""
    if not dtau > 0:
        raise InvalidConfigError(f"dtau must be positive, got {dtau}")
    step = _Stepper(profile.grid, float(gamma), float(dtau))
    return RadialProfile(profile.grid, step(np.asarray(profile.u)))


def _interaction_density(profile: RadialProfile) -> np.ndarray:
    """``u^4 / r^2`` with the finite ``u(0)^2 u'(0)^2`` limit at the origin."""
    u, r = profile.u, profile.r
    out = np.empty_like(u)
    out[1:] = u[1:] ** 4 / r[1:] ** 2
    out[0] = u[0] ** 2 * origin_slope(profile) ** 2
    return out


def energy_breakdown(profile: RadialProfile, gamma: float) -> EnergyBreakdown:
    grid = profile.grid
    du = derivative(profile)
    u, r = profile.u, profile.r
    return EnergyBreakdown(
        kinetic=grid.integrate(0.5 * du * du),
        trap=grid.integrate(0.5 * r * r * u * u),
        interaction=grid.integrate(0.5 * gamma * _interaction_density(profile)),
    )


def chemical_potential(profile: RadialProfile, gamma: float) -> float:
    """``mu = int [u'^2/2 + r^2 u^2/2 + Gamma u^4/r^2] dr`` by Simpson.

    ``u'`` comes from finite differences, independent of the spectral
    propagator.
    """
    return energy_breakdown(profile, gamma).chemical_potential


def residual_profile(profile: RadialProfile, mu: float, gamma: float) -> np.ndarray:
    """Pointwise ``(T + W - mu) u`` with spectral ``T``; zero at both ends."""
    grid = profile.grid
    u = np.asarray(profile.u)
    res = apply_kinetic(u, grid) + (_potential(u, grid, gamma) - mu) * u
    res[0] = res[-1] = 0.0
    return res


def gpe_residual(profile: RadialProfile, mu: float, gamma: float) -> float:
    """L2 norm over interior nodes of :func:`residual_profile`."""
    res = residual_profile(profile, mu, gamma)
    return float(np.sqrt(profile.grid.dr * np.dot(res, res)))


def _rayleigh(u: np.ndarray, grid: RadialGrid, gamma: float) -> tuple[float, float]:
    """Spectral Rayleigh quotient and the residual measured against it."""
    hu = apply_kinetic(u, grid) + _potential(u, grid, gamma) * u
    mu = float(np.dot(u, hu) / np.dot(u, u))
    res = (hu - mu * u)[1:-1]
    return mu, float(np.sqrt(grid.dr * np.dot(res, res)))


def _finish(gamma, grid, u, residual, steps, converged, dtau) -> GroundState:
    # the ground state is nodeless; far-tail roundoff can flip signs at 1e-18
    profile = RadialProfile(grid, np.abs(u))
    energy = energy_breakdown(profile, gamma)
    return GroundState(
        gamma=gamma,
        profile=profile,
        mu=energy.chemical_potential,
        energy=energy,
        residual=residual,
        steps_taken=steps,
        converged=converged,
        final_dtau=dtau,
    )


def solve_ground_state(
    gamma: float,
    grid: RadialGrid | None = None,
    config: SolverConfig | None = None,
) -> GroundState:
    """Relax :func:`initial_profile` in imaginary time until the residual
    drops below ``config.tol_residual``.

    Every ``check_interval`` steps the spectral Rayleigh quotient and the
    residual are evaluated.  ``dtau`` is halved when the chemical potential
    has plateaued (``|d mu| < tol_mu``) and the residual has stopped
    shrinking, so the remaining splitting error is what limits it.

    Raises
    ------
    UnsupportedRegimeError
        For attractive interactions, ``gamma < 0``.
    NonConvergenceError
        When ``max_steps`` is exhausted; ``err.state`` holds the best iterate.
    """
    gamma = float(gamma)
    if gamma < 0 or not np.isfinite(gamma):
        raise UnsupportedRegimeError(f"attractive or invalid gamma={gamma} is not supported")
    grid = grid or default_grid(gamma)
    config = config or SolverConfig()

    u = np.array(initial_profile(gamma, grid).u)
    step = _Stepper(grid, gamma, config.dtau_initial)
    mu, residual = _rayleigh(u, grid, gamma)
    best_u, best_res = u, residual
    if residual <= config.tol_residual:
        return _finish(gamma, grid, u, residual, 0, True, step.dtau)

    for n in range(1, config.max_steps + 1):
        u = step(u)
        if n % config.check_interval:
            continue
        mu_new, res_new = _rayleigh(u, grid, gamma)
        if res_new < best_res:
            best_u, best_res = u, res_new
        if res_new <= config.tol_residual:
            log.debug("gamma=%g converged after %d steps, mu=%.12g", gamma, n, mu_new)
            return _finish(gamma, grid, u, res_new, n, True, step.dtau)
        plateau = abs(mu_new - mu) < config.tol_mu and res_new > 0.99 * residual
        if plateau and step.dtau > config.dtau_min:
            step.set_dtau(max(0.5 * step.dtau, config.dtau_min))
            log.debug("gamma=%g step %d: dtau -> %g (residual %.3g)", gamma, n, step.dtau, res_new)
        mu, residual = mu_new, res_new

    state = _finish(gamma, grid, best_u, best_res, config.max_steps, False, step.dtau)
    raise NonConvergenceError(
        f"gamma={gamma:g}: no convergence in {config.max_steps} steps "
        f"(best residual {best_res:.3g} > {config.tol_residual:g})",
        state=state,
        residual=best_res,
        gamma=gamma,
    )


def relax_at_fixed_step(
    gamma: float,
    grid: RadialGrid,
    dtau: float,
    tol_mu: float = 1e-14,
    check_tau: float = 0.5,
    max_steps: int = 1_000_000,
    start: RadialProfile | None = None,
) -> tuple[RadialProfile, float]:
    """Propagate at constant ``dtau`` until the spectral Rayleigh quotient
    stops changing over an imaginary-time span ``check_tau``; returns the
    fixed point and its chemical potential.

    The fixed point of the Strang map differs from the true ground state by
    ``O(dtau^2)``, which this exposes for convergence-order studies.
    """
    if not dtau > 0:
        raise InvalidConfigError(f"dtau must be positive, got {dtau}")
    u = np.array((start or initial_profile(gamma, grid)).u)
    step = _Stepper(grid, float(gamma), float(dtau))
    check_interval = max(1, int(round(check_tau / dtau)))
    mu, _ = _rayleigh(u, grid, gamma)
    for n in range(1, max_steps + 1):
        u = step(u)
        if n % check_interval == 0:
            mu_new, _ = _rayleigh(u, grid, gamma)
            if abs(mu_new - mu) < tol_mu:
                return RadialProfile(grid, u), mu_new
            mu = mu_new
    raise NonConvergenceError(
        f"gamma={gamma:g}: fixed-step relaxation at dtau={dtau:g} did not settle",
        state=RadialProfile(grid, u),
        gamma=gamma,
    )
