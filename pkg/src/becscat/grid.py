"""Uniform radial mesh, sampled radial profiles and grid quadrature.

All lengths are in trap units ``a_w = sqrt(hbar / (m w))``.  A profile stores
the reduced radial function ``u(r) = sqrt(4 pi) r psi0(r)`` so that the
normalization reads ``int u^2 dr = 1`` and the density is
``|psi0|^2 = u^2 / (4 pi r^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateProfileError, InvalidConfigError

MIN_NODES = 16
NORM_TOL = 1e-10


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for ``n`` equally spaced samples.

    An odd number of intervals is closed with Simpson's 3/8 rule on the
    last three panels, so the rule stays fourth order for every ``n >= 4``.
    ``n == 2`` and ``n == 3`` fall back to trapezoid and plain Simpson.
    """
    if n < 2:
        raise InvalidConfigError(f"need at least two samples, got {n}")
    w = np.zeros(n)
    intervals = n - 1
    if intervals == 1:
        w[:] = 0.5 * h
        return w
    if intervals % 2 == 0:
        w[0:-1:2] += 1.0
        w[1::2] += 4.0
        w[2::2] += 1.0
        return w * (h / 3.0)
    if intervals == 3:
        return np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    m = n - 3  # nodes covered by 1/3 rule, even number of intervals
    w[: m - 1 : 2] += 1.0
    w[1:m:2] += 4.0
    w[2:m:2] += 1.0
    w *= h / 3.0
    w[m - 1 :] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    return w


@dataclass(frozen=True)
class RadialGrid:
    """Uniform mesh ``r_j = j * dr`` on ``[0, r_max]`` with ``n`` nodes."""

    n: int
    r_max: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_NODES:
            raise InvalidConfigError(f"grid needs n >= {MIN_NODES} nodes, got {self.n}")
        if not np.isfinite(self.r_max) or self.r_max <= 0:
            raise InvalidConfigError(f"r_max must be positive, got {self.r_max}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r_max", float(self.r_max))

    @property
    def dr(self) -> float:
        return self.r_max / (self.n - 1)

    @cached_property
    def r(self) -> np.ndarray:
        r = np.arange(self.n) * self.dr
        r[-1] = self.r_max
        r.flags.writeable = False
        return r

    @cached_property
    def weights(self) -> np.ndarray:
        w = simpson_weights(self.n, self.dr)
        w.flags.writeable = False
        return w

    def integrate(self, values: np.ndarray) -> float:
        """Composite Simpson integral of nodal ``values`` over ``[0, r_max]``."""
        return float(np.dot(self.weights, values))


def build_grid(n: int, r_max: float) -> RadialGrid:
    return RadialGrid(n, r_max)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Reduced radial function ``u`` sampled on ``grid``.

    Values are stored read-only; operations return new profiles.
    """

    grid: RadialGrid
    u: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.shape != (self.grid.n,):
            raise InvalidConfigError(
                f"profile has shape {u.shape}, grid expects ({self.grid.n},)"
            )
        u.flags.writeable = False
        object.__setattr__(self, "u", u)

    @property
    def r(self) -> np.ndarray:
        return self.grid.r

    @property
    def origin_zero(self) -> bool:
        return self.u[0] == 0.0

    @property
    def edge_zero(self) -> bool:
        return self.u[-1] == 0.0

    def norm(self) -> float:
        """``int u^2 dr`` by composite Simpson."""
        return self.grid.integrate(self.u * self.u)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def density(self) -> np.ndarray:
        """``|psi0(r)|^2 = u^2 / (4 pi r^2)``; the origin uses ``u'(0)^2``."""
        rho = np.empty_like(self.u)
        rho[1:] = self.u[1:] ** 2 / self.r[1:] ** 2
        rho[0] = origin_slope(self) ** 2
        return rho / (4.0 * np.pi)


def origin_slope(profile: RadialProfile) -> float:
    """``du/dr`` at ``r = 0`` by one-sided difference.

    ``u`` is odd in ``r``, so ``u_1 / dr`` is already second-order accurate.
    """
    return (profile.u[1] - profile.u[0]) / profile.grid.dr


def normalize(profile: RadialProfile) -> RadialProfile:
    """Rescale so that ``int u^2 dr = 1`` and pin the Dirichlet endpoints."""
    u = np.array(profile.u)
    u[0] = 0.0
    u[-1] = 0.0
    norm = profile.grid.integrate(u * u)
    if not np.isfinite(norm) or norm <= 0.0:
        raise DegenerateProfileError("profile has zero norm")
    return RadialProfile(profile.grid, u / np.sqrt(norm))


def derivative(profile: RadialProfile) -> np.ndarray:
    """Centered fourth-order ``du/dr`` at every node.

    Ghost points come from odd reflection about ``r = 0`` and ``r = r_max``,
    which is exact for the Dirichlet profiles used here.
    """
    u = profile.u
    ext = np.concatenate([-u[2:0:-1], u, -u[-2:-4:-1]])
    return (ext[:-4] - 8.0 * ext[1:-3] + 8.0 * ext[3:-1] - ext[4:]) / (
        12.0 * profile.grid.dr
    )
