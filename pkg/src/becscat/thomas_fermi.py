"""Closed-form Thomas-Fermi quantities in trap units.

Dropping the kinetic term of the radial Gross-Pitaevskii equation leaves an
inverted-parabola density with a hard edge at ``R = (15 Gamma)^(1/5)``.
This is accurate when ``Gamma`` is large: after rescaling lengths by
``Gamma^(1/4)`` the kinetic term carries a ``1/Gamma`` prefactor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, TruncatedSupportError, UnsupportedRegimeError
from .grid import RadialGrid, RadialProfile

SERIES_SWITCH = 1.0
# s(t) = sum_n (-1)^n 15 t^(2n) / ((2n+1)! (2n+3) (2n+5)); nine terms reach
# double precision for t <= 1
_SERIES = np.array(
    [(-1) ** n * 15.0 / (math.factorial(2 * n + 1) * (2 * n + 3) * (2 * n + 5)) for n in range(9)]
)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not gamma > 0:
        raise UnsupportedRegimeError(
            f"Thomas-Fermi limit needs a repulsive gas (gamma > 0), got {gamma}"
        )
    return gamma


def tf_chemical_potential(gamma: float) -> float:
    """``mu_TF = (15 Gamma)^(2/5) / 2`` in units of hbar*omega."""
    return 0.5 * (15.0 * _check_gamma(gamma)) ** 0.4


def tf_radius(gamma: float) -> float:
    """Condensate radius ``R = (15 Gamma)^(1/5)`` in units of a_w."""
    return (15.0 * _check_gamma(gamma)) ** 0.2


def cutoff_radius_from_mu(mu: float) -> float:
    """Invert ``mu = R^2 / 2`` for a cutoff radius.

    Used with the numerically obtained chemical potential, where the density
    has no sharp edge of its own.
    """
    mu = float(mu)
    if not mu > 0:
        raise InvalidInputError(f"chemical potential must be positive, got {mu}")
    return float(np.sqrt(2.0 * mu))


@dataclass(frozen=True)
class TfState:
    gamma: float
    mu_tf: float
    radius: float


def tf_state(gamma: float) -> TfState:
    radius = tf_radius(gamma)
    return TfState(float(gamma), tf_chemical_potential(gamma), radius)


def tf_profile(gamma: float, grid: RadialGrid) -> RadialProfile:
    """Hard-edged TF profile ``u = r sqrt(mu/Gamma (1 - (r/R)^2))`` for r < R.

    No smoothing and no renormalization: the discrete norm differs from one
    by the quadrature error at the edge kink.
    """
    gamma = _check_gamma(gamma)
    mu = tf_chemical_potential(gamma)
    radius = tf_radius(gamma)
    if grid.r_max < radius:
        raise TruncatedSupportError(
            f"grid r_max={grid.r_max:g} is inside the TF radius {radius:g}"
        )
    r = grid.r
    inside = r < radius
    u = np.zeros_like(r)
    u[inside] = r[inside] * np.sqrt(mu / gamma * (1.0 - (r[inside] / radius) ** 2))
    return RadialProfile(grid, u)


def tf_form_factor(t):
    """Normalized Fourier transform of the TF density at ``t = q R``.

    ``s(t) = 15 [(3 - t^2) sin t - 3 t cos t] / t^5``.  The closed form
    cancels catastrophically for small ``t`` (rounding error grows like
    ``t^-4``), so the Taylor series
    ``1 - t^2/14 + t^4/504 - ...`` is used for ``t <= 1``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
        raise InvalidInputError("tf_form_factor needs t = qR >= 0")
    small = t_arr <= SERIES_SWITCH
    t2 = t_arr * t_arr
    series = np.polynomial.polynomial.polyval(np.where(small, t2, 0.0), _SERIES)
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = 15.0 * ((3.0 - t2) * np.sin(t_arr) - 3.0 * t_arr * np.cos(t_arr)) / t_arr**5
    out = np.where(small, series, closed)
    if np.ndim(t) == 0:
        return float(out)
    return out
