"""First-Born elastic scattering of a same-species atom off the condensate.

In trap units the elastic amplitude is ``F(q) = -2 Gamma s(q)``, where

    s(q) = int_0^r_max j0(q r) u(r)^2 dr

is the normalized Fourier transform of the spherical density and
``q = 2 k sin(theta/2)`` the momentum transfer.  The factor two comes from
the projectile interacting with each condensed atom as a distinguishable
partner.  Hence ``dsigma/dOmega = 4 Gamma^2 s(q)^2`` depends on ``q`` only, and

    sigma(k) = (8 pi Gamma^2 / k^2) int_0^2k s(q)^2 q dq.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidConfigError, InvalidInputError, OutOfRangeError
from .grid import RadialProfile, simpson_weights
from .thomas_fermi import tf_form_factor, tf_radius

SOURCES = ("numerical-profile", "tf-analytic", "gaussian-analytic")
SMALL_ARGUMENT = 1e-3
DEFAULT_NQ = 2001
_CHUNK = 256


def _j0(x: np.ndarray) -> np.ndarray:
    small = np.abs(x) < SMALL_ARGUMENT
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def _check_q(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if np.any(np.isnan(q)) or np.any(q < 0):
        raise InvalidInputError("momentum transfer q must be >= 0")
    return q


def form_factor(profile: RadialProfile, q):
    """``s(q) = int j0(q r) u^2 dr`` by composite Simpson on the profile grid.

    Accepts a scalar or an array of ``q``.  ``s(0)`` is the Simpson norm of
    the profile, i.e. exactly one for a normalized profile.
    """
    q_arr = _check_q(q)
    flat = q_arr.reshape(-1)
    weighted = profile.grid.weights * profile.u * profile.u
    r = profile.r
    out = np.empty(flat.shape)
    for start in range(0, flat.size, _CHUNK):
        qs = flat[start : start + _CHUNK]
        # row-wise sums give the same bits whatever the batch size, unlike BLAS
        out[start : start + _CHUNK] = (_j0(np.outer(qs, r)) * weighted).sum(axis=1)
    out[flat == 0] = weighted.sum()
    if q_arr.ndim == 0:
        return float(out[0])
    return out.reshape(q_arr.shape)


@dataclass(frozen=True, eq=False)
class FormFactorTable:
    """``s(q)`` sampled on a uniform, ascending grid starting at ``q = 0``."""

    q_nodes: np.ndarray = field(repr=False)
    s_values: np.ndarray = field(repr=False)
    source: str
    radius: float = float("nan")

    def __post_init__(self):
        q = np.array(self.q_nodes, dtype=float)
        s = np.array(self.s_values, dtype=float)
        if q.ndim != 1 or q.shape != s.shape or q.size < 2:
            raise InvalidConfigError("q_nodes and s_values must be matching 1-D arrays")
        if q[0] != 0.0 or np.any(np.diff(q) <= 0):
            raise InvalidConfigError("q_nodes must start at 0 and ascend strictly")
        if self.source not in SOURCES:
            raise InvalidConfigError(f"unknown form-factor source {self.source!r}")
        q.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "q_nodes", q)
        object.__setattr__(self, "s_values", s)

    @property
    def q_max(self) -> float:
        return float(self.q_nodes[-1])

    @property
    def dq(self) -> float:
        return float(self.q_nodes[1] - self.q_nodes[0])

    def __call__(self, q):
        """Linear interpolation; raises outside ``[0, q_max]``."""
        q_arr = _check_q(q)
        if np.any(q_arr > self.q_max * (1.0 + 1e-12)):
            raise OutOfRangeError(
                f"q={np.max(q_arr):g} beyond table range q_max={self.q_max:g}"
            )
        out = np.interp(q_arr, self.q_nodes, self.s_values)
        return float(out) if q_arr.ndim == 0 else out


def _q_nodes(q_max: float, n_q: int) -> np.ndarray:
    if not q_max > 0 or int(n_q) != n_q or n_q < 2:
        raise InvalidInputError(f"need q_max > 0 and n_q >= 2, got {q_max}, {n_q}")
    q = np.linspace(0.0, float(q_max), int(n_q))
    q[-1] = float(q_max)
    return q


def form_factor_table(profile: RadialProfile, q_max: float, n_q: int = DEFAULT_NQ) -> FormFactorTable:
    q = _q_nodes(q_max, n_q)
    return FormFactorTable(q, form_factor(profile, q), "numerical-profile")


def tf_form_factor_table(gamma: float, q_max: float, n_q: int = DEFAULT_NQ) -> FormFactorTable:
    """Closed-form TF form factor on the same kind of grid."""
    q = _q_nodes(q_max, n_q)
    radius = tf_radius(gamma)
    return FormFactorTable(q, tf_form_factor(q * radius), "tf-analytic", radius)


def gaussian_form_factor_table(q_max: float, n_q: int = DEFAULT_NQ) -> FormFactorTable:
    """``exp(-q^2/4)``: the non-interacting ground-state density."""
    q = _q_nodes(q_max, n_q)
    return FormFactorTable(q, np.exp(-0.25 * q * q), "gaussian-analytic")


def default_q_grid(k_max: float, radius: float) -> tuple[float, int]:
    """Table extent and size covering ``[0, 2 k_max]`` for a cloud of ``radius``.

    ``q_max = max(10, 4 k_max, 60/R)``; the node count is at least 2001 and
    large enough for 16 nodes per oscillation period ``pi/R`` of ``s``.
    """
    q_max = max(10.0, 4.0 * float(k_max), 60.0 / float(radius))
    n_q = max(DEFAULT_NQ, int(np.ceil(16.0 * q_max * radius / np.pi)) + 1)
    if n_q % 2 == 0:
        n_q += 1
    return q_max, n_q


def born_amplitude(gamma: float, s):
    """Elastic amplitude ``F = -2 Gamma s`` in units of a_w."""
    return -2.0 * gamma * np.asarray(s) if np.ndim(s) else -2.0 * gamma * float(s)


def differential_cross_section(gamma: float, table: FormFactorTable, q):
    """``dsigma/dOmega = |F(q)|^2 = 4 Gamma^2 s(q)^2`` (units a_w^2 / sr)."""
    s = table(q)
    return born_amplitude(gamma, s) ** 2


def _interp3(x, xs, ys):
    """Quadratic Lagrange interpolation through three nodes."""
    x0, x1, x2 = xs
    y0, y1, y2 = ys
    return (
        y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1))
    )


def momentum_integral(table: FormFactorTable, upper: float) -> float:
    """``int_0^upper s(q)^2 q dq`` on the table nodes.

    Full panels use composite Simpson; the partial panel ending at ``upper``
    is integrated with Simpson on a quadratic interpolant of ``s`` through the
    three nearest nodes.
    """
    q, s = table.q_nodes, table.s_values
    if upper > table.q_max * (1.0 + 1e-12):
        raise OutOfRangeError(
            f"table reaches q_max={table.q_max:g}, integral needs {upper:g}"
        )
    upper = min(upper, table.q_max)
    f = s * s * q
    j = int(np.floor(upper / table.dq + 1e-9))
    j = min(j, q.size - 1)
    total = 0.0
    if j >= 1:
        total = float(np.dot(simpson_weights(j + 1, table.dq), f[: j + 1]))
    tail = upper - q[j]
    if tail > 1e-12 * table.dq:
        lo = min(max(j - 1, 0), q.size - 3)
        xs, ys = q[lo : lo + 3], s[lo : lo + 3]
        mid = q[j] + 0.5 * tail
        s_mid = _interp3(mid, xs, ys)
        s_up = _interp3(upper, xs, ys)
        total += tail / 6.0 * (f[j] + 4.0 * s_mid**2 * mid + s_up**2 * upper)
    return total


def total_cross_section(gamma: float, table: FormFactorTable, k: float) -> float:
    """``sigma(k) = (8 pi Gamma^2 / k^2) int_0^2k s^2 q dq`` in units a_w^2."""
    k = float(k)
    if not k > 0:
        raise InvalidInputError(f"wave number must be positive, got {k}")
    return 8.0 * np.pi * gamma**2 / k**2 * momentum_integral(table, 2.0 * k)


def total_cross_sections(gamma: float, table: FormFactorTable, ks) -> np.ndarray:
    return np.array([total_cross_section(gamma, table, k) for k in np.asarray(ks, dtype=float)])


def scaled_point(sigma, gamma: float, cutoff: float, k):
    """Universal-curve coordinates ``(k R, sigma / Gamma^2)``."""
    if not gamma > 0 or not cutoff > 0:
        raise InvalidInputError("scaling needs gamma > 0 and cutoff > 0")
    return np.multiply(k, cutoff), np.divide(sigma, gamma**2)


@dataclass(frozen=True, eq=False)
class CrossSectionCurve:
    """Sampled cross section with its provenance.

    ``kind`` names the abscissa/value pair: ``"sigma_k"`` (k, sigma),
    ``"dsdo_q"`` (q, dsigma/dOmega) or ``"scaled"`` (kR, sigma/Gamma^2).
    """

    abscissa: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    gamma: float
    method: str
    kind: str = "sigma_k"
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        x = np.array(self.abscissa, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise InvalidConfigError("abscissa and values must be matching 1-D arrays")
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise InvalidConfigError("abscissa must be strictly ascending")
        if np.any(y < 0):
            raise InvalidConfigError("cross sections must be nonnegative")
        if self.method not in ("numerical", "tf", "gaussian"):
            raise InvalidConfigError(f"unknown method {self.method!r}")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "abscissa", x)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def window(self, lo: float, hi: float) -> "CrossSectionCurve":
        mask = (self.abscissa >= lo) & (self.abscissa <= hi)
        return CrossSectionCurve(
            self.abscissa[mask], self.values[mask], self.gamma, self.method, self.kind, self.metadata
        )


def sigma_curve(gamma: float, table: FormFactorTable, ks, method: str, **metadata) -> CrossSectionCurve:
    ks = np.asarray(ks, dtype=float)
    return CrossSectionCurve(
        ks, total_cross_sections(gamma, table, ks), gamma, method, "sigma_k", metadata
    )


def dsdo_curve(gamma: float, table: FormFactorTable, method: str, **metadata) -> CrossSectionCurve:
    """dsigma/dOmega on the table's own q nodes (no interpolation)."""
    return CrossSectionCurve(
        table.q_nodes,
        4.0 * gamma**2 * table.s_values**2,
        gamma,
        method,
        "dsdo_q",
        metadata,
    )


def tf_momentum_integral(t_upper: float, nodes_per_period: int = 64) -> float:
    """``int_0^t_upper s_TF(t)^2 t dt`` by composite Simpson in ``t = q R``.

    The node spacing is set by ``t_upper`` alone, so the result is a function
    of ``t_upper`` only and the TF family collapses exactly.
    """
    t_upper = float(t_upper)
    if t_upper < 0:
        raise InvalidInputError("upper limit must be >= 0")
    if t_upper == 0:
        return 0.0
    intervals = max(200, int(np.ceil(t_upper * nodes_per_period / np.pi)))
    intervals += intervals % 2
    t = np.linspace(0.0, t_upper, intervals + 1)
    s = tf_form_factor(t)
    return float(np.dot(simpson_weights(t.size, t_upper / intervals), s * s * t))


def universal_tf_cross_section(k_tilde):
    """Scaled TF cross section ``sigma/Gamma^2`` as a function of ``k R``."""
    x = np.asarray(k_tilde, dtype=float)
    if np.any(x <= 0):
        raise InvalidInputError("k R must be positive")
    out = np.array([8.0 * np.pi / xi**2 * tf_momentum_integral(2.0 * xi) for xi in x.reshape(-1)])
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def tf_total_cross_section(gamma: float, k):
    """``sigma_TF(k) = Gamma^2 * U(k R)`` with ``U`` the universal curve."""
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr <= 0):
        raise InvalidInputError("wave number must be positive")
    return gamma**2 * universal_tf_cross_section(k_arr * tf_radius(gamma))
