# %% [markdown]
# What the tail of dsigma/dOmega says about the edge
#
# A hard edge gives |s(q)| an algebraic envelope ~ (qR)^-3; a smooth edge
# gives a decay faster than any power.  Both keep oscillating with period
# close to pi/R.

# %%
import numpy as np

from becscat import (
    cutoff_radius_from_mu,
    default_grid,
    detect_oscillation_period,
    dsdo_curves,
    envelope,
    fit_exponential,
    fit_power_law,
    solve_ground_state,
    tf_radius,
)

# %%
gamma = 1000.0
st = solve_ground_state(gamma, default_grid(gamma))
num, tf = dsdo_curves(st, q_max=30.0, n_q=6001)
r_mu, R = cutoff_radius_from_mu(st.mu), tf_radius(gamma)

# %%
p, _, rms = fit_power_law(envelope(tf), (15 / R, 150 / R))
print(f"TF envelope exponent {p:.3f} (|s|^2 ~ t^-6), rms {rms:.1e}")

# %%
# For the numerical cloud the local power-law exponent keeps steepening.
env = envelope(num)
for lo, hi in ((40, 70), (70, 100), (100, 140)):
    p, _, _ = fit_power_law(env, (lo / r_mu, hi / r_mu))
    b, _, _ = fit_exponential(env, (lo / r_mu, hi / r_mu))
    print(f"qR_mu in [{lo:3d},{hi:3d}]: local exponent {p:7.2f}, exp rate {b:5.2f}")

# %%
for name, curve, radius in (("TF", tf, R), ("numerical", num, r_mu)):
    period = detect_oscillation_period(curve, (15 / radius, 60 / radius))
    print(f"{name:>9}: period {period:.5f}, pi/R = {np.pi / radius:.5f}")
