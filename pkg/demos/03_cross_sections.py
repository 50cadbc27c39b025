# %% [markdown]
# Elastic scattering off the condensate
#
# In first Born approximation the amplitude is F = -2 Gamma s(q), with s the
# Fourier transform of the density.  The Gaussian state of the free trap has
# closed forms for everything, so we start there.

# %%
import numpy as np

from becscat import (
    build_grid,
    form_factor,
    form_factor_table,
    solve_ground_state,
    total_cross_section,
)

# %%
free = solve_ground_state(0.0, build_grid(4096, 8.0))
q = np.array([0.0, 1.0, 2.0, 4.0])
print("s(q) numerical:", form_factor(free.profile, q))
print("exp(-q^2/4):   ", np.exp(-q * q / 4))

# %%
# Total cross section sigma(k) = (8 pi Gamma^2 / k^2) int_0^2k s^2 q dq.
table = form_factor_table(free.profile, 10.0, 2001)
for k in (1e-3, 0.5, 1.0, 2.0):
    exact = 8 * np.pi / k**2 * (1 - np.exp(-2 * k * k))
    print(f"k = {k:<6g} sigma = {total_cross_section(1.0, table, k):.10f}  closed form {exact:.10f}")

# %%
# As k -> 0 every angle sees the forward amplitude -2 Gamma, so
# sigma -> 16 pi Gamma^2 whatever the density.
print(f"16 pi = {16 * np.pi:.10f}")
