# %% [markdown]
# Ground state of a trapped condensate
#
# The radial Gross-Pitaevskii equation in trap units has a single control
# parameter, Gamma = N a_s / a_w.  We relax a trial profile in imaginary time
# and look at what the converged state tells us.

# %%
import numpy as np

from becscat import PhysicalParams, default_grid, gamma_from_physical, solve_ground_state

# %%
# A rubidium-like cloud: 10^4 atoms in a 100 Hz trap.
rb = PhysicalParams(atom_mass=1.443e-25, trap_frequency=2 * np.pi * 100,
                    scattering_length=5.3e-9, atom_count=1e4)
gamma, a_osc = gamma_from_physical(rb)
print(f"Gamma = {gamma:.2f}, trap length a_w = {a_osc * 1e6:.3f} um")

# %%
state = solve_ground_state(gamma, default_grid(gamma, n=2048))
e = state.energy
print(f"mu = {state.mu:.8f} hbar w after {state.steps_taken} steps (residual {state.residual:.1e})")
print(f"kinetic {e.kinetic:.5f}, trap {e.trap:.5f}, interaction {e.interaction:.5f}")

# %%
# The virial identity 2K - 2T + 3I = 0 holds for any stationary state and
# makes a cheap independent check of convergence.
print(f"virial / mu = {e.virial / state.mu:.2e}")

# %%
# Density profile in physical units: |psi|^2 = u^2 / (4 pi r^2), times N / a_w^3.
r = state.profile.r
density = state.profile.density() * rb.atom_count / a_osc**3
for ri in (0.0, 1.0, 2.0, 3.0, 4.0):
    j = np.searchsorted(r, ri)
    print(f"r = {r[j] * a_osc * 1e6:5.2f} um   n = {density[j] * 1e-18:8.3f} um^-3")
