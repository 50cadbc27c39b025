# %% [markdown]
# When does Thomas-Fermi work?
#
# Dropping the kinetic energy gives mu = (15 Gamma)^(2/5) / 2 and an inverted
# parabola with a sharp edge at R = (15 Gamma)^(1/5).  Compare with the full
# solution across four decades of Gamma.

# %%
import numpy as np

from becscat import default_grid, solve_ground_state, tf_chemical_potential, tf_profile, tf_radius

# %%
print(f"{'Gamma':>8} {'mu':>10} {'mu_TF':>10} {'gap':>8} {'K/mu':>8}")
states = {}
for gamma in (0.1, 1.0, 10.0, 100.0, 1000.0):
    st = solve_ground_state(gamma, default_grid(gamma, n=2048))
    states[gamma] = st
    mu_tf = tf_chemical_potential(gamma)
    print(f"{gamma:>8g} {st.mu:>10.5f} {mu_tf:>10.5f} {abs(st.mu - mu_tf) / st.mu:>8.2%} "
          f"{st.energy.kinetic / st.mu:>8.4f}")

# %%
# The gap shrinks steadily; at Gamma = 1000 the kinetic share of mu is a few
# tenths of a percent.  Where does the remaining difference live?  Near the
# edge, where the true profile rolls off smoothly instead of snapping to zero.
st = states[1000.0]
tf = tf_profile(1000.0, st.grid)
diff = np.abs(st.profile.u - tf.u)
R = tf_radius(1000.0)
print(f"largest |u - u_TF| = {diff.max():.4f} at r = {st.profile.r[diff.argmax()]:.3f} (R = {R:.4f})")
inside = st.profile.r < 0.8 * R
print(f"inside 0.8 R it is only {diff[inside].max():.4f}")
