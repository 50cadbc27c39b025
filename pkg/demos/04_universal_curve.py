# %% [markdown]
# One curve for all clouds
#
# Thomas-Fermi cross sections depend on k and Gamma only through kR once sigma
# is divided by Gamma^2.  Numerical clouds have no sharp edge, so we borrow a
# radius from the chemical potential, R_mu = sqrt(2 mu), and check how close
# they fall to the same curve.

# %%
import numpy as np

from becscat import (
    cutoff_radius_from_mu,
    default_grid,
    default_q_grid,
    form_factor_table,
    scaled_point,
    solve_ground_state,
    total_cross_section,
    universal_tf_cross_section,
)

# %%
k_tilde = np.array([0.5, 1.0, 2.0, 3.0, 5.0])
universal = universal_tf_cross_section(k_tilde)
print("k~     " + "  ".join(f"{x:8.2f}" for x in k_tilde))
print("TF     " + "  ".join(f"{x:8.4f}" for x in universal))

for gamma in (0.1, 10.0, 1000.0):
    st = solve_ground_state(gamma, default_grid(gamma, n=2048))
    r_mu = cutoff_radius_from_mu(st.mu)
    ks = k_tilde / r_mu
    table = form_factor_table(st.profile, *default_q_grid(ks.max(), r_mu))
    sigma = np.array([total_cross_section(gamma, table, k) for k in ks])
    _, s_tilde = scaled_point(sigma, gamma, r_mu, ks)
    print(f"G={gamma:<5g}" + "  ".join(f"{x:8.4f}" for x in s_tilde))

# %%
# The weakly interacting cloud is still a Gaussian and misses the curve by
# percents; at Gamma = 1000 the collapse is at the 1e-3 level.
