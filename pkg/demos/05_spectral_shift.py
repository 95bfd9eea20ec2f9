#%% [markdown]
# Spectral shift functions of finite matrices
#
# xi(E) counts how many eigenvalues cross E when B is added to A. Its
# L^p norm is controlled by the (1/p)-quasinorm of B, which is what turns
# small reduced-state differences into small entropy differences.

#%%
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xxzring.analysis import (gamma_norm, krein_check, lp_ssf_check, random_hermitian,
                              schatten_quasinorm, spectral_shift, ssf_entropy_bound)

#%%
rng = np.random.default_rng(4)
A, B = random_hermitian(rng, 6), random_hermitian(rng, 6, 0.5)
xi = spectral_shift(A, B)
print("integral of xi", xi.integral(), " trace of B", np.trace(B).real)

fig, ax = plt.subplots(figsize=(6, 3))
ax.step(xi.breakpoints[:-1], xi.values, where="post")
ax.set_xlabel("E")
ax.set_ylabel("xi(E)")
fig.savefig("spectral_shift.png", dpi=120, bbox_inches="tight")

#%%
f = np.polynomial.Polynomial([0.3, -1.0, 0.5, 0.2])
print(krein_check(A, B, f).details)
for p in (1, 2, 3):
    r = lp_ssf_check(A, B, p)
    print(f"p={p}: ||xi||_p = {r.lhs:.4f} <= {r.rhs:.4f}")

#%%
# Gamma(q+1)^(1/q) grows linearly in q
for q in (1.5, 2, 5, 10):
    print(q, gamma_norm(q), 2 * q)

#%%
X = np.diag([0.6, 0.3, 0.1])
Y = X + 0.01 * random_hermitian(rng, 3)
Y /= np.trace(Y).real
print(ssf_entropy_bound(X, Y, 2.0, 2.0))
print(schatten_quasinorm(Y - X, 2.0))
