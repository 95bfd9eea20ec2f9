#%% [markdown]
# Entanglement of droplet band states
#
# At infinite anisotropy each band state is a plane wave over the L droplets.
# Its reduced state on a window is known exactly; the only blocks with
# 0 < n < N particles inside are two diagonal entries 1/L each.

#%%
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xxzring.config import Interval, ModelParams
from xxzring.entanglement import (entropy, entropy_scan, ising_limit_blocks, ising_limit_vector,
                                  partial_trace)
from xxzring.spectral import droplet_band_states

#%%
L, N = 12, 3
w = Interval(3, 7, L)
for b in ising_limit_blocks(L, N, w, gamma=2):
    print(b.n, b.matrix.shape, "trace", round(b.trace, 6), "entropy", round(entropy([b]), 6))
print("2 ln L / L =", 2 * math.log(L) / L)

#%%
# the closed form matches a direct partial trace
got = partial_trace(ising_limit_vector(L, N, 2), w, N)
ref = ising_limit_blocks(L, N, w, 2)
print(max(np.abs(a.matrix - b.matrix).max() for a, b in zip(got, ref)))

#%%
# finite delta: distance of each reduced block to its limit
deltas = [10.0, 1e2, 1e3, 1e4]
dist = {n: [] for n in range(N + 1)}
for delta in deltas:
    spec = droplet_band_states(ModelParams(L, N, delta))
    for n in range(N + 1):
        worst = 0.0
        for s in spec:
            a = {b.n: b.matrix for b in partial_trace(s.vector, w, N)}[n]
            r = {b.n: b.matrix for b in ising_limit_blocks(L, N, w, s.gamma)}[n]
            worst = max(worst, np.abs(np.linalg.eigvalsh(a - r)).sum())
        dist[n].append(worst)

fig, ax = plt.subplots(figsize=(6, 4))
for n, v in dist.items():
    ax.loglog(deltas, v, "o-", label=f"n={n}")
ax.set_xlabel("delta")
ax.set_ylabel("trace-norm distance to the limit")
ax.legend()
fig.savefig("ising_convergence.png", dpi=120, bbox_inches="tight")

#%%
# entropy over ln L across sizes; the last column counts only 0 < n < N blocks
scan = entropy_scan(0.05, 1 / 16, 100.0, [12, 14, 16], N=2)
for row in scan.rows[::6]:
    print({k: (round(v, 5) if isinstance(v, float) else v) for k, v in row.items()})
