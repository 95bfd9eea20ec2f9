#%% [markdown]
# Particle-number sectors and momentum fibers
#
# The XXZ ring conserves the number of down spins, so each N-particle
# sector can be built on its own. Translations split it further into L
# momentum fibers, one per gamma, living on orbit representatives.

#%%
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xxzring.config import ModelParams, orbit_table
from xxzring.fourier import fiber_space, fiber_spectra, fourier_adjoint, fourier_forward
from xxzring.hamiltonian import build_fock, build_sector, fock_index

#%%
# the sector matrix is a block of the full 2^L matrix
L, delta = 8, 4.0
H = build_fock(L, delta).toarray()
params = ModelParams(L, 3, delta)
sector = build_sector(params)
idx = [fock_index(x) for x in sector.basis]
print("sector dim", sector.dim, "| block matches full matrix:",
      np.array_equal(H[np.ix_(idx, idx)], sector.matrix()))

#%%
# orbits of the translation group; small orbits only show up at some gammas
table = orbit_table(12, 4)
print(len(table.representatives), "orbits, sizes", sorted(set(table.sizes())))
space = fiber_space(12, 4)
print("fiber dimensions:", [len(f.members) for f in space.fibers])

#%%
# the transform is unitary for the n/L-weighted inner product
rng = np.random.default_rng(0)
psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
phi = fourier_forward(psi, space)
print("norms", np.linalg.norm(psi), space.norm(phi))
print("round trip error", np.linalg.norm(fourier_adjoint(phi, space) - psi))

#%%
# fiber spectra, side by side; together they are the sector spectrum
spectra = fiber_spectra(ModelParams(12, 4, delta))
union = np.sort(np.concatenate(spectra))
print("max gap to sector spectrum",
      np.abs(union - np.sort(build_sector(ModelParams(12, 4, delta)).eigvalsh())).max())

fig, ax = plt.subplots(figsize=(6, 4))
for g, E in enumerate(spectra):
    ax.plot([g] * len(E), E, "_", ms=12, color="k")
ax.set_xlabel("gamma")
ax.set_ylabel("energy")
ax.axhspan(1 - 1 / delta, 1, color="C1", alpha=0.2, label="droplet band window")
ax.legend()
fig.savefig("fiber_spectra.png", dpi=120, bbox_inches="tight")

#%%
# one particle: a single band 1 - cos(2 pi gamma / L) / delta
one = [E[0] for E in fiber_spectra(ModelParams(16, 1, delta))]
print(np.allclose(one, [1 - math.cos(2 * math.pi * g / 16) / delta for g in range(16)]))
