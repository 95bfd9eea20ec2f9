#%% [markdown]
# Distances between particle configurations
#
# Configurations are vertices of a graph whose edges move one particle to a
# free neighbouring site. The graph distance has a closed form: match the
# sorted particle positions up to a cyclic shift.

#%%
import numpy as np

from xxzring.config import Configuration, droplet, sector_basis
from xxzring.graph import bfs_distances, random_shortest_path
from xxzring.metric import (config_distance, distance_to_droplets, hardcore_properties,
                            nearest_droplet_centers, track_particles)

#%%
x, y = Configuration((0, 1), 6), Configuration((3, 4), 6)
print("distance", config_distance(x, y), "BFS", bfs_distances(x)[y])

#%%
# check the formula against BFS on every pair of a small sector
basis = sector_basis(8, 3)
bad = sum(config_distance(a, b) != bfs_distances(a)[b] for a in basis[:20] for b in basis)
print("mismatches on 20 sources:", bad)

#%%
# which droplets are closest, and where they sit relative to x
x = Configuration((4, 5, 7), 10)
print("distance to droplets", distance_to_droplets(x))
print("closest centres", sorted(nearest_droplet_centers(x)))

#%%
# follow each particle along a geodesic from a droplet
rng = np.random.default_rng(1)
start, target = droplet(10, 3, 4), Configuration((1, 4, 8), 10)
path = random_shortest_path(start, target, rng)
rec = track_particles(path)
for step in path:
    print(step.sites)
print("travel", rec.travel, "moving left", sorted(rec.I_minus), "moving right", sorted(rec.I_plus))
print(hardcore_properties(rec))
