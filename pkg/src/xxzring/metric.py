"""Distances on the ring and on its N-particle product graph.

The product-graph distance is evaluated by matching the sorted particle
lists under the N cyclic relabellings only; ``graph`` holds the brute-force
BFS used to check this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .config import (Configuration, Interval, boundary_configs, droplet,
                     droplets, translate)

__all__ = [
    "ring_distance",
    "config_distance",
    "orbit_distance",
    "distance_to_droplets",
    "distance_to_set",
    "nearest_droplet_centers",
    "PathRecord",
    "track_particles",
    "hardcore_properties",
    "BoundaryProfile",
    "boundary_profile",
    "h_clamp",
    "h_sides",
    "h_function",
]


def ring_distance(j: int, k: int, L: int) -> int:
    d = abs(j - k) % L
    return min(d, L - d)


@lru_cache(maxsize=None)
def _cyclic_match(xs: tuple, ys: tuple, L: int) -> int:
    N = len(xs)
    if N == 0:
        return 0
    return min(sum(ring_distance(xs[j], ys[(j + s) % N], L) for j in range(N))
               for s in range(N))


def config_distance(x: Configuration, y: Configuration) -> int:
    if x.L != y.L:
        raise ValueError("configurations live on different rings")
    if len(x) != len(y):
        raise ValueError(f"particle numbers differ: {len(x)} vs {len(y)}")
    return _cyclic_match(x.sites, y.sites, x.L)


def orbit_distance(x: Configuration, y: Configuration) -> int:
    """Distance between translation classes: min over shifts of y."""
    return min(config_distance(x, translate(y, g)) for g in range(x.L))


def distance_to_set(x: Configuration, targets) -> int:
    return min(config_distance(x, c) for c in targets)


@lru_cache(maxsize=None)
def _to_droplets(sites: tuple, L: int) -> int:
    x = Configuration(sites, L)
    return distance_to_set(x, droplets(L, len(sites)))


def distance_to_droplets(x: Configuration) -> int:
    if not 0 < len(x) < x.L:
        raise ValueError("droplets need 0 < N < L")
    return _to_droplets(x.sites, x.L)


def nearest_droplet_centers(x: Configuration) -> set[int]:
    """Centres m whose droplet is closest to x."""
    L, N = x.L, len(x)
    if not 0 < 2 * N < L:
        raise ValueError(f"need 0 < N < L/2, got N={N}, L={L}")
    dist = {m: config_distance(x, droplet(L, N, m)) for m in range(L)}
    best = min(dist.values())
    return {m for m, d in dist.items() if d == best}


@dataclass(frozen=True)
class PathRecord:
    """Particle bookkeeping along a path in the product graph.

    Particles are labelled 1..N by the sorted order of the first step;
    ``tracks[l][j-1]`` is where particle j sits after step l.
    """

    steps: tuple[Configuration, ...]
    tracks: tuple[tuple[int, ...], ...]
    travel: tuple[int, ...]
    I_plus: frozenset
    I_minus: frozenset
    I_zero: frozenset

    @property
    def length(self):
        return len(self.steps) - 1

    def kappa(self, l: int, j: int) -> int:
        """Displacement of particle j after l steps, measured in its direction."""
        L = self.steps[0].L
        start, now = self.tracks[0][j - 1], self.tracks[l][j - 1]
        if j in self.I_minus:
            return (start - now) % L
        return (now - start) % L


def track_particles(path) -> PathRecord:
    path = tuple(path)
    if not path:
        raise ValueError("empty path")
    L = path[0].L
    tracks = [tuple(path[0].sites)]
    for prev, cur in zip(path, path[1:]):
        gone = set(prev.sites) - set(cur.sites)
        new = set(cur.sites) - set(prev.sites)
        if len(gone) != 1 or len(new) != 1:
            raise ValueError(f"{prev} and {cur} are not adjacent")
        (j,), (k,) = gone, new
        if ring_distance(j, k, L) != 1:
            raise ValueError(f"{prev} and {cur} are not adjacent")
        tracks.append(tuple(k if s == j else s for s in tracks[-1]))
    N = len(tracks[0])
    travel = tuple(sum(ring_distance(tracks[l][i], tracks[l - 1][i], L)
                       for l in range(1, len(tracks))) for i in range(N))
    plus, minus, zero = set(), set(), set()
    for i in range(N):
        start = tracks[0][i]
        if travel[i] == 0:
            zero.add(i + 1)
            continue
        visited = {t[i] for t in tracks}
        if (start + 1) % L in visited:
            plus.add(i + 1)
        if (start - 1) % L in visited:
            minus.add(i + 1)
    return PathRecord(path, tuple(tracks), travel, frozenset(plus), frozenset(minus),
                      frozenset(zero))


def hardcore_properties(rec: PathRecord) -> dict[str, bool]:
    """Ordering properties of a shortest path that starts on a droplet.

    (i)/(ii): displacements are ordered within each direction class,
    (iii): clockwise and counter-clockwise movers are separated by index,
    (iv): the two outer particles travel at most L - N in total.
    """
    L, N = rec.steps[0].L, len(rec.steps[0])
    k = rec.length
    minus, plus, zero = sorted(rec.I_minus), sorted(rec.I_plus), rec.I_zero

    def ordered(idx, cmp):
        return all(cmp(rec.kappa(l, i), rec.kappa(l, j))
                   for l in range(k + 1) for a, i in enumerate(idx) for j in idx[a + 1:])

    sup = lambda s: max(s) if s else -math.inf  # noqa: E731
    inf = lambda s: min(s) if s else math.inf  # noqa: E731
    iii = (sup(rec.I_minus) <= inf(zero | rec.I_plus)
           and sup(rec.I_minus | zero) <= inf(rec.I_plus))
    if 1 in (rec.I_minus | zero) and N in (rec.I_plus | zero):
        iv = rec.travel[0] + rec.travel[-1] <= L - N
    else:
        iv = True
    return {
        "i": ordered(minus, lambda a, b: a >= b),
        "ii": ordered(plus, lambda a, b: a <= b),
        "iii": iii,
        "iv": iv,
    }


@dataclass(frozen=True)
class BoundaryProfile:
    """Split of x into l particles left of a window, r right of it, the rest inside.

    ``sigma[j-1]`` is the sorted-order label of the particle in cyclic slot j;
    ``chi_minus[i-1]`` and ``chi_plus[i-1]`` are how far the i-th outside
    particle sits beyond the tightly packed position a(-, i) or a(+, i).
    """

    ell: int
    r: int
    sigma: tuple[int, ...]
    chi_minus: tuple[int, ...]
    chi_plus: tuple[int, ...]
    window: Interval

    def outside_sites(self) -> set[int]:
        w = self.window
        left = {(w.lo - i - c) % w.L for i, c in enumerate(self.chi_minus, start=1)}
        right = {(w.hi + i + c) % w.L for i, c in enumerate(self.chi_plus, start=1)}
        return left | right


def boundary_profile(x: Configuration, window: Interval, ell: int, r: int) -> BoundaryProfile:
    L, N = x.L, len(x)
    if x.L != window.L:
        raise ValueError("window and configuration live on different rings")
    inside = [i for i, s in enumerate(x.sites, start=1) if s in window]
    n = len(inside)
    if ell < 0 or r < 0 or n == 0 or n + ell + r != N:
        raise ValueError(f"infeasible split (ell={ell}, r={r}) with {n} particles inside")
    shift = (inside[0] - 1 - ell) % N
    sigma = tuple((j - 1 + shift) % N + 1 for j in range(1, N + 1))
    xs = x.sites
    at = lambda j: xs[sigma[j - 1] - 1]  # noqa: E731
    chi_minus = tuple((window.lo - i - at(ell - i + 1)) % L for i in range(1, ell + 1))
    chi_plus = tuple((at(N - r + i) - window.hi - i) % L for i in range(1, r + 1))
    return BoundaryProfile(ell, r, sigma, chi_minus, chi_plus, window)


def h_clamp(L: int) -> int:
    return math.floor(L ** 1.25)


def h_sides(y: Configuration, window: Interval, n: int, N: int) -> tuple[int, int]:
    """Clamped droplet distance of y with one extra particle just left / right of the window."""
    if not N < 2 * n < 2 * N:
        raise ValueError(f"need N/2 < n < N, got n={n}, N={N}")
    if len(y) != n or any(s not in window for s in y):
        raise ValueError("y must place n particles inside the window")
    L = window.L
    clamp = h_clamp(L)
    out = []
    for a in ((window.lo - 1) % L, (window.hi + 1) % L):
        grown = Configuration(y.sites + (a,), L)
        out.append(min(distance_to_droplets(grown), clamp))
    return out[0], out[1]


def h_function(y: Configuration, window: Interval, n: int, N: int) -> int:
    if not N < 2 * n < 2 * N:
        raise ValueError(f"need N/2 < n < N, got n={n}, N={N}")
    bc = boundary_configs(window, n, N)
    if y in (bc.y_plus, bc.y_minus):
        return 0
    return min(h_sides(y, window, n, N)) - 1
