"""Ring configurations, translations, orbits and the special configurations.

A configuration is the set of sites carrying a down spin (a "particle") on
the periodic chain {0, ..., L-1}.  It is stored as a sorted tuple so that
equality and hashing are structural.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

__all__ = [
    "ModelParams",
    "Configuration",
    "OrbitTable",
    "SectorWindow",
    "Interval",
    "BoundaryConfigs",
    "translate",
    "orbit_table",
    "cluster_count",
    "droplet",
    "droplets",
    "cluster_configs",
    "sector_basis",
    "boundary_configs",
]


@dataclass(frozen=True)
class ModelParams:
    L: int
    N: int
    delta: float

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValueError(f"L must be an integer >= 2, got {self.L}")
        if int(self.N) != self.N or not 0 <= self.N <= self.L:
            raise ValueError(f"N must satisfy 0 <= N <= L, got N={self.N}, L={self.L}")
        if not self.delta > 1:
            raise ValueError(f"delta must exceed 1, got {self.delta}")

    def to_dict(self):
        return {"L": self.L, "N": self.N, "delta": self.delta}


@dataclass(frozen=True, order=True)
class Configuration:
    """Occupied sites of a ring of length L."""

    sites: tuple[int, ...]
    L: int

    def __post_init__(self):
        sites = tuple(sorted(int(s) for s in self.sites))
        if len(set(sites)) != len(sites):
            raise ValueError(f"repeated site in {self.sites}")
        if sites and (sites[0] < 0 or sites[-1] >= self.L):
            raise ValueError(f"sites {sites} out of range for L={self.L}")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def of(cls, sites, L):
        return cls(tuple(sites), L)

    def __len__(self):
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    def __contains__(self, site):
        return site in self.sites

    def __getitem__(self, i):
        return self.sites[i]

    @property
    def N(self):
        return len(self.sites)

    def to_json(self):
        return list(self.sites)

    def __repr__(self):
        return f"Configuration({list(self.sites)}, L={self.L})"


def translate(x: Configuration, gamma: int) -> Configuration:
    """Shift every site of ``x`` by ``gamma`` around the ring."""
    L = x.L
    return Configuration(tuple((j + gamma) % L for j in x.sites), L)


def _canonical(sites: tuple[int, ...], L: int) -> tuple[tuple[int, ...], int]:
    """Smallest rotation of ``sites`` and the shift z with sites = T^z rep."""
    best, best_z = None, 0
    for z in range(L):
        rotated = tuple(sorted((j - z) % L for j in sites))
        if best is None or rotated < best:
            best, best_z = rotated, z
    return best, best_z


def _period(sites: tuple[int, ...], L: int) -> int:
    s = set(sites)
    for n in range(1, L + 1):
        if L % n == 0 and {(j + n) % L for j in s} == s:
            return n
    return L


@dataclass(frozen=True)
class OrbitTable:
    """Translation classes of the N-particle configurations.

    ``class_of[x] = (rep, z)`` with ``x == translate(rep, z)`` and
    ``0 <= z < orbit_size[rep]``.  Representatives are the lexicographically
    smallest rotation of their class.
    """

    L: int
    N: int
    representatives: list[Configuration]
    orbit_size: dict[Configuration, int]
    class_of: dict[Configuration, tuple[Configuration, int]] = field(repr=False)

    def index(self, rep: Configuration) -> int:
        return self._index[rep]

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.representatives)})

    def sizes(self):
        return [self.orbit_size[r] for r in self.representatives]

    def to_json(self):
        return [{"representative": r.to_json(), "orbit_size": self.orbit_size[r]}
                for r in self.representatives]


def orbit_table(L: int, N: int) -> OrbitTable:
    if not 0 <= N <= L:
        raise ValueError(f"need 0 <= N <= L, got N={N}, L={L}")
    reps: dict[tuple[int, ...], int] = {}
    class_of = {}
    for sites in combinations(range(L), N):
        rep, z = _canonical(sites, L)
        if rep not in reps:
            reps[rep] = _period(rep, L)
        n = reps[rep]
        class_of[Configuration(sites, L)] = (Configuration(rep, L), z % n)
    ordered = sorted(reps)
    representatives = [Configuration(r, L) for r in ordered]
    orbit_size = {Configuration(r, L): reps[r] for r in ordered}
    return OrbitTable(L, N, representatives, orbit_size, class_of)


def cluster_count(x: Configuration) -> int:
    """Half the number of ring edges with exactly one occupied endpoint."""
    L = x.L
    occ = set(x.sites)
    boundary = sum(1 for j in range(L) if (j in occ) != ((j + 1) % L in occ))
    if L == 2:
        # both directed wraps name the same edge
        boundary //= 2
    return boundary // 2


def droplet(L: int, N: int, m: int) -> Configuration:
    """Droplet of N consecutive sites centred at m."""
    lo = -((N - 1) // 2)
    hi = (N - 1) - (N - 1) // 2
    return Configuration(tuple((m + k) % L for k in range(lo, hi + 1)), L)


def droplets(L: int, N: int) -> list[Configuration]:
    """The L cyclic intervals of length N, starting at 0, 1, ..., L-1."""
    if not 0 < N < L:
        raise ValueError(f"droplets need 0 < N < L, got N={N}, L={L}")
    return [Configuration(tuple((s + k) % L for k in range(N)), L) for s in range(L)]


def sector_basis(L: int, N: int) -> list[Configuration]:
    """Canonical ordering of the N-particle basis: lexicographic sorted tuples."""
    return [Configuration(s, L) for s in combinations(range(L), N)]


def cluster_configs(L: int, N: int, K: int) -> list[Configuration]:
    if K < 1:
        raise ValueError("K must be at least 1")
    return [x for x in sector_basis(L, N) if cluster_count(x) <= K]


@dataclass(frozen=True)
class SectorWindow:
    """Sites within ring distance strictly less than theta*L of the centre."""

    L: int
    center: int
    theta: float
    members: frozenset = field(init=False)

    def __post_init__(self):
        if not 0 < self.theta < 0.5:
            raise ValueError(f"theta must lie in (0, 1/2), got {self.theta}")
        L, m = self.L, self.center
        mem = frozenset(k for k in range(L) if min(abs(k - m), L - abs(k - m)) < self.theta * L)
        object.__setattr__(self, "members", mem)

    def interval(self) -> "Interval":
        """The window as an interval; it never wraps when the centre is mid-ring."""
        sites = sorted(self.members)
        if sites != list(range(sites[0], sites[-1] + 1)):
            raise ValueError("window wraps around site 0; pick a central m")
        return Interval(sites[0], sites[-1], self.L)


@dataclass(frozen=True)
class Interval:
    """Connected block {lo, ..., hi} of the ring, 0 <= lo <= hi < L."""

    lo: int
    hi: int
    L: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi < self.L:
            raise ValueError(f"need 0 <= lo <= hi < L, got ({self.lo}, {self.hi}, {self.L})")

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(range(self.lo, self.hi + 1))

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.L) if not self.lo <= k <= self.hi)

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, k):
        return self.lo <= k <= self.hi


@dataclass(frozen=True)
class BoundaryConfigs:
    """Right/left packed window configurations and the outside clusters b(l, r)."""

    window: Interval
    n: int
    N: int
    y_plus: Configuration
    y_minus: Configuration
    z_plus: Configuration
    z_minus: Configuration

    def a(self, sign: int, j: int) -> int:
        """Site j steps outside the window: a(+, j) = hi + j, a(-, j) = lo - j."""
        w = self.window
        return (w.hi + j) % w.L if sign > 0 else (w.lo - j) % w.L

    def b(self, ell: int, r: int) -> Configuration:
        if ell < 0 or r < 0 or ell + r > len(self.window.complement):
            raise ValueError(f"b({ell}, {r}) does not fit outside the window")
        sites = [self.a(-1, j) for j in range(1, ell + 1)] + [self.a(+1, j) for j in range(1, r + 1)]
        if any(s in self.window for s in sites) or len(set(sites)) != len(sites):
            raise ValueError(f"b({ell}, {r}) leaves the complement of the window")
        return Configuration(tuple(sites), self.window.L)

    def family(self):
        """All b(l, r) with l + r = N - n, keyed by (l, r)."""
        k = self.N - self.n
        return {(ell, k - ell): self.b(ell, k - ell) for ell in range(k + 1)}


def boundary_configs(window: Interval, n: int, N: int) -> BoundaryConfigs:
    if not 0 < n < N:
        raise ValueError(f"need 0 < n < N, got n={n}, N={N}")
    if n > len(window):
        raise ValueError("window too small for n particles")
    L = window.L
    y_plus = Configuration(tuple(window.hi - k for k in range(n)), L)
    y_minus = Configuration(tuple(window.lo + k for k in range(n)), L)
    partial = BoundaryConfigs(window, n, N, y_plus, y_minus, y_plus, y_minus)
    z_minus = partial.b(N - n, 0)
    z_plus = partial.b(0, N - n)
    return BoundaryConfigs(window, n, N, y_plus, y_minus, z_plus, z_minus)


def n_configs(L: int, N: int) -> int:
    return comb(L, N)
