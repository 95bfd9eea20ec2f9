"""Reduced states on a window of the ring, split by particle number.

A fixed-N state reduces to a direct sum of blocks, one for each number n of
particles inside the window.  The Ising-limit states (plane waves over the
droplet orbit) have reduced blocks in closed form, used here as references.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .config import Configuration, Interval, ModelParams, SectorWindow, boundary_configs, sector_basis

__all__ = [
    "DensityBlock",
    "partial_trace",
    "entropy",
    "ising_limit_vector",
    "ising_limit_state",
    "ising_limit_blocks",
    "check_window",
    "EntropyScan",
    "entropy_scan",
    "scan_window",
]

CLAMP = 1e-9


@dataclass
class DensityBlock:
    n: int
    basis: list[Configuration]
    matrix: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


def _split_indices(L, N, window: Interval):
    """For each n: window configurations, and the sector index of y u z as a |Y| x |Z| array."""
    index = {x.sites: i for i, x in enumerate(sector_basis(L, N))}
    out = []
    lo_n = max(0, N - len(window.complement))
    for n in range(lo_n, min(len(window), N) + 1):
        ys = list(combinations(window.sites, n))
        zs = list(combinations(window.complement, N - n))
        idx = np.array([[index[tuple(sorted(y + z))] for z in zs] for y in ys], dtype=int)
        out.append((n, [Configuration(y, L) for y in ys], idx))
    return out


def partial_trace(state, window: Interval, N: int, atol: float = 1e-9) -> list[DensityBlock]:
    """Reduced blocks of a sector vector or sector density matrix on the window."""
    L = window.L
    state = np.asarray(state)
    blocks = []
    if state.ndim == 1:
        if abs(np.linalg.norm(state) - 1) > atol:
            raise ValueError("state is not normalized")
        for n, ys, idx in _split_indices(L, N, window):
            M = state[idx]
            blocks.append(DensityBlock(n, ys, M @ M.conj().T))
    else:
        if abs(np.trace(state) - 1) > atol:
            raise ValueError("density matrix does not have unit trace")
        for n, ys, idx in _split_indices(L, N, window):
            rho = sum(state[np.ix_(idx[:, k], idx[:, k])] for k in range(idx.shape[1]))
            blocks.append(DensityBlock(n, ys, np.asarray(rho)))
    return blocks


def entropy(blocks) -> float:
    """-sum lambda ln lambda over the eigenvalues of all blocks."""
    total = []
    for b in blocks:
        m = b.matrix if isinstance(b, DensityBlock) else np.asarray(b)
        if m.size == 0:
            continue
        lam = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if lam.min() < -CLAMP:
            raise ValueError(f"block has eigenvalue {lam.min():.3e} below -{CLAMP}")
        lam = lam[lam > 0]
        total.extend(-lam * np.log(lam))
    return math.fsum(total)


def _droplet_start_index(L, N):
    index = {x.sites: i for i, x in enumerate(sector_basis(L, N))}
    return [index[tuple(sorted((s + k) % L for k in range(N)))] for s in range(L)]


def ising_limit_vector(L: int, N: int, gamma: int) -> np.ndarray:
    """Plane wave over the droplet orbit: amplitude exp(2 pi i gamma s / L)/sqrt(L) on the droplet starting at s."""
    if not 0 < N < L:
        raise ValueError("need 0 < N < L")
    vec = np.zeros(math.comb(L, N), dtype=complex)
    s = np.arange(L)
    vec[_droplet_start_index(L, N)] = np.exp(2j * np.pi * gamma * s / L) / np.sqrt(L)
    return vec


def ising_limit_state(L: int, N: int, gamma: int) -> np.ndarray:
    v = ising_limit_vector(L, N, gamma)
    return np.outer(v, v.conj())


def check_window(window: Interval, N: int):
    width = window.hi - window.lo
    if not N < width < window.L / 2:
        raise ValueError(f"window needs N < hi - lo < L/2, got hi - lo = {width}, N={N}, L={window.L}")


def ising_limit_blocks(L: int, N: int, window: Interval, gamma: int) -> list[DensityBlock]:
    """Closed-form reduced blocks of the Ising-limit state, n = 0..N.

    Only the droplets straddling an edge of the window leave n = 1..N-1
    particles inside, which gives two diagonal entries 1/L.  The n = 0 block
    counts droplets fully outside and the n = N block is the plane wave
    restricted to droplets fully inside.
    """
    check_window(window, N)
    blocks = []
    size = len(window)
    for n in range(0, N + 1):
        ys = [Configuration(y, L) for y in combinations(window.sites, n)]
        pos = {y: i for i, y in enumerate(ys)}
        m = np.zeros((len(ys), len(ys)), dtype=complex)
        if n == 0:
            m[0, 0] = (L - size - N + 1) / L
        elif n == N:
            v = np.zeros(len(ys), dtype=complex)
            for s in range(window.lo, window.hi - N + 2):
                v[pos[Configuration(tuple(range(s, s + N)), L)]] = np.exp(2j * np.pi * gamma * s / L)
            m = np.outer(v, v.conj()) / L
        else:
            bc = boundary_configs(window, n, N)
            m[pos[bc.y_plus], pos[bc.y_plus]] = 1 / L
            m[pos[bc.y_minus], pos[bc.y_minus]] = 1 / L
        blocks.append(DensityBlock(n, ys, m))
    return blocks


def scan_window(L: int, theta: float) -> Interval:
    """The window of sites within theta*L of the middle site floor((L-1)/2)."""
    return SectorWindow(L, (L - 1) // 2, theta).interval()


@dataclass
class EntropyScan:
    rows: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    COLUMNS = ("L", "N", "gamma", "energy", "entropy", "entropy_over_lnL", "ising_reference")


def entropy_scan(epsilon: float, theta: float, Delta: float, L_list, N: int | None = None,
                 window: tuple[int, int] | None = None) -> EntropyScan:
    """Entanglement entropy of every droplet-band state for each L.

    N defaults to floor(epsilon L); pass ``N`` to override it.  The window
    defaults to the theta-sector around the middle site; ``window`` gives
    explicit (lo, hi) bounds instead.
    """
    from .spectral import droplet_band_states

    if not 0 < epsilon < 1 / 16:
        raise ValueError(f"epsilon must lie in (0, 1/16), got {epsilon}")
    if window is None and not epsilon < theta <= 1 / 16:
        raise ValueError(f"theta must lie in (epsilon, 1/16], got {theta}")
    scan = EntropyScan()
    for L in L_list:
        n_part = math.floor(epsilon * L) if N is None else N
        if n_part < 2 or not n_part < L - 1:
            scan.skipped.append({"L": L, "N": n_part, "skipped": True})
            continue
        w = Interval(window[0], window[1], L) if window else scan_window(L, theta)
        spectrum = droplet_band_states(ModelParams(L, n_part, Delta))
        for s in spectrum:
            S = entropy(partial_trace(s.vector, w, n_part))
            scan.rows.append({"L": L, "N": n_part, "gamma": s.gamma, "energy": s.energy,
                              "entropy": S, "entropy_over_lnL": S / math.log(L),
                              "ising_reference": 2 * (n_part - 1) / L})
    return scan
