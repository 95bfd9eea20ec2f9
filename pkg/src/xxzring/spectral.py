"""Droplet band states and the exponential decay checks built on them.

For delta > 2 each momentum fiber has exactly one eigenvalue in
[1 - 1/delta, 1] and none in (1, 2 - 2/delta).  These L states form the
droplet band; ``droplet_band_states`` finds them fiber by fiber and lifts
them back to the sector basis.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ModelParams, cluster_configs, droplets
from .fourier import FiberSpace, fiber_operator, fiber_space
from .hamiltonian import build_sector
from .metric import distance_to_set, orbit_distance
from .report import CheckReport

__all__ = [
    "BAND_TOL",
    "BandViolation",
    "NotInvertible",
    "EnergyBand",
    "BandState",
    "BandSpectrum",
    "droplet_band_states",
    "band_eigenpairs",
    "decay_rate",
    "cluster_projection",
    "verify_ct_eigenfunction",
    "verify_resolvent_decay",
    "sector_residual",
    "orbit_modulus_spread",
    "load_band_vectors",
]

BAND_TOL = 1e-9


class BandViolation(RuntimeError):
    """A fiber does not have exactly one eigenvalue in the droplet window."""


class NotInvertible(RuntimeError):
    pass


@dataclass(frozen=True)
class EnergyBand:
    """[1 - 1/delta, (K + 1 - dp)(1 - 1/delta)] for K clusters and margin dp in (0, 1)."""

    K: int
    delta_param: float
    Delta: float

    @property
    def interval(self) -> tuple[float, float]:
        gap = 1 - 1 / self.Delta
        return gap, (self.K + 1 - self.delta_param) * gap

    @staticmethod
    def droplet_band(Delta: float) -> tuple[float, float]:
        """The half-open window [1 - 1/delta, 2(1 - 1/delta))."""
        gap = 1 - 1 / Delta
        return gap, 2 * gap

    def contains(self, E: float, tol: float = BAND_TOL) -> bool:
        lo, hi = self.interval
        return lo - tol <= E <= hi + tol


@dataclass
class BandState:
    gamma: int
    energy: float
    fiber_vector: np.ndarray
    vector: np.ndarray
    in_band: bool = True


@dataclass
class BandSpectrum:
    params: ModelParams
    states: list[BandState]
    space: FiberSpace = field(repr=False)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.states])

    def to_json_rows(self, vector_file: str = "vectors.bin") -> list[dict]:
        rows, offset = [], 0
        for s in self.states:
            length = 2 * len(s.vector)
            rows.append({"gamma": s.gamma, "energy": s.energy, "in_band": s.in_band,
                         "vector_ref": {"file": vector_file, "offset": offset, "length": length}})
            offset += length
        return rows

    def save(self, directory) -> Path:
        """Write index.json and vectors.bin (little-endian float64, re/im interleaved)."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        blob = np.concatenate([np.column_stack([s.vector.real, s.vector.imag]).ravel()
                               for s in self.states]).astype("<f8")
        blob.tofile(directory / "vectors.bin")
        index = {"params": self.params.to_dict(),
                 "basis": [x.to_json() for x in self.space.basis],
                 "states": self.to_json_rows()}
        (directory / "index.json").write_text(json.dumps(index, indent=1))
        return directory


def load_band_vectors(directory) -> list[tuple[int, float, np.ndarray]]:
    directory = Path(directory)
    index = json.loads((directory / "index.json").read_text())
    blob = np.fromfile(directory / "vectors.bin", dtype="<f8")
    out = []
    for row in index["states"]:
        ref = row["vector_ref"]
        chunk = blob[ref["offset"]:ref["offset"] + ref["length"]].reshape(-1, 2)
        out.append((row["gamma"], row["energy"], chunk[:, 0] + 1j * chunk[:, 1]))
    return out


def _fix_phase(vec: np.ndarray, droplet_idx: np.ndarray) -> np.ndarray:
    amps = vec[droplet_idx]
    mod = np.abs(amps)
    # lowest basis index among the (numerically) largest droplet amplitudes
    candidates = droplet_idx[mod >= mod.max() * (1 - 1e-10)]
    k = candidates.min()
    return vec * (np.conj(vec[k]) / abs(vec[k]))


def droplet_band_states(params: ModelParams, space: FiberSpace | None = None) -> BandSpectrum:
    L, N, Delta = params.L, params.N, params.delta
    if not Delta > 2:
        raise ValueError(f"the droplet band is isolated only for delta > 2, got {Delta}")
    if not 1 < N < L - 1:
        raise ValueError(f"need 1 < N < L - 1, got N={N}, L={L}")
    space = space or fiber_space(L, N)
    index = {x: i for i, x in enumerate(space.basis)}
    droplet_idx = np.array(sorted(index[c] for c in droplets(L, N)))
    lo, top, gap_hi = 1 - 1 / Delta, 1.0, 2 - 2 / Delta
    states = []
    for g in range(L):
        E, V = fiber_operator(params, g, space).eigh()
        window = np.flatnonzero((E >= lo - BAND_TOL) & (E <= top + BAND_TOL))
        gap = np.flatnonzero((E > top + BAND_TOL) & (E < gap_hi - BAND_TOL))
        if len(window) != 1 or len(gap):
            raise BandViolation(
                f"fiber {g}: {len(window)} eigenvalues in [{lo}, 1], {len(gap)} in (1, {gap_hi})")
        k = window[0]
        vec = _fix_phase(space.lift(g, V[:, k]), droplet_idx)
        # propagate the phase back to the fiber vector
        fvec = space.forward(vec)[space.block(g)]
        states.append(BandState(g, float(E[k]), fvec, vec))
    return BandSpectrum(params, states, space)


def band_eigenpairs(params: ModelParams, band: EnergyBand, space: FiberSpace | None = None):
    """Every fiber eigenpair with energy in ``band``, lifted to the sector basis."""
    space = space or fiber_space(params.L, params.N)
    out = []
    for g in range(params.L):
        E, V = fiber_operator(params, g, space).eigh()
        for k in np.flatnonzero([band.contains(e) for e in E]):
            out.append(BandState(g, float(E[k]), V[:, k], space.lift(g, V[:, k])))
    return out


def decay_rate(K: int, delta_param: float, Delta: float) -> float:
    if not Delta > 1 or not 0 < delta_param < 1:
        raise ValueError("need delta > 1 and margin in (0, 1)")
    return math.log1p(delta_param * (Delta - 1) / (2 * (K + 1)))


def cluster_projection(space: FiberSpace, gamma: int, K: int) -> np.ndarray:
    """Diagonal projection onto the fiber's representatives with at most K clusters."""
    f = space.fibers[gamma % space.L]
    return np.diag((space.potential[f.rep_index] <= K).astype(float))


def verify_ct_eigenfunction(params: ModelParams, K: int = 1, delta_param: float = 0.5,
                            tol: float = 1e-12) -> CheckReport:
    """Pointwise decay of band eigenfunctions away from the K-cluster configurations."""
    L, N, Delta = params.L, params.N, params.delta
    if K == 1 and not Delta > 3:
        raise ValueError("the single-cluster bound needs delta > 3")
    mu = decay_rate(K, delta_param, Delta)
    prefactor = 2 * (K + 1) ** 2 / delta_param / math.sqrt(L)
    space = fiber_space(L, N)
    if K == 1 and delta_param == 0.5 and 1 < N < L - 1:
        states = list(droplet_band_states(params, space))
    else:
        states = band_eigenpairs(params, EnergyBand(K, delta_param, Delta), space)
    targets = cluster_configs(L, N, K)
    dist = np.array([distance_to_set(x, targets) for x in space.basis])
    bound = prefactor * np.exp(-mu * dist)
    worst, violations = None, []
    for s in states:
        amps = np.abs(s.vector)
        ratio = amps / bound
        i = int(np.argmax(ratio))
        if worst is None or ratio[i] > worst[0]:
            worst = (ratio[i], amps[i], bound[i], s.gamma, space.basis[i].to_json())
        for j in np.flatnonzero(amps > bound + tol):
            violations.append({"gamma": s.gamma, "x": space.basis[j].to_json(),
                               "amplitude": float(amps[j]), "bound": float(bound[j])})
    if worst is None:
        raise ValueError("no eigenvalues in the band")
    return CheckReport.make(
        "ct_eigenfunction", {**params.to_dict(), "K": K, "delta_param": delta_param},
        worst[1], worst[2], tol=tol,
        details={"states": len(states), "configurations": len(space.basis), "mu": mu,
                 "worst_ratio": float(worst[0]), "worst_gamma": worst[3], "worst_x": worst[4],
                 "violations": violations})


def verify_resolvent_decay(params: ModelParams, gamma: int, K: int, delta_param: float,
                           E: float, tol: float = 1e-12) -> list[CheckReport]:
    """Off-diagonal decay of the shifted fiber resolvent, in the weighted geometry.

    Returns the singleton-pair decay report and the a priori lower bound on kappa.
    """
    L, Delta = params.L, params.delta
    space = fiber_space(L, params.N)
    op = fiber_operator(params, gamma, space)
    members = op.basis.members
    P = cluster_projection(space, gamma, K)
    shift = (K + 1) * (1 - 1 / Delta) * P
    # multiplication operators commute with the weights, so the whole problem
    # can be moved to the hermitized frame where weighted norms are plain norms
    O = op.hermitized + shift - E * np.eye(len(members))
    if np.linalg.cond(O) > 1e12:
        raise NotInvertible(f"shifted fiber operator singular at E={E}")
    G = np.linalg.inv(O)
    w_half = np.sqrt(op.potential)
    kappa = 1 / np.linalg.norm(w_half[:, None] * G * w_half[None, :], 2)
    eta = math.log1p(kappa * Delta / 2)
    dhat = np.array([[orbit_distance(x, y) for y in members] for x in members])
    bound = 2 / kappa * np.exp(-eta * dhat)
    ratio = np.abs(G) / bound
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    p = {**params.to_dict(), "gamma": gamma, "K": K, "delta_param": delta_param, "E": E}
    decay = CheckReport.make("resolvent_decay", p, abs(G[i, j]), bound[i, j], tol=tol,
                             details={"kappa": kappa, "eta": eta, "pairs": int(ratio.size),
                                      "violations": int(np.sum(np.abs(G) > bound + tol))})
    kappa_min = delta_param * (Delta - 1) / ((K + 1) * Delta)
    lower = CheckReport.make("resolvent_kappa_lower", p, kappa_min, kappa, tol=tol)
    return [decay, lower]


def sector_residual(params: ModelParams, spectrum: BandSpectrum) -> float:
    H = build_sector(params).matrix()
    return max(float(np.linalg.norm(H @ s.vector - s.energy * s.vector)) for s in spectrum)


def orbit_modulus_spread(spectrum: BandSpectrum) -> float:
    space = spectrum.space
    spread = 0.0
    for s in spectrum:
        for r, n in enumerate(space.sizes):
            mods = np.abs(s.vector[space.orbit[r, :n]])
            spread = max(spread, float(mods.max() - mods.min()))
    return spread


