"""Translation Fourier transform and the momentum-fiber decomposition.

A fiber vector lives on pairs (gamma, rep) where ``gamma * n_rep`` is a
multiple of L, with inner-product weight n_rep / L.  Vectors are stored
packed: gamma ascending, representatives in table order inside each gamma.
The total length equals the sector dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import ModelParams, OrbitTable, cluster_count, orbit_table, sector_basis, translate
from .graph import neighbours
from .report import CheckReport

__all__ = [
    "FiberSpace",
    "FiberBasis",
    "FiberOperator",
    "fiber_space",
    "fourier_forward",
    "fourier_adjoint",
    "fiber_matrix_elements",
    "fiber_operator",
    "fiber_spectra",
    "spectrum_union_check",
]


@dataclass(frozen=True)
class FiberBasis:
    gamma: int
    members: list        # representatives admitted at this gamma
    rep_index: np.ndarray
    weights: np.ndarray  # n_rep / L


class FiberSpace:
    """Orbit bookkeeping shared by the transform and the fiber operators."""

    def __init__(self, table: OrbitTable):
        self.table = table
        self.L, self.N = table.L, table.N
        self.basis = sector_basis(self.L, self.N)
        index = {x: i for i, x in enumerate(self.basis)}
        reps = table.representatives
        self.sizes = np.array(table.sizes())
        # orbit[r, z] = sector index of T^z rep_r, for every z in 0..L-1
        self.orbit = np.array([[index[translate(r, z)] for z in range(self.L)] for r in reps],
                              dtype=int)
        self.fibers = []
        offset = 0
        self.offsets = []
        for g in range(self.L):
            idx = np.flatnonzero((g * self.sizes) % self.L == 0)
            self.fibers.append(FiberBasis(g, [reps[i] for i in idx], idx, self.sizes[idx] / self.L))
            self.offsets.append(offset)
            offset += len(idx)
        self.dim = offset

    @cached_property
    def weights(self) -> np.ndarray:
        return np.concatenate([f.weights for f in self.fibers])

    def block(self, gamma: int) -> slice:
        return slice(self.offsets[gamma], self.offsets[gamma] + len(self.fibers[gamma].members))

    def inner(self, phi1, phi2) -> complex:
        return complex(np.sum(self.weights * np.conj(phi1) * phi2))

    def norm(self, phi) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(phi) ** 2)))

    def unpack(self, packed) -> np.ndarray:
        """Packed vector -> (L, n_reps) array, zero off the admitted pairs."""
        full = np.zeros((self.L, len(self.table.representatives)), dtype=complex)
        for f in self.fibers:
            full[f.gamma, f.rep_index] = packed[self.block(f.gamma)]
        return full

    def pack(self, full, atol: float = 1e-12) -> np.ndarray:
        full = np.asarray(full)
        mask = np.zeros(full.shape, dtype=bool)
        for f in self.fibers:
            mask[f.gamma, f.rep_index] = True
        if np.any(np.abs(full[~mask]) > atol):
            raise ValueError("fiber vector has weight on pairs outside the admitted support")
        return np.concatenate([full[f.gamma, f.rep_index] for f in self.fibers])

    def forward_full(self, psi) -> np.ndarray:
        values = np.asarray(psi, dtype=complex)[self.orbit]         # (reps, L)
        return (np.fft.fft(values, axis=1) / np.sqrt(self.L)).T     # (L, reps)

    def forward(self, psi) -> np.ndarray:
        full = self.forward_full(psi)
        return np.concatenate([full[f.gamma, f.rep_index] for f in self.fibers])

    def adjoint(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=complex)
        full = self.unpack(phi) if phi.ndim == 1 else self.unpack(self.pack(phi))
        waves = np.fft.ifft(full, axis=0) * np.sqrt(self.L)         # (L, reps) indexed by z
        psi = np.zeros(len(self.basis), dtype=complex)
        for r, n in enumerate(self.sizes):
            psi[self.orbit[r, :n]] = waves[:n, r]
        return psi

    def lift(self, gamma: int, vec) -> np.ndarray:
        """Sector vector of a fiber-gamma vector given on that fiber's members."""
        packed = np.zeros(self.dim, dtype=complex)
        packed[self.block(gamma)] = vec
        return self.adjoint(packed)

    def transform_matrix(self) -> np.ndarray:
        """The transform as a (dim x dim) matrix from sector to packed coordinates."""
        return np.column_stack([self.forward(e) for e in np.eye(len(self.basis))])

    @cached_property
    def _hops(self):
        # for every representative: (rep index, shift z) of each neighbour
        table = self.table
        out = []
        for r in table.representatives:
            out.append([(table.index(rep), z) for rep, z in
                        (table.class_of[y] for y in neighbours(r))])
        return out

    @cached_property
    def potential(self) -> np.ndarray:
        return np.array([cluster_count(r) for r in self.table.representatives], dtype=float)


def fiber_space(L: int, N: int) -> FiberSpace:
    return FiberSpace(orbit_table(L, N))


def fourier_forward(psi, space: FiberSpace) -> np.ndarray:
    return space.forward(psi)


def fourier_adjoint(phi, space: FiberSpace) -> np.ndarray:
    """Inverse transform; accepts a packed vector or an (L, n_reps) array."""
    return space.adjoint(phi)


def fiber_matrix_elements(gamma: int, space: FiberSpace) -> np.ndarray:
    """a(x, y) = sum of exp(2 pi i gamma z / L) over z < n_y with T^z y adjacent to x.

    Returned on all representatives; only the admitted rows and columns enter
    the fiber operator.
    """
    R = len(space.table.representatives)
    a = np.zeros((R, R), dtype=complex)
    if space.N in (0, space.L):
        return a
    for x, hops in enumerate(space._hops):
        for y, z in hops:
            a[x, y] += np.exp(2j * np.pi * gamma * z / space.L)
    return a


@dataclass(frozen=True)
class FiberOperator:
    basis: FiberBasis
    a_matrix: np.ndarray
    potential: np.ndarray
    delta: float

    @property
    def matrix(self) -> np.ndarray:
        return -self.a_matrix / (2 * self.delta) + np.diag(self.potential)

    @property
    def hermitized(self) -> np.ndarray:
        s = np.sqrt(self.basis.weights)
        return s[:, None] * self.matrix / s[None, :]

    def eigh(self):
        """Eigenvalues ascending and eigenvectors with unit weighted norm (columns)."""
        if len(self.basis.members) == 0:
            return np.zeros(0), np.zeros((0, 0), dtype=complex)
        h = self.hermitized
        E, V = np.linalg.eigh((h + h.conj().T) / 2)
        return E, V / np.sqrt(self.basis.weights)[:, None]


def fiber_operator(params: ModelParams, gamma: int, space: FiberSpace | None = None) -> FiberOperator:
    space = space or fiber_space(params.L, params.N)
    f = space.fibers[gamma % params.L]
    a = fiber_matrix_elements(f.gamma, space)[np.ix_(f.rep_index, f.rep_index)]
    return FiberOperator(f, a, space.potential[f.rep_index], params.delta)


def fiber_spectra(params: ModelParams, space: FiberSpace | None = None) -> list[np.ndarray]:
    space = space or fiber_space(params.L, params.N)
    return [fiber_operator(params, g, space).eigh()[0] for g in range(params.L)]


def spectrum_union_check(params: ModelParams, tol: float = 1e-10) -> CheckReport:
    from .hamiltonian import build_sector

    spectra = fiber_spectra(params)
    union = np.sort(np.concatenate(spectra))
    sector = np.sort(build_sector(params).eigvalsh())
    if len(union) != len(sector):
        residual = np.inf
    else:
        residual = float(np.max(np.abs(union - sector))) if len(union) else 0.0
    return CheckReport.make(
        "spectrum_union", params.to_dict(), residual, tol,
        details={"fibers": [{"gamma": g, "eigenvalues": s.tolist()}
                            for g, s in enumerate(spectra) if len(s)]})
