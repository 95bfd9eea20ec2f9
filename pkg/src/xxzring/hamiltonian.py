"""XXZ ring Hamiltonian: full spin space for small L, and one particle-number sector.

In the N-particle sector the Hamiltonian is the graph operator
-(1/(2 delta)) A + W, with A the adjacency matrix of the product graph and W
the cluster count.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.io
import scipy.sparse as sp

from .config import Configuration, ModelParams, cluster_count, sector_basis

__all__ = [
    "SPIN_UP",
    "SPIN_DOWN",
    "two_site_term",
    "SectorOperator",
    "build_sector",
    "FockOperator",
    "build_fock",
    "fock_index",
]

SPIN_UP = np.array([1.0, 0.0])
SPIN_DOWN = np.array([0.0, 1.0])

# spin-1/2 matrices in the (up, down) basis
_S1 = np.array([[0.0, 0.5], [0.5, 0.0]])
_S2 = np.array([[0.0, -0.5j], [0.5j, 0.0]])
_S3 = np.array([[0.5, 0.0], [0.0, -0.5]])
_LOWER = np.array([[0.0, 0.0], [1.0, 0.0]])


def two_site_term(delta: float) -> np.ndarray:
    """h = (1/4 - S3 S3) - (S1 S1 + S2 S2)/delta on C^2 (x) C^2."""
    h = 0.25 * np.eye(4) - np.kron(_S3, _S3) - (np.kron(_S1, _S1) + np.kron(_S2, _S2)) / delta
    return np.real_if_close(h).astype(float)


def _ring_edges(L: int):
    if L < 3:
        raise ValueError(f"ring operators need L >= 3, got {L}")
    return [(j, (j + 1) % L) for j in range(L)]


@dataclass(frozen=True)
class SectorOperator:
    """-(1/(2 delta)) A + W on the N-particle basis (lexicographic order)."""

    params: ModelParams
    basis: list[Configuration]
    adjacency: sp.csr_matrix
    potential: np.ndarray

    @cached_property
    def index(self) -> dict[Configuration, int]:
        return {x: i for i, x in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self, delta: float | None = None) -> np.ndarray:
        delta = self.params.delta if delta is None else delta
        return -self.adjacency.toarray() / (2 * delta) + np.diag(self.potential)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix())

    def write_matrix_market(self, target, delta: float | None = None):
        scipy.io.mmwrite(target, sp.coo_matrix(self.matrix(delta)),
                         comment=f"L={self.params.L} N={self.params.N} delta={self.params.delta}")


def build_sector(params: ModelParams) -> SectorOperator:
    L, N = params.L, params.N
    if N in (0, L):
        basis = sector_basis(L, N)
        return SectorOperator(params, basis, sp.csr_matrix((1, 1)), np.zeros(1))
    _ring_edges(L)
    basis = sector_basis(L, N)
    index = {x.sites: i for i, x in enumerate(basis)}
    rows, cols = [], []
    for i, x in enumerate(basis):
        occ = set(x.sites)
        for j in x.sites:
            for k in ((j + 1) % L, (j - 1) % L):
                if k not in occ:
                    rows.append(i)
                    cols.append(index[tuple(sorted(occ - {j} | {k}))])
    data = np.ones(len(rows))
    A = sp.csr_matrix((data, (rows, cols)), shape=(len(basis), len(basis)))
    W = np.array([cluster_count(x) for x in basis], dtype=float)
    return SectorOperator(params, basis, A, W)


def fock_index(x: Configuration) -> int:
    """Position of the basis vector of x in the tensor product, site 0 most significant."""
    return sum(1 << (x.L - 1 - j) for j in x.sites)


@dataclass(frozen=True)
class FockOperator:
    L: int
    delta: float
    matrix: sp.csr_matrix

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def _site_op(op, j, L):
    return sp.kron(sp.kron(sp.identity(2**j), op), sp.identity(2 ** (L - j - 1)), format="csr")


def build_fock(L: int, delta: float) -> FockOperator:
    if L > 12:
        raise ValueError(f"full spin space is only built for L <= 12, got {L}")
    edges = _ring_edges(L)
    dim = 2**L
    H = sp.csr_matrix((dim, dim), dtype=complex)
    S = {a: [_site_op(m, j, L) for j in range(L)] for a, m in (("1", _S1), ("2", _S2), ("3", _S3))}
    for j, k in edges:
        H = H + 0.25 * sp.identity(dim) - S["3"][j] @ S["3"][k] \
            - (S["1"][j] @ S["1"][k] + S["2"][j] @ S["2"][k]) / delta
    assert abs(H.imag).max() < 1e-14 if H.nnz else True
    return FockOperator(L, delta, sp.csr_matrix(H.real))


def lowering(j: int, L: int) -> sp.csr_matrix:
    """S^- on site j: flips up to down."""
    return _site_op(_LOWER, j, L)
