"""Exact diagonalization toolkit for the XXZ ring in the Ising phase.

Particle-number sectors, momentum fibers, the droplet band, reduced states
on a window, and numerical checks of the bounds that control them.
"""
from .config import Configuration, Interval, ModelParams, SectorWindow, orbit_table
from .hamiltonian import build_fock, build_sector
from .fourier import fiber_operator, fiber_space
from .spectral import droplet_band_states
from .entanglement import entropy, partial_trace

__version__ = "0.1.0"
