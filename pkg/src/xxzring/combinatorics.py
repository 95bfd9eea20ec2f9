"""Weakly increasing tuples and the exponential sums over them.

Also the exhaustive checks of the configuration sums that feed the
reduced-state estimates: a sum over the whole sector weighted by distance to
the droplets, and two sums split across a window boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import Configuration, Interval, boundary_configs, sector_basis
from .metric import distance_to_droplets, h_function
from .report import CheckReport

__all__ = [
    "MonotoneTuple",
    "psi_bijection",
    "psi_inverse",
    "monotone_tuples",
    "partition_counts",
    "GeomSum",
    "truncated_geom_sum",
    "geom_product",
    "verify_geom_bound",
    "verify_sum_over_configs",
    "verify_boundary_sums",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class MonotoneTuple:
    values: tuple[int, ...]

    def __post_init__(self):
        v = tuple(int(t) for t in self.values)
        if any(t < 0 for t in v) or any(a > b for a, b in zip(v, v[1:])):
            raise ValueError(f"{v} is not a weakly increasing tuple of nonnegative integers")
        object.__setattr__(self, "values", v)

    def norm(self) -> int:
        return sum(self.values)


def psi_bijection(x) -> MonotoneTuple:
    """Prefix sums: sends any tuple in N_0^N to a weakly increasing one."""
    if any(t < 0 for t in x):
        raise ValueError("entries must be nonnegative")
    out, acc = [], 0
    for t in x:
        acc += t
        out.append(acc)
    return MonotoneTuple(tuple(out))


def psi_inverse(chi: MonotoneTuple) -> tuple[int, ...]:
    v = chi.values
    return tuple(b - a for a, b in zip((0,) + v, v))


def monotone_tuples(N: int, max_norm: int):
    """All weakly increasing N-tuples with entry sum at most ``max_norm``."""
    def rec(prefix, lo, budget, left):
        if left == 0:
            yield tuple(prefix)
            return
        for v in range(lo, budget // left + 1):
            prefix.append(v)
            yield from rec(prefix, v, budget - v, left - 1)
            prefix.pop()
    yield from rec([], 0, max_norm, N)


def partition_counts(N: int, smax: int) -> list[int]:
    """p[s] = number of weakly increasing N-tuples with sum s, for s <= smax.

    Same as partitions of s into parts of size at most N.
    """
    p = [1] + [0] * smax
    for part in range(1, N + 1):
        for s in range(part, smax + 1):
            p[s] += p[s - part]
    return p


def _tail_bound(N: int, mu: float, cutoff: int) -> float:
    # tuples of norm s number at most (s+1)^(N-1); beyond the cutoff the
    # terms shrink at least geometrically with ratio rho < 1
    s0 = cutoff + 1
    first = (s0 + 1) ** (N - 1) * math.exp(-mu * s0)
    rho = ((s0 + 2) / (s0 + 1)) ** (N - 1) * math.exp(-mu)
    if rho >= 1:
        return math.inf
    return first / (1 - rho)


def geom_product(N: int, mu: float) -> float:
    """Sum over all weakly increasing N-tuples of exp(-mu |chi|), in closed form."""
    return float(np.prod([1.0 / (1.0 - math.exp(-mu * k)) for k in range(1, N + 1)]))


@dataclass(frozen=True)
class GeomSum:
    N: int
    mu: float
    cutoff: int
    value: float
    tail: float
    closed_form: float

    @property
    def upper(self):
        return self.value + self.tail


def truncated_geom_sum(N: int, mu: float, cutoff: int | None = None) -> GeomSum:
    """Sum of exp(-mu |chi|) over nonzero weakly increasing N-tuples with |chi| <= cutoff.

    Without a cutoff, the smallest one with certified tail below 1e-12 is used.
    """
    if mu < LN2:
        raise ValueError(f"mu must be at least ln 2, got {mu}")
    if cutoff is None:
        cutoff = 1
        while _tail_bound(N, mu, cutoff) >= 1e-12:
            cutoff += 1
    p = partition_counts(N, cutoff)
    value = math.fsum(p[s] * math.exp(-mu * s) for s in range(1, cutoff + 1))
    return GeomSum(N, mu, cutoff, value, _tail_bound(N, mu, cutoff), geom_product(N, mu) - 1.0)


def verify_geom_bound(N: int, mu: float) -> CheckReport:
    g = truncated_geom_sum(N, mu)
    rhs = 30 * math.exp(-mu)
    return CheckReport.make("geom_sum_bound", {"N": N, "mu": mu}, g.upper, rhs,
                            details={"cutoff": g.cutoff, "tail": g.tail,
                                     "closed_form": g.closed_form})


def verify_sum_over_configs(L: int, N: int, mu: float) -> CheckReport:
    if not 0 < 2 * N < L:
        raise ValueError(f"need 0 < N < L/2, got N={N}, L={L}")
    if mu < LN2:
        raise ValueError(f"mu must be at least ln 2, got {mu}")
    lhs = math.fsum(math.exp(-mu * distance_to_droplets(x)) for x in sector_basis(L, N))
    rhs = L * (1 + 2**9 * math.exp(-mu))
    return CheckReport.make("sum_over_configs", {"L": L, "N": N, "mu": mu}, lhs, rhs)


def verify_boundary_sums(L: int, N: int, n: int, window: Interval, mu: float):
    """Exhaustive window-split sums; returns (outside-sum report, h-sum report).

    The first is the worst case over y of the sum over outside z, compared
    with 333 exp(-mu) exp(-mu h(y)); the second sums exp(-mu h(y)) over all
    y other than the two packed ones, against 2^11 exp(-mu).
    """
    if not N < 2 * n < 2 * N:
        raise ValueError(f"need N/2 < n < N, got n={n}, N={N}")
    if mu < LN2:
        raise ValueError(f"mu must be at least ln 2, got {mu}")
    bc = boundary_configs(window, n, N)
    params = {"L": L, "N": N, "n": n, "lo": window.lo, "hi": window.hi, "mu": mu}
    outside = window.complement
    worst = None
    h_total = []
    for ys in combinations(window.sites, n):
        y = Configuration(ys, L)
        h = h_function(y, window, n, N)
        terms = []
        for zs in combinations(outside, N - n):
            d = distance_to_droplets(Configuration(ys + zs, L))
            if d > 0:
                terms.append(math.exp(-mu * d))
        lhs = math.fsum(terms)
        rhs = 333 * math.exp(-mu) * math.exp(-mu * h)
        if worst is None or lhs / rhs > worst[0] / worst[1]:
            worst = (lhs, rhs, list(ys))
        if y not in (bc.y_plus, bc.y_minus):
            h_total.append(math.exp(-mu * h))
    first = CheckReport.make("boundary_outside_sum", params, worst[0], worst[1],
                             details={"worst_y": worst[2]})
    second = CheckReport.make("boundary_h_sum", params, math.fsum(h_total),
                              2**11 * math.exp(-mu),
                              details={"terms": len(h_total)})
    return first, second
