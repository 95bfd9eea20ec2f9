"""Spectral shift functions, Schatten quasinorms, and estimates on reduced-state differences.

Spectral shift convention: xi(E) = tr 1(A <= E) - tr 1(A + B <= E).  With
this sign tr f(A+B) - tr f(A) equals the integral of f' xi, and the
integral of xi is tr B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.special import gammaln

from .config import Configuration, Interval, ModelParams, droplets, sector_basis
from .entanglement import (check_window, entropy, ising_limit_blocks, ising_limit_state,
                           partial_trace, scan_window)
from .metric import distance_to_droplets, h_function
from .report import CheckReport
from .spectral import decay_rate, droplet_band_states

__all__ = [
    "SpectralShift",
    "spectral_shift",
    "krein_check",
    "schatten_quasinorm",
    "lp_ssf_check",
    "random_hermitian",
    "ssf_suite",
    "gamma_norm",
    "gamma_bound_check",
    "entropy_trace",
    "ssf_entropy_bound",
    "droplet_mass_check",
    "order_by_h",
    "rank_split",
    "difference_blocks",
    "difference_entries_check",
    "eigenvalue_order_check",
    "entropy_difference_check",
    "main_theorem_chain",
]


@dataclass(frozen=True)
class SpectralShift:
    """Integer step function: ``values[i]`` holds on [breakpoints[i], breakpoints[i+1])."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, E: float) -> int:
        i = np.searchsorted(self.breakpoints, E, side="right") - 1
        if i < 0 or i >= len(self.values):
            return 0
        return int(self.values[i])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def lp_norm(self, p: float) -> float:
        return float(np.sum(np.abs(self.values) ** p * self.widths) ** (1 / p))

    def integral(self) -> float:
        return float(np.sum(self.values * self.widths))

    def integrate_derivative(self, f) -> float:
        """Integral of f' xi, exact on each constant piece."""
        t = self.breakpoints
        return float(np.sum(self.values * (f(t[1:]) - f(t[:-1]))))


def spectral_shift(A, B) -> SpectralShift:
    A = np.asarray(A)
    a = np.linalg.eigvalsh(A)
    c = np.linalg.eigvalsh(A + np.asarray(B))
    t = np.unique(np.concatenate([a, c]))
    counts_a = np.searchsorted(a, t, side="right")
    counts_c = np.searchsorted(c, t, side="right")
    return SpectralShift(t, (counts_a - counts_c)[:-1])


def krein_check(A, B, f, tol: float = 1e-8) -> CheckReport:
    """Compare tr f(A+B) - tr f(A) with the integral of f' xi for a polynomial f."""
    A, B = np.asarray(A), np.asarray(B)
    direct = float(np.sum(f(np.linalg.eigvalsh(A + B))) - np.sum(f(np.linalg.eigvalsh(A))))
    via_shift = spectral_shift(A, B).integrate_derivative(f)
    return CheckReport.make("krein_identity", {"dim": A.shape[0]}, abs(direct - via_shift), tol,
                            details={"trace_side": direct, "shift_side": via_shift})


def schatten_quasinorm(A, p: float) -> float:
    """Sum of singular values to the power 1/p."""
    if p < 1:
        raise ValueError("p must be at least 1")
    s = np.linalg.svd(np.asarray(A), compute_uv=False)
    return float(np.sum(s ** (1 / p)))


def lp_ssf_check(A, B, p: float) -> CheckReport:
    lhs = spectral_shift(A, B).lp_norm(p)
    rhs = schatten_quasinorm(B, p)
    return CheckReport.make("ssf_lp_bound", {"dim": np.asarray(A).shape[0], "p": p}, lhs, rhs,
                            tol=1e-12)


def random_hermitian(rng, dim: int, scale: float = 1.0) -> np.ndarray:
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (X + X.conj().T) / 2


def ssf_suite(seed: int = 0, trials: int = 200, max_dim: int = 8) -> list[CheckReport]:
    """Random-pair checks of the Lp bound and the trace identity, plus the Gamma bound."""
    rng = np.random.default_rng(seed)
    reports = []
    worst_lp, worst_krein, fails = {}, None, []
    for trial in range(trials):
        dim = int(rng.integers(1, max_dim + 1))
        A = random_hermitian(rng, dim)
        B = random_hermitian(rng, dim, scale=float(rng.uniform(0.01, 2)))
        for p in (1, 2, 3):
            r = lp_ssf_check(A, B, p)
            if not r.holds:
                fails.append({"trial": trial, "p": p})
            if p not in worst_lp or r.lhs / r.rhs > worst_lp[p].lhs / worst_lp[p].rhs:
                worst_lp[p] = r
        coeffs = rng.normal(size=4)
        k = krein_check(A, B, np.polynomial.Polynomial(coeffs))
        if worst_krein is None or k.lhs > worst_krein.lhs:
            worst_krein = k
    for p, r in sorted(worst_lp.items()):
        reports.append(CheckReport.make("ssf_lp_bound", {"p": p, "trials": trials, "seed": seed},
                                        r.lhs, r.rhs, tol=1e-12,
                                        details={"failures": [f for f in fails if f["p"] == p]}))
    reports.append(CheckReport.make("krein_identity", {"trials": trials, "seed": seed},
                                    worst_krein.lhs, worst_krein.rhs))
    reports += [gamma_bound_check(q) for q in (1.5, 2.0, 5.0)]
    return reports


def gamma_norm(q: float) -> float:
    """Gamma(q+1)^(1/q): the L^q norm of ln on (0, 1)."""
    return math.exp(gammaln(q + 1) / q)


def gamma_bound_check(q: float) -> CheckReport:
    return CheckReport.make("gamma_bound", {"q": q}, gamma_norm(q), 2 * q)


def entropy_trace(M) -> float:
    """tr s(M) with s(t) = -t ln t, for a Hermitian M with spectrum in [0, 1]."""
    lam = np.linalg.eigvalsh(np.asarray(M))
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def ssf_entropy_bound(X, Y, p: float, q: float) -> CheckReport:
    """|tr s(Y) - tr s(X)| against ||Y - X||_{1/p}^{1/p} (1 + Gamma(q+1)^(1/q))."""
    if abs(1 / p + 1 / q - 1) > 1e-12:
        raise ValueError("need 1/p + 1/q = 1")
    for M in (X, Y):
        lam = np.linalg.eigvalsh(M)
        if lam.min() < -1e-9 or lam.max() > 1 + 1e-9:
            raise ValueError("spectra must lie in [0, 1]")
    lhs = abs(entropy_trace(Y) - entropy_trace(X))
    rhs = schatten_quasinorm(np.asarray(Y) - np.asarray(X), p) * (1 + gamma_norm(q))
    return CheckReport.make("entropy_difference", {"p": p, "q": q}, lhs, rhs, tol=1e-12)


# ---- droplet mass and reduced-state differences ---------------------------------------

def _mu1(Delta: float) -> float:
    return decay_rate(1, 0.5, Delta)


def droplet_mass_check(params: ModelParams, tol: float = 1e-12) -> list[CheckReport]:
    """Upper and lower bounds on the weight of each droplet in each band state."""
    mu = _mu1(params.delta)
    if not params.delta > 3 or mu < math.log(2):
        raise ValueError("need delta > 3 with mu_1 >= ln 2")
    L, N = params.L, params.N
    spectrum = droplet_band_states(params)
    index = {x: i for i, x in enumerate(spectrum.space.basis)}
    idx = [index[c] for c in droplets(L, N)]
    mass = np.array([np.abs(s.vector[idx]) ** 2 for s in spectrum])
    factor = 1 - 2**17 * math.exp(-2 * mu)
    p = params.to_dict()
    upper = CheckReport.make("droplet_mass_upper", p, mass.max(), 1 / L, tol=tol)
    lower = CheckReport.make("droplet_mass_lower", p, factor / L, mass.min(), tol=tol,
                             details={"vacuous": factor <= 0, "factor": factor})
    return [upper, lower]


def order_by_h(window: Interval, n: int, N: int) -> list[Configuration]:
    """Window configurations sorted by h ascending, ties lexicographic.

    The packed configurations y_+ and y_- have h = 0, so they sit in the leading block.
    """
    ys = [Configuration(y, window.L) for y in combinations(window.sites, n)]
    return sorted(ys, key=lambda y: (h_function(y, window, n, N), y.sites))


def rank_split(A: np.ndarray, order) -> list[tuple[np.ndarray, np.ndarray]]:
    """(S_j, R_j) for j = 0..m, where R_j keeps the rows/columns after position j in ``order``.

    A_j collects the diagonal entry at order[j] and its couplings to later
    positions, so S_j = A_1 + ... + A_j has rank at most 2j.
    """
    A = np.asarray(A)
    m = len(order)
    out = []
    for j in range(m + 1):
        tail = np.asarray(order[j:], dtype=int)
        R = np.zeros_like(A)
        R[np.ix_(tail, tail)] = A[np.ix_(tail, tail)]
        out.append((A - R, R))
    return out


@dataclass
class _Difference:
    gamma: int
    block: np.ndarray        # reduced difference on the n-particle window block
    basis: list              # window configurations of that block
    state_block: np.ndarray
    ising_block: np.ndarray
    full: np.ndarray         # sector-level difference rho(phi) - rho_gamma


def difference_blocks(params: ModelParams, window: Interval, n: int, full: bool = False):
    L, N = params.L, params.N
    check_window(window, N)
    if not N < 2 * n < 2 * N:
        raise ValueError(f"need N/2 < n < N, got n={n}, N={N}")
    out = []
    for s in droplet_band_states(params):
        got = {b.n: b for b in partial_trace(s.vector, window, N)}[n]
        ref = {b.n: b for b in ising_limit_blocks(L, N, window, s.gamma)}[n]
        sector = None
        if full:
            sector = np.outer(s.vector, s.vector.conj()) - ising_limit_state(L, N, s.gamma)
        out.append(_Difference(s.gamma, got.matrix - ref.matrix, got.basis, got.matrix,
                               ref.matrix, sector))
    return out


def difference_entries_check(params: ModelParams, window: Interval, n: int,
                             tol: float = 1e-12) -> list[CheckReport]:
    """Entrywise bounds on state-minus-Ising-limit, on the sector and on the window block."""
    L, N = params.L, params.N
    mu = _mu1(params.delta)
    if mu < math.log(2):
        raise ValueError("need mu_1 >= ln 2")
    diffs = difference_blocks(params, window, n, full=True)
    basis = sector_basis(L, N)
    dist = np.array([distance_to_droplets(x) for x in basis], dtype=float)
    is_drop = dist == 0
    pair_bound = 2**17 * math.exp(-2 * mu) / L
    other_bound = 2**17 / L * np.exp(-mu * (dist[:, None] + dist[None, :]))
    ys = diffs[0].basis
    h = np.array([h_function(y, window, n, N) for y in ys], dtype=float)
    block_bound = 2**34 / L * math.exp(-mu) * np.exp(-mu * (h[:, None] + h[None, :]))
    pair_mask = is_drop[:, None] & is_drop[None, :]
    worst = {"pair": (0.0, pair_bound), "other": (0.0, None), "block": (0.0, None)}
    ratios = {"pair": 0.0, "other": 0.0, "block": 0.0}
    for d in diffs:
        mag = np.abs(d.full)
        r = mag[pair_mask].max() / pair_bound
        if r >= ratios["pair"]:
            ratios["pair"], worst["pair"] = r, (mag[pair_mask].max(), pair_bound)
        rr = np.where(pair_mask, 0.0, mag / other_bound)
        i = np.unravel_index(np.argmax(rr), rr.shape)
        if rr[i] >= ratios["other"]:
            ratios["other"], worst["other"] = rr[i], (mag[i], other_bound[i])
        bmag = np.abs(d.block)
        br = bmag / block_bound
        i = np.unravel_index(np.argmax(br), br.shape)
        if br[i] >= ratios["block"]:
            ratios["block"], worst["block"] = br[i], (bmag[i], block_bound[i])
    p = {**params.to_dict(), "n": n, "lo": window.lo, "hi": window.hi}
    return [
        CheckReport.make("difference_droplet_pairs", p, *worst["pair"], tol=tol),
        CheckReport.make("difference_other_pairs", p, *worst["other"], tol=tol),
        CheckReport.make("difference_window_entries", p, *worst["block"], tol=tol),
    ]


def eigenvalue_order_check(params: ModelParams, window: Interval, n: int, p: float,
                           tol: float = 1e-12) -> list[CheckReport]:
    """Singular values of the window difference against the h-ordered envelope, and its quasinorm."""
    L, N = params.L, params.N
    mu = _mu1(params.delta)
    if mu / p < math.log(2):
        raise ValueError("need mu_1 / p >= ln 2")
    diffs = difference_blocks(params, window, n)
    order = order_by_h(window, n, N)
    h_sorted = np.array([h_function(y, window, n, N) for y in order], dtype=float)
    m = len(order)
    j = np.arange(1, m + 1)
    envelope = 2**45 * math.exp(-mu) / L * np.exp(-mu * h_sorted[(j + 1) // 2 - 1])
    q_rhs = 2**56 / L ** (1 / p) * math.exp(-mu / p)
    worst_sv, worst_q = (0.0, 0.0, 1.0), (0.0, q_rhs)
    for d in diffs:
        s = np.linalg.svd(d.block, compute_uv=False)
        r = s / envelope
        k = int(np.argmax(r))
        if r[k] >= worst_sv[0]:
            worst_sv = (r[k], s[k], envelope[k])
        qn = schatten_quasinorm(d.block, p)
        if qn >= worst_q[0]:
            worst_q = (qn, q_rhs)
    pp = {**params.to_dict(), "n": n, "lo": window.lo, "hi": window.hi, "p": p}
    return [
        CheckReport.make("singular_value_envelope", pp, worst_sv[1], worst_sv[2], tol=tol,
                         details={"h_order": h_sorted.tolist()}),
        CheckReport.make("difference_quasinorm", pp, *worst_q, tol=tol),
    ]


def entropy_difference_check(params: ModelParams, window: Interval, n: int, p: float,
                             q: float) -> list[CheckReport]:
    reports = [gamma_bound_check(q)]
    worst = None
    for d in difference_blocks(params, window, n):
        r = ssf_entropy_bound(d.ising_block, d.state_block, p, q)
        if worst is None or r.lhs / max(r.rhs, 1e-300) > worst.lhs / max(worst.rhs, 1e-300):
            worst = r
    pp = {**params.to_dict(), "n": n, "lo": window.lo, "hi": window.hi, "p": p, "q": q}
    reports.append(CheckReport.make("entropy_difference", pp, worst.lhs, worst.rhs, tol=1e-12))
    return reports


def main_theorem_chain(epsilon: float, theta: float, Delta: float, L: int, N: int | None = None,
                       window: tuple[int, int] | None = None) -> list[CheckReport]:
    """Every link of the large-L entropy argument evaluated at one finite size.

    All reports are informational: at any size that fits in memory several
    links are out of reach (the last one needs mu_1 >= 116 ln 2).
    """
    if not 0 < epsilon < 1 / 16:
        raise ValueError(f"epsilon must lie in (0, 1/16), got {epsilon}")
    if window is None and not epsilon < theta <= 1 / 16:
        raise ValueError(f"theta must lie in (epsilon, 1/16], got {theta}")
    N = math.floor(epsilon * L) if N is None else N
    if N < 2:
        raise ValueError(f"need at least two particles, got N={N}")
    w = Interval(window[0], window[1], L) if window else scan_window(L, theta)
    params = ModelParams(L, N, Delta)
    mu = _mu1(Delta)
    q = math.log(L)
    p = 1 / (1 - 1 / q)
    base = {"L": L, "N": N, "delta": Delta, "epsilon": epsilon, "theta": theta,
            "lo": w.lo, "hi": w.hi, "p": p, "q": q}
    info = dict(informational=True)
    out = [
        CheckReport.make("chain_L_power", base, abs(L ** (1 / p) - L / math.e), 1e-9 * L, **info),
        CheckReport.make("chain_inverse_p", base, 0.5, 1 / p,
                         details={"needs": "L >= e^2"}, **info),
        CheckReport.make("chain_mu_over_p", base, math.log(2), mu / p, **info),
        CheckReport.make("chain_gamma", base, gamma_norm(q), 2 * q, **info),
        CheckReport.make("chain_small_constant", base, 2**57 * math.exp(-mu / 2), 0.5,
                         details={"mu_1": mu, "mu_1_needed": 116 * math.log(2)}, **info),
    ]
    target = (N / 2 - 1) * (math.log(L) - 1) / L
    spectrum = droplet_band_states(params)
    S = [entropy(partial_trace(s.vector, w, N)) for s in spectrum]
    out.append(CheckReport.make("chain_entropy_target", base, target, min(S),
                                details={"entropies": S}, **info))
    ising = 2 * (N - 1) * math.log(L) / L
    out.append(CheckReport.make("chain_ising_vs_target", base, target, ising, **info))
    admissible = [n for n in range(N) if N < 2 * n]
    try:
        check_window(w, N)
        window_ok = True
    except ValueError:
        window_ok = False
    for n in admissible if window_ok else []:
        for r in eigenvalue_order_check(params, w, n, p) if mu / p >= math.log(2) else []:
            out.append(CheckReport.make("chain_" + r.check, {**base, "n": n}, r.lhs, r.rhs, **info))
        for r in entropy_difference_check(params, w, n, p, q)[1:]:
            out.append(CheckReport.make("chain_" + r.check, {**base, "n": n}, r.lhs, r.rhs, **info))
    if not admissible or not window_ok:
        out.append(CheckReport.make("chain_window_blocks", base, 0.0, 0.0,
                                    details={"admissible_n": admissible, "window_ok": window_ok},
                                    **info))
    return out
