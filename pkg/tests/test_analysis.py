import math

import numpy as np
import pytest
from scipy.integrate import quad

from xxzring.analysis import (difference_blocks, difference_entries_check, droplet_mass_check,
                              entropy_difference_check, entropy_trace, eigenvalue_order_check,
                              gamma_bound_check, gamma_norm, krein_check, lp_ssf_check,
                              main_theorem_chain, order_by_h, random_hermitian, rank_split,
                              schatten_quasinorm, spectral_shift, ssf_entropy_bound, ssf_suite)
from xxzring.config import Interval, ModelParams, boundary_configs
from xxzring.metric import h_function


def count_oracle(A, B, E):
    return int(np.sum(np.linalg.eigvalsh(A) <= E) - np.sum(np.linalg.eigvalsh(A + B) <= E))


def random_density(rng, dim):
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


@pytest.mark.parametrize("seed", range(10))
def test_spectral_shift_against_counting(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 8))
    A = random_hermitian(rng, dim)
    B = random_hermitian(rng, dim, 0.5)
    xi = spectral_shift(A, B)
    for E in rng.uniform(-6, 6, size=200):
        assert xi(E) == count_oracle(A, B, E)
    assert xi.integral() == pytest.approx(np.trace(B).real, abs=1e-12)


def test_spectral_shift_sign_for_positive_perturbation():
    rng = np.random.default_rng(1)
    A = random_hermitian(rng, 6)
    X = rng.normal(size=(6, 6))
    xi = spectral_shift(A, X @ X.T)
    assert np.all(xi.values >= 0)


@pytest.mark.parametrize("seed", range(5))
def test_krein_identity(seed):
    rng = np.random.default_rng(seed)
    A = random_hermitian(rng, 5)
    B = random_hermitian(rng, 5, 0.3)
    for coeffs in ([0, 1], [1, -2, 3], rng.normal(size=5)):
        assert krein_check(A, B, np.polynomial.Polynomial(coeffs)).holds
    assert krein_check(A, B, np.exp).holds


def test_schatten_quasinorm():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(5, 5))
    assert schatten_quasinorm(A, 1) == pytest.approx(np.linalg.norm(A, "nuc"))
    s = np.linalg.svd(A, compute_uv=False)
    assert schatten_quasinorm(A, 2) == pytest.approx(np.sum(np.sqrt(s)))
    Q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    assert schatten_quasinorm(Q @ A, 3) == pytest.approx(schatten_quasinorm(A, 3))
    with pytest.raises(ValueError):
        schatten_quasinorm(A, 0.5)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("p", [1, 1.5, 2, 3])
def test_lp_bound_random_pairs(seed, p):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 9))
    assert lp_ssf_check(random_hermitian(rng, dim), random_hermitian(rng, dim, 0.7), p).holds


def test_lp_bound_tight_for_rank_one():
    # a rank-one positive B moves one eigenvalue count by one over a stretch of length <= ||B||
    A = np.diag([0.0, 1.0, 2.0])
    B = np.zeros((3, 3))
    B[0, 0] = 0.5
    r = lp_ssf_check(A, B, 1)
    assert r.lhs == pytest.approx(0.5) and r.rhs == pytest.approx(0.5)


@pytest.mark.parametrize("q", [1.5, 2.0, 3.0, 5.0, 10.0])
def test_gamma_norm_against_integral(q):
    integral, _ = quad(lambda t: abs(math.log(t)) ** q, 0, 1)
    assert gamma_norm(q) == pytest.approx(integral ** (1 / q), rel=1e-9)
    assert gamma_bound_check(q).holds


def test_gamma_norm_exact_values():
    assert gamma_norm(2.0) == pytest.approx(math.sqrt(2))
    assert gamma_norm(1.0) == pytest.approx(1.0)


def test_ssf_suite():
    reports = ssf_suite(seed=5, trials=50)
    assert [r.check for r in reports] == ["ssf_lp_bound"] * 3 + ["krein_identity"] + ["gamma_bound"] * 3
    assert all(r.holds for r in reports)


def test_entropy_trace():
    assert entropy_trace(np.eye(4) / 4) == pytest.approx(math.log(4))
    assert entropy_trace(np.diag([1.0, 0.0])) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_ssf_entropy_bound_on_random_states(seed):
    rng = np.random.default_rng(seed)
    X, Y = random_density(rng, 6), random_density(rng, 6)
    for p in (1.5, 2.0, 4.0):
        assert ssf_entropy_bound(X, Y, p, p / (p - 1)).holds
    with pytest.raises(ValueError):
        ssf_entropy_bound(X, Y, 2.0, 3.0)
    with pytest.raises(ValueError):
        ssf_entropy_bound(2 * np.eye(2), np.eye(2), 2.0, 2.0)


def test_droplet_mass():
    upper, lower = droplet_mass_check(ModelParams(12, 3, 10.0))
    assert upper.holds and upper.rhs == 1 / 12
    assert lower.details["vacuous"]
    upper, lower = droplet_mass_check(ModelParams(12, 3, 3000.0))
    assert upper.holds and lower.holds and not lower.details["vacuous"]
    assert lower.lhs > 0
    with pytest.raises(ValueError):
        droplet_mass_check(ModelParams(12, 3, 3.0))


@pytest.mark.parametrize("lo,hi", [(4, 9), (4, 10), (3, 8)])
def test_order_by_h(lo, hi):
    w = Interval(lo, hi, 14)
    order = order_by_h(w, 3, 4)
    bc = boundary_configs(w, 3, 4)
    hs = [h_function(y, w, 3, 4) for y in order]
    assert hs == sorted(hs) and hs[0] == 0
    zero = order[:hs.count(0)]
    assert {bc.y_plus, bc.y_minus} <= set(zero)
    assert [y.sites for y in zero] == sorted(y.sites for y in zero)


def test_rank_split():
    rng = np.random.default_rng(0)
    A = random_hermitian(rng, 7)
    order = list(rng.permutation(7))
    pieces = rank_split(A, order)
    assert len(pieces) == 8
    for j, (S, R) in enumerate(pieces):
        assert np.allclose(S + R, A)
        assert np.linalg.matrix_rank(S) <= 2 * j
    assert np.allclose(pieces[0][0], 0) and np.allclose(pieces[-1][1], 0)


@pytest.mark.parametrize("window", [(4, 9), (4, 10)])
def test_difference_estimates(window):
    params = ModelParams(14, 4, 50.0)
    w = Interval(*window, 14)
    reports = difference_entries_check(params, w, 3)
    reports += eigenvalue_order_check(params, w, 3, 2.0)
    reports += entropy_difference_check(params, w, 3, 2.0, 2.0)
    assert [r.check for r in reports] == [
        "difference_droplet_pairs", "difference_other_pairs", "difference_window_entries",
        "singular_value_envelope", "difference_quasinorm", "gamma_bound", "entropy_difference"]
    for r in reports:
        assert r.holds, r
        assert r.slack >= 0


def test_difference_blocks_hermitian_and_small():
    diffs = difference_blocks(ModelParams(14, 4, 50.0), Interval(4, 9, 14), 3)
    assert len(diffs) == 14
    for d in diffs:
        assert np.allclose(d.block, d.block.conj().T, atol=1e-14)
        assert np.abs(d.block).max() < 1e-2


def test_difference_requires_admissible_n():
    with pytest.raises(ValueError):
        difference_blocks(ModelParams(14, 4, 50.0), Interval(4, 9, 14), 2)


def test_main_theorem_chain_is_informational():
    reports = main_theorem_chain(0.05, 1 / 16, 1e3, 16, N=2)
    assert all(r.informational and not r.failed for r in reports)
    names = [r.check for r in reports]
    assert "chain_entropy_target" in names and "chain_small_constant" in names
    small = next(r for r in reports if r.check == "chain_small_constant")
    assert not small.holds
    target = next(r for r in reports if r.check == "chain_entropy_target")
    assert target.lhs == pytest.approx((2 / 2 - 1) * (math.log(16) - 1) / 16)


def test_main_theorem_chain_with_window():
    reports = main_theorem_chain(0.05, 1 / 16, 1e3, 16, N=3, window=(5, 9))
    names = {r.check for r in reports}
    assert {"chain_singular_value_envelope", "chain_difference_quasinorm",
            "chain_entropy_difference"} <= names
    with pytest.raises(ValueError):
        main_theorem_chain(0.1, 1 / 16, 1e3, 16)
