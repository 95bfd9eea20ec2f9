import math

import numpy as np
import pytest

from xxzring.config import ModelParams, cluster_count, droplets
from xxzring.entanglement import ising_limit_vector
from xxzring.fourier import fiber_operator, fiber_space
from xxzring.spectral import (BandViolation, EnergyBand, band_eigenpairs, cluster_projection,
                              decay_rate, droplet_band_states, load_band_vectors,
                              orbit_modulus_spread, sector_residual, verify_ct_eigenfunction,
                              verify_resolvent_decay)


@pytest.mark.parametrize("L,N,delta", [(8, 3, 3.0), (10, 3, 5.0), (9, 4, 10.0), (12, 5, 5.0)])
def test_band_states(L, N, delta):
    params = ModelParams(L, N, delta)
    spec = droplet_band_states(params)
    assert [s.gamma for s in spec] == list(range(L))
    E = spec.energies()
    assert np.all(E >= 1 - 1 / delta - 1e-9) and np.all(E <= 1 + 1e-9)
    assert sector_residual(params, spec) < 1e-12
    # plane-wave structure: moduli are constant along each orbit
    assert orbit_modulus_spread(spec) < 1e-12
    index = {x: i for i, x in enumerate(spec.space.basis)}
    drop = sorted(index[c] for c in droplets(L, N))
    for s in spec:
        assert abs(np.linalg.norm(s.vector) - 1) < 1e-12
        k = next(i for i in drop if abs(s.vector[i]) >= np.abs(s.vector[drop]).max() * (1 - 1e-10))
        assert abs(s.vector[k].imag) < 1e-14 and s.vector[k].real > 0


def test_band_energies_particle_hole_symmetric():
    a = droplet_band_states(ModelParams(10, 3, 5.0)).energies()
    b = droplet_band_states(ModelParams(10, 7, 5.0)).energies()
    assert np.allclose(np.sort(a), np.sort(b), atol=1e-12)


def test_band_state_zero_momentum_is_positive():
    spec = droplet_band_states(ModelParams(10, 3, 5.0))
    v = spec.states[0].vector
    assert np.max(np.abs(v.imag)) < 1e-12 and np.all(v.real > -1e-12)


def test_band_rejects_small_delta():
    with pytest.raises(ValueError):
        droplet_band_states(ModelParams(8, 3, 2.0))
    with pytest.raises(ValueError):
        droplet_band_states(ModelParams(8, 1, 5.0))


def test_band_violation_raised_when_window_fails(monkeypatch):
    # a negative tolerance empties the window in every fiber
    import xxzring.spectral as spectral
    monkeypatch.setattr(spectral, "BAND_TOL", -1.0)
    with pytest.raises(BandViolation):
        droplet_band_states(ModelParams(8, 3, 5.0))


def test_approaches_ising_limit():
    L, N = 10, 3
    overlaps = []
    for delta in (10.0, 100.0, 1000.0):
        spec = droplet_band_states(ModelParams(L, N, delta))
        overlaps.append(min(abs(np.vdot(ising_limit_vector(L, N, s.gamma), s.vector)) for s in spec))
    assert overlaps == sorted(overlaps) and overlaps[-1] > 1 - 1e-5


def test_save_and_load(tmp_path):
    spec = droplet_band_states(ModelParams(8, 3, 5.0))
    spec.save(tmp_path)
    back = load_band_vectors(tmp_path)
    assert len(back) == 8
    for s, (g, E, v) in zip(spec, back):
        assert g == s.gamma and E == s.energy
        assert np.array_equal(v, s.vector)


def test_decay_rate():
    assert decay_rate(1, 0.5, 5.0) == pytest.approx(math.log(1 + 0.5 * 4 / 4))
    with pytest.raises(ValueError):
        decay_rate(1, 1.5, 5.0)
    with pytest.raises(ValueError):
        decay_rate(1, 0.5, 1.0)


def test_energy_band():
    band = EnergyBand(1, 0.5, 5.0)
    assert band.interval == pytest.approx((0.8, 1.2))
    assert band.contains(1.0) and not band.contains(1.3)
    assert EnergyBand.droplet_band(5.0) == pytest.approx((0.8, 1.6))


def test_cluster_projection():
    space = fiber_space(10, 3)
    for g in (0, 5):
        P = cluster_projection(space, g, 1)
        members = space.fibers[g].members
        assert np.array_equal(np.diag(P), [float(cluster_count(r) <= 1) for r in members])
        assert np.allclose(P @ P, P)
    assert np.trace(cluster_projection(space, 0, 1)) == 1


def test_band_eigenpairs_agree_with_band_states():
    params = ModelParams(10, 3, 10.0)
    pairs = band_eigenpairs(params, EnergyBand(1, 0.5, 10.0))
    assert sorted(p.energy for p in pairs) == pytest.approx(sorted(droplet_band_states(params).energies()))


@pytest.mark.parametrize("delta", [5.0, 10.0, 50.0])
def test_ct_eigenfunction_bound(delta):
    r = verify_ct_eigenfunction(ModelParams(12, 3, delta))
    assert r.holds and r.details["violations"] == []
    assert r.params["K"] == 1
    # prefactor is 2 (K + 1)^2 / delta_param / sqrt(L) = 16 / sqrt(L)
    assert r.rhs <= 16 / math.sqrt(12) + 1e-12


def test_ct_eigenfunction_two_clusters():
    r = verify_ct_eigenfunction(ModelParams(10, 3, 20.0), K=2, delta_param=0.5)
    assert r.holds


def test_ct_needs_delta_above_three():
    with pytest.raises(ValueError):
        verify_ct_eigenfunction(ModelParams(10, 3, 2.5))


@pytest.mark.parametrize("gamma", [0, 3, 5])
def test_resolvent_decay(gamma):
    params = ModelParams(10, 3, 10.0)
    E = droplet_band_states(params).states[gamma].energy
    decay, lower = verify_resolvent_decay(params, gamma, 1, 0.5, E)
    assert decay.holds and decay.details["violations"] == 0
    assert lower.holds
    assert lower.lhs == pytest.approx(0.5 * 9 / 20)


def test_resolvent_matches_direct_inverse():
    # kappa is the inverse norm of W^{1/2} G W^{1/2}; check against a plain inverse
    params = ModelParams(8, 3, 10.0)
    space = fiber_space(8, 3)
    op = fiber_operator(params, 0, space)
    E = 0.95
    P = cluster_projection(space, 0, 1)
    G = np.linalg.inv(op.hermitized + 2 * 0.9 * P - E * np.eye(len(op.basis.members)))
    w = np.sqrt(op.potential)
    kappa = 1 / np.linalg.norm(w[:, None] * G * w[None, :], 2)
    decay, _ = verify_resolvent_decay(params, 0, 1, 0.5, E)
    assert decay.details["kappa"] == pytest.approx(kappa, rel=1e-10)
