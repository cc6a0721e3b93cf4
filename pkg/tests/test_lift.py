from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holojet.jet import JetSignature, cartan_residual, prolong
from holojet.lift import (InitialDatum, MetasymplecticSample, PrincipalSample,
                          lift_curve, lift_isotropic_disc, lift_principal,
                          metasymplectic_pairing, metasymplectic_projection,
                          principal_projection)
from holojet.sections import PolySection, Polynomial

import oracles


def _fold_sample(r: int, nodes: int = 2001) -> PrincipalSample:
    t = np.linspace(-1.0, 1.0, nodes)
    sig = JetSignature(n=1, k=1, r=r)
    return PrincipalSample(sig, (t,), (t ** 2 / 2)[:, None], t[:, None].copy())


def _centered_init(sig: JetSignature, nodes: int) -> InitialDatum:
    return InitialDatum.zeros(sig, node=nodes // 2)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_lift_curve_fold_closed_form(r):
    g = _fold_sample(r)
    lift = lift_curve(g, _centered_init(g.signature, 2001))
    t = g.t_axis
    want = oracles.fold_rows(r, t)
    assert np.max(np.abs(lift.z[:, :, 0] - want)) <= 1e-8


def test_lift_curve_zero_data_gives_zero_section():
    t = np.linspace(0.0, 1.0, 101)
    sig = JetSignature(n=1, k=1, r=2)
    g = PrincipalSample(sig, (t,), t[:, None].copy(), np.zeros((101, 1)))
    lift = lift_curve(g)
    assert np.all(lift.z == 0.0)


def test_lift_curve_double_fold_closed_form():
    t = np.linspace(-1.5, 1.5, 2001)
    sig = JetSignature(n=1, k=1, r=1)
    g = PrincipalSample(sig, (t,), (t ** 3 / 3 - t)[:, None],
                        t[:, None].copy())
    lift = lift_curve(g, _centered_init(sig, 2001))
    assert np.max(np.abs(lift.z[:, 0, 0]
                         - oracles.double_fold_front(t))) <= 1e-8


def test_lift_curve_linear_in_fiber():
    g = _fold_sample(2, nodes=401)
    sig = g.signature
    lam = 2.5
    init = InitialDatum(np.full((3, 1), 0.2), node=200)
    init_scaled = InitialDatum(lam * init.z, node=200)
    base = lift_curve(g, init)
    scaled = lift_curve(
        PrincipalSample(sig, g.params, g.x, lam * g.zr), init_scaled)
    assert np.max(np.abs(scaled.z - lam * base.z)) <= 1e-12


def test_lift_curve_deterministic():
    g = _fold_sample(2, nodes=301)
    a = lift_curve(g, _centered_init(g.signature, 301))
    b = lift_curve(g, _centered_init(g.signature, 301))
    assert np.array_equal(a.z, b.z)


def test_lift_curve_rejects_bad_anchor():
    g = _fold_sample(1, nodes=101)
    with pytest.raises(ValueError):
        lift_curve(g, InitialDatum.zeros(g.signature, node=101))


@given(st.integers(1, 3),
       st.lists(st.sampled_from([-1.0, -0.5, 0.25, 1.0]), min_size=2,
                max_size=4))
def test_round_trip_polynomial(r, coeffs):
    # principal projection forgets everything except the top derivative;
    # lifting it back with the matching initial block must reproduce the jets
    sec = PolySection((Polynomial(
        1, {(d + 1,): c for d, c in enumerate(coeffs)}),))
    sig = JetSignature(n=1, k=1, r=r)
    jm = prolong(sec, sig, (np.linspace(-1, 1, 401),))
    g = principal_projection(jm)
    lift = lift_curve(g, InitialDatum(jm.z[0], node=0))
    # nodes at odd offsets from the anchor close with one trapezoid panel,
    # so quartic integrands pick up h^3/12 * f'' ~ 6e-7 at h = 5e-3
    assert np.max(np.abs(lift.z - jm.z)) <= 1e-6


def test_lift_principal_pleat_front_value():
    lat = np.linspace(-1.5, 1.5, 7)
    t = np.linspace(-1.5, 1.5, 301)
    sig = JetSignature(n=2, k=1, r=1)
    L, T = np.meshgrid(lat, t, indexing="ij")
    x = np.stack([L, T ** 3 / 3 - L * T], axis=-1)
    g = PrincipalSample(sig, (lat, t), x, T[..., None].copy())
    lift = lift_principal(g, InitialDatum.zeros(sig, h_shape=(7,),
                                                node=150))
    i = np.argmin(np.abs(lat - 1.0))
    j = np.argmin(np.abs(t - 1.0))
    # front value integral_0^1 s (s^2 - 1) ds = -1/4
    assert abs(lift.z[i, j, 0, 0] - (-0.25)) <= 1e-8
    assert cartan_residual(lift).max <= 1e-3


def test_lift_principal_graphical_matches_prolong():
    sec = PolySection((Polynomial(2, {(2, 1): 1.0, (0, 2): -0.5}),))
    sig = JetSignature(n=2, k=1, r=2)
    axes = (np.linspace(-1, 1, 41), np.linspace(-1, 1, 161))
    jm = prolong(sec, sig, axes)
    g = principal_projection(jm)
    mid = axes[1].size // 2
    init = InitialDatum(jm.z[:, mid], node=mid)
    lift = lift_principal(g, init)
    assert np.max(np.abs(lift.z - jm.z)) <= 1e-3


def test_metasymplectic_round_trip_disc():
    sec = PolySection((Polynomial(2, {(2, 1): 1.0, (1, 0): 0.5,
                                      (0, 3): -0.25}),))
    sig = JetSignature(n=2, k=1, r=2)
    axes = (np.linspace(-1, 1, 81), np.linspace(-1, 1, 81))
    jm = prolong(sec, sig, axes)
    g = metasymplectic_projection(jm)
    lift = lift_isotropic_disc(
        g, InitialDatum(jm.z[40, 40], node=0))
    assert np.max(np.abs(lift.z - jm.z)) <= 1e-3


def test_metasymplectic_1d_reduces_to_curve_lift():
    jm = prolong(PolySection((Polynomial(1, {(3,): 1.0}),)),
                 JetSignature(n=1, k=1, r=2), (np.linspace(-1, 1, 201),))
    g = metasymplectic_projection(jm)
    init = InitialDatum(jm.z[100], node=100)
    via_disc = lift_isotropic_disc(g, init)
    via_curve = lift_curve(principal_projection(jm), init)
    assert np.array_equal(via_disc.z, via_curve.z)


def test_isotropy_violation_rejected():
    sec = PolySection((Polynomial(2, {(2, 0): 1.0, (1, 1): -0.5}),))
    sig = JetSignature(n=2, k=1, r=2)
    axes = (np.linspace(-1, 1, 41), np.linspace(-1, 1, 41))
    jm = prolong(sec, sig, axes)
    g = metasymplectic_projection(jm)
    zr = g.zr.copy()
    zr[10, 30, 0, 0] += 0.1
    bad = MetasymplecticSample(sig, g.params, g.x, zr)
    with pytest.raises(ValueError, match="[Ii]sotrop"):
        lift_isotropic_disc(bad, InitialDatum(jm.z[20, 20], node=0))


def test_pairing_unit_contraction():
    sig = JetSignature(n=1, k=1, r=1)
    v0 = np.array([1.0])
    a0 = np.zeros((1, 1))
    v1 = np.zeros(1)
    a1 = np.ones((1, 1))
    out = metasymplectic_pairing(sig, v0, a0, v1, a1)
    assert out.shape == (1, 1)
    assert out[0, 0] == 1.0


def test_pairing_vertical_vectors_vanish():
    sig = JetSignature(n=2, k=1, r=2)
    rng = np.random.default_rng(3)
    a0 = rng.normal(size=(3, 1))
    a1 = rng.normal(size=(3, 1))
    out = metasymplectic_pairing(sig, np.zeros(2), a0, np.zeros(2), a1)
    assert np.all(out == 0.0)


@given(st.integers(0, 2 ** 31 - 1))
def test_pairing_antisymmetric_and_bilinear(seed):
    sig = JetSignature(n=2, k=2, r=2)
    rng = np.random.default_rng(seed)
    v0, v1 = rng.normal(size=(2, 2))
    a0, a1 = rng.normal(size=(2, 3, 2))
    lhs = metasymplectic_pairing(sig, v0, a0, v1, a1)
    rhs = metasymplectic_pairing(sig, v1, a1, v0, a0)
    assert np.allclose(lhs, -rhs, atol=1e-12)
    lam = 1.7
    scaled = metasymplectic_pairing(sig, lam * v0, lam * a0, v1, a1)
    assert np.allclose(scaled, lam * lhs, atol=1e-10)
