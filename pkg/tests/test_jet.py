from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holojet.jet import (Circle, Disc, FormalSection, Interval, JetSignature,
                         SampledJetMap, apply_point_symmetry, c0_distance,
                         cartan_residual, cr_norm, prolong)
from holojet.sections import (ConstSection, PolySection, Polynomial,
                              TrigSection, zero_section)

import oracles


def _poly1(coeffs: dict) -> PolySection:
    return PolySection((Polynomial(1, coeffs),))


def test_signature_block_size():
    assert JetSignature(n=2, k=3, r=2).block_size == 6
    assert JetSignature(n=1, k=1, r=4).indices == ((0,), (1,), (2,), (3,), (4,))


def test_prolong_cubic_polynomial():
    sec = _poly1({(3,): 1.0})
    jm = prolong(sec, JetSignature(n=1, k=1, r=2), (np.linspace(-1, 1, 21),))
    node = np.argmin(np.abs(jm.params[0] - 1.0))
    assert jm.x[node, 0] == 1.0
    assert np.allclose(jm.z[node, :, 0], [1.0, 3.0, 6.0], atol=1e-12)


def test_prolong_zero_section():
    jm = prolong(zero_section(2), JetSignature(n=1, k=2, r=3),
                 (np.linspace(0, 1, 11),))
    assert np.all(jm.z == 0.0)


def test_prolong_mixed_product():
    sec = PolySection((Polynomial(2, {(1, 1): 1.0}),))
    sig = JetSignature(n=2, k=1, r=2)
    jm = prolong(sec, sig, (np.linspace(-1, 1, 9), np.linspace(0, 1, 7)))
    assert np.allclose(jm.row((1, 1)), 1.0, atol=1e-12)
    assert np.allclose(jm.row((2, 0)), 0.0, atol=1e-12)


def test_prolong_callable_matches_analytic():
    # callables are differentiated with order-2 central stencils
    sig = JetSignature(n=1, k=1, r=2)
    errs = []
    for m in (201, 401):
        axis = np.linspace(0.0, np.pi, m)
        jm = prolong(lambda x: np.sin(x), sig, (axis,))
        assert np.array_equal(jm.row((0,))[:, 0], np.sin(axis))
        errs.append(max(
            np.max(np.abs(jm.row((1,))[:, 0] - np.cos(axis))),
            np.max(np.abs(jm.row((2,))[:, 0] + np.sin(axis)))))
    assert errs[0] < 1e-3
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_prolong_callable_rejects_coarse_grid():
    sig = JetSignature(n=1, k=1, r=2)
    with pytest.raises(ValueError):
        prolong(lambda x: x[..., :1] ** 2, sig, (np.linspace(0, 1, 2),))


def test_cartan_residual_refines_quadratically():
    sec = _poly1({(3,): 1.0})
    sig = JetSignature(n=1, k=1, r=2)
    res = []
    for m in (101, 201):
        jm = prolong(sec, sig, (np.linspace(-1, 1, m),))
        res.append(cartan_residual(jm).max)
    assert 3.5 <= res[0] / res[1] <= 4.5


def test_cartan_residual_constant_map_zero():
    sig = JetSignature(n=1, k=1, r=2)
    params = (np.linspace(0, 1, 11),)
    x = np.full((11, 1), 0.3)
    z = np.tile(np.array([[1.0], [2.0], [3.0]]), (11, 1, 1))
    jm = SampledJetMap(sig, params, x, z)
    assert cartan_residual(jm).max == 0.0


def test_cartan_residual_fold_calibrated():
    # fold at h = 1e-3: the frozen bound from the analytic model
    t = np.arange(-1.0, 1.0 + 1e-3, 1e-3)
    sig = JetSignature(n=1, k=1, r=1)
    x = (t ** 2 / 2)[:, None]
    z = np.stack([oracles.fold_rows(1, t)[:, 0], t], axis=1)[:, :, None]
    jm = SampledJetMap(sig, (t,), x, z)
    assert cartan_residual(jm).max <= 1e-5


def test_c0_distance_identity_and_shift():
    sig = JetSignature(n=1, k=1, r=1)
    sec = _poly1({(2,): 0.5})
    axis = np.linspace(-1, 1, 41)
    jm = prolong(sec, sig, (axis,))
    sigma = FormalSection.from_section(sec, sig, Interval(-1, 1))
    assert c0_distance(jm, sigma) <= 1e-12
    shifted = prolong(_poly1({(2,): 0.5, (0,): 0.25}), sig, (axis,))
    assert abs(c0_distance(shifted, sigma) - 0.25) <= 1e-12


def test_point_symmetry_identity():
    sig = JetSignature(n=1, k=1, r=2)
    jm = prolong(_poly1({(3,): 1.0}), sig, (np.linspace(-1, 1, 31),))
    out = apply_point_symmetry(jm, scale=1.0)
    assert np.array_equal(out.z, jm.z)
    assert np.array_equal(out.x, jm.x)


def test_point_symmetry_halves_fiber():
    sig = JetSignature(n=1, k=1, r=1)
    t = np.linspace(-1, 1, 2001)
    x = (t ** 2 / 2)[:, None]
    z = np.stack([t ** 3 / 3, t], axis=1)[:, :, None]
    jm = SampledJetMap(sig, (t,), x, z)
    out = apply_point_symmetry(jm, scale=0.5)
    assert np.array_equal(out.z, 0.5 * jm.z)
    assert np.array_equal(out.x, jm.x)


def test_point_symmetry_scale_round_trip():
    sig = JetSignature(n=1, k=2, r=2)
    sec = PolySection((Polynomial(1, {(2,): 1.0}),
                       Polynomial(1, {(1,): -0.5})))
    jm = prolong(sec, sig, (np.linspace(-1, 1, 31),))
    out = apply_point_symmetry(apply_point_symmetry(jm, scale=3.0),
                               scale=1.0 / 3.0)
    assert np.max(np.abs(out.z - jm.z)) <= 1e-12


def test_point_symmetry_shift_adds_jets():
    sig = JetSignature(n=1, k=1, r=2)
    jm = prolong(zero_section(1), sig, (np.linspace(0, 1, 11),))
    shift = _poly1({(2,): 1.0})
    out = apply_point_symmetry(jm, shift=shift)
    want = prolong(shift, sig, jm.params)
    assert np.allclose(out.z, want.z, atol=1e-12)


def test_point_symmetry_reparam_chain_rule():
    # phi(x) = 2x applied to j^1(x^2): the image jets are those of (X/2)^2
    sig = JetSignature(n=1, k=1, r=1)
    jm = prolong(_poly1({(2,): 1.0}), sig, (np.linspace(-1, 1, 41),))
    phi = _poly1({(1,): 2.0})
    out = apply_point_symmetry(jm, reparam=phi)
    want = prolong(_poly1({(2,): 0.25}), sig, (out.x[:, 0],))
    assert np.max(np.abs(out.z - want.z)) <= 1e-10


def test_point_symmetry_zero_scale_rejected():
    sig = JetSignature(n=1, k=1, r=1)
    jm = prolong(zero_section(1), sig, (np.linspace(0, 1, 11),))
    with pytest.raises(ValueError):
        apply_point_symmetry(jm, scale=0.0)


def test_formal_section_shape_guard():
    sig = JetSignature(n=1, k=1, r=1)
    bad = FormalSection(sig, Interval(0, 1),
                        lambda x: np.zeros(x.shape[:-1] + (3, 1)))
    with pytest.raises(ValueError):
        bad.block(np.zeros((5, 1)))


def test_cr_norm_examples():
    sig1 = JetSignature(n=1, k=1, r=1)
    axis = np.linspace(0, 1, 201)
    assert cr_norm(prolong(zero_section(1), sig1, (axis,))) == 0.0
    eps = 0.37
    lin = prolong(_poly1({(1,): eps}), sig1, (axis,))
    assert abs(cr_norm(lin) - eps * np.sqrt(2.0)) <= 1e-12
    sig2 = JetSignature(n=1, k=1, r=2)
    sine = prolong(TrigSection(1, (((1.0, (1.0,), 0.0),),)), sig2,
                   (np.linspace(0, 2 * np.pi, 4001),))
    assert abs(cr_norm(sine) - np.sqrt(2.0)) <= 1e-6


def test_domains_contain():
    assert Interval(0, 1).contains(np.array([[0.5]])).all()
    assert not Interval(0, 1).contains(np.array([[1.5]])).any()
    assert Circle(2 * np.pi).contains(np.array([[17.0]])).all()
    assert Disc(1.0).contains(np.array([[0.5, 0.5]])).all()
    assert not Disc(1.0).contains(np.array([[1.0, 1.0]])).any()


@given(st.integers(2, 5), st.integers(1, 3))
def test_prolonged_polynomials_are_integral(deg, r):
    # holonomic lifts satisfy the structure equations at O(h^2)
    sec = _poly1({(deg,): 1.0, (1,): -0.3})
    sig = JetSignature(n=1, k=1, r=r)
    coarse = cartan_residual(
        prolong(sec, sig, (np.linspace(-1, 1, 101),))).max
    fine = cartan_residual(
        prolong(sec, sig, (np.linspace(-1, 1, 201),))).max
    if coarse > 1e-12:
        assert 3.5 <= coarse / fine <= 4.5
