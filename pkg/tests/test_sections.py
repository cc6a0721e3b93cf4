from __future__ import annotations

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from holojet.sections import (CombinedSection, ConstSection, PolySection,
                              Polynomial, TaylorSection, TrigSection,
                              combine, zero_section)


def test_polynomial_eval_and_derivative_1d():
    p = Polynomial(1, {(0,): 1.0, (2,): -3.0, (5,): 0.5})
    x = np.linspace(-1, 1, 7)[:, None]
    want = 1.0 - 3.0 * x[:, 0] ** 2 + 0.5 * x[:, 0] ** 5
    assert np.allclose(p(x), want, atol=1e-14)
    d2 = p.derivative((2,))
    assert np.allclose(d2(x), -6.0 + 10.0 * x[:, 0] ** 3, atol=1e-13)


def test_polynomial_derivative_matches_sympy_2d():
    coeffs = {(0, 0): 0.3, (2, 1): -1.25, (1, 3): 0.7, (4, 0): 0.1}
    p = Polynomial(2, coeffs)
    u, v = sp.symbols("u v")
    expr = sum(c * u ** i * v ** j for (i, j), c in coeffs.items())
    for index in [(1, 0), (0, 2), (2, 1), (1, 3)]:
        dp = p.derivative(index)
        dd = sp.diff(expr, u, index[0], v, index[1])
        fn = sp.lambdify((u, v), dd, "numpy")
        pts = np.array([[0.3, -0.7], [1.1, 0.4], [-0.5, -0.2]])
        assert np.allclose(dp(pts), fn(pts[:, 0], pts[:, 1]), atol=1e-12)


def test_polynomial_rejects_mismatched_exponent():
    with pytest.raises(ValueError):
        Polynomial(1, {(): 1.0})
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1.0})


def test_poly_section_jets():
    sec = PolySection((Polynomial(1, {(3,): 2.0}),
                       Polynomial(1, {(1,): 1.0})))
    assert sec.k == 2
    x = np.array([[0.5]])
    assert np.allclose(sec.jet(x, (1,)), [[1.5, 1.0]], atol=1e-14)
    assert np.allclose(sec.jet(x, (3,)), [[12.0, 0.0]], atol=1e-14)


def test_trig_section_closed_form_jets():
    amp, w, ph = 0.8, 3.0, 0.4
    sec = TrigSection(1, (((amp, (w,), ph),),))
    x = np.linspace(0, 2, 31)[:, None]
    assert np.allclose(sec.jet(x, (0,))[:, 0],
                       amp * np.cos(w * x[:, 0] + ph), atol=1e-14)
    assert np.allclose(sec.jet(x, (2,))[:, 0],
                       -amp * w * w * np.cos(w * x[:, 0] + ph), atol=1e-12)


@given(st.floats(0.05, 2.0), st.floats(0.5, 4.0), st.floats(0.0, 6.0))
def test_trig_jet_equals_numeric_derivative(amp, w, ph):
    sec = TrigSection(1, (((amp, (w,), ph),),))
    x0 = 0.37
    h = 1e-5
    pts = np.array([[x0 - h], [x0 + h]])
    numeric = (sec.jet(pts, (0,))[1, 0] - sec.jet(pts, (0,))[0, 0]) / (2 * h)
    exact = sec.jet(np.array([[x0]]), (1,))[0, 0]
    assert abs(numeric - exact) < 5e-5 * max(1.0, amp * w ** 3)


def test_trig_section_2d_waves():
    sec = TrigSection(2, (((1.0, (2.0, 1.0), 0.0),),))
    x = np.array([[0.3, 0.9]])
    want = -2.0 * np.sin(2.0 * 0.3 + 0.9)
    assert np.allclose(sec.jet(x, (1, 0)), [[want]], atol=1e-14)


def test_const_and_zero_sections():
    z = zero_section(3)
    assert z.k == 3
    x = np.zeros((4, 1))
    assert np.all(z.jet(x, (0,)) == 0.0)
    c = ConstSection((1.0, -2.0))
    assert np.allclose(c.jet(x, (0,)), [[1.0, -2.0]] * 4)
    assert np.all(c.jet(x, (1,)) == 0.0)


def test_taylor_section_reproduces_block():
    # rows of the jet at the center must be the prescribed block
    block = np.array([[0.3], [-1.0], [2.0]])
    sec = TaylorSection(center=(0.5,), indices=((0,), (1,), (2,)),
                        block=block)
    x0 = np.array([[0.5]])
    for i in range(3):
        assert np.allclose(sec.jet(x0, (i,)), block[i], atol=1e-14)
    # away from the center the value follows the Taylor polynomial
    x = np.array([[0.9]])
    want = 0.3 - 1.0 * 0.4 + 0.5 * 2.0 * 0.4 ** 2
    assert np.allclose(sec.jet(x, (0,)), [[want]], atol=1e-13)


def test_combined_section_weights_and_shift():
    a = PolySection((Polynomial(1, {(1,): 1.0}),))
    b = PolySection((Polynomial(1, {(2,): 1.0}),))
    c = combine((a, b), (2.0, -1.0), shift=(0.25,))
    x = np.array([[0.5]])
    # order 0 carries the shift, higher orders are plain combinations
    assert np.allclose(c.jet(x, (0,)), [[2 * 0.5 - 0.25 + 0.25]], atol=1e-14)
    assert np.allclose(c.jet(x, (1,)), [[2.0 - 1.0]], atol=1e-14)
    assert np.allclose(c.jet(x, (2,)), [[-2.0]], atol=1e-14)


def test_combine_rejects_k_mismatch():
    a = zero_section(1)
    b = zero_section(2)
    with pytest.raises(ValueError):
        combine((a, b), (1.0, 1.0))
