from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holojet.quadrature import central_difference, cum_simpson, fd_derivative


def _poly_and_antideriv(coeffs, t, anchor_t):
    p = np.polynomial.Polynomial(coeffs)
    q = p.integ()
    return p(t), q(t) - q(anchor_t)


@pytest.mark.parametrize("m", [5, 6, 11, 64])
@pytest.mark.parametrize("anchor", [0, 2, -1])
def test_cum_simpson_cubics(m, anchor):
    # even offsets from the anchor integrate in full Simpson pairs (exact
    # on cubics); odd offsets end with one trapezoid panel, error h^3/12 f''
    t = np.linspace(-1.0, 2.0, m)
    h = float(t[1] - t[0])
    a = anchor % m
    vals, want = _poly_and_antideriv([0.3, -1.0, 2.0, 0.7], t, t[a])
    got = cum_simpson(vals, h, anchor=a)
    err = np.abs(got - want)
    even = (np.arange(m) - a) % 2 == 0
    assert np.max(err[even]) < 1e-12
    fpp_max = np.max(np.abs(4.0 + 4.2 * t))
    assert np.max(err[~even]) <= h ** 3 / 12.0 * fpp_max + 1e-12


def test_cum_simpson_anchor_is_zero():
    t = np.linspace(0, 1, 7)
    out = cum_simpson(np.sin(t), float(t[1]), anchor=3)
    assert out[3] == 0.0


def test_cum_simpson_bad_anchor():
    with pytest.raises(ValueError):
        cum_simpson(np.zeros(5), 0.1, anchor=5)


def test_cum_simpson_fourth_order_interior():
    errs = []
    for m in (65, 129):
        t = np.linspace(0.0, 1.0, m)
        got = cum_simpson(np.exp(t), float(t[1] - t[0]))
        errs.append(np.max(np.abs(got[::2] - (np.exp(t[::2]) - 1.0))))
    assert errs[0] / errs[1] > 12.0  # h^4 pair panels: ratio 16 up to noise


def test_fd_derivative_exact_on_cubics():
    t = np.linspace(-2.0, 1.0, 9)
    vals = 2.0 * t ** 3 - t + 0.25
    want = 6.0 * t ** 2 - 1.0
    got = fd_derivative(vals, float(t[1] - t[0]))
    assert np.max(np.abs(got - want)) < 1e-12


def test_fd_derivative_needs_four_nodes():
    with pytest.raises(ValueError):
        fd_derivative(np.zeros(3), 0.1)


def test_central_difference_interior_quadratic():
    t = np.linspace(0.0, 1.0, 21)
    got = central_difference(t ** 2, float(t[1] - t[0]))
    assert np.allclose(got, 2.0 * t[1:-1], atol=1e-13)


def test_central_difference_second_order():
    errs = []
    for m in (41, 81):
        t = np.linspace(0.0, np.pi, m)
        got = central_difference(np.sin(t), float(t[1] - t[0]))
        errs.append(np.max(np.abs(got - np.cos(t[1:-1]))))
    assert 3.5 < errs[0] / errs[1] < 4.5


@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4),
       st.integers(7, 41))
def test_cum_simpson_linear_in_data(coeffs, m):
    t = np.linspace(0.0, 1.0, m)
    h = float(t[1] - t[0])
    f = np.polynomial.Polynomial(coeffs)(t)
    g = np.cos(t)
    lhs = cum_simpson(2.0 * f + g, h)
    rhs = 2.0 * cum_simpson(f, h) + cum_simpson(g, h)
    assert np.max(np.abs(lhs - rhs)) < 1e-12
