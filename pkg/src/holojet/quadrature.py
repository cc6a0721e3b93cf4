"""Quadrature and finite differences on uniform grids.

All lifting is done by cumulative quadrature, all verification by finite
differences, so the exact stencils are fixed here once:

* cumulative integrals: composite Simpson over node pairs, with a single
  trapezoid panel closing the run at odd offsets from the anchor;
* derivatives used to synthesize lifts: order-4 central stencil inside,
  order-3 one-sided at the boundary (exact on cubics);
* derivatives used to check lifts: order-2 central stencil, interior only,
  so residuals shrink like h^2 under refinement.
"""
from __future__ import annotations

import numpy as np


def cum_simpson(values: np.ndarray, h: float, anchor: int = 0) -> np.ndarray:
    """Cumulative integral along the last axis, zero at index `anchor`.

    Node pairs are integrated with Simpson's rule starting at the anchor;
    an odd offset gets the last full pair plus one trapezoid panel.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[-1]
    if not 0 <= anchor < m:
        raise ValueError(f"anchor {anchor} outside 0..{m - 1}")
    out = np.empty_like(values)
    out[..., anchor] = 0.0
    if anchor < m - 1:
        out[..., anchor:] = _cum_simpson_forward(values[..., anchor:], h)
    if anchor > 0:
        out[..., :anchor + 1] = -_cum_simpson_forward(
            values[..., anchor::-1], h)[..., ::-1]
    return out


def _cum_simpson_forward(g: np.ndarray, h: float) -> np.ndarray:
    m = g.shape[-1]
    out = np.zeros_like(g)
    if m == 1:
        return out
    npairs = (m - 1) // 2
    if npairs:
        pair = (h / 3.0) * (g[..., 0:2 * npairs - 1:2]
                            + 4.0 * g[..., 1:2 * npairs:2]
                            + g[..., 2:2 * npairs + 1:2])
        out[..., 2:2 * npairs + 1:2] = np.cumsum(pair, axis=-1)
    trap = (h / 2.0) * (g[..., 0:m - 1:2] + g[..., 1:m:2])
    out[..., 1::2] = out[..., 0:m - 1:2] + trap
    return out


def fd_derivative(values: np.ndarray, h: float, axis: int = -1) -> np.ndarray:
    """Derivative along `axis`: order-4 central inside, order-3 one-sided at ends.

    Exact on cubic polynomials, including the boundary rows.
    """
    g = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    m = g.shape[-1]
    if m < 4:
        raise ValueError(f"need at least 4 nodes along the axis, got {m}")
    out = np.empty_like(g)
    out[..., 2:-2] = (g[..., :-4] - 8.0 * g[..., 1:-3]
                      + 8.0 * g[..., 3:-1] - g[..., 4:]) / (12.0 * h)
    out[..., 0] = (-11.0 * g[..., 0] + 18.0 * g[..., 1]
                   - 9.0 * g[..., 2] + 2.0 * g[..., 3]) / (6.0 * h)
    out[..., 1] = (-2.0 * g[..., 0] - 3.0 * g[..., 1]
                   + 6.0 * g[..., 2] - g[..., 3]) / (6.0 * h)
    out[..., -2] = (2.0 * g[..., -1] + 3.0 * g[..., -2]
                    - 6.0 * g[..., -3] + g[..., -4]) / (6.0 * h)
    out[..., -1] = (11.0 * g[..., -1] - 18.0 * g[..., -2]
                    + 9.0 * g[..., -3] - 2.0 * g[..., -4]) / (6.0 * h)
    return np.moveaxis(out, -1, axis)


def central_difference(values: np.ndarray, h: float, axis: int = -1) -> np.ndarray:
    """Order-2 central derivative at interior nodes only (length shrinks by 2)."""
    g = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if g.shape[-1] < 3:
        raise ValueError("need at least 3 nodes for a central difference")
    out = (g[..., 2:] - g[..., :-2]) / (2.0 * h)
    return np.moveaxis(out, -1, axis)
