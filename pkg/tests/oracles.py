"""Independent closed forms and brute-force references used across tests.

Everything here is computed from first principles (symbolic integration,
O(n^2) geometry), never by calling the code under test, so disagreements
point at the implementation.
"""
from __future__ import annotations

import numpy as np


def fold_rows(r: int, t: np.ndarray) -> np.ndarray:
    """Jet rows of the fold lift: x = t^2/2, pure derivative z^(r) = t.

    Each descent integrates z^(l+1) * x' = z^(l+1) * t, so
    z^(l) = t^(2m+1) / (2m+1)!! with m = r - l.
    """
    rows = np.empty((t.size, r + 1))
    for level in range(r + 1):
        m = r - level
        denom = 1
        for j in range(1, 2 * m + 2, 2):
            denom *= j
        rows[:, level] = t ** (2 * m + 1) / denom
    return rows


def cubic_rows(r: int, t: np.ndarray) -> np.ndarray:
    """Jet rows of the cubic lift: x = t^3/3, z^(r) = t.

    Descents integrate against x' = t^2, so z^(l) = t^(3m+1) / (4*7*...*(3m+1))
    with m = r - l.
    """
    rows = np.empty((t.size, r + 1))
    for level in range(r + 1):
        m = r - level
        denom = 1
        for j in range(1, m + 1):
            denom *= 3 * j + 1
        rows[:, level] = t ** (3 * m + 1) / denom
    return rows


def double_fold_front(t: np.ndarray) -> np.ndarray:
    """y of the r=1 double fold: integral of s*(s^2 - 1) ds from 0."""
    return t ** 4 / 4 - t ** 2 / 2


def vertical_cusp_front(t: np.ndarray) -> np.ndarray:
    """y of the r=1 vertical cusp: integral of s^2 * s^2 ds from 0."""
    return t ** 5 / 5


def segments_cross(p1, p2, p3, p4, eps: float) -> bool:
    """Exact proper/colinear-overlap test for two closed segments."""
    p1, p2, p3, p4 = (np.asarray(p, dtype=float) for p in (p1, p2, p3, p4))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    d1 = cross(p3, p4, p1)
    d2 = cross(p3, p4, p2)
    d3 = cross(p1, p2, p3)
    d4 = cross(p1, p2, p4)
    la = np.hypot(*(p2 - p1)) + 1e-300
    lb = np.hypot(*(p4 - p3)) + 1e-300
    if d1 * d2 < -((eps * lb) ** 2) and d3 * d4 < -((eps * la) ** 2):
        return True
    # colinear overlap: project on the dominant axis
    if max(abs(d1), abs(d2), abs(d3), abs(d4)) <= eps * max(la, lb):
        ax = 0 if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]) else 1
        lo1, hi1 = sorted((p1[ax], p2[ax]))
        lo2, hi2 = sorted((p3[ax], p4[ax]))
        return min(hi1, hi2) - max(lo1, lo2) > eps
    return False


def brute_force_crossing_pairs(x: np.ndarray, y: np.ndarray,
                               tol: float = 1e-9) -> set[tuple[int, int]]:
    """All non-adjacent segment pairs of one polyline that intersect.

    Mirrors the documented embedding semantics: endpoint touches within
    tol of the shared scale are ignored, closed polylines skip the
    wrap-around adjacent pair.
    """
    pts = np.column_stack([x, y])
    n = len(pts) - 1
    span = max(float(np.ptp(x)), float(np.ptp(y)), 1.0)
    eps = tol * span
    closed = bool(np.hypot(*(pts[0] - pts[-1])) <= eps)
    out = set()
    for i in range(n):
        for j in range(i + 2, n):
            if closed and i == 0 and j == n - 1:
                continue
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1], eps):
                out.add((i, j))
    return out
