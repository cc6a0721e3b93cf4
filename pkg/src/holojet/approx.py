"""Holonomic approximation: pushing, framing, and jet interpolation.

The interpolation pipeline realises a formal homotopy between two sections
as an integral multi-section: the target is pushed away from the start in
the first fiber direction, framed, multiplied by a zig-zag bump running in
the collar of the region, and returned by a second, smaller bump.  All jets
are assembled by the product rule from closed forms, so the outputs are
integral up to roundoff; every advertised bound is measured on the result,
never asserted.

Derivative bounds are quoted in band-chart units: row I of a jet block is
weighted by w^i where w is the half-width of the collar band and i the
order along the bump direction.  Raw-unit bounds degrade like 1/w^r and
are the caller's concern; the circle driver compensates by raising the
zig-zag count until the raw defect it measures drops below the request.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from math import comb

import numpy as np
from numpy.polynomial import Polynomial

from .front import MultiSection
from .jet import (Circle, FormalSection, Interval, JetSignature,
                  SampledJetMap, c0_distance)
from .multiindex import (MultiIndex, bump_level, jet_indices, k1_constant,
                         k2_constant)
from .sections import CombinedSection, SectionLike
from .verify import check_embedding
from .zigzag import ZigZagBump, build_bump, build_swallowtail_family


@dataclass(frozen=True)
class AnnulusRegion:
    """Collar of the unit disc: S^{n-1} x [1-delta, 1] in chart coordinates.

    For n=1 the collar has two components, one at each end of [-1, 1]; for
    n=2 the model chart is [-1, 1]^2 with the bump direction last, so the
    collar is the single band x_2 in [1-delta, 1].
    """

    n: int
    delta: float

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("only 1- and 2-dimensional bases are supported")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"collar width delta={self.delta} outside (0, 1)")

    @property
    def outer_radius(self) -> float:
        return 1.0

    @property
    def inner_radius(self) -> float:
        return 1.0 - self.delta

    def collars(self) -> tuple[tuple[float, float], ...]:
        """Collar bands along the bump direction, ordered left to right."""
        if self.n == 1:
            return ((-1.0, -1.0 + self.delta), (1.0 - self.delta, 1.0))
        return ((1.0 - self.delta, 1.0),)


def push(s1: SectionLike, eps: float) -> CombinedSection:
    """Shift a section by 2*eps in the first fiber direction (order 0 only)."""
    if eps <= 0.0:
        raise ValueError("push distance eps must be positive")
    shift = (2.0 * eps,) + (0.0,) * (s1.k - 1)
    return CombinedSection((s1,), (1.0,), shift)


@dataclass(frozen=True)
class Framing:
    """Fiberwise frame whose first column is a nowhere-small section.

    The matrix has columns (s(x), e_2, ..., e_k); its determinant is the
    first component of s, so the frame is invertible exactly where the
    section stays away from zero.
    """

    section: SectionLike
    eps: float

    @property
    def k(self) -> int:
        return self.section.k

    def matrix(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        vals = self.section.jet(x, (0,) * x.shape[-1])
        k = self.k
        out = np.zeros(vals.shape[:-1] + (k, k))
        out[..., :, 0] = vals
        for j in range(1, k):
            out[..., j, j] = 1.0
        return out

    def determinant(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.section.jet(x, (0,) * x.shape[-1])[..., 0]


def framing(s: SectionLike, eps: float,
            points: np.ndarray | None = None) -> Framing:
    """Frame a section whose first component exceeds eps in magnitude.

    When sample points are supplied the lower bound is validated there;
    a violation is a degenerate framing and raises.
    """
    if eps <= 0.0:
        raise ValueError("framing margin eps must be positive")
    fr = Framing(s, eps)
    if points is not None:
        det = fr.determinant(points)
        bad = np.abs(det) <= eps
        if np.any(bad):
            where = tuple(float(v) for v in
                          np.atleast_1d(np.asarray(points)[bad][0]))
            raise ValueError(
                f"degenerate framing: |y_1| = {float(np.abs(det)[bad][0]):.3g}"
                f" <= eps = {eps:.3g} at x = {where}")
    return fr


def multiply(a: SectionLike, b: MultiSection,
             domain: Interval | None = None) -> MultiSection:
    """Multiply a section into a scalar bump: t -> (x_b(t), y_b(t) * a(x_b(t))).

    The bump b must be scalar-valued over a 1D base; its base points are
    fed through a, so the product is a multi-section over the same
    parameter with a's fiber dimension.  If a domain is given, base points
    of b must stay inside it.
    """
    if b.k != 1:
        raise ValueError("the bump factor must be scalar-valued")
    if domain is not None:
        inside = domain.contains(b.x[:, None])
        if not np.all(inside):
            raise ValueError(
                f"bump base point x = {float(b.x[~inside][0]):.6g} at "
                f"t = {float(b.t[~inside][0]):.6g} escapes the domain")
    vals = a.jet(b.x[:, None], (0,))
    return MultiSection(b.t, b.x, b.y[:, 0:1] * vals, b.cusps, b.membranes)


# ---------------------------------------------------------------------------
# staged assembly helpers

@dataclass(frozen=True)
class _Piece:
    """One x-monotone-interval of the assembly, with exact jets of f."""

    x: np.ndarray                 # (P,) base positions along the bump axis
    z: np.ndarray                 # (..., P, #indices, k) jets of f
    role: str                     # "push", "return", or "inner"
    cusp_fi: tuple[float, ...] = ()                    # fractional node index
    membrane_fi: tuple[tuple[float, float], ...] = ()
    s0_block: np.ndarray | None = None
    s1_block: np.ndarray | None = None


def _mark_fi(values, a: float, b: float, segments: int) -> tuple[float, ...]:
    return tuple((v - a) / (b - a) * segments for v in values)


def _collar_step(bump: ZigZagBump) -> float:
    """Per-node base step inside a bump collar (the junction speed)."""
    a, b = bump.interval
    cn = round((bump.seams[0] - a) / bump.lift.spacings[0])
    return 0.5 * (b - a) / cn


_UNIT_BOUND_CACHE: dict[int, dict[int, float]] = {}


def _unit_bounds(r: int) -> dict[int, float]:
    """Measured per-row sup bounds of the one-level unit bump, row 0 = 1.

    Bounds scale like 1/N in the level count and like 1/w^i under an
    affine squeeze to width w, which makes them the currency for all level
    selection below.
    """
    if r not in _UNIT_BOUND_CACHE:
        probe = build_bump(1, 0.0, 1.0, 0.0, 1.0, r)
        _UNIT_BOUND_CACHE[r] = {0: 1.0, **probe.measured_bounds}
    return _UNIT_BOUND_CACHE[r]


def _return_levels(r: int) -> int:
    """Zig-zag count keeping the returning stage's chart rows below its height.

    The smallest N dominating every unit-probe row keeps each derivative
    of the return below the 2*eps shift it transports.
    """
    worst = max(_unit_bounds(r).values())
    return max(2, math.ceil(worst - 1e-9))


def _chart_weights(indices: tuple[MultiIndex, ...], w_band: float) -> np.ndarray:
    # rows are weighted along the bump direction (the last base axis) only
    return np.array([w_band ** I[-1] for I in indices])


def _block_norms(block: np.ndarray, weights: np.ndarray) -> np.ndarray:
    scaled = block * weights[:, None]
    return np.sqrt(np.sum(scaled * scaled, axis=(-2, -1)))


def _jet_block(section: SectionLike, x: np.ndarray,
               indices: tuple[MultiIndex, ...]) -> np.ndarray:
    return np.stack([section.jet(x, I) for I in indices], axis=-2)


def _stage_rows(s0, s1, eps, bump, indices, role, lateral=None,
                shift=0.0) -> _Piece:
    """Exact jets of a staged section along one collar bump (base n = 1 or 2).

    role "push": f = s0 + rho (s1 - s0 + 2 eps e1), expanded by the Leibniz
    rule along the bump direction; role "return": f = s1 + 2 eps (1 - w) e1.
    Bump rows vanish identically on the collars, so boundary jets agree
    with the prescribed section bitwise.  `shift` translates a canonical
    bump along the base; its rows are translation invariant.
    """
    xb = bump.lift.x[:, 0] + shift
    rows = bump.lift.z[:, :, 0]                     # (P, r+1)
    if lateral is None:
        pts = xb[:, None]
    else:
        pts = np.stack(np.broadcast_arrays(lateral[:, None], xb[None, :]),
                       axis=-1)
    s0b = _jet_block(s0, pts, indices)
    s1b = _jet_block(s1, pts, indices)
    pos = {I: i for i, I in enumerate(indices)}
    if role == "push":
        D = s1b - s0b
        D[..., 0, 0] += 2.0 * eps
        z = s0b.copy()
        for row, I in enumerate(indices):
            i2 = I[-1]
            for j in range(i2 + 1):
                low = pos[I[:-1] + (i2 - j,)]
                z[..., row, :] += comb(i2, j) * rows[:, j, None] * D[..., low, :]
    else:
        z = s1b.copy()
        z[..., 0, 0] += 2.0 * eps
        for row, I in enumerate(indices):
            if any(I[:-1]):
                continue
            z[..., row, 0] -= 2.0 * eps * rows[:, I[-1]]
    a, b = bump.interval
    m = xb.size - 1
    mem = tuple(zip(_mark_fi([lo for lo, _ in bump.membranes], a, b, m),
                    _mark_fi([hi for _, hi in bump.membranes], a, b, m)))
    return _Piece(xb, z, role, _mark_fi(bump.front.cusps, a, b, m), mem,
                  s0b, s1b)


def _band_pieces(s0, s1, eps, band, boundary_side, r, levels, return_levels,
                 nodes_per_period, indices, lateral=None):
    """The push and return bumps filling one collar band, ordered by x.

    boundary_side +1 puts the s0 boundary at the right end of the band,
    -1 at the left end; the pushing stage always occupies the boundary half.
    """
    lo, hi = band
    mid = 0.5 * (lo + hi)
    if boundary_side < 0:
        bump_a = build_bump(levels, lo, mid, 0.0, 1.0, r, nodes_per_period)
        bump_b = build_bump(return_levels, mid, hi, 0.0, 1.0, r,
                            nodes_per_period)
        pieces = [_stage_rows(s0, s1, eps, bump_a, indices, "push", lateral),
                  _stage_rows(s0, s1, eps, bump_b, indices, "return", lateral)]
    else:
        bump_b = build_bump(return_levels, lo, mid, 1.0, 0.0, r,
                            nodes_per_period)
        bump_a = build_bump(levels, mid, hi, 1.0, 0.0, r, nodes_per_period)
        pieces = [_stage_rows(s0, s1, eps, bump_b, indices, "return", lateral),
                  _stage_rows(s0, s1, eps, bump_a, indices, "push", lateral)]
    return pieces, _collar_step(bump_a)


def _assemble(pieces, t_lo, t_hi, axis):
    """Concatenate piece arrays along a uniform artificial parameter axis.

    Each entry is (piece, drop_leading, drop_trailing); junction nodes are
    dropped from the piece that does not own them.  Cusp and membrane
    marks ride along as fractional node indices and come back as parameter
    values on the assembled axis.
    """
    xs, zs = [], []
    cusps, mem_lo, mem_hi = [], [], []
    offset = 0
    for piece, d_lead, d_tail in pieces:
        n_p = piece.x.size
        stop = n_p - d_tail
        xs.append(piece.x[d_lead:stop])
        zs.append(np.take(piece.z, np.arange(d_lead, stop), axis=axis))
        base = offset - d_lead
        cusps.extend(base + fi for fi in piece.cusp_fi)
        for lo_fi, hi_fi in piece.membrane_fi:
            mem_lo.append(base + lo_fi)
            mem_hi.append(base + hi_fi)
        offset += stop - d_lead
    x_all = np.concatenate(xs)
    z_all = np.concatenate(zs, axis=axis)
    t = np.linspace(t_lo, t_hi, offset)
    h = (t_hi - t_lo) / (offset - 1)
    to_t = lambda fi: t_lo + fi * h
    membranes = tuple((to_t(lo), to_t(hi)) for lo, hi in zip(mem_lo, mem_hi))
    return t, x_all, z_all, tuple(to_t(c) for c in cusps), membranes


# ---------------------------------------------------------------------------
# the two-stage interpolation

@dataclass(frozen=True)
class InterpolationResult:
    """An integral multi-section agreeing with s0 at the boundary, s1 inside."""

    f: MultiSection
    lift: SampledJetMap
    membranes: tuple[tuple[float, float], ...]
    eps: float
    delta: float
    levels: int            # zig-zag count N of the pushing stage
    return_levels: int     # zig-zag count of the returning stage
    k1: int
    k2: int
    final_bound: float     # sup |j^r f - j^r s1|, band-chart units
    chain_sup: float       # sup |j^r f_N| over the pushing stage, chart units
    chain_budget: float    # sqrt(|s~1 - s0|_{C^r}^2 + eps^2), chart units
    data_gap: float        # raw sup |j^r s0 - j^r s1| over the collar nodes

    @property
    def bounds(self) -> dict:
        return {"c0": self.final_bound, "chain": self.chain_sup,
                "chainBudget": self.chain_budget, "dataGap": self.data_gap,
                "levels": self.levels, "returnLevels": self.return_levels,
                "k1": self.k1, "k2": self.k2, "eps": self.eps}


def interpolate(s0: SectionLike, s1: SectionLike, eps: float, delta: float,
                r: int, n: int = 1, *, levels: int | None = None,
                nodes_per_period: int = 64,
                lateral_nodes: int = 33) -> InterpolationResult:
    """Integral multi-section equal to s0 at the chart boundary, s1 inside.

    The jets of s0 and s1 must stay eps-close on the collar; the result is
    then within 5*eps of j^r(s1) in band-chart units everywhere.  The
    pushing stage uses the smallest N with N^2 > 9*K1*K2 (more if `levels`
    asks for it); the returning stage transports the 2*eps shift back with
    a bump of its own, which keeps every derivative row of the return
    below the shift itself.  Boundary agreement is bitwise: collar nodes
    carry the jets of s0, inner-disc nodes the jets of s1.
    """
    region = AnnulusRegion(n, delta)
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if r < 1:
        raise ValueError("jet order r must be >= 1")
    if s0.k != s1.k:
        raise ValueError(f"fiber dimensions differ: {s0.k} != {s1.k}")
    k = s0.k
    n_levels = max(bump_level(n, r), levels or 0)
    n_return = _return_levels(r)
    indices = jet_indices(n, r)
    sig = JetSignature(n, k, r)
    weights = _chart_weights(indices, 0.5 * delta)
    lateral = None
    if n == 2:
        if lateral_nodes < 5:
            raise ValueError("need at least 5 lateral nodes")
        lateral = np.linspace(-1.0, 1.0, lateral_nodes)
    axis = n - 1

    if n == 1:
        left, right = region.collars()
        lpieces, step = _band_pieces(s0, s1, eps, left, -1, r, n_levels,
                                     n_return, nodes_per_period, indices)
        rpieces, _ = _band_pieces(s0, s1, eps, right, +1, r, n_levels,
                                  n_return, nodes_per_period, indices)
        n_in = max(4, round(2.0 * (1.0 - delta) / step))
        x_in = np.linspace(-1.0 + delta, 1.0 - delta, n_in + 1)
        inner = _Piece(x_in, _jet_block(s1, x_in[:, None], indices), "inner")
        stage_pieces = [(lpieces[0], 0, 1), (lpieces[1], 0, 1), (inner, 0, 0),
                        (rpieces[0], 1, 0), (rpieces[1], 1, 0)]
    else:
        (band,) = region.collars()
        bpieces, step = _band_pieces(s0, s1, eps, band, +1, r, n_levels,
                                     n_return, nodes_per_period, indices,
                                     lateral)
        n_in = max(4, round((2.0 - delta) / step))
        x_in = np.linspace(-1.0, 1.0 - delta, n_in + 1)
        pts = np.stack(np.broadcast_arrays(lateral[:, None], x_in[None, :]),
                       axis=-1)
        inner = _Piece(x_in, _jet_block(s1, pts, indices), "inner")
        stage_pieces = [(inner, 0, 0), (bpieces[0], 1, 0), (bpieces[1], 1, 0)]

    # precondition: the data stays eps-close on the collar nodes (raw units)
    gap = 0.0
    for piece, _, _ in stage_pieces:
        if piece.role == "inner":
            continue
        d = piece.s1_block - piece.s0_block
        norms = np.sqrt(np.sum(d * d, axis=(-2, -1)))
        here = float(np.max(norms))
        if here >= eps:
            x_bad = piece.x[int(np.argmax(norms)) % piece.x.size]
            raise ValueError(
                f"jet gap {here:.6g} >= eps = {eps:.6g} at collar node "
                f"x = {x_bad:.6g}; interpolation needs |j^r s0 - j^r s1| < eps")
        gap = max(gap, here)

    # the pipeline's framing step: the pushed, translated target must stay
    # framed over the collar.  The bump multiplication itself is carried
    # out by the Leibniz rule above, which is the same product with exact
    # jets.
    translated = CombinedSection((s1, s0), (1.0, -1.0),
                                 (2.0 * eps,) + (0.0,) * (k - 1))
    collar_x = np.concatenate([p.x for p, _, _ in stage_pieces
                               if p.role != "inner"])
    if n == 1:
        framing(translated, eps, collar_x[:, None])
    else:
        pts = np.stack(np.broadcast_arrays(lateral[:, None],
                                           collar_x[None, :]), axis=-1)
        framing(translated, eps, pts.reshape(-1, 2))

    t, x_all, z_all, cusps, membranes = _assemble(stage_pieces, -1.0, 1.0,
                                                  axis)

    chain_sup, s_norm, final = 0.0, 0.0, 0.0
    for piece, _, _ in stage_pieces:
        if piece.role == "inner":
            continue
        final = max(final, float(np.max(
            _block_norms(piece.z - piece.s1_block, weights))))
        D = piece.s1_block - piece.s0_block
        D[..., 0, 0] += 2.0 * eps
        s_norm = max(s_norm, float(np.max(_block_norms(D, weights))))
        if piece.role == "push":
            chain_sup = max(chain_sup, float(np.max(
                _block_norms(piece.z - piece.s0_block, weights))))
    chain_budget = math.hypot(s_norm, eps)

    if n == 1:
        front = MultiSection(t, x_all, z_all[:, 0, :].copy(), cusps,
                             membranes)
        lift = SampledJetMap(sig, (t,), x_all[:, None], z_all)
    else:
        pts = np.stack(np.broadcast_arrays(lateral[:, None], x_all[None, :]),
                       axis=-1)
        mid = lateral.size // 2
        front = MultiSection(t, x_all, z_all[mid, :, 0, :].copy(), cusps,
                             membranes)
        lift = SampledJetMap(sig, (lateral, t), pts, z_all)
    return InterpolationResult(front, lift, membranes, eps, delta, n_levels,
                               n_return, k1_constant(n, r), k2_constant(n, r),
                               final, chain_sup, chain_budget, gap)


# ---------------------------------------------------------------------------
# the parametric version

_CUT_INNER = 0.3
_CUT_OUTER = 0.9


def _cutoff(kappa: float) -> float:
    """Smoothstep in |kappa|: 1 on [0, 0.3], 0 on [0.9, 1]."""
    u = (_CUT_OUTER - abs(kappa)) / (_CUT_OUTER - _CUT_INNER)
    u = min(1.0, max(0.0, u))
    return u * u * (3.0 - 2.0 * u)


@dataclass(frozen=True)
class ParamInterpolation:
    """Family of integral multi-sections over kappa in [-1, 1].

    Boundary slices coincide with g0; central slices interpolate all the
    way to g1.  Zig-zags appear and disappear through a swallowtail family
    scaled by a smoothstep cutoff, so every slice is integral and slices
    vary continuously with kappa.
    """

    kappa: np.ndarray
    slices: tuple[MultiSection, ...]
    lifts: tuple[SampledJetMap, ...]
    heights: np.ndarray
    eps: float
    delta: float
    levels: int
    final_bound: float     # sup over slices vs each slice's blend target
    membranes: tuple[tuple[float, tuple[float, float]], ...]

    def slice_at(self, kappa: float) -> MultiSection:
        idx = int(np.argmin(np.abs(self.kappa - kappa)))
        return self.slices[idx]


def _mirror_arrays(x, rows, lo_new, hi_new):
    """Reflect bump arrays through a vertical axis onto [lo_new, hi_new].

    Odd-order rows change sign under x -> -x; widths rescale every row.
    """
    width = x[-1] - x[0]
    x_m = lo_new + (hi_new - lo_new) * (x[-1] - x[::-1]) / width
    rows_m = rows[::-1].copy()
    for i in range(1, rows.shape[1]):
        rows_m[:, i] *= (-1.0) ** i * (width / (hi_new - lo_new)) ** i
    return x_m, rows_m


def _affine_arrays(x, rows, lo_new, hi_new):
    width = x[-1] - x[0]
    x_a = lo_new + (hi_new - lo_new) * (x - x[0]) / width
    rows_a = rows.copy()
    for i in range(1, rows.shape[1]):
        rows_a[:, i] *= (width / (hi_new - lo_new)) ** i
    return x_a, rows_a


def _flip_marks(marks, segments):
    return tuple(segments - fi for fi in marks)


def _param_piece(g0b, g1b, eps, x, rows, height, role) -> _Piece:
    """Jets of one piece of a parametric slice.

    push: f = g0 + rho D; return: f = g0 + h D - 2 eps w e1; inner: the
    exact blend (1-h) g0 + h g1.  Here D = g1 - g0 + 2 eps e1 and rho, w
    are the height-scaled bump rows passed in `rows`.
    """
    D = g1b - g0b
    D[:, 0, 0] += 2.0 * eps
    if role == "push":
        z = g0b.copy()
        for i in range(g0b.shape[1]):
            for j in range(i + 1):
                z[:, i, :] += comb(i, j) * rows[:, j, None] * D[:, i - j, :]
    elif role == "return":
        z = g0b + height * D
        for i in range(g0b.shape[1]):
            z[:, i, 0] -= 2.0 * eps * rows[:, i]
    else:
        z = (1.0 - height) * g0b + height * g1b
    return _Piece(x, z, role, s0_block=g0b, s1_block=g1b)


def interpolate_param(g0, g1, eps: float, delta: float, r: int, *,
                      kappa_nodes: int = 41, nodes_per_period: int = 64,
                      slices_per_stage: int = 16) -> ParamInterpolation:
    """Parametric interpolation: a wrinkle family connecting g0 to g1.

    g0 and g1 are either sections over the 1D disc or callables
    kappa -> section.  Slices at |kappa| >= 0.9 equal g0 exactly; the
    interpolation switches on through a swallowtail family modulated by a
    smoothstep cutoff, and the returning bump scales with the same height,
    so the inner disc carries the exact (1-h) g0 + h g1 blend.  The
    reported bound compares each slice against its own blend target in
    band-chart units; it stays below 4*eps.
    """
    region = AnnulusRegion(1, delta)
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if kappa_nodes < 5:
        raise ValueError("need at least 5 kappa nodes")
    g0_at = g0 if callable(g0) and not isinstance(g0, SectionLike) else (
        lambda _k: g0)
    g1_at = g1 if callable(g1) and not isinstance(g1, SectionLike) else (
        lambda _k: g1)
    if g0_at(0.0).k != g1_at(0.0).k:
        raise ValueError("g0 and g1 must share the fiber dimension")
    k = g0_at(0.0).k
    n_levels = bump_level(1, r)
    n_return = _return_levels(r)
    indices = jet_indices(1, r)
    weights = _chart_weights(indices, 0.5 * delta)
    band_l, band_r = region.collars()
    mid_l = 0.5 * (band_l[0] + band_l[1])
    mid_r = 0.5 * (band_r[0] + band_r[1])
    sig = JetSignature(1, k, r)

    family = build_swallowtail_family(n_levels, ((0.0, 1.0), (0.0, 1.0)), r,
                                      nodes_per_period, slices_per_stage)
    unit_up = build_bump(n_return, 0.0, 1.0, 0.0, 1.0, r, nodes_per_period)
    up_x = unit_up.lift.x[:, 0]
    up_rows = unit_up.lift.z[:, :, 0]
    up_m = up_x.size - 1
    up_mem = tuple(zip(_mark_fi([lo for lo, _ in unit_up.membranes], 0, 1, up_m),
                       _mark_fi([hi for _, hi in unit_up.membranes], 0, 1, up_m)))
    up_cusps = _mark_fi(unit_up.front.cusps, 0.0, 1.0, up_m)
    step = 0.5 * delta * _collar_step(unit_up)
    n_in = max(4, round(2.0 * (1.0 - delta) / step))
    x_in = np.linspace(-1.0 + delta, 1.0 - delta, n_in + 1)

    kappa = np.linspace(-1.0, 1.0, kappa_nodes)
    slices_out, lifts_out = [], []
    heights = np.empty(kappa.size)
    final = 0.0
    membranes_out: list[tuple[float, tuple[float, float]]] = []
    for ik, kap in enumerate(kappa):
        chi = _cutoff(float(kap))
        s_idx = int(round(chi * (family.s_grid.size - 1)))
        h = float(family.h_trace[s_idx])
        heights[ik] = h
        s0k, s1k = g0_at(float(kap)), g1_at(float(kap))

        fam_lift = family.lifts[s_idx]
        fam_x = fam_lift.x[:, 0]
        fam_rows = fam_lift.z[:, :, 0]
        fam_front = family.slices[s_idx]
        fam_m = fam_x.size - 1
        fam_cusps = _mark_fi(fam_front.cusps, 0.0, 1.0, fam_m)
        fam_mem = tuple(zip(
            _mark_fi([lo for lo, _ in fam_front.membranes], 0, 1, fam_m),
            _mark_fi([hi for _, hi in fam_front.membranes], 0, 1, fam_m)))

        # push stage: the family slice descends h -> 0 rightward; mirror it
        # onto the left collar, translate it onto the right one
        ax_l, ar_l = _mirror_arrays(fam_x, fam_rows, band_l[0], mid_l)
        ax_r, ar_r = _affine_arrays(fam_x, fam_rows, mid_r, band_r[1])
        # return stage: the unit bump scaled vertically by the slice height
        bx_l, br_l = _affine_arrays(up_x, h * up_rows, mid_l, band_l[1])
        bx_r, br_r = _mirror_arrays(up_x, h * up_rows, band_r[0], mid_r)
        if h == 0.0:
            # a zero-height return keeps its x backtracks unless the path
            # is straightened; the slice must stay an embedded graph of g0
            bx_l = np.linspace(mid_l, band_l[1], bx_l.size)
            bx_r = np.linspace(band_r[0], mid_r, bx_r.size)
            br_l = np.zeros_like(br_l)
            br_r = np.zeros_like(br_r)

        def blocks(x):
            return (_jet_block(s0k, x[:, None], indices),
                    _jet_block(s1k, x[:, None], indices))

        p_al = _param_piece(*blocks(ax_l), eps, ax_l, ar_l, h, "push")
        p_bl = _param_piece(*blocks(bx_l), eps, bx_l, br_l, h, "return")
        p_in = _param_piece(*blocks(x_in), eps, x_in, None, h, "inner")
        p_br = _param_piece(*blocks(bx_r), eps, bx_r, br_r, h, "return")
        p_ar = _param_piece(*blocks(ax_r), eps, ax_r, ar_r, h, "push")
        if h > 0.0:
            # mirrored pieces carry their marks reflected in node index
            p_al = replace(p_al, cusp_fi=_flip_marks(fam_cusps, fam_m),
                           membrane_fi=tuple((fam_m - hi, fam_m - lo)
                                             for lo, hi in fam_mem))
            p_bl = replace(p_bl, cusp_fi=up_cusps, membrane_fi=up_mem)
            p_br = replace(p_br, cusp_fi=_flip_marks(up_cusps, up_m),
                           membrane_fi=tuple((up_m - hi, up_m - lo)
                                             for lo, hi in up_mem))
            p_ar = replace(p_ar, cusp_fi=fam_cusps, membrane_fi=fam_mem)

        for piece in (p_al, p_bl, p_br, p_ar):
            d = piece.s1_block - piece.s0_block
            norms = np.sqrt(np.sum(d * d, axis=(-2, -1)))
            worst = float(np.max(norms))
            if worst >= eps:
                raise ValueError(
                    f"jet gap {worst:.6g} >= eps = {eps:.6g} at kappa = "
                    f"{kap:.3g}, x = {piece.x[int(np.argmax(norms))]:.6g}")

        t, x_all, z_all, cusps, mems = _assemble(
            [(p_al, 0, 1), (p_bl, 0, 1), (p_in, 0, 0), (p_br, 1, 0),
             (p_ar, 1, 0)], -1.0, 1.0, 0)

        if chi == 0.0:
            direct = _jet_block(s0k, x_all[:, None], indices)
            drift = float(np.max(np.abs(z_all - direct)))
            if drift > 1e-9:
                raise ValueError(
                    f"parametric regions disagree on the overlap at kappa "
                    f"= {kap:.3g}: drift {drift:.3g} > 1e-9")
            z_all = direct

        blend = CombinedSection((s0k, s1k), (1.0 - h, h))
        target = _jet_block(blend, x_all[:, None], indices)
        final = max(final,
                    float(np.max(_block_norms(z_all - target, weights))))

        slices_out.append(MultiSection(t, x_all, z_all[:, 0, :].copy(),
                                       cusps, mems))
        lifts_out.append(SampledJetMap(sig, (t,), x_all[:, None], z_all))
        membranes_out.extend((float(kap), m) for m in mems)

    return ParamInterpolation(kappa, tuple(slices_out), tuple(lifts_out),
                              heights, eps, delta, n_levels, final,
                              tuple(membranes_out))


# ---------------------------------------------------------------------------
# the circle driver

_VERTEX_RULE = "left-adjacent arc Taylor section"


@dataclass(frozen=True)
class _CircleTaylor:
    """Taylor polynomial on the circle: displacements wrap to [-C/2, C/2)."""

    center: float
    circumference: float
    block: np.ndarray     # (r+1, k)

    @property
    def k(self) -> int:
        return self.block.shape[1]

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = self.circumference
        dx = np.mod(x[..., 0] - self.center + 0.5 * c, c) - 0.5 * c
        i = index[0]
        out = np.zeros(x.shape[:-1] + (self.k,))
        for j in range(i, self.block.shape[0]):
            out += (dx ** (j - i) / math.factorial(j - i))[..., None] \
                * self.block[j]
        return out


@dataclass(frozen=True)
class CircleApproximation:
    """Holonomic approximation of a formal section over the circle."""

    front: MultiSection
    lift: SampledJetMap
    arcs: tuple[tuple[float, float], ...]
    vertex_rule: str
    membranes: tuple[tuple[float, float], ...]
    zigzag_count: int
    achieved: float        # measured sup |j^r f - sigma|, raw units
    eps: float
    embedded: bool

    def payload(self) -> dict:
        return {"arcs": len(self.arcs), "vertexRule": self.vertex_rule,
                "zigzagCount": self.zigzag_count, "achieved": self.achieved,
                "eps": self.eps, "embedded": self.embedded,
                "nodes": int(self.lift.params[0].size)}


def _arc_partition(sigma: FormalSection, eps: float):
    """Refine a uniform arc partition until sigma is eps/10-flat per arc.

    Flatness is measured two ways on a 10x probe grid: the oscillation of
    the formal block across the arc, and the drift of the arc-center
    Taylor section from the block (the drift matters when sigma is far
    from holonomic: its low rows then run away from the Taylor data).
    """
    c = sigma.domain.circumference
    indices = sigma.signature.indices
    m = 4
    while True:
        edges = np.linspace(0.0, c, m + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        taylors = []
        ok = True
        for a_lo, a_hi, ctr in zip(edges[:-1], edges[1:], centers):
            xs = np.linspace(a_lo, a_hi, 21)[:, None]
            blocks = sigma.block(xs)
            flat = blocks.reshape(xs.shape[0], -1)
            osc = float(np.linalg.norm(flat.max(axis=0) - flat.min(axis=0)))
            tay = _CircleTaylor(float(ctr), c,
                                sigma.block(np.array([[ctr]]))[0])
            tb = np.stack([tay.jet(xs, I) for I in indices], axis=-2)
            drift = float(np.max(np.sqrt(np.sum((tb - blocks) ** 2,
                                                axis=(-2, -1)))))
            if osc >= eps / 10.0 or drift >= 0.3 * eps:
                ok = False
                break
            taylors.append(tay)
        if ok:
            return edges, tuple(taylors)
        m *= 2
        if m > 8192:
            raise ValueError(
                "sigma oscillates too fast: arc partition exceeded 8192 arcs")


_RAMP_CACHE: dict[int, tuple[tuple[Polynomial, ...], tuple[float, ...]]] = {}


def _ramp_polys(r: int):
    """Order-r polynomial smoothstep with its derivative rows and sups.

    chi integrates u^r (1-u)^r, so it runs 0 -> 1 with the first r
    derivatives vanishing at both ends; blending two Taylor sections with
    it keeps the junctions C^r without introducing any fold.
    """
    try:
        return _RAMP_CACHE[r]
    except KeyError:
        pass
    base = Polynomial([0.0, 1.0]) ** r * Polynomial([1.0, -1.0]) ** r
    chi = base.integ()
    chi = chi / chi(1.0)
    rows = [chi]
    for _ in range(r):
        rows.append(rows[-1].deriv())
    sups = tuple(float(np.max(np.abs(p.linspace(201, [0.0, 1.0])[1])))
                 for p in rows)
    out = (tuple(rows), sups)
    _RAMP_CACHE[r] = out
    return out


def _blend_piece(t_prev, t_own, x, a_lo, width, ramps, indices):
    """Graphical ramp from t_prev to t_own across one arc (no zig-zags)."""
    u = (x - a_lo) / width
    zp = _jet_block(t_prev, x[:, None], indices)
    d = _jet_block(t_own, x[:, None], indices) - zp
    z = zp + ramps[0](u)[:, None, None] * d
    for i in range(1, len(indices)):
        for j in range(1, i + 1):
            z[:, i, :] += comb(i, j) * (ramps[j](u) / width ** j)[:, None] \
                * d[:, i - j, :]
    return _Piece(x, z, "inner")


def _circle_levels(taylors, edges, eps, eps_c, w_c, r, indices):
    """Analytic starting zig-zag counts for the circle collars.

    Bump rows scale like U_i / (N w_c^i); solving each stage's block norm
    against a 40% share of eps gives counts that usually land the very
    first measured attempt.  D here is the per-row worst vertex gap, plus
    the 2 eps_c push in row 0.
    """
    U = _unit_bounds(r)
    d_max = np.zeros(r + 1)
    m = len(taylors)
    for ia in range(m):
        a_lo = float(edges[ia])
        probe = np.linspace(a_lo, a_lo + 2.0 * w_c, 11)[:, None]
        gap = np.abs(_jet_block(taylors[ia - 1], probe, indices)
                     - _jet_block(taylors[ia], probe, indices))
        d_max = np.maximum(d_max, gap.max(axis=(0, 2)))
    d_max[0] += 2.0 * eps_c
    push = [sum(comb(i, j) * U[j] * d_max[i - j] / w_c ** j
                for j in range(1, i + 1)) for i in range(r + 1)]
    ret = [2.0 * eps_c * U[i] / w_c ** i for i in range(1, r + 1)]
    n_push = 2.5 * math.hypot(*push) / eps if any(push) else 0.0
    n_ret = 2.5 * math.hypot(*ret) / eps
    return (max(bump_level(1, r), math.ceil(n_push)),
            max(_return_levels(r), math.ceil(n_ret)))


def holonomic_approx_circle(sigma: FormalSection, eps: float,
                            r: int | None = None, *,
                            nodes_per_period: int = 32,
                            max_rounds: int = 5) -> CircleApproximation:
    """Approximate a formal section of J^r over the circle holonomically.

    Arcs are chosen so sigma barely moves across each one; arc-center
    Taylor sections give local holonomic data, each vertex adopts the
    Taylor section of its left-adjacent arc, and the two-stage
    interpolation bridges the collar at each vertex.  Zig-zag counts
    start from the analytic estimate and double until the measured raw
    defect drops below eps.  Vertex jumps a smooth ramp can absorb within
    a 0.4 eps budget are bridged graphically with no folds, so already
    holonomic data comes back zig-zag free; the budget halves on every
    refinement round, which keeps the doubling guard effective.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if not isinstance(sigma.domain, Circle):
        raise ValueError("holonomic_approx_circle needs a circle domain")
    sig = sigma.signature
    if sig.n != 1:
        raise ValueError("the circle driver supports 1D bases only")
    if r is not None and r != sig.r:
        raise ValueError(f"requested order {r} != signature order {sig.r}")
    r = sig.r
    indices = sig.indices
    circ = sigma.domain.circumference

    edges, taylors = _arc_partition(sigma, eps)
    m_arcs = len(taylors)
    arclen = float(edges[1] - edges[0])
    eps_c = eps / 8.0
    w_c = 0.5 * arclen
    base_levels, base_return = _circle_levels(taylors, edges, eps, eps_c,
                                              w_c, r, indices)
    scale = max(1.0, max(float(np.max(np.abs(t.block))) for t in taylors))

    ramps, ramp_sups = _ramp_polys(r)
    achieved = math.inf
    t = x_all = z_all = cusps = membranes = None
    lift = None
    for attempt in range(max_rounds):
        n_levels = base_levels * 2 ** attempt
        ret_levels = base_return * 2 ** attempt
        # one canonical bump pair serves every collar, translated per arc
        bump_a = build_bump(n_levels, 0.0, w_c, 0.0, 1.0, r,
                            nodes_per_period)
        bump_b = build_bump(ret_levels, w_c, 2.0 * w_c, 0.0, 1.0, r,
                            nodes_per_period)
        step = _collar_step(bump_a)
        n_g = max(4, round(2.0 * w_c / step))
        blend_budget = 0.4 * eps / 2 ** attempt
        pieces = []
        for ia in range(m_arcs):
            a_lo, a_hi = float(edges[ia]), float(edges[ia + 1])
            t_prev, t_own = taylors[ia - 1], taylors[ia]
            probe = np.linspace(a_lo, a_hi, 11)[:, None]
            d_sup = np.abs(_jet_block(t_prev, probe, indices)
                           - _jet_block(t_own, probe, indices)) \
                .max(axis=(0, 2))
            gap = float(d_sup.max())
            if gap <= 1e-15 * scale:
                xg = np.linspace(a_lo, a_hi, 2 * n_g + 1)
                pieces.append((_Piece(xg, _jet_block(t_own, xg[:, None],
                                                     indices), "inner"),
                               0, 1))
                continue
            pen = [sum(comb(i, j) * ramp_sups[j] * d_sup[i - j] / arclen ** j
                       for j in range(1, i + 1)) for i in range(1, r + 1)]
            if math.hypot(*pen) <= blend_budget:
                # cheap vertex jump: a smooth ramp stays within budget,
                # no folds needed on this arc
                xg = np.linspace(a_lo, a_hi, 2 * n_g + 1)
                pieces.append((_blend_piece(t_prev, t_own, xg, a_lo, arclen,
                                            ramps, indices), 0, 1))
                continue
            pieces.append((_stage_rows(t_prev, t_own, eps_c, bump_a, indices,
                                       "push", shift=a_lo), 0, 1))
            pieces.append((_stage_rows(t_prev, t_own, eps_c, bump_b, indices,
                                       "return", shift=a_lo), 0, 1))
        closing = _Piece(np.array([circ]),
                         _jet_block(taylors[-1], np.array([[circ]]), indices),
                         "inner")
        pieces.append((closing, 0, 0))
        t, x_all, z_all, cusps, membranes = _assemble(pieces, 0.0, circ, 0)
        lift = SampledJetMap(sig, (t,), x_all[:, None], z_all)
        achieved = c0_distance(lift, sigma)
        if achieved < eps:
            break
    else:
        raise ValueError(
            f"holonomic approximation stalled at defect {achieved:.6g} >= "
            f"eps = {eps:.6g} after {max_rounds} refinement rounds")

    front = MultiSection(t, x_all, z_all[:, 0, :].copy(), cusps, membranes)
    report = check_embedding(front)
    arcs = tuple((float(edges[i]), float(edges[i + 1]))
                 for i in range(m_arcs))
    return CircleApproximation(front, lift, arcs, _VERTEX_RULE, membranes,
                               len(membranes), achieved, eps, report.embedded)
