"""Independent checkers: tangencies, embeddings, configurations, scaling fits.

Everything here works from sampled data alone; no construction metadata is
consulted, so these routines double as oracles for the builders.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import front as front_mod
from .front import MultiSection
from .jet import CartanResidual, SampledJetMap, cartan_residual
from .lift import PrincipalSample
from .multiindex import jet_indices
from .quadrature import fd_derivative


# ---------------------------------------------------------------------------
# tangency locus

@dataclass(frozen=True)
class TangencyLocus:
    """Zero set of dx_n/dt, as full parameter tuples.

    `cubic` flags roots where the second derivative vanishes as well (the
    birth slice of a swallowtail move).  Zero plateaus wider than 3h cannot
    be localized and are reported instead of guessed.
    """

    points: tuple[tuple[float, ...], ...]
    cubic: tuple[tuple[float, ...], ...] = ()
    plateaus: tuple[tuple[float, float], ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.plateaus)

    def parameters(self) -> tuple[float, ...]:
        """Tangency parameters along the last (principal) axis."""
        return tuple(p[-1] for p in self.points)


def _line_tangencies(t: np.ndarray, xn: np.ndarray):
    h = t[1] - t[0]
    d = fd_derivative(xn, h)
    scale = float(np.max(np.abs(d)))
    if scale == 0.0:
        return [], [], [(float(t[0]), float(t[-1]))]
    tiny = 1e-9 * scale
    near = np.abs(d) <= tiny

    roots: list[float] = []
    plateaus: list[tuple[float, float]] = []
    i = 0
    while i < t.size:
        if near[i]:
            j = i
            while j + 1 < t.size and near[j + 1]:
                j += 1
            if t[j] - t[i] > 3.0 * h:
                plateaus.append((float(t[i]), float(t[j])))
            else:
                roots.append(float(0.5 * (t[i] + t[j])))
            i = j + 1
        else:
            i += 1
    sign_change = (~near[:-1]) & (~near[1:]) & (d[:-1] * d[1:] < 0.0)
    for i in np.nonzero(sign_change)[0]:
        roots.append(float(t[i] - d[i] * h / (d[i + 1] - d[i])))
    roots.sort()

    dd = fd_derivative(d, h)
    curv_scale = float(np.max(np.abs(dd)))
    cubic = []
    for root in roots:
        k = int(np.argmin(np.abs(t - root)))
        if abs(dd[k]) <= 1e-5 * curv_scale + 1e-300:
            cubic.append(root)
    return roots, cubic, plateaus


def detect_tangency_locus(sample: SampledJetMap | PrincipalSample) -> TangencyLocus:
    """Locate tangency points: zeros of the principal-direction speed.

    1D samples give isolated parameters (sign changes refined by linear
    interpolation); 2D samples are traced fiber line by fiber line with the
    lateral value prepended to each parameter tuple.  Corank one is assumed:
    lateral directions are graphical by construction.
    """
    t = sample.params[-1]
    if t.size < 5:
        raise ValueError("grid too coarse for central differences")
    xn = sample.x[..., -1]
    points: list[tuple[float, ...]] = []
    cubic: list[tuple[float, ...]] = []
    plateaus: list[tuple[float, float]] = []
    if xn.ndim == 1:
        roots, cub, plat = _line_tangencies(t, xn)
        points += [(r,) for r in roots]
        cubic += [(r,) for r in cub]
        plateaus += plat
    else:
        lateral = sample.params[0]
        for i in range(xn.shape[0]):
            roots, cub, plat = _line_tangencies(t, xn[i])
            points += [(float(lateral[i]), r) for r in roots]
            cubic += [(float(lateral[i]), r) for r in cub]
            plateaus += plat
    return TangencyLocus(tuple(points), tuple(cubic), tuple(plateaus))


# ---------------------------------------------------------------------------
# embedding check

@dataclass(frozen=True)
class EmbeddingReport:
    embedded: bool
    crossings: tuple[tuple[float, float], ...]   # parameter pairs (t_i, t_j)


def check_embedding(front: MultiSection, tol: float = 1e-9) -> EmbeddingReport:
    """Pairwise segment-intersection sweep over the front polyline.

    The front is embedded iff no two non-adjacent segments cross; touches
    within `tol` (relative to the front size) of shared endpoints are
    ignored, so cusps do not read as crossings.
    """
    if front.t.size < 2:
        raise ValueError("front is empty")
    pts = np.column_stack([front.x, front.y[:, 0]])
    t = front.t
    seg_a, seg_b = pts[:-1], pts[1:]
    nseg = seg_a.shape[0]
    span = float(np.max(np.ptp(pts, axis=0)))
    eps = tol * max(span, 1.0)
    closed = bool(np.all(np.abs(pts[0] - pts[-1]) <= eps))

    lo = np.minimum(seg_a, seg_b) - eps
    hi = np.maximum(seg_a, seg_b) + eps
    crossings: list[tuple[float, float]] = []

    def cross(o, d, p):
        return d[..., 0] * (p[..., 1] - o[..., 1]) \
            - d[..., 1] * (p[..., 0] - o[..., 0])

    # sweep by grid cells: only segments sharing a cell can cross, and each
    # candidate pair is tested once, in the cell holding the lower-left
    # corner of its bounding-box intersection
    x0 = float(lo[:, 0].min())
    y0 = float(lo[:, 1].min())
    ex = max(float(hi[:, 0].max()) - x0, eps)
    ey = max(float(hi[:, 1].max()) - y0, eps)
    bx = max(2.0 * float(np.mean(hi[:, 0] - lo[:, 0])), ex / (1 << 20), eps)
    by = max(2.0 * float(np.mean(hi[:, 1] - lo[:, 1])), ey / (1 << 20), eps)
    while True:
        fx = np.floor((lo[:, 0] - x0) / bx).astype(np.int64)
        lx = np.floor((hi[:, 0] - x0) / bx).astype(np.int64)
        fy = np.floor((lo[:, 1] - y0) / by).astype(np.int64)
        ly = np.floor((hi[:, 1] - y0) / by).astype(np.int64)
        cx = lx - fx + 1
        cy = ly - fy + 1
        counts = cx * cy
        # a few oversized segments can flood the grid; coarsen the worse
        # axis until total membership stays linear in the segment count
        if counts.sum() <= 6 * nseg or (bx >= ex and by >= ey):
            break
        if float(cx.mean()) >= float(cy.mean()) and bx < ex or by >= ey:
            bx = 2.0 * bx
        else:
            by = 2.0 * by
    ny = int(ly.max()) + 1
    seg_of = np.repeat(np.arange(nseg), counts)
    offsets = np.arange(seg_of.size) - np.repeat(
        np.cumsum(counts) - counts, counts)
    cell_of = (fx[seg_of] + offsets // cy[seg_of]) * ny \
        + fy[seg_of] + offsets % cy[seg_of]
    order = np.argsort(cell_of, kind="stable")
    seg_sorted, cell_sorted = seg_of[order], cell_of[order]
    starts = np.flatnonzero(np.r_[True, np.diff(cell_sorted) > 0])
    ends = np.r_[starts[1:], cell_sorted.size]

    del seg_of, offsets, cell_of, order
    sizes = ends - starts
    cell_ids = cell_sorted[starts]

    def test_pairs(aa, bb, owner):
        """Intersection-test one batch of candidate pairs in place."""
        ii = np.minimum(aa, bb)
        jj = np.maximum(aa, bb)
        keep = jj > ii + 1
        if closed:
            keep &= ~((ii == 0) & (jj == nseg - 1))
        # overlap in both axes, owned by the generating cell; ownership uses
        # the same floor arithmetic as the cell assignment above
        keep &= (lo[ii, 0] <= hi[jj, 0]) & (lo[jj, 0] <= hi[ii, 0]) \
            & (lo[ii, 1] <= hi[jj, 1]) & (lo[jj, 1] <= hi[ii, 1])
        own = np.floor((np.maximum(lo[ii, 0], lo[jj, 0]) - x0) / bx) \
            .astype(np.int64) * ny \
            + np.floor((np.maximum(lo[ii, 1], lo[jj, 1]) - y0) / by) \
            .astype(np.int64)
        keep &= own == owner
        if not np.any(keep):
            return
        ii, jj = ii[keep], jj[keep]
        a1, a2 = seg_a[ii], seg_b[ii]
        b1, b2 = seg_a[jj], seg_b[jj]
        da, db = a2 - a1, b2 - b1
        d1 = cross(b1, db, a1)
        d2 = cross(b1, db, a2)
        d3 = cross(a1, da, b1)
        d4 = cross(a1, da, b2)
        la = np.hypot(da[:, 0], da[:, 1]) + 1e-300
        lb = np.hypot(db[:, 0], db[:, 1]) + 1e-300
        proper = (d1 * d2 < -(eps * lb) ** 2) & (d3 * d4 < -(eps * la) ** 2)
        colinear = (np.abs(d1) <= eps * lb) & (np.abs(d2) <= eps * lb)
        if np.any(colinear):
            # colinear pairs cross when their 1D shadows genuinely overlap
            rows = np.arange(ii.size)
            axis = np.where(np.abs(da[:, 0]) >= np.abs(da[:, 1]), 0, 1)
            amin = np.minimum(a1[rows, axis], a2[rows, axis])
            amax = np.maximum(a1[rows, axis], a2[rows, axis])
            bmin = np.minimum(b1[rows, axis], b2[rows, axis])
            bmax = np.maximum(b1[rows, axis], b2[rows, axis])
            overlap = np.minimum(amax, bmax) - np.maximum(amin, bmin)
            proper |= colinear & (overlap > eps)
        for i, j, w1, w2 in zip(ii[proper], jj[proper],
                                d1[proper], d2[proper]):
            frac_i = abs(w1) / (abs(w1) + abs(w2) + 1e-300)
            ti = float(t[i] + (t[i + 1] - t[i]) * frac_i)
            crossings.append((ti, float(t[j])))

    # enumerate within-cell pairs for all cells of one size at a time
    small = sizes <= 512
    for m in np.unique(sizes[small & (sizes >= 2)]):
        rows = np.flatnonzero(small & (sizes == m))
        p, q = np.triu_indices(int(m), 1)
        step = max(1, (1 << 20) // p.size)
        for c in range(0, rows.size, step):
            sel = rows[c:c + step]
            mat = seg_sorted[starts[sel][:, None] + np.arange(m)[None, :]]
            owner = np.repeat(cell_ids[sel], p.size)
            test_pairs(mat[:, p].ravel(), mat[:, q].ravel(), owner)
    for g in np.flatnonzero(~small):
        members = np.sort(seg_sorted[starts[g]:ends[g]])
        m = members.size
        for c in range(0, m - 1, 1024):
            rows = members[c:min(c + 1024, m - 1)]
            pairs = rows[:, None] < members[None, :]
            aa = np.broadcast_to(rows[:, None], pairs.shape)[pairs]
            bb = np.broadcast_to(members[None, :], pairs.shape)[pairs]
            test_pairs(aa, bb, np.full(aa.size, cell_ids[g]))
    crossings.sort()
    return EmbeddingReport(not crossings, tuple(crossings))


# ---------------------------------------------------------------------------
# open/closed configuration

def classify_configuration(front: MultiSection,
                           membrane: tuple[float, float] | None = None) -> str:
    """Classify a cusp pair as an "open" or "closed" configuration.

    Near each cusp the outer branch and the middle branch overlap in x;
    the verdict compares their heights there.  If the middle branch sits on
    the same side of the outer branch at both cusps the pair can cancel
    ("closed"); opposite sides make a staircase ("open").  The height
    comparison must be at least 95% consistent near each cusp, so the
    verdict is invariant under vertical scaling and translation.
    """
    if len(front.cusps) != 2:
        raise ValueError(f"expected exactly 2 cusps, got {len(front.cusps)}")
    c1, c2 = sorted(front.cusps)
    if membrane is None:
        membrane = (c1, c2)
    branches = front.branches()
    if len(branches) != 3 or any(b[0].size < 3 for b in branches):
        raise ValueError("front must extend beyond the membrane at both ends")

    signs = []
    for outer_idx in (0, 2):
        t_o, x_o, y_o = branches[outer_idx]
        t_m, x_m, y_m = branches[1]
        lo = max(float(np.min(x_o)), float(np.min(x_m)))
        hi = min(float(np.max(x_o)), float(np.max(x_m)))
        scale = max(abs(lo), abs(hi), 1e-30)
        if hi - lo <= 1e-12 * scale:
            raise ValueError("outer and middle branches do not overlap in x")
        xs = np.linspace(lo, hi, 203)[1:-1]
        votes = np.sign(_interp_branch(xs, x_m, y_m[:, 0])
                        - _interp_branch(xs, x_o, y_o[:, 0]))
        nz = votes[votes != 0.0]
        if nz.size == 0:
            raise ValueError("branches coincide; configuration ambiguous")
        frac = max(np.sum(nz > 0), np.sum(nz < 0)) / nz.size
        if frac < 0.95:
            raise ValueError(
                f"height comparison only {frac:.0%} consistent near a cusp")
        signs.append(1.0 if np.sum(nz > 0) >= np.sum(nz < 0) else -1.0)
    return "open" if signs[0] != signs[1] else "closed"


def _interp_branch(xs: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x[0] > x[-1]:
        x, y = x[::-1], y[::-1]
    return np.interp(xs, x, y)


# ---------------------------------------------------------------------------
# scaling-law fits

@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    residual: float     # max |log bound - fit| over the points


def fit_scaling(measurements) -> ScalingFit:
    """Least-squares exponent of bound ~ C * N^slope in log-log space."""
    pts = [(float(n), float(b)) for n, b in measurements]
    if len(pts) < 3:
        raise ValueError("need at least 3 measurements")
    ns = np.array([p[0] for p in pts])
    bs = np.array([p[1] for p in pts])
    if np.any(np.diff(ns) <= 0):
        raise ValueError("N values must be strictly increasing")
    if np.any(bs <= 0):
        raise ValueError("bounds must be positive")
    ln, lb = np.log(ns), np.log(bs)
    slope, intercept = np.polyfit(ln, lb, 1)
    resid = float(np.max(np.abs(lb - (slope * ln + intercept))))
    return ScalingFit(float(slope), float(intercept), resid)


# ---------------------------------------------------------------------------
# aggregate report

@dataclass(frozen=True)
class VerificationReport:
    """Everything the `verify` pipeline measures on one sampled lift."""

    max_cartan_residual: float
    per_axis_residual: tuple[float, ...]
    tangency: TangencyLocus
    embedded: bool | None
    crossings: tuple[tuple[float, float], ...]
    configuration: str | None
    bounds: dict[int, float]
    tolerance: float
    passed: bool

    def payload(self) -> dict:
        """JSON-ready view (camelCase keys, schema handled by fileio)."""
        return {
            "maxCartanResidual": self.max_cartan_residual,
            "perAxisResidual": list(self.per_axis_residual),
            "tangencyParameters": [list(p) for p in self.tangency.points],
            "cubicTangencies": [list(p) for p in self.tangency.cubic],
            "degeneratePlateaus": [list(p) for p in self.tangency.plateaus],
            "embedded": self.embedded,
            "crossings": [list(c) for c in self.crossings],
            "configuration": self.configuration,
            "derivativeBounds": {str(k): v for k, v in self.bounds.items()},
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def verify_sample(jmap: SampledJetMap, tol: float = 1e-2) -> VerificationReport:
    """Run every applicable check on a sampled lift and aggregate verdicts."""
    res: CartanResidual = cartan_residual(jmap)
    tang = detect_tangency_locus(jmap)
    sig = jmap.signature
    bounds: dict[int, float] = {}
    for rp in range(1, sig.r + 1):
        rows = [np.abs(jmap.row(i)) for i in jet_indices(sig.n, sig.r)
                if sum(i) == rp]
        bounds[rp] = float(max(np.max(r) for r in rows))

    embedded = None
    crossings: tuple[tuple[float, float], ...] = ()
    configuration = None
    if sig.n == 1:
        front = front_mod.from_sampled(jmap, cusps=tang.parameters())
        emb = check_embedding(front)
        embedded, crossings = emb.embedded, emb.crossings
        if len(tang.points) == 2 and not tang.degenerate:
            try:
                configuration = classify_configuration(front)
            except ValueError:
                configuration = None
    passed = res.max <= tol and not tang.degenerate \
        and (embedded is None or embedded)
    per_axis = tuple(float(np.max(np.abs(f))) if f.size else 0.0
                     for f in res.per_axis)
    return VerificationReport(res.max, per_axis, tang, embedded,
                              crossings, configuration, bounds, tol, passed)
