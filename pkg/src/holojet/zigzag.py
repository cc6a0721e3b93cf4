"""Zig-zag bump functions and swallowtail families with measured bounds.

The infinite zig-zag is a closed-form periodic front

    x(t) = (2/pi) sin(pi t / 2),      y'(t) = c^{2r} (1 - c)^q P(c),

with c = cos(pi t / 2).  One period climbs y by exactly 4 while x returns
to its start, so stacking N vertically rescaled periods interpolates any
two constants.  The factor c^{2r} makes every derivative row vanish at the
folds t = 1, 3 (transversally in the top row), the factor (1 - c)^q glues
the period C^{2q}-flat onto straight collars, and the polynomial P keeps
y' strictly positive in between so fronts are embedded.  P's coefficients
were tuned numerically so the peaks of the first r derivative rows stay
balanced over a period; they are frozen for reproducibility.

All derivative rows are exact closed forms: the whole tower lives in the
algebra of trig monomials s^i c^j (s = sin(pi t/2)), where d/dt and
division by x' are exact operations.  Swallowtail families reuse the same
algebra with c shifted to c + rho: the shift moves the fold pair, and
rho > 1 removes it, which is precisely a swallowtail birth run backwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .front import MultiSection
from .jet import JetSignature, SampledJetMap

# minimax-tuned shape coefficients: P(c) = sum_j COEF[r][j] * ((1+c)/2)^j
_SHAPE_COEF = {
    1: (0.5645124802139723, 3.080216268452528, -25.427073701170254,
        272.6301142272825, -640.9329133337029, 487.52618006662357),
    2: (0.6539016111353686, -0.8129143950767556, 30.926332713038335,
        -117.10052165081427, 355.8320681598951, -168.19478916493966),
    3: (0.33847458006521763, 0.7028671813510232, 27.154116988283647,
        -56.439451128642816, 327.33909230082554, 938.5388612917333),
    4: (0.18438706306587047, 0.5702433575533908, 33.488747577565015,
        -63.39960768812525, 0.678344806324873, 6168.374504448466),
}

_CHART_WIDTH = 0.99   # fraction of the unit chart swept by the zig-zag


# ---------------------------------------------------------------------------
# exact algebra of trig monomials {(i, j): a} ~ sum a * s^i c^j, i in {0, 1}

TrigPoly = dict[tuple[int, int], float]


def _reduce(d: TrigPoly) -> TrigPoly:
    """Rewrite s^2 = 1 - c^2 until every s-power is 0 or 1; drop zeros."""
    out: TrigPoly = {}
    for (i, j), a in d.items():
        while i >= 2:
            i -= 2
            out[(i, j)] = out.get((i, j), 0.0) + a
            a = -a
            j += 2
        out[(i, j)] = out.get((i, j), 0.0) + a
    return {k: v for k, v in out.items() if v != 0.0}


def _ddt(d: TrigPoly) -> TrigPoly:
    out: TrigPoly = {}
    for (i, j), a in d.items():
        if i:
            key = (i - 1, j + 1)
            out[key] = out.get(key, 0.0) + a * i * math.pi / 2
        if j:
            key = (i + 1, j - 1)
            out[key] = out.get(key, 0.0) - a * j * math.pi / 2
    return _reduce(out)


def _mul(d1: TrigPoly, d2: TrigPoly) -> TrigPoly:
    out: TrigPoly = {}
    for (i1, j1), a1 in d1.items():
        for (i2, j2), a2 in d2.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0.0) + a1 * a2
    return _reduce(out)


def _div_shifted(d: TrigPoly, rho: float) -> TrigPoly:
    """Exact division by (c + rho); the remainder must be roundoff only."""
    out: TrigPoly = {}
    scale = max((abs(a) for a in d.values()), default=1.0)
    for i in (0, 1):
        top = max((j for (s, j) in d if s == i), default=-1)
        if top < 0:
            continue
        coeffs = [d.get((i, j), 0.0) for j in range(top + 1)]
        quot = [0.0] * top
        carry = 0.0
        for j in range(top, 0, -1):
            quot[j - 1] = coeffs[j] + carry
            carry = -rho * quot[j - 1]
        rem = coeffs[0] + carry
        if abs(rem) > 1e-7 * max(scale, 1.0):
            raise ArithmeticError(f"inexact division by c + {rho}: rem {rem:.3e}")
        for j, a in enumerate(quot):
            if a != 0.0:
                out[(i, j)] = out.get((i, j), 0.0) + a
    return out


def _eval(d: TrigPoly, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    s = np.sin(np.pi * t / 2)
    c = np.cos(np.pi * t / 2)
    acc = np.zeros_like(t)
    for (i, j), a in sorted(d.items()):
        acc = acc + a * (s ** i) * (c ** j)
    return acc


def _monomial_mean(i: int, j: int) -> float:
    """Average of s^i c^j over one period (double-factorial formula)."""
    if i % 2 or j % 2:
        return 0.0
    num = math.prod(range(i - 1, 0, -2)) * math.prod(range(j - 1, 0, -2))
    den = math.prod(range(i + j, 0, -2))
    return num / den if den else 1.0


def _mean(d: TrigPoly) -> float:
    return sum(a * _monomial_mean(i, j) for (i, j), a in d.items())


def _antiderivative(d: TrigPoly) -> tuple[float, TrigPoly]:
    """Split the t-antiderivative into linear drift plus a periodic part."""
    lin = 0.0
    per: TrigPoly = {}

    def add(key, a):
        per[key] = per.get(key, 0.0) + a

    def int_cos_power(j: int, a: float):
        # int c^j dt via the cosine power reduction, drift from the mean
        nonlocal lin
        while j >= 1:
            add((1, j - 1), a * (2 / math.pi) / j)
            a = a * (j - 1) / j
            j -= 2
        if j == 0:
            lin += a

    for (i, j), a in sorted(d.items()):
        if i == 0:
            int_cos_power(j, a)
        else:  # i == 1: int s c^j dt = -(2/pi) c^(j+1)/(j+1)
            add((0, j + 1), -a * (2 / math.pi) / (j + 1))
    return lin, per


def _shape_tower(r: int, q: int, coeffs: tuple[float, ...] | None,
                 rho: float = 0.0) -> tuple[TrigPoly, tuple[TrigPoly, ...]]:
    """Unnormalized y' = (c+rho)^{2r} (1-c)^q P(c) and its derivative tower.

    Tower level i is z^(i) up to scalar factors: divisions are by (c+rho),
    the angular part of x'.  Exact in the trig-monomial algebra.
    """
    shifted = {(0, 1): 1.0, (0, 0): rho}
    yp: TrigPoly = {(0, 0): 1.0}
    for _ in range(2 * r):
        yp = _mul(yp, shifted)
    for _ in range(q):
        yp = _mul(yp, {(0, 0): 1.0, (0, 1): -1.0})
    if coeffs is not None:
        half = {(0, 0): 0.5, (0, 1): 0.5}
        poly: TrigPoly = {}
        basis: TrigPoly = {(0, 0): 1.0}
        for a in coeffs:
            for key, v in _mul(basis, {(0, 0): a}).items():
                poly[key] = poly.get(key, 0.0) + v
            basis = _mul(basis, half)
        yp = _mul(yp, poly)
    tower = [_div_shifted(yp, rho)]
    for _ in range(1, r):
        tower.append(_div_shifted(_ddt(tower[-1]), rho))
    return yp, tuple(tower)


def _scale_poly(d: TrigPoly, kappa: float) -> TrigPoly:
    return {k: kappa * v for k, v in d.items()}


# ---------------------------------------------------------------------------
# the infinite zig-zag

@dataclass(frozen=True)
class InfiniteZigZag:
    """Periodic front descriptor: Z(t + 4) = Z(t) + (0, 4), folds at 1, 3 mod 4."""

    r: int
    smoothing: int
    yprime: TrigPoly                 # normalized: mean over a period = 1
    tower: tuple[TrigPoly, ...]      # z^(1) .. z^(r) in the trig algebra
    y_lin: float                     # drift of the y antiderivative (= 1)
    y_periodic: TrigPoly
    y_offset: float                  # fixes y(0) = 0

    period = 4.0
    folds = (1.0, 3.0)

    @property
    def span(self) -> float:
        """Horizontal extent of one period: x ranges over [-span/2, span/2]."""
        return 4.0 / math.pi

    def x(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (2.0 / math.pi) * np.sin(np.pi * t / 2)

    def xprime(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.cos(np.pi * t / 2)

    def y(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.y_lin * t + _eval(self.y_periodic, t) + self.y_offset

    def point(self, t) -> np.ndarray:
        """Front point Z(t), shape (..., 2)."""
        t = np.asarray(t, dtype=float)
        return np.stack([self.x(t), self.y(t)], axis=-1)

    def rows(self, t) -> np.ndarray:
        """Derivative rows z^(1)..z^(r) along the front, shape (r, ...)."""
        t = np.asarray(t, dtype=float)
        return np.stack([_eval(d, t) for d in self.tower])

    def sample(self, t_axis: np.ndarray) -> SampledJetMap:
        """The lift over a parameter window, in intrinsic units."""
        t_axis = np.asarray(t_axis, dtype=float)
        sig = JetSignature(n=1, k=1, r=self.r)
        z = np.concatenate([self.y(t_axis)[None], self.rows(t_axis)])
        return SampledJetMap(sig, (t_axis,), self.x(t_axis)[:, None],
                             np.moveaxis(z, 0, -1)[..., None])


def build_infinite_zigzag(r: int, smoothing: int | None = None) -> InfiniteZigZag:
    """Closed-form periodic zig-zag of cusp sharpness r.

    `smoothing` is the vanishing order of y' at the seams t = 0 mod 4; it
    must be at least 2r + 1 or the seams cannot match straight runs to jet
    order r.  The default (2r + 2) uses the tuned shape polynomial; other
    degrees fall back to the plain shape.
    """
    if r < 1:
        raise ValueError("cusp sharpness r must be >= 1")
    native = 2 * r + 2
    if smoothing is None:
        smoothing = native
    if smoothing < 2 * r + 1:
        raise ValueError(
            f"smoothing degree {smoothing} < {2 * r + 1} cannot match "
            f"jets of order {r} at the seams")
    q = max(r + 1, (smoothing + 1) // 2)
    coeffs = _SHAPE_COEF.get(r) if (q == r + 1) else None
    yp, tower = _shape_tower(r, q, coeffs)
    kappa = 1.0 / _mean(yp)
    yp = _scale_poly(yp, kappa)
    tower = tuple(_scale_poly(d, kappa) for d in tower)
    lin, per = _antiderivative(yp)
    offset = -_eval(per, np.array(0.0)).item()
    return InfiniteZigZag(r=r, smoothing=smoothing, yprime=yp, tower=tower,
                          y_lin=lin, y_periodic=per, y_offset=offset)


# ---------------------------------------------------------------------------
# zig-zag bump functions

@dataclass(frozen=True)
class ZigZagBump:
    """N stacked zig-zag periods interpolating y_a -> y_b over [a, b]."""

    N: int
    interval: tuple[float, float]
    y_a: float
    y_b: float
    front: MultiSection
    lift: SampledJetMap
    membranes: tuple[tuple[float, float], ...]
    measured_bounds: dict[int, float]
    seams: tuple[float, float]       # junctions between collars and zig-zags

    @property
    def r(self) -> int:
        return self.lift.signature.r


def _collar_nodes(h: float) -> int:
    # collar must sweep half the chart; its speed then at most matches the
    # seam speed of the zig-zag, keeping the x kink harmless
    alpha = _CHART_WIDTH * math.pi / 4
    return math.ceil(0.5 / (alpha * h) - 1e-12)


def build_bump(N: int, a: float, b: float, y_a: float, y_b: float, r: int,
               nodes_per_period: int = 64) -> ZigZagBump:
    """Zig-zag bump function on [a, b] interpolating between y_a and y_b.

    The chart is assembled from a straight collar at height y_a, N periods
    of the infinite zig-zag scaled vertically by 1/(4N), and a straight
    collar at height y_b; boundary jets are exact constants by construction.
    A flat request (y_a == y_b) degenerates to the constant section.
    """
    if N < 1:
        raise ValueError("level count N must be >= 1")
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    if nodes_per_period < 8 or nodes_per_period % 4:
        raise ValueError("nodes_per_period must be a multiple of 4, >= 8")
    npp = nodes_per_period
    h = 4.0 / npp
    cn = _collar_nodes(h)
    m = 2 * cn + N * npp
    tau = np.linspace(a, b, m + 1)
    sig = JetSignature(n=1, k=1, r=r)
    width = b - a
    dy = y_b - y_a

    if dy == 0.0:
        x = a + width * np.arange(m + 1) / m
        z = np.zeros((m + 1, r + 1, 1))
        z[:, 0, 0] = y_a
        lift = SampledJetMap(sig, (tau,), x[:, None], z)
        front = MultiSection(tau, x, np.full((m + 1, 1), y_a))
        return ZigZagBump(N, (a, b), y_a, y_b, front, lift, (),
                          {i: 0.0 for i in range(1, r + 1)},
                          (tau[cn], tau[cn + N * npp]))

    zz = build_infinite_zigzag(r)
    alpha = _CHART_WIDTH / zz.span
    idx = np.arange(m + 1)
    i_ls, i_rs = cn, cn + N * npp     # seam node indices
    t_std = (idx - cn) * h

    chart_x = np.empty(m + 1)
    chart_y = np.empty(m + 1)
    rows = np.zeros((m + 1, r + 1))
    zzs = slice(i_ls, i_rs + 1)
    chart_x[zzs] = 0.5 + alpha * zz.x(t_std[zzs])
    chart_y[zzs] = zz.y(t_std[zzs]) / (4.0 * N)
    tower = zz.rows(t_std[zzs])
    for i in range(1, r + 1):
        rows[zzs, i] = tower[i - 1] / (4.0 * N * alpha ** i)
    # seam nodes of each period are exact band levels with vanishing rows
    for j in range(N + 1):
        node = i_ls + j * npp
        chart_x[node] = 0.5
        chart_y[node] = j / N
        rows[node, 1:] = 0.0
    chart_x[:i_ls] = 0.5 * idx[:i_ls] / cn
    chart_y[:i_ls] = 0.0
    chart_x[i_rs + 1:] = 0.5 + 0.5 * (idx[i_rs + 1:] - i_rs) / cn
    chart_y[i_rs + 1:] = 1.0
    rows[:i_ls, 1:] = 0.0
    rows[i_rs + 1:, 1:] = 0.0

    x = a + width * chart_x
    rows[:, 0] = y_a + dy * chart_y
    for i in range(1, r + 1):
        rows[:, i] *= dy / width ** i

    lift = SampledJetMap(sig, (tau,), x[:, None], rows[..., None])
    cusps = []
    membranes = []
    quarter = npp // 4
    for j in range(N):
        lo = tau[i_ls + j * npp + quarter]
        hi = tau[i_ls + j * npp + 3 * quarter]
        cusps += [lo, hi]
        membranes.append((lo, hi))
    front = MultiSection(tau, x, rows[:, 0].copy(),
                         tuple(cusps), tuple(membranes))
    bump = ZigZagBump(N, (a, b), y_a, y_b, front, lift, tuple(membranes),
                      {}, (tau[i_ls], tau[i_rs]))
    bounds = {i: measure_derivative_bound(bump, i) for i in range(1, r + 1)}
    return replace(bump, measured_bounds=bounds)


def _seam_mask(params: np.ndarray, seams: tuple[float, ...],
               h: float) -> np.ndarray:
    """True on nodes further than 2h from every flattening seam."""
    keep = np.ones(params.size, dtype=bool)
    for s in seams:
        keep &= np.abs(params - s) > 2.0 * h + 1e-12 * max(1.0, abs(s))
    return keep


def measure_derivative_bound(obj, r_prime: int) -> float:
    """Max of |z^(r')| over the lift, away from the flattening seams."""
    if isinstance(obj, SwallowtailFamily):
        return max(measure_derivative_bound(s, r_prime) for s in obj.bumps())
    if not isinstance(obj, ZigZagBump):
        raise TypeError("expected a ZigZagBump or SwallowtailFamily")
    if not 1 <= r_prime <= obj.r:
        raise ValueError(f"derivative order {r_prime} outside 1..{obj.r}")
    params = obj.lift.params[0]
    keep = _seam_mask(params, obj.seams, obj.lift.spacings[0])
    row = obj.lift.row((r_prime,))[:, 0]
    return float(np.max(np.abs(row[keep])))


# ---------------------------------------------------------------------------
# swallowtail families

@dataclass(frozen=True)
class SwallowtailFamily:
    """Family of fronts over s in [c, d]: zero section grows into a bump.

    Each of the N stages performs one swallowtail move: a graphical wave
    steepens, its fold pair is born at mid-stage, and the new zig-zag then
    deepens into a standard period.  Slices are stored as independent
    multi-sections over t in [a, b]; the boundary trace h_N is the exact
    fiber value held near t = a.
    """

    N: int
    square: tuple[tuple[float, float], tuple[float, float]]
    s_grid: np.ndarray
    slices: tuple[MultiSection, ...]
    lifts: tuple[SampledJetMap, ...]
    h_trace: np.ndarray
    membranes: tuple[tuple[float, tuple[float, float]], ...]  # (s, t-interval)
    births: tuple[float, ...]        # s values of the N birth events
    measured_bounds: dict[int, float]
    seam_params: tuple[tuple[float, float], ...]

    @property
    def r(self) -> int:
        return self.lifts[0].signature.r

    def bumps(self):
        """View each slice as a bump record for bound measurements."""
        (c, d), (a, b) = self.square
        for sl, lift, seams in zip(self.slices, self.lifts, self.seam_params):
            yield ZigZagBump(self.N, (a, b), float(sl.y[0, 0]),
                             float(sl.y[-1, 0]), sl, lift, sl.membranes,
                             {}, seams)


# growth schedules: the shape amplitude ramps a0 -> 1 while the fold-killing
# shift rho ramps 2 -> 0 (birth crosses rho = 1 at mid-stage); the climb is
# throttled by amp^r so every derivative row stays within its final bound
_AMP_FLOOR = 0.05
_RHO_START = 2.0


def _stage_state(u: float, r: int) -> tuple[float, float, float]:
    amp = _AMP_FLOOR + (1.0 - _AMP_FLOOR) * u
    rho = _RHO_START * (1.0 - u)
    # the sheared window x_theta + rho*t spans (2/pi)(1 + 2*pi*rho), so this
    # cap keeps every morph inside the chart with the standard bump's margin
    amp = min(amp, 1.0 / (1.0 + 2.0 * math.pi * rho))
    delta = u * amp ** r
    return amp, rho, delta


def build_swallowtail_family(N: int, square, r: int,
                             nodes_per_period: int = 64,
                             slices_per_stage: int = 16) -> SwallowtailFamily:
    """Swallowtail family on square = ((c, d), (a, b)) with N birth events.

    Slice s = c is the zero section exactly; slice s = d is a zig-zag bump
    interpolating 1 -> 0.  Fiber values near t = a equal the boundary trace
    h_N(s) exactly on collar nodes; values near t = b are exactly 0.
    """
    if N < 1:
        raise ValueError("stage count N must be >= 1")
    (c, d), (a, b) = square
    if not (c < d and a < b):
        raise ValueError("square intervals must be ordered")
    npp = nodes_per_period
    if npp < 8 or npp % 4:
        raise ValueError("nodes_per_period must be a multiple of 4, >= 8")
    h = 4.0 / npp
    cn = _collar_nodes(h)
    m = 2 * cn + N * npp
    tau = np.linspace(a, b, m + 1)
    width = b - a
    sig = JetSignature(n=1, k=1, r=r)
    zz = build_infinite_zigzag(r)
    alpha = _CHART_WIDTH / zz.span
    idx = np.arange(m + 1)
    t_std = (idx - cn) * h

    # frozen-region chart data, shared bitwise by every slice
    frozen_x = 0.5 + alpha * zz.x(t_std)
    frozen_y = 1.0 - zz.y(t_std) / (4.0 * N)
    frozen_rows = -zz.rows(t_std) / (4.0 * N)
    for i in range(1, r + 1):
        frozen_rows[i - 1] /= alpha ** i
    for j in range(N + 1):
        node = cn + j * npp
        frozen_x[node] = 0.5
        frozen_y[node] = (N - j) / N
        frozen_rows[:, node] = 0.0

    s_grid = np.linspace(c, d, N * slices_per_stage + 1)
    u_birth = 1.0 - 1.0 / _RHO_START
    births = tuple(c + (d - c) * (l - 1 + u_birth) / N for l in range(1, N + 1))

    slices: list[MultiSection] = []
    lifts: list[SampledJetMap] = []
    h_trace = np.empty(s_grid.size)
    membranes: list[tuple[float, tuple[float, float]]] = []
    seam_params: list[tuple[float, float]] = []
    for si, s in enumerate(s_grid):
        u_total = (s - c) / (d - c) * N
        stage = min(N, int(np.floor(u_total)) + 1)
        u = u_total - (stage - 1)
        if si == s_grid.size - 1:
            stage, u = N, 1.0
        sl, lift, mems, seams = _family_slice(
            stage, u, N, r, sig, zz, alpha, tau, t_std, idx, cn, npp,
            frozen_x, frozen_y, frozen_rows, a, width)
        slices.append(sl)
        lifts.append(lift)
        h_trace[si] = sl.y[0, 0]
        membranes += [(float(s), mm) for mm in mems]
        seam_params.append(seams)

    fam = SwallowtailFamily(N, ((c, d), (a, b)), s_grid, tuple(slices),
                            tuple(lifts), h_trace, tuple(membranes), births,
                            {}, tuple(seam_params))
    bounds = {i: measure_derivative_bound(fam, i) for i in range(1, r + 1)}
    return replace(fam, measured_bounds=bounds)


def _family_slice(stage, u, N, r, sig, zz, alpha, tau, t_std, idx, cn, npp,
                  frozen_x, frozen_y, frozen_rows, a, width):
    """One slice: flat run at h, a morphing period, frozen periods, collar."""
    m = tau.size - 1
    amp, rho, delta = _stage_state(u, r)
    q = (zz.smoothing + 1) // 2
    slot = N - stage           # periods in [4*slot, 4*(slot+1)] are morphing
    i_ms = cn + slot * npp     # morph start node
    i_me = i_ms + npp          # morph end node = start of frozen periods
    i_rs = cn + N * npp        # right seam node
    height = (stage - 1 + delta) / N

    chart_x = np.empty(m + 1)
    chart_y = np.empty(m + 1)
    rows = np.zeros((m + 1, r + 1))

    # frozen periods and right collar
    chart_x[i_me:i_rs + 1] = frozen_x[i_me:i_rs + 1]
    chart_y[i_me:i_rs + 1] = frozen_y[i_me:i_rs + 1]
    rows[i_me:i_rs + 1, 1:] = frozen_rows[:, i_me:i_rs + 1].T
    chart_x[i_rs + 1:] = 0.5 + 0.5 * (idx[i_rs + 1:] - i_rs) / cn
    chart_y[i_rs + 1:] = 0.0

    # morphing period: x' = amp*alpha*(c + rho), y' from the shifted tower
    mslice = slice(i_ms, i_me + 1)
    t_loc = t_std[mslice] - t_std[i_me]          # local time in [-4, 0]
    yp, tower = _shape_tower(r, q, _SHAPE_COEF.get(r), rho=rho)
    climb = 4.0 * _mean(yp)
    kappa = delta / (N * climb) if climb else 0.0
    lin, per = _antiderivative(yp)
    y_end = _eval(per, np.array(0.0)).item()
    chart_y[mslice] = (stage - 1) / N + kappa * (
        -lin * t_loc + y_end - _eval(per, t_loc))
    chart_x[mslice] = 0.5 + amp * alpha * (zz.x(t_loc) + rho * t_loc)
    for i in range(1, r + 1):
        rows[mslice, i] = -kappa * _eval(tower[i - 1], t_loc) \
            / (amp * alpha) ** i
    chart_x[i_me] = 0.5
    chart_y[i_ms] = height
    chart_y[i_me] = (stage - 1) / N
    rows[i_ms, 1:] = 0.0
    rows[i_me, 1:] = 0.0

    # flat run (absorbs the unborn periods) up to the morph start
    x_ms = chart_x[i_ms]
    flat = slice(0, i_ms + 1)
    chart_x[flat] = x_ms * idx[flat] / i_ms
    chart_y[flat] = height

    x = a + width * chart_x
    rows[:, 0] = chart_y         # fiber values live in [0, 1] already
    for i in range(1, r + 1):
        rows[:, i] /= width ** i
    lift = SampledJetMap(sig, (tau,), x[:, None], rows[..., None])

    cusps: list[float] = []
    mems: list[tuple[float, float]] = []

    def to_tau(t_val: float) -> float:
        return a + width * (t_val - t_std[0]) / (t_std[-1] - t_std[0])

    if rho < 1.0:
        t_birth = 2.0 / math.pi * math.acos(-rho)
        lo = t_std[i_ms] + t_birth
        hi = t_std[i_me] - t_birth
        cusps += [to_tau(lo), to_tau(hi)]
        mems.append((to_tau(lo), to_tau(hi)))
    for j in range(slot + 1, N):
        lo = to_tau(4.0 * j + 1.0)
        hi = to_tau(4.0 * j + 3.0)
        cusps += [lo, hi]
        mems.append((lo, hi))
    front = MultiSection(tau, x, rows[:, 0].copy(), tuple(cusps), tuple(mems))
    return front, lift, tuple(mems), (tau[i_ms], tau[i_rs])
