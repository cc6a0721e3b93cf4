"""Singularity-model zoo: folds, double folds, pleats, cusps, wrinkles.

Every model is specified by its principal data (base coordinates plus the
pure r-th derivative along t) and lifted by quadrature with zero initial
data anchored at t = 0.  Closed-form fronts are never used here; they live
in the tests as independent oracles.

Family kinds (pleat, reidemeister-i, closed-pleat, stabilisation, wrinkle,
closed-wrinkle) are sampled on a 2D (parameter, t) grid; their `front` and
`singular_params` fields describe the slice at `slice_value`.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import front as front_mod
from .front import MultiSection
from .jet import JetSignature, SampledJetMap
from .lift import InitialDatum, PrincipalSample, lift_curve, lift_principal
from .multiindex import MultiIndex

KINDS = ("fold", "double-fold", "closed-double-fold", "pleat", "closed-pleat",
         "cubic", "vertical-cusp", "reidemeister-i", "stabilisation",
         "wrinkle", "closed-wrinkle")

# kinds whose top derivative is t^2 instead of t
_CLOSED = {"closed-double-fold", "closed-pleat", "vertical-cusp",
           "stabilisation", "closed-wrinkle"}
_FAMILY = {"pleat", "closed-pleat", "reidemeister-i", "stabilisation",
           "wrinkle", "closed-wrinkle"}

_DEFAULT_WINDOW = {"fold": 1.0, "cubic": 1.0, "vertical-cusp": 1.0}
_DEFAULT_SLICE = {"wrinkle": 0.0, "closed-wrinkle": 0.0}


def normalize_kind(kind: str) -> str:
    flat = kind.strip().lower().replace("_", "").replace("-", "").replace(" ", "")
    for name in KINDS:
        if flat == name.replace("-", ""):
            return name
    raise ValueError(f"unknown model kind {kind!r}; choose from {KINDS}")


@dataclass(frozen=True)
class ModelDescriptor:
    kind: str
    r: int = 1
    window: float | None = None       # half-width of the t window
    nodes: int = 2001                 # t nodes, odd so t = 0 is a grid point
    lateral_nodes: int = 199          # family-parameter nodes; the default
                                      # spacing 1/66 puts -1, 0, 1 on the grid
    slice_value: float | None = None  # frozen family parameter for the front
    rho: Callable[[np.ndarray], np.ndarray] | None = None  # wrinkle height

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if self.r < 1:
            raise ValueError("jet order r must be >= 1")
        if self.nodes < 5 or self.nodes % 2 == 0:
            raise ValueError("nodes must be odd and >= 5")
        if self.kind in _FAMILY and (self.lateral_nodes < 5
                                     or self.lateral_nodes % 2 == 0):
            raise ValueError("lateral_nodes must be odd and >= 5")

    @property
    def half_width(self) -> float:
        if self.window is not None:
            return float(self.window)
        return _DEFAULT_WINDOW.get(self.kind, 1.5)

    @property
    def front_slice(self) -> float:
        if self.slice_value is not None:
            return float(self.slice_value)
        return _DEFAULT_SLICE.get(self.kind, 1.0)

    def height(self, lateral: np.ndarray) -> np.ndarray:
        """Wrinkle height over the family parameter; default is |k|^2 - 1."""
        if self.rho is None:
            return lateral ** 2 - 1.0
        return np.asarray(self.rho(lateral), dtype=float)


@dataclass(frozen=True)
class ModelOutput:
    descriptor: ModelDescriptor
    principal: PrincipalSample
    lift: SampledJetMap
    front: MultiSection
    singular_params: tuple[float, ...]
    membrane: tuple[tuple[float, float], ...]


def _top_derivative(kind: str, t: np.ndarray) -> np.ndarray:
    return t ** 2 if kind in _CLOSED else t.copy()


def _base_curve(kind: str, t: np.ndarray,
                lateral: float | np.ndarray, rho) -> np.ndarray:
    if kind == "fold":
        return t ** 2 / 2.0
    if kind in ("double-fold", "closed-double-fold"):
        return t ** 3 / 3.0 - t
    if kind in ("cubic", "vertical-cusp"):
        return t ** 3 / 3.0
    if kind in ("pleat", "closed-pleat", "reidemeister-i", "stabilisation"):
        return t ** 3 / 3.0 - lateral * t
    if kind in ("wrinkle", "closed-wrinkle"):
        return t ** 3 / 3.0 + rho * t
    raise AssertionError(kind)


def _slice_locus(kind: str, lateral: float, rho: float,
                 half_width: float) -> tuple[tuple[float, ...],
                                             tuple[tuple[float, float], ...]]:
    """Analytic tangency parameters and membrane of a frozen slice."""
    if kind == "fold":
        return (0.0,), ()
    if kind in ("double-fold", "closed-double-fold"):
        return (-1.0, 1.0), ((-1.0, 1.0),)
    if kind in ("cubic", "vertical-cusp"):
        return (0.0,), ()
    if kind in ("pleat", "closed-pleat", "reidemeister-i", "stabilisation"):
        # x' = t^2 - lateral
        if lateral > 0:
            s = float(np.sqrt(lateral))
            if s <= half_width:
                return (-s, s), ((-s, s),)
            return (), ()
        if lateral == 0:
            return (0.0,), ()
        return (), ()
    if kind in ("wrinkle", "closed-wrinkle"):
        # x' = t^2 + rho(k)
        if rho < 0:
            s = float(np.sqrt(-rho))
            if s <= half_width:
                return (-s, s), ((-s, s),)
            return (), ()
        if rho == 0:
            return (0.0,), ()
        return (), ()
    raise AssertionError(kind)


def _check_wrinkle_height(d: ModelDescriptor, lateral: np.ndarray) -> None:
    """Sign sampling: negative inside D, positive outside, transverse on its edge."""
    rho = d.height(lateral)
    if not np.any(rho < 0):
        raise ValueError("wrinkle height is nowhere negative inside the window")
    sign_changes = np.nonzero(np.diff(np.sign(rho)) != 0)[0]
    if sign_changes.size == 0:
        raise ValueError("wrinkle height never crosses zero in the window")
    h = float(lateral[1] - lateral[0])
    for i in sign_changes:
        if abs(rho[i + 1] - rho[i]) <= 1e-9 * h:
            raise ValueError("wrinkle height is not transverse at its zero set")
    first, last = sign_changes[0], sign_changes[-1]
    if np.any(rho[: first + 1] < 0) or np.any(rho[last + 1:] < 0):
        raise ValueError("wrinkle height must be positive outside the membrane")


def build_model(d: ModelDescriptor) -> ModelOutput:
    """Sample the model's principal data and lift it with zero initial data."""
    w = d.half_width
    t = np.linspace(-w, w, d.nodes)
    if d.kind not in _FAMILY:
        sig = JetSignature(n=1, k=1, r=d.r)
        x = _base_curve(d.kind, t, 0.0, None)
        g = PrincipalSample(sig, (t,), x[:, None], _top_derivative(d.kind, t)[:, None])
        lift = lift_curve(g, InitialDatum.zeros(sig, node=d.nodes // 2))
        singular, membrane = _slice_locus(d.kind, 0.0, 0.0, w)
        front = front_mod.from_sampled(lift, singular, membrane)
        return ModelOutput(d, g, lift, front, singular, membrane)

    sig = JetSignature(n=2, k=1, r=d.r)
    lateral = np.linspace(-w, w, d.lateral_nodes)
    if d.kind in ("wrinkle", "closed-wrinkle"):
        _check_wrinkle_height(d, lateral)
        rho = d.height(lateral)[:, None]
    else:
        rho = None
    xn = _base_curve(d.kind, t[None, :], lateral[:, None], rho)
    x = np.stack([np.broadcast_to(lateral[:, None], xn.shape), xn], axis=-1)
    zr = np.broadcast_to(_top_derivative(d.kind, t), xn.shape)[..., None]
    g = PrincipalSample(sig, (lateral, t), x, np.ascontiguousarray(zr))
    lift = lift_principal(g)

    s = d.front_slice
    i_s = int(np.argmin(np.abs(lateral - s)))
    if abs(lateral[i_s] - s) > 1e-9:
        raise ValueError(f"slice value {s} is not on the lateral grid")
    rho_s = float(d.height(np.array([lateral[i_s]]))[0]) if rho is not None else 0.0
    singular, membrane = _slice_locus(d.kind, float(lateral[i_s]), rho_s, w)
    front = MultiSection(t, lift.x[i_s, :, 1], lift.y[i_s], singular, membrane)
    return ModelOutput(d, g, lift, front, singular, membrane)


def stabilise(m: ModelOutput, v_dims: int, z_dims: int) -> ModelOutput:
    """Extend the domain by trivial parameters and the fiber by zero blocks."""
    if v_dims < 0 or z_dims < 0:
        raise ValueError("stabilisation counts must be >= 0")
    if v_dims == 0 and z_dims == 0:
        return replace(m)
    old = m.lift
    sig = old.signature
    if sig.n + v_dims > 2:
        raise ValueError("sampled grids support at most 2 base dimensions")
    new_sig = JetSignature(n=sig.n + v_dims, k=sig.k + z_dims, r=sig.r)

    params = old.params
    x = old.x
    z = old.z
    for _ in range(v_dims):
        v_axis = np.linspace(-1.0, 1.0, m.descriptor.lateral_nodes)
        grid = (v_axis.size,) + x.shape[:-1]
        xv = np.broadcast_to(v_axis.reshape((-1,) + (1,) * (x.ndim - 1)),
                             grid)[..., None]
        x = np.concatenate(
            [xv, np.broadcast_to(x, grid + (x.shape[-1],))], axis=-1)
        z = np.broadcast_to(z, grid + z.shape[-2:])
        params = (v_axis,) + params

    # old index I maps to (0,...,0) + I; every index touching a new
    # direction is zero (jets constant along v); new fiber columns are zero
    old_pos = {I: i for i, I in enumerate(sig.indices)}
    rows = np.zeros(z.shape[:-2] + (new_sig.block_size, new_sig.k))
    for i, index in enumerate(new_sig.indices):
        lead, tail = index[:v_dims], index[v_dims:]
        if any(lead):
            continue
        rows[..., i, : sig.k] = z[..., old_pos[tail], :]
    lift = SampledJetMap(new_sig, params, np.ascontiguousarray(x), rows)

    top: MultiIndex = (0,) * (new_sig.n - 1) + (sig.r,)
    principal = PrincipalSample(new_sig, params, lift.x, lift.row(top))
    return ModelOutput(m.descriptor, principal, lift, m.front,
                       m.singular_params, m.membrane)


def reidemeister_family(r: int, s_grid: np.ndarray,
                        t_grid: np.ndarray) -> list[ModelOutput]:
    """Frozen-parameter slices of the first Reidemeister move.

    The family parameter s is the negative of the classical pleat parameter:
    s < 0 slices are graphical, s = 0 is the cubic, s > 0 slices are double
    folds with tangencies at t = +-sqrt(s).
    """
    s_grid = np.asarray(s_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if not (s_grid.min() < 0 <= s_grid.max()):
        raise ValueError("the family grid must cross s = 0")
    if t_grid.size % 2 == 0:
        raise ValueError("t grid needs a middle node at t = 0")
    sig = JetSignature(n=1, k=1, r=r)
    w = float(t_grid[-1])
    out = []
    for s in s_grid:
        x = t_grid ** 3 / 3.0 - s * t_grid
        g = PrincipalSample(sig, (t_grid,), x[:, None], t_grid[:, None].copy())
        lift = lift_curve(g, InitialDatum.zeros(sig, node=t_grid.size // 2))
        singular, membrane = _slice_locus("pleat", float(s), 0.0, w)
        front = front_mod.from_sampled(lift, singular, membrane)
        d = ModelDescriptor("reidemeister-i", r=r, window=w, nodes=t_grid.size,
                            slice_value=float(s))
        out.append(ModelOutput(d, g, lift, front, singular, membrane))
    return out
