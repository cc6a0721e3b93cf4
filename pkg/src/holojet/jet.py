"""Core jet-space model: signatures, sampled jet maps, formal sections.

Conventions fixed here:

* jet blocks are dense arrays of shape (#indices, k) with rows ordered by
  `multiindex.jet_indices` (graded, lex-descending within a degree);
* a SampledJetMap is a map of a 1- or 2-parameter uniform grid into jet
  space; it need not be graphical over the base (fronts of integral maps
  with tangencies are the main clients);
* all norms are Euclidean on stacked coordinate blocks, all distances are
  sups over sample nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .multiindex import (MultiIndex, block_count, degree, increment,
                         index_position, jet_indices)
from .quadrature import central_difference


@dataclass(frozen=True)
class JetSignature:
    """Dimensions of J^r: base n, fiber k, order r."""

    n: int
    k: int
    r: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.r < 0:
            raise ValueError(f"bad signature {self}")

    @property
    def indices(self) -> tuple[MultiIndex, ...]:
        return jet_indices(self.n, self.r)

    @property
    def block_size(self) -> int:
        return block_count(self.n, self.r)

    def position(self, index: MultiIndex) -> int:
        return index_position(self.n, self.r)[index]


@dataclass(frozen=True)
class JetPoint:
    signature: JetSignature
    x: np.ndarray  # (n,)
    z: np.ndarray  # (#indices, k)

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        sig = self.signature
        if self.x.shape != (sig.n,) or self.z.shape != (sig.block_size, sig.k):
            raise ValueError("jet point block dimensions do not match signature")
        if not (np.isfinite(self.x).all() and np.isfinite(self.z).all()):
            raise ValueError("non-finite jet point")

    @property
    def y(self) -> np.ndarray:
        return self.z[0]


def _check_uniform(axis: np.ndarray) -> float:
    if axis.ndim != 1 or axis.size < 3:
        raise ValueError("parameter axes need at least 3 nodes")
    steps = np.diff(axis)
    h = float(np.mean(steps))
    # linspace jitter sits a few ulps above 1e-12 relative on long axes
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise ValueError("parameter axis must be uniform and increasing")
    return h


@dataclass(frozen=True)
class SampledJetMap:
    """A jet-space valued map sampled on a uniform 1D or 2D parameter grid."""

    signature: JetSignature
    params: tuple[np.ndarray, ...]
    x: np.ndarray  # (*grid, n)
    z: np.ndarray  # (*grid, #indices, k)

    def __post_init__(self):
        object.__setattr__(self, "params",
                           tuple(np.asarray(p, dtype=float) for p in self.params))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=float))
        if len(self.params) not in (1, 2):
            raise ValueError("only 1- or 2-parameter grids are supported")
        grid = tuple(p.size for p in self.params)
        sig = self.signature
        if self.x.shape != grid + (sig.n,):
            raise ValueError(f"x shape {self.x.shape} != {grid + (sig.n,)}")
        if self.z.shape != grid + (sig.block_size, sig.k):
            raise ValueError(
                f"z shape {self.z.shape} != {grid + (sig.block_size, sig.k)}")
        for p in self.params:
            _check_uniform(p)

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.params)

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(float(p[1] - p[0]) for p in self.params)

    @property
    def y(self) -> np.ndarray:
        """Order-0 rows (section values), shape (*grid, k)."""
        return self.z[..., 0, :]

    def row(self, index: MultiIndex) -> np.ndarray:
        return self.z[..., self.signature.position(index), :]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def contains(self, x: np.ndarray) -> np.ndarray:
        t = np.asarray(x)[..., 0]
        pad = 1e-12 * max(1.0, abs(self.lo), abs(self.hi))
        return (t >= self.lo - pad) & (t <= self.hi + pad)


@dataclass(frozen=True)
class Circle:
    """1D periodic base, coordinate = arc length in [0, circumference)."""

    circumference: float

    def contains(self, x: np.ndarray) -> np.ndarray:
        return np.ones(np.asarray(x).shape[:-1], dtype=bool)


@dataclass(frozen=True)
class Disc:
    radius: float
    n: int = 2

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        return np.sqrt(np.sum(x * x, axis=-1)) <= self.radius * (1 + 1e-12)


Domain = Interval | Circle | Disc


@dataclass(frozen=True)
class FormalSection:
    """A section of the jet bundle: full z block prescribed per base point.

    Not required to be holonomic; rows are independent data.
    """

    signature: JetSignature
    domain: Domain
    block_fn: Callable[[np.ndarray], np.ndarray]

    def block(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.block_fn(x), dtype=float)
        want = x.shape[:-1] + (self.signature.block_size, self.signature.k)
        if out.shape != want:
            raise ValueError(f"formal section block shape {out.shape} != {want}")
        return out

    @classmethod
    def from_section(cls, section, signature: JetSignature,
                     domain: Domain) -> FormalSection:
        idx = signature.indices

        def block_fn(x):
            return np.stack([section.jet(x, I) for I in idx], axis=-2)

        return cls(signature, domain, block_fn)

    @classmethod
    def from_constant_block(cls, block: np.ndarray, signature: JetSignature,
                            domain: Domain) -> FormalSection:
        block = np.asarray(block, dtype=float)

        def block_fn(x):
            return np.broadcast_to(
                block, x.shape[:-1] + block.shape).copy()

        return cls(signature, domain, block_fn)


def prolong(section, signature: JetSignature,
            axes: tuple[np.ndarray, ...]) -> SampledJetMap:
    """Sample j^r(section) on the tensor grid of `axes` (graphical base grid)."""
    if len(axes) != signature.n:
        raise ValueError("prolong needs one axis per base dimension")
    axes = tuple(np.asarray(a, dtype=float) for a in axes)
    mesh = np.meshgrid(*axes, indexing="ij")
    x = np.stack(mesh, axis=-1)
    if hasattr(section, "jet"):
        z = np.stack([section.jet(x, I) for I in signature.indices], axis=-2)
    else:
        z = _prolong_callable(section, signature, axes)
    return SampledJetMap(signature, axes, x, z)


def _prolong_callable(f, signature: JetSignature,
                      axes: tuple[np.ndarray, ...]) -> np.ndarray:
    # order-2 central stencils on an extended grid so the requested window
    # keeps full accuracy at its boundary
    r = signature.r
    ext_axes = []
    for a in axes:
        h = _check_uniform(a)
        left = a[0] - h * np.arange(r, 0, -1)
        right = a[-1] + h * np.arange(1, r + 1)
        ext_axes.append(np.concatenate([left, a, right]))
    mesh = np.meshgrid(*ext_axes, indexing="ij")
    x = np.stack(mesh, axis=-1)
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape[:-1] + (signature.k,):
        raise ValueError("callable must return shape (*grid, k)")
    tables: dict[MultiIndex, np.ndarray] = {(0,) * signature.n: vals}
    rows = []
    for I in signature.indices:
        if I not in tables:
            a = next(i for i, v in enumerate(I) if v > 0)
            src = tables[I[:a] + (I[a] - 1,) + I[a + 1:]]
            h = float(ext_axes[a][1] - ext_axes[a][0])
            d = np.full(src.shape, np.nan)
            sl_in = [slice(None)] * src.ndim
            sl_in[a] = slice(1, -1)
            d[tuple(sl_in)] = central_difference(src, h, axis=a)
            tables[I] = d
        rows.append(tables[I])
    z = np.stack(rows, axis=-2)
    trim = tuple(slice(r, r + a.size) for a in axes)
    z = z[trim]
    if not np.isfinite(z).all():
        raise ValueError("grid too coarse for the requested stencil")
    return z


@dataclass(frozen=True)
class CartanResidual:
    """Finite-difference defect of the Cartan forms, per parameter axis."""

    per_axis: tuple[np.ndarray, ...]

    @property
    def max(self) -> float:
        vals = [float(np.max(np.abs(f))) if f.size else 0.0 for f in self.per_axis]
        return max(vals) if vals else 0.0


def cartan_residual(jmap: SampledJetMap) -> CartanResidual:
    """Residual of D_a z^(I) = sum_b z^(I+e_b) D_a x_b at interior nodes, |I| < r.

    Central order-2 differences along each parameter axis; exact integral
    maps give O(h^2).
    """
    sig = jmap.signature
    if sig.r == 0:
        return CartanResidual((np.zeros(jmap.grid_shape + (0, sig.k)),))
    low = block_count(sig.n, sig.r - 1)
    fields = []
    for axis, h in enumerate(jmap.spacings):
        dz = central_difference(jmap.z[..., :low, :], h, axis=axis)
        dx = central_difference(jmap.x, h, axis=axis)
        model = np.zeros_like(dz)
        for row, I in enumerate(sig.indices[:low]):
            for b in range(sig.n):
                up = sig.position(increment(I, b))
                sl = [slice(None)] * len(jmap.grid_shape)
                sl[axis] = slice(1, -1)
                model[..., row, :] += (jmap.z[..., up, :])[tuple(sl)] \
                    * dx[..., b][..., None]
        fields.append(dz - model)
    return CartanResidual(tuple(fields))


def cr_norm(obj) -> float:
    """Sup over nodes of the Euclidean norm of the full jet block."""
    if isinstance(obj, SampledJetMap):
        block = obj.z
    else:
        block = np.asarray(obj, dtype=float)
    flat = block.reshape(block.shape[:-2] + (-1,))
    return float(np.sqrt(np.max(np.sum(flat * flat, axis=-1)))) if flat.size else 0.0


def c0_distance(lift, sigma) -> float:
    """Sup over lift nodes of |lift block - sigma block at the node's base point|."""
    if isinstance(sigma, SampledJetMap) and isinstance(lift, FormalSection):
        lift, sigma = sigma, lift
    if isinstance(sigma, SampledJetMap):
        if lift.z.shape != sigma.z.shape:
            raise ValueError("sampled maps must share grid shape")
        diff = lift.z - sigma.z
    else:
        if not np.all(sigma.domain.contains(lift.x)):
            raise ValueError("lift leaves the formal section's domain")
        diff = lift.z - sigma.block(lift.x)
    flat = diff.reshape(diff.shape[:-2] + (-1,))
    return float(np.sqrt(np.max(np.sum(flat * flat, axis=-1)))) if flat.size else 0.0


def _series_inverse(b: np.ndarray, r: int) -> np.ndarray:
    """Coefficients of the compositional inverse of B(u) = sum_{j>=1} b[j] u^j."""
    c = np.zeros_like(b)
    c[1] = 1.0 / b[1]
    for m in range(2, r + 1):
        # coefficient of v^m in B(C(v)) must vanish; C^j at order m only
        # involves c[1..m-1] for j >= 2, so this is a clean recursion
        acc = np.zeros_like(b[0])
        for j in range(2, m + 1):
            acc = acc + b[j] * _power_coeff(c, j, m)
        c[m] = -acc / b[1]
    return c


def _power_coeff(c: np.ndarray, j: int, m: int) -> np.ndarray:
    """Coefficient of v^m in C(v)^j where C(v) = sum_{i>=1} c[i] v^i."""
    # dynamic convolution, orders up to m
    pw = np.zeros_like(c[: m + 1])
    pw[0] = np.ones_like(c[0])
    for _ in range(j):
        nxt = np.zeros_like(pw)
        for a in range(m + 1):
            if not np.any(pw[a]):
                continue
            for i in range(1, m + 1 - a):
                nxt[a + i] = nxt[a + i] + pw[a] * c[i]
        pw = nxt
    return pw[m]


def _series_compose(a: np.ndarray, c: np.ndarray, r: int) -> np.ndarray:
    """Coefficients of A(C(v)) truncated at order r; A has a constant term."""
    out = np.zeros_like(a)
    out[0] = a[0]
    for m in range(1, r + 1):
        acc = np.zeros_like(a[0])
        for j in range(1, m + 1):
            acc = acc + a[j] * _power_coeff(c, j, m)
        out[m] = acc
    return out


def apply_point_symmetry(jmap, scale: float = 1.0, shift=None, reparam=None):
    """Transform jets by a fiberwise-affine point symmetry.

    scale: multiplies every z row (fiber dilation y -> scale * y).
    shift: SectionLike c(x); adds d^I c to z^(I) (vertical translation).
    reparam: base diffeomorphism phi with analytic jets (1D bases only);
      moves base points to phi(x) and transforms jets by the chain rule.
    Order of application: reparam, then scale, then shift.
    """
    from .front import MultiSection  # local import to avoid a cycle
    if isinstance(jmap, MultiSection):
        return jmap.apply_symmetry(scale=scale, shift=shift, reparam=reparam)
    if scale == 0.0:
        raise ValueError("vertical scale must be nonzero")
    sig = jmap.signature
    x = jmap.x
    z = jmap.z
    if reparam is not None:
        if sig.n != 1:
            raise ValueError("base reparameterization supports 1D bases only")
        x, z = _reparam_1d(jmap, reparam)
    z = scale * z
    if shift is not None:
        z = z + np.stack([shift.jet(x, I) for I in sig.indices], axis=-2)
    return SampledJetMap(sig, jmap.params, x, z)


def _reparam_1d(jmap: SampledJetMap, phi) -> tuple[np.ndarray, np.ndarray]:
    """Move a 1D-base sampled map along phi: x -> phi(x), jets by chain rule.

    Works on Taylor coefficient arrays: invert phi's local series, compose
    with the fiber series, read the new jets off the composition.
    """
    from math import factorial
    sig = jmap.signature
    r = sig.r
    xold = jmap.x
    fact = np.array([factorial(i) for i in range(r + 1)])
    b = np.stack([phi.jet(xold, (i,))[..., 0] for i in range(r + 1)]) \
        / fact.reshape((r + 1,) + (1,) * (xold.ndim - 1))
    if np.any(b[1] == 0.0):
        raise ValueError("reparameterization must be strictly monotone")
    xnew = b[0][..., None]
    # fiber Taylor coefficients, shape (r+1, *grid, k)
    a = np.moveaxis(jmap.z, -2, 0) \
        / fact.reshape((r + 1,) + (1,) * (jmap.z.ndim - 1))
    c = _series_inverse(b, r)[..., None]  # broadcast over the fiber axis
    composed = _series_compose(a, c, r)
    znew = np.moveaxis(composed, 0, -2) * fact[:, None]
    return xnew, znew
