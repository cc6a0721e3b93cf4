"""Integration engines: curve lifts, fibered principal lifts, isotropic disc lifts.

A principal sample carries base coordinates plus the pure top derivative
z^(0,...,0,r); a metasymplectic sample carries the whole degree-r block.
Lifting reconstructs every lower-order jet row by cumulative quadrature,
which is the only way data enters: no symbolic shortcuts, so round-trip
accuracy statements are meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jet import JetSignature, SampledJetMap, _check_uniform
from .multiindex import (MultiIndex, block_count, degree, increment,
                         indices_of_degree, jet_indices)
from .quadrature import cum_simpson, fd_derivative


@dataclass(frozen=True)
class PrincipalSample:
    """Fibered map (x_tilde, x_n(t)) with the pure r-th t-derivative block."""

    signature: JetSignature
    params: tuple[np.ndarray, ...]
    x: np.ndarray   # (*grid, n)
    zr: np.ndarray  # (*grid, k)

    def __post_init__(self):
        object.__setattr__(self, "params",
                           tuple(np.asarray(p, dtype=float) for p in self.params))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "zr", np.asarray(self.zr, dtype=float))
        sig = self.signature
        grid = tuple(p.size for p in self.params)
        if len(self.params) != sig.n:
            raise ValueError("principal sample needs one parameter axis per "
                             "base dimension (H axes plus t)")
        if self.x.shape != grid + (sig.n,) or self.zr.shape != grid + (sig.k,):
            raise ValueError("principal sample shapes do not match signature")
        if not (np.isfinite(self.x).all() and np.isfinite(self.zr).all()):
            raise ValueError("non-finite principal sample")
        for p in self.params:
            _check_uniform(p)
        # fibered over H: lateral base coordinates must equal the grid axes
        for a in range(sig.n - 1):
            shape = [1] * (sig.n)
            shape[a] = self.params[a].size
            want = self.params[a].reshape(shape)
            if not np.array_equal(self.x[..., a],
                                  np.broadcast_to(want, grid)):
                raise ValueError(f"x[..., {a}] must equal parameter axis {a}")

    @property
    def t_axis(self) -> np.ndarray:
        return self.params[-1]


@dataclass(frozen=True)
class MetasymplecticSample:
    """Map into B + Sym^r(B, F): base point plus the full degree-r block."""

    signature: JetSignature
    params: tuple[np.ndarray, ...]
    x: np.ndarray   # (*grid, n)
    zr: np.ndarray  # (*grid, #degree-r indices, k)

    def __post_init__(self):
        object.__setattr__(self, "params",
                           tuple(np.asarray(p, dtype=float) for p in self.params))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "zr", np.asarray(self.zr, dtype=float))
        sig = self.signature
        grid = tuple(p.size for p in self.params)
        nsym = len(indices_of_degree(sig.n, sig.r))
        if self.x.shape != grid + (sig.n,) or self.zr.shape != grid + (nsym, sig.k):
            raise ValueError("metasymplectic sample shapes do not match signature")
        if not (np.isfinite(self.x).all() and np.isfinite(self.zr).all()):
            raise ValueError("non-finite metasymplectic sample")
        for p in self.params:
            _check_uniform(p)


@dataclass(frozen=True)
class InitialDatum:
    """Values of the full jet block on the starting slice (or start node)."""

    z: np.ndarray   # (n_idx, k) for curves; (H, n_idx, k) for fibered lifts
    node: int = 0   # index of the anchor node on the t axis

    @classmethod
    def zeros(cls, signature: JetSignature, h_shape: tuple[int, ...] = (),
              node: int = 0) -> InitialDatum:
        return cls(np.zeros(h_shape + (signature.block_size, signature.k)), node)


def lift_curve(g: PrincipalSample, init: InitialDatum | None = None) -> SampledJetMap:
    """Lift 1D principal data by z^(l)(t) = z^(l)(t0) + int z^(l+1) x' ds."""
    sig = g.signature
    if sig.n != 1:
        raise ValueError("lift_curve expects a 1D base")
    if init is None:
        init = InitialDatum.zeros(sig)
    t = g.t_axis
    h = float(t[1] - t[0])
    if not 0 <= init.node < t.size:
        raise ValueError("anchor node outside the grid")
    init_z = np.asarray(init.z, dtype=float)
    if init_z.shape != (sig.block_size, sig.k):
        raise ValueError("initial datum block does not match signature")
    xp = fd_derivative(g.x[..., 0], h)
    rows = np.empty((t.size, sig.block_size, sig.k))
    rows[:, sig.r, :] = g.zr
    for level in range(sig.r - 1, -1, -1):
        integrand = rows[:, level + 1, :] * xp[:, None]
        rows[:, level, :] = init_z[level] + np.moveaxis(
            cum_simpson(np.moveaxis(integrand, 0, -1), h, anchor=init.node), -1, 0)
    return SampledJetMap(sig, g.params, g.x, rows)


def lift_principal(g: PrincipalSample, init: InitialDatum | None = None,
                   consistency_tol: float | None = None) -> SampledJetMap:
    """Lift fibered principal data: t-quadrature per fiber line, lateral fill.

    Lateral rows are filled in rounds of increasing lateral degree by
    z^(I + e_a) = D_a z^(I) - z^(I + e_n) * D_a x_n  (a a lateral axis),
    then the whole output is residual-checked; a residual above
    `consistency_tol` (default 10 h^2 times the data scale) is an error.
    """
    sig = g.signature
    if sig.n == 1:
        return lift_curve(g, init)
    if sig.n != 2:
        raise ValueError("fibered lifting is implemented for n <= 2")
    t = g.t_axis
    ht = float(t[1] - t[0])
    hl = float(g.params[0][1] - g.params[0][0])
    t0 = int(np.argmin(np.abs(t)))
    if abs(t[t0]) > 1e-12:
        raise ValueError("t = 0 must be a grid line")
    if init is None:
        init = InitialDatum.zeros(sig, h_shape=(g.params[0].size,), node=t0)
    init_z = np.asarray(init.z, dtype=float)
    if init_z.shape != (g.params[0].size, sig.block_size, sig.k):
        raise ValueError("initial datum slice does not match the H grid")

    indices = sig.indices
    pos = {I: i for i, I in enumerate(indices)}
    grid = g.x.shape[:-1]
    rows = np.full(grid + (sig.block_size, sig.k), np.nan)
    xn = g.x[..., 1]
    dxn_dt = fd_derivative(xn, ht, axis=1)

    # pure-t tower per fiber line
    rows[..., pos[(0, sig.r)], :] = g.zr
    for level in range(sig.r - 1, -1, -1):
        integrand = rows[..., pos[(0, level + 1)], :] * dxn_dt[..., None]
        acc = cum_simpson(np.moveaxis(integrand, 1, -1), ht, anchor=t0)
        rows[..., pos[(0, level)], :] = (np.moveaxis(acc, -1, 1)
                                         + init_z[:, None, pos[(0, level)], :])

    # lateral rounds: lateral degree d built from degree d-1
    dxn_dl = fd_derivative(xn, hl, axis=0)
    for d in range(1, sig.r + 1):
        for I in indices:
            if I[0] != d or degree(I) > sig.r:
                continue
            src = (I[0] - 1, I[1])
            up = (I[0] - 1, I[1] + 1)
            dsrc = fd_derivative(rows[..., pos[src], :], hl, axis=0)
            rows[..., pos[I], :] = dsrc - rows[..., pos[up], :] * dxn_dl[..., None]

    out = SampledJetMap(sig, g.params, g.x, rows)
    from .jet import cartan_residual
    res = cartan_residual(out).max
    scale = max(1.0, float(np.max(np.abs(rows))))
    tol = consistency_tol
    if tol is None:
        tol = 10.0 * max(ht, hl) ** 2 * scale
    if res > tol:
        raise ValueError(
            f"lateral fill inconsistent: residual {res:.3e} > {tol:.3e}")
    return out


def metasymplectic_pairing(signature: JetSignature,
                           v0: np.ndarray, a0: np.ndarray,
                           v1: np.ndarray, a1: np.ndarray) -> np.ndarray:
    """Omega(v0 + A0, v1 + A1) = iota_{v0} A1 - iota_{v1} A0, a Sym^{r-1} block."""
    return _contract(signature, v0, a1) - _contract(signature, v1, a0)


def _contract(sig: JetSignature, v: np.ndarray, a: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    a = np.asarray(a, dtype=float)
    top = indices_of_degree(sig.n, sig.r)
    lower = indices_of_degree(sig.n, sig.r - 1)
    if v.shape[-1] != sig.n or a.shape[-2] != len(top):
        raise ValueError("pairing blocks do not match the signature")
    tpos = {I: i for i, I in enumerate(top)}
    out = np.zeros(a.shape[:-2] + (len(lower), a.shape[-1]))
    for j, J in enumerate(lower):
        for axis in range(sig.n):
            out[..., j, :] += v[..., axis, None] * a[..., tpos[increment(J, axis)], :]
    return out


def lift_isotropic_disc(g: MetasymplecticSample,
                        base_value: InitialDatum | None = None,
                        isotropy_tol: float | None = None,
                        path_tol: float | None = None) -> SampledJetMap:
    """Lift an isotropic map into B + Sym^r to an integral jet-space map.

    Degree r-1 rows are potentials of the pulled-back tautological form
    (integrated along center-out axis-parallel L-paths, both axis orders
    compared); the recursion then descends to order 0.
    """
    sig = g.signature
    if sig.n == 1:
        return _disc_lift_1d(g, base_value)
    if sig.n != 2:
        raise ValueError("disc lifting is implemented for n <= 2")
    h0 = float(g.params[0][1] - g.params[0][0])
    h1 = float(g.params[1][1] - g.params[1][0])
    c0 = int(np.argmin(np.abs(g.params[0])))
    c1 = int(np.argmin(np.abs(g.params[1])))
    scale = max(1.0, float(np.max(np.abs(g.zr))))
    if isotropy_tol is None:
        isotropy_tol = 1e-6 * scale
    _check_isotropy(g, h0, h1, isotropy_tol)

    if base_value is None:
        base_value = InitialDatum.zeros(sig)
    init_z = np.asarray(base_value.z, dtype=float)
    if init_z.shape != (sig.block_size, sig.k):
        raise ValueError("base value block does not match signature")
    if path_tol is None:
        path_tol = 1e-6 * scale

    indices = sig.indices
    pos = {I: i for i, I in enumerate(indices)}
    grid = g.x.shape[:-1]
    rows = np.full(grid + (sig.block_size, sig.k), np.nan)
    for i, I in enumerate(indices_of_degree(sig.n, sig.r)):
        rows[..., pos[I], :] = g.zr[..., i, :]

    dx0 = (fd_derivative(g.x[..., 0], h0, axis=0),
           fd_derivative(g.x[..., 0], h1, axis=1))
    dx1 = (fd_derivative(g.x[..., 1], h0, axis=0),
           fd_derivative(g.x[..., 1], h1, axis=1))
    for d in range(sig.r - 1, -1, -1):
        for J in indices_of_degree(sig.n, d):
            up0 = rows[..., pos[increment(J, 0)], :]
            up1 = rows[..., pos[increment(J, 1)], :]
            # pullback of the tautological Sym^{d}-valued 1-form along axes
            w_ax0 = up0 * dx0[0][..., None] + up1 * dx1[0][..., None]
            w_ax1 = up0 * dx0[1][..., None] + up1 * dx1[1][..., None]
            pot_a = _l_path_potential(w_ax0, w_ax1, h0, h1, c0, c1, order=0)
            pot_b = _l_path_potential(w_ax0, w_ax1, h0, h1, c0, c1, order=1)
            mismatch = float(np.max(np.abs(pot_a - pot_b)))
            if mismatch > path_tol:
                raise ValueError(
                    f"path-order mismatch {mismatch:.3e} > {path_tol:.3e} "
                    f"at degree {d}: input not exact enough to lift")
            rows[..., pos[J], :] = pot_a + init_z[pos[J]]
    return SampledJetMap(sig, g.params, g.x, rows)


def _l_path_potential(w0: np.ndarray, w1: np.ndarray, h0: float, h1: float,
                      c0: int, c1: int, order: int) -> np.ndarray:
    """Potential with F(center) = 0 from axis integrands w0, w1 along L-paths."""
    if order == 0:
        leg0 = cum_simpson(np.moveaxis(w0, 0, -1), h0, anchor=c0)
        leg0 = np.moveaxis(leg0, -1, 0)[:, c1]          # along axis 0 at j=c1
        leg1 = cum_simpson(np.moveaxis(w1, 1, -1), h1, anchor=c1)
        return np.moveaxis(leg1, -1, 1) + leg0[:, None]
    leg1 = cum_simpson(np.moveaxis(w1, 1, -1), h1, anchor=c1)
    leg1 = np.moveaxis(leg1, -1, 1)[c0]                 # along axis 1 at i=c0
    leg0 = cum_simpson(np.moveaxis(w0, 0, -1), h0, anchor=c0)
    return np.moveaxis(leg0, -1, 0) + leg1[None, :]


def _check_isotropy(g: MetasymplecticSample, h0: float, h1: float,
                    tol: float) -> None:
    from .quadrature import central_difference
    sig = g.signature
    v0 = np.stack([central_difference(g.x[..., a], h0, axis=0)[:, 1:-1]
                   for a in range(2)], axis=-1)
    v1 = np.stack([central_difference(g.x[..., a], h1, axis=1)[1:-1]
                   for a in range(2)], axis=-1)
    a0 = central_difference(g.zr, h0, axis=0)[:, 1:-1]
    a1 = central_difference(g.zr, h1, axis=1)[1:-1]
    res = metasymplectic_pairing(sig, v0, a0, v1, a1)
    worst = float(np.max(np.abs(res))) if res.size else 0.0
    if worst > tol:
        raise ValueError(
            f"input is not isotropic: Omega residual {worst:.3e} > {tol:.3e}")


def _disc_lift_1d(g: MetasymplecticSample,
                  base_value: InitialDatum | None) -> SampledJetMap:
    sig = g.signature
    principal = PrincipalSample(sig, g.params, g.x, g.zr[..., 0, :])
    if base_value is None:
        base_value = InitialDatum.zeros(sig, node=int(np.argmin(np.abs(g.params[0]))))
    return lift_curve(principal, base_value)


def principal_projection(jmap: SampledJetMap) -> PrincipalSample:
    """Forget everything except base coordinates and the pure top derivative."""
    sig = jmap.signature
    top = (0,) * (sig.n - 1) + (sig.r,)
    return PrincipalSample(sig, jmap.params, jmap.x, jmap.row(top))


def metasymplectic_projection(jmap: SampledJetMap) -> MetasymplecticSample:
    """Forget everything except base coordinates and the full degree-r block."""
    sig = jmap.signature
    cols = [sig.position(I) for I in indices_of_degree(sig.n, sig.r)]
    return MetasymplecticSample(sig, jmap.params, jmap.x, jmap.z[..., cols, :])
