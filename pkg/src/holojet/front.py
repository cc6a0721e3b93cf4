"""Multi-sections: front projections of integral maps over a 1D base.

A multi-section is a parameterized front curve t -> (x(t), y(t)) that is
graphical except at finitely many cusp parameters, where the base
coordinate reverses direction.  Branches are the maximal graphical pieces
between cusps; membranes are the parameter intervals spanned by
cancelling cusp pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class MultiSection:
    t: np.ndarray          # (P,) strictly increasing parameter
    x: np.ndarray          # (P,) base coordinate along the front
    y: np.ndarray          # (P, k) fiber values
    cusps: tuple[float, ...] = ()
    membranes: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        y = np.asarray(self.y, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        object.__setattr__(self, "y", y)
        if self.t.ndim != 1 or self.x.shape != self.t.shape \
                or self.y.shape[0] != self.t.size:
            raise ValueError("front arrays must share the parameter axis")
        if self.t.size and np.any(np.diff(self.t) <= 0):
            raise ValueError("front parameter must be strictly increasing")

    @property
    def k(self) -> int:
        return self.y.shape[1]

    def branch_slices(self) -> list[slice]:
        """Maximal graphical pieces: node ranges split at the cusp parameters."""
        if self.t.size == 0:
            return []
        cuts = [0]
        for c in self.cusps:
            i = int(np.searchsorted(self.t, c))
            if 0 < i < self.t.size:
                cuts.append(i)
        cuts.append(self.t.size)
        cuts = sorted(set(cuts))
        return [slice(a, min(b + 1, self.t.size))
                for a, b in zip(cuts[:-1], cuts[1:])]

    def branches(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        return [(self.t[s], self.x[s], self.y[s]) for s in self.branch_slices()]

    def apply_symmetry(self, scale: float = 1.0, shift=None,
                       reparam=None) -> MultiSection:
        """Vertical scale/shift and base reparameterization of the front."""
        if scale == 0.0:
            raise ValueError("vertical scale must be nonzero")
        x = self.x
        if reparam is not None:
            x = reparam.jet(self.x[:, None], (0,))[:, 0]
            if np.any(reparam.jet(self.x[:, None], (1,))[:, 0] == 0.0):
                raise ValueError("reparameterization must be strictly monotone")
        y = scale * self.y
        if shift is not None:
            y = y + shift.jet(x[:, None], (0,) * 1)
        return MultiSection(self.t, x, y, self.cusps, self.membranes)

    def restrict(self, lo: float, hi: float) -> MultiSection:
        keep = (self.t >= lo - 1e-12) & (self.t <= hi + 1e-12)
        cusps = tuple(c for c in self.cusps if lo <= c <= hi)
        membranes = tuple(m for m in self.membranes if m[0] >= lo and m[1] <= hi)
        return MultiSection(self.t[keep], self.x[keep], self.y[keep],
                            cusps, membranes)


def from_sampled(jmap, cusps: tuple[float, ...] = (),
                 membranes: tuple[tuple[float, float], ...] = ()) -> MultiSection:
    """Front projection of a 1-parameter sampled jet map."""
    if len(jmap.params) != 1 or jmap.signature.n != 1:
        raise ValueError("front projection needs a 1-parameter map over a 1D base")
    return MultiSection(jmap.params[0], jmap.x[:, 0], jmap.y, cusps, membranes)


def concatenate(pieces: list[MultiSection]) -> MultiSection:
    """Join consecutive front pieces; shared seam nodes are deduplicated."""
    if not pieces:
        raise ValueError("nothing to concatenate")
    ts, xs, ys = [pieces[0].t], [pieces[0].x], [pieces[0].y]
    cusps: list[float] = list(pieces[0].cusps)
    membranes = list(pieces[0].membranes)
    for piece in pieces[1:]:
        drop = 1 if (ts[-1].size and piece.t.size
                     and abs(piece.t[0] - ts[-1][-1]) < 1e-12) else 0
        ts.append(piece.t[drop:])
        xs.append(piece.x[drop:])
        ys.append(piece.y[drop:])
        cusps.extend(piece.cusps)
        membranes.extend(piece.membranes)
    return MultiSection(np.concatenate(ts), np.concatenate(xs),
                        np.concatenate(ys), tuple(cusps), tuple(membranes))
