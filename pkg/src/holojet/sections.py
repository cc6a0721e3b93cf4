"""Sections with exact jets: polynomial, trigonometric, Taylor, and combinations.

Everything here evaluates derivatives analytically, so prolongations built
from these objects are exact up to roundoff and can serve as oracles for
the quadrature-based lifts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Protocol, runtime_checkable

import numpy as np

from .multiindex import MultiIndex, degree


@runtime_checkable
class SectionLike(Protocol):
    """A k-vector-valued map of the base with analytic partial derivatives."""

    k: int

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        """d^I f at base points x of shape (..., n); returns shape (..., k)."""
        ...


def _ensure_points(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError("base points must carry a coordinate axis")
    return x


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in n variables: {exponent tuple: coefficient}."""

    n: int
    coeffs: dict[tuple[int, ...], float]

    def __post_init__(self):
        for e in self.coeffs:
            if len(e) != self.n:
                raise ValueError(f"exponent {e} does not match n={self.n}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = _ensure_points(x)
        out = np.zeros(x.shape[:-1])
        for e, c in self.coeffs.items():
            term = np.full(x.shape[:-1], c)
            for a, p in enumerate(e):
                if p:
                    term = term * x[..., a] ** p
            out += term
        return out

    def derivative(self, index: MultiIndex) -> Polynomial:
        out: dict[tuple[int, ...], float] = {}
        for e, c in self.coeffs.items():
            fac = 1.0
            new = list(e)
            ok = True
            for a, da in enumerate(index):
                if e[a] < da:
                    ok = False
                    break
                fac *= factorial(e[a]) / factorial(e[a] - da)
                new[a] = e[a] - da
            if ok:
                key = tuple(new)
                out[key] = out.get(key, 0.0) + c * fac
        return Polynomial(self.n, out)


@dataclass(frozen=True)
class PolySection:
    """Section whose components are polynomials."""

    components: tuple[Polynomial, ...]

    @property
    def k(self) -> int:
        return len(self.components)

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = _ensure_points(x)
        return np.stack([p.derivative(index)(x) for p in self.components], axis=-1)


@dataclass(frozen=True)
class TrigSection:
    """Finite cosine series per component: sum of amp * cos(<w, x> + phase).

    Derivatives shift the phase by |I| * pi/2 and multiply by prod w_a^{i_a},
    so jets of any order are exact.
    """

    n: int
    terms: tuple[tuple[tuple[float, tuple[float, ...], float], ...], ...]

    @property
    def k(self) -> int:
        return len(self.terms)

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = _ensure_points(x)
        d = degree(index)
        cols = []
        for comp in self.terms:
            col = np.zeros(x.shape[:-1])
            for amp, wave, phase in comp:
                fac = amp
                for a, da in enumerate(index):
                    if da:
                        fac *= wave[a] ** da
                if fac == 0.0:
                    continue
                arg = phase + d * np.pi / 2.0
                for a in range(self.n):
                    if wave[a]:
                        arg = arg + wave[a] * x[..., a]
                col = col + fac * np.cos(arg)
            cols.append(col)
        return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class ConstSection:
    values: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.values)

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = _ensure_points(x)
        out = np.zeros(x.shape[:-1] + (self.k,))
        if degree(index) == 0:
            out += np.asarray(self.values)
        return out


def zero_section(k: int) -> ConstSection:
    return ConstSection((0.0,) * k)


@dataclass(frozen=True)
class TaylorSection:
    """The degree-r polynomial section defined by one jet block at a center.

    block[i] is d^I f at the center, rows ordered like multiindex.jet_indices.
    """

    center: tuple[float, ...]
    indices: tuple[MultiIndex, ...]
    block: np.ndarray  # (len(indices), k)

    @property
    def k(self) -> int:
        return self.block.shape[1]

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = _ensure_points(x)
        dx = x - np.asarray(self.center)
        out = np.zeros(x.shape[:-1] + (self.k,))
        for row, J in enumerate(self.indices):
            # contributes only if J >= index componentwise
            rem = tuple(j - i for j, i in zip(J, index))
            if any(v < 0 for v in rem):
                continue
            w = np.ones(x.shape[:-1])
            fac = 1.0
            for a, p in enumerate(rem):
                fac /= factorial(p)
                if p:
                    w = w * dx[..., a] ** p
            out += (w * fac)[..., None] * self.block[row]
        return out


@dataclass(frozen=True)
class CombinedSection:
    """Affine combination sum_i w_i * s_i + shift (shift enters order-0 only)."""

    parts: tuple[SectionLike, ...]
    weights: tuple[float, ...]
    shift: tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return self.parts[0].k

    def jet(self, x: np.ndarray, index: MultiIndex) -> np.ndarray:
        x = _ensure_points(x)
        out = np.zeros(x.shape[:-1] + (self.k,))
        for w, s in zip(self.weights, self.parts):
            if w:
                out += w * s.jet(x, index)
        if self.shift and degree(index) == 0:
            out += np.asarray(self.shift)
        return out


def combine(parts, weights, shift=()) -> CombinedSection:
    ks = {p.k for p in parts}
    if len(ks) != 1:
        raise ValueError(f"mixed fiber dimensions {ks}")
    return CombinedSection(tuple(parts), tuple(float(w) for w in weights),
                           tuple(float(c) for c in shift))
