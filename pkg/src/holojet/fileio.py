"""CSV and JSON emission for sampled jet data.

CSV layout for a sampled jet map with parameter axes (t0[, t1]), base
coordinates x0..x{n-1} and jet rows z_<I>_<j>, where the multi-index I is
rendered as dash-joined integers.  Floats are printed with 17 significant
digits, which round-trips IEEE doubles exactly.

Principal samples (only the degree-r rows) use the reduced column set
``zr_<I>_<j>``.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .jet import JetSignature, SampledJetMap
from .multiindex import indices_of_degree

FLOAT_FMT = "%.17g"


def _index_label(index: tuple[int, ...]) -> str:
    return "-".join(str(i) for i in index)


def _parse_index(label: str) -> tuple[int, ...]:
    return tuple(int(p) for p in label.split("-"))


def jet_header(signature: JetSignature, n_params: int) -> list[str]:
    cols = [f"t{a}" for a in range(n_params)]
    cols += [f"x{a}" for a in range(signature.n)]
    for index in signature.indices:
        for j in range(signature.k):
            cols.append(f"z_{_index_label(index)}_{j}")
    return cols


def write_jet_csv(path: str, jmap: SampledJetMap) -> None:
    header = jet_header(jmap.signature, len(jmap.params))
    grids = np.meshgrid(*jmap.params, indexing="ij")
    columns = [g.reshape(-1) for g in grids]
    columns += [jmap.x[..., a].reshape(-1) for a in range(jmap.signature.n)]
    flat_z = jmap.z.reshape(-1, len(jmap.signature.indices), jmap.signature.k)
    for i in range(flat_z.shape[1]):
        for j in range(flat_z.shape[2]):
            columns.append(flat_z[:, i, j])
    _write_csv(path, header, columns)


def read_jet_csv(path: str) -> SampledJetMap:
    header, data = _read_csv(path)
    n_params = sum(1 for c in header if c.startswith("t"))
    n = sum(1 for c in header if c.startswith("x"))
    z_cols = [c for c in header if c.startswith("z_")]
    indices = []
    k = 0
    for col in z_cols:
        _, label, j = col.split("_")
        index = _parse_index(label)
        if index not in indices:
            indices.append(index)
        k = max(k, int(j) + 1)
    r = max(sum(i) for i in indices)
    signature = JetSignature(n=n, k=k, r=r)
    if tuple(indices) != signature.indices:
        raise ValueError("jet columns out of order or incomplete")

    params, grid_shape = _recover_axes(data, n_params)
    x = np.stack([data[:, n_params + a].reshape(grid_shape) for a in range(n)],
                 axis=-1)
    z = np.empty(grid_shape + (len(indices), k))
    col = n_params + n
    for i in range(len(indices)):
        for j in range(k):
            z[..., i, j] = data[:, col].reshape(grid_shape)
            col += 1
    return SampledJetMap(signature, params, x, z)


def write_principal_csv(path: str, sample) -> None:
    """Reduced column set for a principal sample: x..., zr_<I>_<j>."""
    sig = sample.signature
    header = [f"t{a}" for a in range(len(sample.params))]
    header += [f"x{a}" for a in range(sig.n)]
    top = indices_of_degree(sig.n, sig.r)
    for index in top:
        for j in range(sig.k):
            header.append(f"zr_{_index_label(index)}_{j}")
    grids = np.meshgrid(*sample.params, indexing="ij")
    columns = [g.reshape(-1) for g in grids]
    columns += [sample.x[..., a].reshape(-1) for a in range(sig.n)]
    flat = sample.zr.reshape(-1, len(top), sig.k)
    for i in range(len(top)):
        for j in range(sig.k):
            columns.append(flat[:, i, j])
    _write_csv(path, header, columns)


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in range(rows):
            fh.write(",".join(FLOAT_FMT % c[row] for c in columns) + "\n")


def _read_csv(path: str) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError("CSV row width does not match header")
    return header, data


def _recover_axes(data: np.ndarray, n_params: int):
    """Rebuild the parameter axes of a C-order grid dump."""
    if n_params == 1:
        axis = data[:, 0]
        if np.any(np.diff(axis) <= 0):
            raise ValueError("parameter column is not strictly increasing")
        return (axis,), (axis.size,)
    if n_params == 2:
        t1 = data[:, 1]
        inner = 1
        while inner < t1.size and t1[inner] > t1[inner - 1]:
            inner += 1
        outer = data.shape[0] // inner
        if outer * inner != data.shape[0]:
            raise ValueError("grid dump is not rectangular")
        axis0 = data[::inner, 0]
        axis1 = t1[:inner]
        return (axis0, axis1), (outer, inner)
    raise ValueError("only 1 or 2 parameter axes are supported")


def write_report(path: str, payload: dict[str, Any]) -> None:
    """Versioned JSON report with stable key order."""
    doc = {"schema": 1}
    doc.update(payload)
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
