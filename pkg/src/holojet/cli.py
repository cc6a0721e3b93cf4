"""Command line front end: build objects, write CSV/SVG, verify lifts.

Every command resolves its options in the same order: explicit flags win,
then keys from the HOLOJET_CONFIG environment variable (a JSON object),
then built-in defaults.  Exit codes: 0 on success, 1 on usage errors,
2 when a verification fails.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .approx import holonomic_approx_circle, interpolate
from .fileio import read_jet_csv, write_jet_csv, write_report
from .jet import Circle, FormalSection, JetSignature, cartan_residual
from .models import ModelDescriptor, build_model, normalize_kind
from .sections import TrigSection, zero_section
from .svg import emit_svg
from .verify import verify_sample
from .zigzag import build_bump, build_swallowtail_family

__all__ = ["Config", "main"]


class UsageError(ValueError):
    """Bad flag combination or malformed input file."""


@dataclass(frozen=True)
class Config:
    """Options shared by every command, already merged and validated.

    `grid` is the node density: total nodes for model curves, nodes per
    zig-zag period everywhere else.  `seed` is reserved for randomized
    verification subsets and defaults deterministically to 0.
    """

    grid: int | None = None
    tol: float = 1e-2
    seed: int = 0
    out: str | None = None
    svg: str | None = None
    report: str | None = None

    def __post_init__(self):
        if self.grid is not None and self.grid < 16:
            raise UsageError("--grid must provide at least 16 nodes per unit")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; the default ArgumentParser reserves 2, which
    # this tool uses for verification failures instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=None,
                   help="node density (total nodes for model curves, nodes "
                        "per period otherwise); minimum 16")
    p.add_argument("--tol", type=float, default=None,
                   help="verification tolerance on the Cartan residual")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for randomized verification subsets")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--svg", default=None, help="SVG output path")
    p.add_argument("--report", default=None, help="JSON report path")


def _build_parser() -> _Parser:
    parser = _Parser(prog="holojet",
                     description="Jet-space toolkit: singularity models, "
                                 "zig-zag bumps, holonomic approximation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="sample a singularity model")
    p.add_argument("--kind", required=True,
                   help="model kind, e.g. fold, double-fold, cubic, pleat")
    p.add_argument("--r", type=int, default=None, help="jet order (default 1)")
    p.add_argument("--window", type=float, default=None,
                   help="half width of the parameter window")
    p.add_argument("--slice", dest="slice_value", type=float, default=None,
                   help="lateral slice value for family kinds")
    p.add_argument("--rho", type=float, default=None,
                   help="fold-killing shift for wrinkle kinds")
    _common_flags(p)

    p = sub.add_parser("bump", help="zig-zag bump function on an interval")
    p.add_argument("--N", type=int, required=True, help="zig-zag level count")
    p.add_argument("--r", type=int, default=None, help="jet order (default 1)")
    p.add_argument("--from", dest="lo", type=float, default=None,
                   help="interval start (default 0)")
    p.add_argument("--to", dest="hi", type=float, default=None,
                   help="interval end (default 1)")
    p.add_argument("--y0", type=float, default=None,
                   help="boundary value at the start (default 1)")
    p.add_argument("--y1", type=float, default=None,
                   help="boundary value at the end (default 0)")
    _common_flags(p)

    p = sub.add_parser("swallowtail",
                       help="swallowtail family growing a bump from zero")
    p.add_argument("--N", type=int, required=True, help="birth event count")
    p.add_argument("--r", type=int, default=None, help="jet order (default 1)")
    p.add_argument("--square", type=float, nargs=4, default=None,
                   metavar=("C", "D", "A", "B"),
                   help="family square: s in [C, D], t in [A, B]")
    p.add_argument("--slice", dest="slice_value", type=float, default=None,
                   help="s value of the slice to export (default D)")
    _common_flags(p)

    p = sub.add_parser("interp",
                       help="two-stage interpolation between two sections")
    p.add_argument("--eps", type=float, required=True,
                   help="collar closeness of the data, also the error unit")
    p.add_argument("--delta", type=float, default=None,
                   help="collar width in (0, 1), default 0.25")
    p.add_argument("--r", type=int, default=None, help="jet order (default 1)")
    p.add_argument("--n", type=int, default=None,
                   help="base dimension, 1 or 2 (default 1)")
    p.add_argument("--s1", default=None,
                   help="JSON file describing the inner section "
                        "(default: zero)")
    p.add_argument("--levels", type=int, default=None,
                   help="force the zig-zag level count of the pushing stage")
    _common_flags(p)

    p = sub.add_parser("approx",
                       help="holonomic approximation of a formal section")
    p.add_argument("--domain", required=True, choices=["circle"],
                   help="base domain (only the circle is built in)")
    p.add_argument("--r", type=int, default=None, help="jet order (default 1)")
    p.add_argument("--eps", type=float, required=True,
                   help="approximation tolerance")
    p.add_argument("--sigma", default=None,
                   help="JSON file describing the formal section "
                        "(default: classic obstruction)")
    p.add_argument("--circumference", type=float, default=None,
                   help="circle circumference (default 2*pi)")
    _common_flags(p)

    p = sub.add_parser("verify", help="verify a sampled lift from CSV")
    p.add_argument("--in", dest="infile", required=True,
                   help="CSV file written by another command")
    _common_flags(p)

    return parser


def _merge_env(args: argparse.Namespace) -> None:
    raw = os.environ.get("HOLOJET_CONFIG", "").strip()
    if not raw:
        return
    try:
        env = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"HOLOJET_CONFIG is not valid JSON: {exc}")
    if not isinstance(env, dict):
        raise UsageError("HOLOJET_CONFIG must hold a JSON object")
    for key, val in env.items():
        dest = str(key).replace("-", "_")
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, val)


def _config(args: argparse.Namespace) -> Config:
    return Config(
        grid=None if args.grid is None else int(args.grid),
        tol=1e-2 if args.tol is None else float(args.tol),
        seed=0 if args.seed is None else int(args.seed),
        out=args.out, svg=args.svg, report=args.report)


def _section_from_spec(spec: dict, n: int):
    """Build a section from {"kind": "zero"|"fourier", ...} JSON."""
    kind = spec.get("kind")
    if kind == "zero":
        return zero_section(int(spec.get("k", 1)))
    if kind == "fourier":
        terms = []
        for comp in spec["terms"]:
            triples = []
            for amp, wave, phase in comp:
                if np.isscalar(wave):
                    wave = (float(wave),) + (0.0,) * (n - 1)
                else:
                    wave = tuple(float(w) for w in wave)
                if len(wave) != n:
                    raise UsageError(f"wave vector {wave} needs {n} entries")
                triples.append((float(amp), wave, float(phase)))
            terms.append(tuple(triples))
        return TrigSection(n=n, terms=tuple(terms))
    raise UsageError(f"unknown section kind {kind!r}")


def _sigma_from_spec(spec: dict, r: int, circumference: float) -> FormalSection:
    """Formal sections over the circle from their JSON descriptions.

    "classic-obstruction" prescribes slope one with zero value, the minimal
    data no section can realise.  "fourier" lists one cosine series per jet
    coordinate, enumerated row-major over (multi-index, component); waves
    should be integer multiples of 2*pi/circumference to close up.
    "constant" freezes one block everywhere.
    """
    kind = spec.get("kind")
    k = int(spec.get("k", 1))
    sig = JetSignature(n=1, k=k, r=r)
    dom = Circle(circumference)
    if kind == "classic-obstruction":
        block = np.zeros((r + 1, k))
        block[1] = 1.0
        return FormalSection.from_constant_block(block, sig, dom)
    if kind == "constant":
        block = np.asarray(spec["block"], dtype=float)
        if block.shape != (r + 1, k):
            raise UsageError(f"constant block must have shape {(r + 1, k)}")
        return FormalSection.from_constant_block(block, sig, dom)
    if kind == "fourier":
        terms = spec["terms"]
        if len(terms) != (r + 1) * k:
            raise UsageError(f"fourier sigma needs {(r + 1) * k} term lists, "
                             f"one per jet coordinate, got {len(terms)}")

        def block_fn(x):
            t = x[..., 0]
            out = np.zeros(t.shape + (r + 1, k))
            for row in range(r + 1):
                for j in range(k):
                    for amp, wave, phase in terms[row * k + j]:
                        out[..., row, j] += amp * np.cos(wave * t + phase)
            return out

        return FormalSection(sig, dom, block_fn)
    raise UsageError(f"unknown sigma kind {kind!r}")


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON spec {path}: {exc}")
    if not isinstance(spec, dict):
        raise UsageError(f"JSON spec {path} must hold an object")
    return spec


def _emit_front(path: str, front) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(emit_svg(front))


def cmd_model(args: argparse.Namespace, cfg: Config) -> int:
    kind = normalize_kind(args.kind)
    desc = ModelDescriptor(
        kind=kind,
        r=1 if args.r is None else int(args.r),
        window=args.window,
        nodes=2001 if cfg.grid is None else cfg.grid,
        slice_value=args.slice_value,
        rho=args.rho)
    m = build_model(desc)
    out = cfg.out or f"{kind}.csv"
    write_jet_csv(out, m.lift)
    if cfg.svg:
        _emit_front(cfg.svg, m.front)
    code = 0
    res = cartan_residual(m.lift).max
    if cfg.report:
        rep = verify_sample(m.lift, tol=cfg.tol)
        write_report(cfg.report, {"kind": kind, "r": desc.r,
                                  "nodes": desc.nodes, **rep.payload()})
        res, code = rep.max_cartan_residual, 0 if rep.passed else 2
    print(f"model {kind} r={desc.r} nodes={desc.nodes} "
          f"maxCartanResidual={res:.6e} -> {out}")
    return code


def cmd_bump(args: argparse.Namespace, cfg: Config) -> int:
    lo = 0.0 if args.lo is None else float(args.lo)
    hi = 1.0 if args.hi is None else float(args.hi)
    y0 = 1.0 if args.y0 is None else float(args.y0)
    y1 = 0.0 if args.y1 is None else float(args.y1)
    r = 1 if args.r is None else int(args.r)
    b = build_bump(int(args.N), lo, hi, y0, y1, r,
                   nodes_per_period=cfg.grid or 64)
    if cfg.out:
        write_jet_csv(cfg.out, b.lift)
    if cfg.svg:
        _emit_front(cfg.svg, b.front)
    if cfg.report:
        write_report(cfg.report, {
            "N": b.N, "r": r, "interval": [lo, hi], "yStart": y0, "yEnd": y1,
            "bounds": {str(i): v for i, v in sorted(b.measured_bounds.items())},
            "cusps": len(b.front.cusps), "membranes": len(b.membranes),
            "nodes": int(b.lift.params[0].size)})
    worst = max(b.measured_bounds.values()) if b.measured_bounds else 0.0
    print(f"bump N={b.N} r={r} on [{lo:g}, {hi:g}] "
          f"cusps={len(b.front.cusps)} maxRowBound={worst:.6e}")
    return 0


def cmd_swallowtail(args: argparse.Namespace, cfg: Config) -> int:
    sq = args.square or (0.0, 1.0, 0.0, 1.0)
    c, d, a, b = (float(v) for v in sq)
    r = 1 if args.r is None else int(args.r)
    fam = build_swallowtail_family(int(args.N), ((c, d), (a, b)), r,
                                   nodes_per_period=cfg.grid or 64)
    want = d if args.slice_value is None else float(args.slice_value)
    idx = int(np.argmin(np.abs(fam.s_grid - want)))
    s_val = float(fam.s_grid[idx])
    if cfg.out:
        write_jet_csv(cfg.out, fam.lifts[idx])
    if cfg.svg:
        _emit_front(cfg.svg, fam.slices[idx])
    if cfg.report:
        write_report(cfg.report, {
            "N": fam.N, "r": r, "square": [[c, d], [a, b]],
            "sliceValue": s_val, "sliceCount": len(fam.slices),
            "births": list(fam.births),
            "boundaryTraceAtSlice": float(fam.h_trace[idx]),
            "bounds": {str(i): v
                       for i, v in sorted(fam.measured_bounds.items())}})
    print(f"swallowtail N={fam.N} r={r} slices={len(fam.slices)} "
          f"slice s={s_val:g} cusps={len(fam.slices[idx].cusps)}")
    return 0


def cmd_interp(args: argparse.Namespace, cfg: Config) -> int:
    eps = float(args.eps)
    delta = 0.25 if args.delta is None else float(args.delta)
    r = 1 if args.r is None else int(args.r)
    n = 1 if args.n is None else int(args.n)
    s1 = _section_from_spec(_load_json(args.s1), n) if args.s1 \
        else zero_section(1)
    s0 = zero_section(s1.k)
    res = interpolate(s0, s1, eps, delta, r, n,
                      levels=args.levels and int(args.levels),
                      nodes_per_period=cfg.grid or 64)
    if cfg.out:
        write_jet_csv(cfg.out, res.lift)
    if cfg.svg:
        _emit_front(cfg.svg, res.f)
    if cfg.report:
        write_report(cfg.report, {"r": r, "n": n, "delta": delta,
                                  **res.bounds})
    print(f"interp r={r} n={n} eps={eps:g} levels={res.levels} "
          f"finalBound={res.final_bound:.6e} (budget {5 * eps:g})")
    return 0


def cmd_approx(args: argparse.Namespace, cfg: Config) -> int:
    eps = float(args.eps)
    r = 1 if args.r is None else int(args.r)
    circ = 2.0 * math.pi if args.circumference is None \
        else float(args.circumference)
    spec = _load_json(args.sigma) if args.sigma \
        else {"kind": "classic-obstruction"}
    sigma = _sigma_from_spec(spec, r, circ)
    ca = holonomic_approx_circle(sigma, eps, r,
                                 nodes_per_period=cfg.grid or 32)
    if cfg.out:
        write_jet_csv(cfg.out, ca.lift)
    if cfg.svg:
        _emit_front(cfg.svg, ca.front)
    if cfg.report:
        write_report(cfg.report, {
            **ca.payload(),
            "maxCartanResidual": cartan_residual(ca.lift).max})
    ok = ca.embedded and ca.achieved < eps
    print(f"approx circle r={r} eps={eps:g} achieved={ca.achieved:.6e} "
          f"zigzags={ca.zigzag_count} embedded={ca.embedded}")
    return 0 if ok else 2


def cmd_verify(args: argparse.Namespace, cfg: Config) -> int:
    try:
        jmap = read_jet_csv(args.infile)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read lift CSV {args.infile}: {exc}")
    rep = verify_sample(jmap, tol=cfg.tol)
    write_report(cfg.report or "report.json", rep.payload())
    verdict = "pass" if rep.passed else "FAIL"
    print(f"verify {args.infile}: maxCartanResidual="
          f"{rep.max_cartan_residual:.6e} tol={cfg.tol:g} "
          f"embedded={rep.embedded} -> {verdict}")
    return 0 if rep.passed else 2


_HANDLERS = {"model": cmd_model, "bump": cmd_bump,
             "swallowtail": cmd_swallowtail, "interp": cmd_interp,
             "approx": cmd_approx, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_env(args)
        cfg = _config(args)
        return _HANDLERS[args.command](args, cfg)
    except UsageError as exc:
        print(f"holojet: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"holojet: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"holojet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
