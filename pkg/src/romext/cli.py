"""Command-line entry point: ``python3 -m romext <command> ...``.

Exit codes: 0 success, 1 failed verification, 2 usage or parameter errors.
JSON is the default output, with exact rationals rendered as "p/q" strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import potentials as pot
from . import susy
from .numerics import eigensolve
from .polyreal import RealPoly, to_exact
from .romanovski import DomainError, RomanovskiParams, orthogonality_integral, rodrigues_poly
from .suites import run_suite

DEFAULT_TOL = 1e-8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    A: Optional[Fraction] = None
    B: Optional[Fraction] = None
    m: Optional[int] = None
    nu: Optional[int] = None
    nu2: Optional[int] = None
    K: int = 5
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    output: str = "json"
    out: Optional[str] = None
    suite: str = "all"
    eigensolve: bool = False
    points: int = 4000
    half_width: float = 12.0
    delta: float = 1e-4
    samples: int = 201
    tol: float = DEFAULT_TOL
    extra: dict = field(default_factory=dict)


def env_tolerance() -> float:
    raw = os.environ.get("ROMEXT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"ROMEXT_TOL must be a number, got {raw!r}")
    if not tol > 0:
        raise UsageError("ROMEXT_TOL must be positive")
    return tol


def _exact_arg(s: str) -> Fraction:
    try:
        return to_exact(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


def fmt(x):
    """Exact rationals as "p/q" (or "n"); floats unchanged."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return float(x)


def poly_json(p: RealPoly) -> list:
    return [fmt(c) for c in p.coeffs] if not p.is_zero() else [fmt(Fraction(0))]


def parse_coeffs(items: Sequence) -> list[Fraction]:
    """Inverse of ``poly_json`` for exact coefficient lists."""
    return [Fraction(c) for c in items]


def g17(x: float) -> str:
    return f"{float(x):.17g}"


# -- commands ---------------------------------------------------------------

def cmd_poly(cfg: RunConfig):
    if cfg.alpha is None or cfg.beta is None or cfg.nu is None:
        raise UsageError("poly needs --alpha, --beta and --nu")
    if cfg.nu < 0:
        raise UsageError("--nu must be non-negative")
    p = RomanovskiParams(cfg.alpha, cfg.beta)
    R = rodrigues_poly(p, cfg.nu)
    data = {"alpha": fmt(p.alpha), "beta": fmt(p.beta), "nu": cfg.nu, "coefficients": poly_json(R)}
    rows = [("power", "coefficient")] + [(k, g17(c)) for k, c in enumerate(R.coeffs)]
    return data, rows


def _spec(cfg: RunConfig) -> pot.PotentialSpec:
    if cfg.family is None or cfg.A is None or cfg.B is None:
        raise UsageError("--family, --A and --B are required")
    return pot.PotentialSpec(cfg.family, cfg.A, cfg.B)


def cmd_spectrum(cfg: RunConfig):
    spec = _spec(cfg)
    levels = pot.spectrum(spec, cfg.K)
    data = {"family": spec.family.value, "A": fmt(spec.A), "B": fmt(spec.B),
            "levels": [{"nu": nu, "energy": fmt(E), "value": float(E)} for nu, E in levels]}
    rows = [("nu", "energy")] + [(nu, g17(E)) for nu, E in levels]
    return data, rows


def _plot_grid(ext: susy.ExtendedPotential, cfg: RunConfig) -> np.ndarray:
    if ext.family is pot.Family.SCARF2:
        return np.linspace(-cfg.half_width, cfg.half_width, cfg.samples)
    return np.linspace(cfg.delta, math.pi - cfg.delta, cfg.samples)


def cmd_extend(cfg: RunConfig):
    if cfg.family is None or cfg.A is None or cfg.B is None or cfg.m is None:
        raise UsageError("extend needs --family, --A, --B and --m")
    if cfg.m % 2:
        raise UsageError(f"--m must be even (got {cfg.m}); the extensions are restricted to even values")
    ext = susy.build_extension(cfg.family, cfg.A, cfg.B, cfg.m)
    levels = susy.extended_spectrum(ext, cfg.K)
    states = [susy.y_polynomial(ext, nu) for nu, _ in levels]
    x = _plot_grid(ext, cfg)
    z = pot.COORDINATES[ext.family].t_of_x(x)
    V, Vrat = ext.potential(x), ext.rational_part(z)
    data = {
        "family": ext.family.value, "A": fmt(ext.A), "B": fmt(ext.B), "m": ext.m,
        "g": poly_json(ext.g),
        "g_params": {"alpha": fmt(ext.g_params.alpha), "beta": fmt(ext.g_params.beta)},
        "g_real_roots": 0,
        "ground_energy": fmt(ext.ground_energy),
        "spectrum": [float(E) for _, E in levels],
        "spectrum_exact": [{"nu": nu, "energy": fmt(E)} for nu, E in levels],
        "y": [{"nu": s.nu, "degree": s.n, "coefficients": poly_json(s.y)} for s in states],
        "partner_residuals": list(susy.partner_residuals(ext)),
        "vrat_samples": [[float(a), float(b)] for a, b in zip(x[::20], Vrat[::20])],
    }
    if cfg.eigensolve:
        dom = ((-cfg.half_width, cfg.half_width) if ext.family is pot.Family.SCARF2
               else (cfg.delta, math.pi - cfg.delta))
        rep = eigensolve(ext.potential, dom, len(levels), cfg.points, extrapolate=True)
        rep.compare([float(E) for _, E in levels])
        data["eigensolve"] = {"grid": list(rep.grid), "extrapolated": rep.extrapolated,
                              "rows": list(rep.rows())}
    cols = ["x", "V", "Vrat"] + [f"psi_{s.nu}" for s in states]
    psis = [s(x) for s in states]
    rows = [tuple(cols)] + [tuple(g17(v) for v in (x[i], V[i], Vrat[i], *(p[i] for p in psis)))
                            for i in range(len(x))]
    return data, rows


def cmd_ortho(cfg: RunConfig):
    if cfg.nu is None or cfg.nu2 is None:
        raise UsageError("ortho needs --nu and --nu2")
    if cfg.family is None:
        if cfg.alpha is None or cfg.beta is None:
            raise UsageError("ortho needs --family or --alpha/--beta")
        ov = orthogonality_integral(RomanovskiParams(cfg.alpha, cfg.beta), cfg.nu, cfg.nu2)
        what = "romanovski"
    elif cfg.m is not None:
        if cfg.m % 2:
            raise UsageError(f"--m must be even (got {cfg.m})")
        ext = susy.build_extension(cfg.family, cfg.A, cfg.B, cfg.m)
        ov = susy.extended_orthogonality(ext, cfg.nu, cfg.nu2)
        what = "extended"
    else:
        spec = _spec(cfg)
        f, g = pot.bound_state(spec, cfg.nu), pot.bound_state(spec, cfg.nu2)
        val = pot.overlap(f, g)
        scale = math.sqrt(pot.overlap(f, f) * pot.overlap(g, g))
        ov = (val, scale)
        what = "bound-states"
    value, scale = float(ov[0]), float(ov[1])
    rel = abs(value) / scale if scale else math.inf
    data = {"kind": what, "nu": cfg.nu, "nu2": cfg.nu2, "value": value, "scale": scale, "relative": rel}
    rows = [("nu", "nu2", "value", "scale", "relative"),
            (cfg.nu, cfg.nu2, g17(value), g17(scale), g17(rel))]
    return data, rows


def cmd_verify(cfg: RunConfig):
    results = run_suite(cfg.suite, cfg.tol)
    data = {"suite": cfg.suite, "tolerance": cfg.tol,
            "passed": all(r.ok for r in results),
            "checks": [{"suite": r.suite, "check": r.name, "ok": r.ok, "detail": r.detail}
                       for r in results]}
    rows = [("suite", "check", "status", "detail")] + [
        (r.suite, r.name, "PASS" if r.ok else "FAIL", r.detail) for r in results]
    return data, rows


COMMANDS = {"poly": cmd_poly, "spectrum": cmd_spectrum, "extend": cmd_extend,
            "ortho": cmd_ortho, "verify": cmd_verify}


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="romext", description=(
        "Romanovski polynomials, Scarf II / Rosen-Morse I rational extensions and their checks."))
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, table=True):
        p.add_argument("--output", choices=("json", "csv", "table") if table else ("json", "csv"),
                       default="json")
        p.add_argument("--out", help="write to this file instead of stdout")

    def family_args(p, required=True):
        p.add_argument("--family", required=required, help="scarf1 | scarf2 | rm1")
        p.add_argument("--A", type=_exact_arg, required=required)
        p.add_argument("--B", type=_exact_arg, required=required)

    p = sub.add_parser("poly", help="R_nu^(alpha, beta) coefficients")
    p.add_argument("--alpha", type=_exact_arg, required=True)
    p.add_argument("--beta", type=_exact_arg, required=True)
    p.add_argument("--nu", type=int, required=True)
    common(p)

    p = sub.add_parser("spectrum", help="closed-form bound-state levels")
    family_args(p)
    p.add_argument("--K", type=int, default=5)
    common(p)

    p = sub.add_parser("extend", help="build a type III rational extension")
    family_args(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--K", type=int, default=3, help="conventional levels listed (Rosen-Morse I)")
    p.add_argument("--eigensolve", action="store_true", help="numeric cross-check of the spectrum")
    p.add_argument("--points", type=int, default=4000)
    p.add_argument("--L", dest="half_width", type=float, default=12.0, help="Scarf II truncation")
    p.add_argument("--delta", type=float, default=1e-4, help="Rosen-Morse I end offset")
    p.add_argument("--samples", type=int, default=201, help="plot-data grid size")
    common(p)

    p = sub.add_parser("ortho", help="orthogonality integrals")
    family_args(p, required=False)
    p.add_argument("--alpha", type=_exact_arg)
    p.add_argument("--beta", type=_exact_arg)
    p.add_argument("--m", type=int)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--nu2", type=int, required=True)
    common(p)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=("romanovski", "potentials", "susy", "all"), default="all")
    p.add_argument("--output", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out")
    return ap


def _render(data, rows, output: str) -> str:
    if output == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if output == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors as exit 2
        return int(exc.code or 0)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
        cfg.tol = env_tolerance()
        data, rows = COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"romext {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    _emit(_render(data, rows, cfg.output), cfg.out)
    if cfg.command == "verify" and not data["passed"]:
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
