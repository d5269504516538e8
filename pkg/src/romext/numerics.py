"""Quadrature on the real line / finite intervals and a finite-difference
Dirichlet eigensolver used to cross-check closed-form spectra."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "EigensolveError",
    "EigensolveReport",
    "integrate_real_line",
    "integrate_interval",
    "eigensolve",
    "gauss_legendre_panels",
]


class QuadratureError(RuntimeError):
    def __init__(self, msg, estimates):
        super().__init__(f"{msg}; last estimates {estimates}")
        self.estimates = estimates


class EigensolveError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    transform: str = "tan-substitution"  # or "linear"
    node_count: int = 64
    adaptive: bool = True
    abs_tol: float = 1e-14
    rel_tol: float = 1e-13
    max_panels: int = 4096

    def __post_init__(self):
        if self.node_count < 8:
            raise ValueError("node_count must be at least 8")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.transform not in ("tan-substitution", "linear"):
            raise ValueError(f"unknown transform {self.transform!r}")


def gauss_legendre_panels(a: float, b: float, panels: int, n: int):
    """Nodes and weights of a composite n-point Gauss-Legendre rule on [a, b]."""
    t, w = leggauss(n)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def _adaptive(g: Callable, a: float, b: float, spec: QuadratureSpec):
    panels = 1
    x, w = gauss_legendre_panels(a, b, panels, spec.node_count)
    prev = float(np.sum(w * g(x)))
    if not spec.adaptive:
        return prev, math.nan
    while panels < spec.max_panels:
        panels *= 2
        x, w = gauss_legendre_panels(a, b, panels, spec.node_count)
        cur = float(np.sum(w * g(x)))
        err = abs(cur - prev)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur, err
        prev = cur
    raise QuadratureError(f"no convergence with {panels} panels", (prev, cur))


def integrate_real_line(f: Callable, spec: QuadratureSpec | None = None):
    """Integral of a vectorised ``f`` over the real line via z = tan(theta).

    Returns ``(value, error_estimate)`` where the estimate is the difference
    between the last two panel refinements.
    """
    spec = spec or QuadratureSpec()
    half_pi = 0.5 * math.pi

    def g(theta):
        z = np.tan(theta)
        c = np.cos(theta)
        return f(z) / (c * c)

    return _adaptive(g, -half_pi, half_pi, spec)


def integrate_interval(f: Callable, a: float, b: float, spec: QuadratureSpec | None = None):
    """Integral of ``f`` over a finite interval; Gauss nodes never touch the ends."""
    spec = spec or QuadratureSpec(transform="linear")
    return _adaptive(f, a, b, spec)


@dataclass
class EigensolveReport:
    grid: tuple
    eigenvalues: np.ndarray
    residuals: np.ndarray
    boundary: str = "Dirichlet"
    extrapolated: bool = False
    refinement_delta: Optional[np.ndarray] = None
    closed_form: Optional[np.ndarray] = None
    abs_errors: Optional[np.ndarray] = None
    rel_errors: Optional[np.ndarray] = None

    def compare(self, expected: Sequence[float]) -> "EigensolveReport":
        exp = np.asarray(expected, dtype=float)
        k = min(len(exp), len(self.eigenvalues))
        self.closed_form = exp[:k]
        self.abs_errors = np.abs(self.eigenvalues[:k] - exp[:k])
        with np.errstate(divide="ignore"):
            self.rel_errors = self.abs_errors / np.abs(exp[:k])
        return self

    def rows(self):
        for i, e in enumerate(self.eigenvalues):
            row = {"index": i, "numeric": float(e), "residual": float(self.residuals[i])}
            if self.closed_form is not None and i < len(self.closed_form):
                row["closed_form"] = float(self.closed_form[i])
                row["abs_error"] = float(self.abs_errors[i])
            yield row


def _fd_levels(potential: Callable, lo: float, hi: float, k: int, points: int):
    x = np.linspace(lo, hi, points + 2)[1:-1]
    h = x[1] - x[0]
    v = np.asarray(potential(x), dtype=float)
    if not np.all(np.isfinite(v)):
        raise EigensolveError("potential is not finite on the interior grid")
    diag = 2.0 / (h * h) + v
    off = np.full(points - 1, -1.0 / (h * h))
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    # residual of the discrete problem, relative to the operator scale
    hv = diag[:, None] * vecs
    hv[:-1] += off[:, None] * vecs[1:]
    hv[1:] += off[:, None] * vecs[:-1]
    res = np.linalg.norm(hv - vecs * vals[None, :], axis=0) / np.max(np.abs(diag))
    return x, vals, res


def eigensolve(potential: Callable, domain: tuple, k: int, points: int = 2000, *,
               extrapolate: bool = False, threshold: float | None = None) -> EigensolveReport:
    """Lowest ``k`` Dirichlet eigenvalues of -d^2/dx^2 + V on ``domain``.

    Three-point finite differences on ``points`` interior nodes (second order
    in h).  With ``extrapolate=True`` the problem is also solved on half the
    nodes and the two results are Richardson-combined, so the total point
    budget stays at ``points``.  ``threshold`` marks the continuum edge of the
    untruncated problem; asking for more levels than lie below it is an error.
    """
    lo, hi = map(float, domain)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise EigensolveError(f"need a finite truncated interval, got {domain}")
    if k < 1:
        raise EigensolveError("k must be positive")
    if k > points - 2:
        raise EigensolveError(f"k={k} exceeds the {points - 2} levels a {points}-point grid resolves")
    _, vals, res = _fd_levels(potential, lo, hi, k, points)
    delta = None
    if extrapolate:
        # nodes n and (n+1)/2 - 1 share the same interval so h doubles exactly
        coarse = (points + 1) // 2 - 1
        if coarse < k + 2:
            raise EigensolveError(f"grid too coarse to extrapolate {k} levels")
        h_f = (hi - lo) / (points + 1)
        h_c = (hi - lo) / (coarse + 1)
        _, vc, _ = _fd_levels(potential, lo, hi, k, coarse)
        r = (h_c / h_f) ** 2
        extr = (r * vals - vc) / (r - 1.0)
        delta = np.abs(extr - vals)
        vals = extr
    if threshold is not None:
        bound = int(np.count_nonzero(vals < threshold))
        if bound < k:
            raise EigensolveError(
                f"only {bound} levels lie below the continuum threshold {threshold}; requested {k}")
    return EigensolveReport(grid=(lo, hi, points), eigenvalues=np.asarray(vals),
                            residuals=np.asarray(res), extrapolated=extrapolate,
                            refinement_delta=delta)
