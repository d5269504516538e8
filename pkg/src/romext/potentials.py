"""Conventional Scarf I, Scarf II and Rosen-Morse I potentials: values,
closed-form spectra, bound states, and the formal complexification maps
(Scarf I -> Scarf II, Rosen-Morse II -> Rosen-Morse I).

Wavefunctions are carried as a prefactor times a ratio of polynomials in a
mapped variable t (t = sinh x, cot x or sin x), so first and second
x-derivatives come from exact polynomial derivatives rather than numerical
differencing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from .numerics import QuadratureSpec, integrate_interval, integrate_real_line
from .polyreal import RealPoly, count_real_roots, to_exact
from .romanovski import DomainError, RomanovskiParams, jacobi_poly, rodrigues_poly

__all__ = [
    "Family",
    "PotentialSpec",
    "Coordinate",
    "MappedFunction",
    "BoundState",
    "COORDINATES",
    "potential_value",
    "raw_potential",
    "level",
    "state_params",
    "spectrum",
    "nu_max",
    "bound_state",
    "schrodinger_residual",
    "z_form_residual",
    "complexification_map_check",
    "overlap",
]


class Family(str, Enum):
    SCARF1 = "scarf1"
    SCARF2 = "scarf2"
    RM1 = "rm1"

    @classmethod
    def parse(cls, s) -> "Family":
        if isinstance(s, Family):
            return s
        key = str(s).lower().replace("-", "").replace("_", "").replace(" ", "")
        aliases = {
            "scarf1": cls.SCARF1, "scarfi": cls.SCARF1,
            "scarf2": cls.SCARF2, "scarfii": cls.SCARF2,
            "rm1": cls.RM1, "rosenmorse1": cls.RM1, "rosenmorsei": cls.RM1,
        }
        if key not in aliases:
            raise ValueError(f"unknown family {s!r}")
        return aliases[key]


@dataclass(frozen=True)
class Coordinate:
    """Map x -> t with dt/dx and d2t/dx2 expressed through t."""

    name: str
    domain: tuple
    t_of_x: Callable
    x_of_t: Callable
    dt: Callable
    d2t: Callable


COORDINATES = {
    Family.SCARF2: Coordinate(
        "sinh", (-math.inf, math.inf), np.sinh, np.arcsinh,
        lambda t: np.sqrt(1 + t * t), lambda t: t),
    Family.RM1: Coordinate(
        "cot", (0.0, math.pi), lambda x: 1 / np.tan(x), lambda t: 0.5 * np.pi - np.arctan(t),
        lambda t: -(1 + t * t), lambda t: 2 * t * (1 + t * t)),
    Family.SCARF1: Coordinate(
        "sin", (-0.5 * math.pi, 0.5 * math.pi), np.sin, np.arcsin,
        lambda t: np.sqrt(1 - t * t), lambda t: -t),
}


@dataclass(frozen=True)
class MappedFunction:
    """f(t) = exp(log_const) * prefactor(t) * num(t) / den(t).

    kind "pseudo":  prefactor = (1 + t^2)^p exp(q arctan t)
    kind "jacobi":  prefactor = (1 - t)^p (1 + t)^q
    """

    kind: str
    p: float
    q: float
    num: RealPoly
    den: RealPoly = RealPoly([1])
    log_const: float = 0.0

    def _log_pre(self, t):
        p, q = float(self.p), float(self.q)
        if self.kind == "pseudo":
            return p * np.log1p(t * t) + q * np.arctan(t) + self.log_const
        return p * np.log1p(-t) + q * np.log1p(t) + self.log_const

    def _dlog_pre(self, t):
        p, q = float(self.p), float(self.q)
        if self.kind == "pseudo":
            s = 1 + t * t
            L = (2 * p * t + q) / s
            dL = (2 * p * s - 2 * t * (2 * p * t + q)) / (s * s)
        else:
            L = -p / (1 - t) + q / (1 + t)
            dL = -p / (1 - t) ** 2 - q / (1 + t) ** 2
        return L, dL

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(self._log_pre(t)) * self.num(t) / self.den(t)

    def rational_derivs(self, t):
        """u, u', u'' for u = num/den."""
        n = self.num.to_float() if self.num.exact else self.num
        d = self.den.to_float() if self.den.exact else self.den
        N, N1, N2 = n(t), n.derivative()(t), n.derivative(2)(t)
        D, D1, D2 = d(t), d.derivative()(t), d.derivative(2)(t)
        u = N / D
        u1 = (N1 - u * D1) / D
        u2 = (N2 - 2 * u1 * D1 - u * D2) / D
        return u, u1, u2

    def t_derivs(self, t):
        """f, df/dt, d2f/dt2."""
        t = np.asarray(t, dtype=float)
        pre = np.exp(self._log_pre(t))
        L, dL = self._dlog_pre(t)
        u, u1, u2 = self.rational_derivs(t)
        return pre * u, pre * (u1 + L * u), pre * (u2 + 2 * L * u1 + (dL + L * L) * u)

    def x_derivs(self, coord: Coordinate, x):
        t = coord.t_of_x(np.asarray(x, dtype=float))
        f, f1, f2 = self.t_derivs(t)
        t1, t2 = coord.dt(t), coord.d2t(t)
        return f, f1 * t1, f2 * t1 * t1 + f1 * t2


@dataclass(frozen=True)
class PotentialSpec:
    family: Family
    A: object
    B: object

    def __post_init__(self):
        fam = Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        A, B = to_exact(self.A), to_exact(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if fam is Family.SCARF2 and not A > 0:
            raise DomainError(f"Scarf II needs A > 0 (got A={A})")
        if fam is Family.RM1 and not A >= Fraction(3, 2):
            raise DomainError(f"Rosen-Morse I needs A >= 3/2 (got A={A})")
        if fam is Family.SCARF1 and not (0 < B < A - 1):
            raise DomainError(f"Scarf I needs 0 < B < A - 1 (got A={A}, B={B})")

    @property
    def domain(self) -> tuple:
        return COORDINATES[self.family].domain

    @property
    def coordinate(self) -> Coordinate:
        return COORDINATES[self.family]

    def __call__(self, x):
        return potential_value(self, x)


def _inside(spec: PotentialSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    lo, hi = spec.domain
    if not np.all((x > lo) & (x < hi)):
        raise DomainError(f"x must lie strictly inside {spec.domain} for {spec.family.value}")
    return x


def raw_potential(family: Family, A, B, x):
    """Potential formula without parameter or domain guards."""
    x = np.asarray(x, dtype=float)
    A, B = float(A), float(B)
    if family is Family.SCARF2:
        s, t = 1 / np.cosh(x), np.tanh(x)
        return (B * B - A * (A + 1)) * s * s + B * (2 * A + 1) * s * t
    if family is Family.RM1:
        return A * (A - 1) / np.sin(x) ** 2 + 2 * B / np.tan(x)
    sec = 1 / np.cos(x)
    return (A * (A - 1) + B * B) * sec * sec - B * (2 * A - 1) * sec * np.tan(x)


def potential_value(spec: PotentialSpec, x):
    v = raw_potential(spec.family, spec.A, spec.B, _inside(spec, x))
    return float(v) if v.ndim == 0 else v


def nu_max(A) -> int:
    """The unique integer in [A - 1, A)."""
    return math.ceil(to_exact(A)) - 1


def level(spec: PotentialSpec, nu: int):
    A, B = spec.A, spec.B
    if spec.family is Family.SCARF2:
        return -(A - nu) ** 2
    if spec.family is Family.RM1:
        return (A + nu) ** 2 - B * B / (A + nu) ** 2
    return (A + nu) ** 2


def spectrum(spec: PotentialSpec, K: int = 5) -> list[tuple[int, Fraction]]:
    """Closed-form levels; Scarf II returns all of them, the others the first K."""
    n = nu_max(spec.A) + 1 if spec.family is Family.SCARF2 else K
    return [(nu, level(spec, nu)) for nu in range(n)]


def state_params(spec: PotentialSpec, nu: int) -> Optional[RomanovskiParams]:
    A, B = spec.A, spec.B
    if spec.family is Family.SCARF2:
        return RomanovskiParams(-2 * B, -A + Fraction(1, 2))
    if spec.family is Family.RM1:
        return RomanovskiParams(-2 * B / (A + nu), -A - nu + 1)
    return None


@dataclass(frozen=True)
class BoundState:
    spec: PotentialSpec
    nu: int
    energy: object
    romanovski_part: RealPoly
    params: Optional[RomanovskiParams]
    profile: MappedFunction
    norm: float = 1.0

    @property
    def family(self) -> Family:
        return self.spec.family

    def __call__(self, x):
        t = self.spec.coordinate.t_of_x(np.asarray(x, dtype=float))
        return self.profile(t) / self.norm

    wavefunction = __call__

    def x_derivs(self, x):
        return tuple(d / self.norm for d in self.profile.x_derivs(self.spec.coordinate, x))

    def nodes(self) -> int:
        lo, hi = (-1, 1) if self.spec.family is Family.SCARF1 else (-math.inf, math.inf)
        return count_real_roots(self.romanovski_part, lo, hi).count


def bound_state(spec: PotentialSpec, nu: int, normalize: bool = False) -> BoundState:
    if nu < 0:
        raise DomainError("nu must be non-negative")
    A, B = spec.A, spec.B
    fam = spec.family
    if fam is Family.SCARF2:
        top = nu_max(A)
        if nu > top:
            raise DomainError(f"Scarf II with A={A} has bound states nu = 0..{top}; got {nu}")
        params = state_params(spec, nu)
        poly = rodrigues_poly(params, nu)
        prof = MappedFunction("pseudo", -A / 2, -B, poly)
    elif fam is Family.RM1:
        params = state_params(spec, nu)
        poly = rodrigues_poly(params, nu)
        k = A + nu
        # exp(B x / k) with x = pi/2 - arctan(cot x)
        prof = MappedFunction("pseudo", -k / 2, -B / k, poly,
                              log_const=float(B / k) * 0.5 * math.pi)
    else:
        params = None
        poly = jacobi_poly(A - B - Fraction(1, 2), A + B - Fraction(1, 2), nu)
        prof = MappedFunction("jacobi", (A - B) / 2, (A + B) / 2, poly)
    state = BoundState(spec, nu, level(spec, nu), poly, params, prof)
    if normalize:
        n2 = overlap(state, state)
        state = BoundState(spec, nu, state.energy, poly, params, prof, math.sqrt(n2))
    return state


def overlap(f, g, family=None, qspec: QuadratureSpec | None = None) -> float:
    """Integral over x of f * g on the family's domain.

    States carrying a mapped profile on an unbounded t-line (Scarf II,
    Rosen-Morse I) are integrated in t with dx = dt / |dt/dx|, which keeps
    the far quadrature nodes finite.
    """
    fam = Family.parse(family) if family is not None else f.family
    coord = COORDINATES[fam]
    if fam is not Family.SCARF1 and hasattr(f, "profile") and hasattr(g, "profile"):
        scale = f.norm * g.norm

        def ft(t):
            return f.profile(t) * g.profile(t) / np.abs(coord.dt(t)) / scale

        return integrate_real_line(ft, qspec)[0]
    lo, hi = coord.domain
    fg = lambda x: f(x) * g(x)
    if math.isinf(lo):
        return integrate_real_line(fg, qspec)[0]
    return integrate_interval(fg, lo, hi, qspec)[0]


_D2_STENCIL = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])


def schrodinger_residual(spec: PotentialSpec, state, x_grid, h: float = 2e-3) -> float:
    """max |-psi'' + (V - E) psi| / max |psi| with a sixth-order central difference."""
    x = _inside(spec, x_grid)
    lo, hi = spec.domain
    room = np.minimum(x - lo, hi - x) / 4
    hx = np.minimum(h, room)
    offs = np.arange(-3, 4)
    pts = x[:, None] + offs[None, :] * hx[:, None]
    vals = state(pts.ravel()).reshape(pts.shape)
    d2 = vals @ _D2_STENCIL / (hx * hx)
    psi = vals[:, 3]
    res = -d2 + (potential_value(spec, x) - float(state.energy)) * psi
    scale = np.max(np.abs(psi))
    if scale == 0:
        raise DomainError("state vanishes on the grid")
    return float(np.max(np.abs(res)) / scale)


def z_form_residual(spec: PotentialSpec, state: BoundState, t_grid) -> float:
    """Residual of the Schroedinger equation written in the mapped variable,
    using exact polynomial derivatives (no differencing)."""
    t = np.asarray(t_grid, dtype=float)
    A, B, E = float(spec.A), float(spec.B), float(state.energy)
    f, f1, f2 = state.profile.t_derivs(t)
    if spec.family is Family.SCARF2:
        s = 1 + t * t
        res = -s * f2 - t * f1 + ((B * B - A * (A + 1)) / s + B * (2 * A + 1) * t / s - E) * f
    elif spec.family is Family.RM1:
        s = 1 + t * t
        res = -s * s * f2 - 2 * t * s * f1 + (A * (A - 1) * s + 2 * B * t - E) * f
    else:
        s = 1 - t * t
        res = -s * f2 + t * f1 + ((A * (A - 1) + B * B) / s - B * (2 * A - 1) * t / s - E) * f
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


def complexification_map_check(source: str, target_spec: PotentialSpec, state: BoundState,
                               z_grid: Iterable[float], images: tuple | None = None) -> float:
    """Apply the source family's w-equation, continued to w = i z with the
    parameter images (A, B, E) -> (-A, iB, -E), to a target bound state.

    ``source`` is "scarf1" (target Scarf II) or "rm2" (target Rosen-Morse I).
    ``images`` overrides the parameter images as complex (A', B', E') to probe
    a mismatched map.  Returns max |residual| / max |phi| over the grid.
    """
    src = source.lower().replace("-", "").replace("_", "")
    want = {"scarf1": Family.SCARF2, "rm2": Family.RM1, "rosenmorse2": Family.RM1}
    if src not in want:
        raise ValueError(f"unknown source family {source!r}")
    if target_spec.family is not want[src]:
        raise ValueError(f"{source} maps onto {want[src].value}, not {target_spec.family.value}")
    z = np.asarray(list(z_grid), dtype=float)
    A, B, E = float(target_spec.A), float(target_spec.B), float(state.energy)
    Ai, Bi, Ei = images if images is not None else (-A, 1j * B, -E)
    phi, dphi, d2phi = state.profile.t_derivs(z)
    w = 1j * z
    # phi~(w) = phi(z = -i w): d/dw = -i d/dz, d2/dw2 = -d2/dz2
    fw, fww = -1j * dphi, -d2phi
    s = 1 - w * w
    if src == "scarf1":
        res = -s * fww + w * fw + ((Ai * (Ai - 1) + Bi * Bi) - Bi * (2 * Ai - 1) * w) / s * phi - Ei * phi
    else:
        res = -s * s * fww + 2 * w * s * fw - Ai * (Ai + 1) * s * phi + 2 * Bi * w * phi - Ei * phi
    return float(np.max(np.abs(res)) / np.max(np.abs(phi)))
