"""First-order SUSY: seed solutions, type III rational extensions of Scarf II
and Rosen-Morse I, the extended polynomials y_n and their identities.

A seed phi solves the conventional equation at an energy E below the ground
state.  With W = -(log phi)' the partners are V(+-) = W^2 -+ W' + E; V(+) is a
conventional potential and V(-) = V + V_rat is its rational extension, which
gains the extra level E when 1/phi is normalisable (type III).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .numerics import QuadratureSpec, integrate_real_line
from .polyreal import RealPoly, count_real_roots, to_exact
from .potentials import (
    COORDINATES,
    Family,
    MappedFunction,
    PotentialSpec,
    bound_state,
    nu_max,
    raw_potential,
)
from .romanovski import (
    DomainError,
    Overlap,
    RomanovskiParams,
    jacobi_poly,
    rodrigues_poly,
)

__all__ = [
    "SeedFunction",
    "ExtendedPotential",
    "ExtendedState",
    "enumerate_seeds",
    "scarf1_seed_report",
    "superpotential",
    "denominator_polynomial",
    "build_extension",
    "extended_spectrum",
    "allowed_nus",
    "y_polynomial",
    "extended_state",
    "extended_ode_residual",
    "extended_orthogonality",
    "partner_residuals",
    "intertwining_ratio",
    "operator_oracle_y",
]

HALF = Fraction(1, 2)

# endpoint descriptors
INF_POS, INF_NEG, ZERO_POS, ZERO_NEG = "+inf", "-inf", "0+", "0-"


@dataclass(frozen=True)
class SeedFunction:
    """A polynomial-type solution of the conventional equation.

    ``profile`` is None for seeds with complex energy.  ``endpoints`` are
    (left, right) in x order; ``computed_endpoints`` come from the explicit
    form, ``endpoints`` from the classification table when one exists.
    """

    family: Family
    kind: int
    m: int
    A: Fraction
    B: Fraction
    energy: object
    polynomial_part: Optional[RealPoly]
    exponents: tuple
    admissible: bool
    reason: str
    type_label: str
    profile: Optional[MappedFunction] = None
    endpoints: Optional[tuple] = None
    computed_endpoints: Optional[tuple] = None
    window_ok: Optional[bool] = None
    below_ground: Optional[bool] = None
    interior_roots: Optional[int] = None

    def __call__(self, x):
        if self.profile is None:
            raise DomainError(f"seed kind {self.kind} has no real profile ({self.reason})")
        return self.profile(COORDINATES[self.family].t_of_x(np.asarray(x, dtype=float)))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _tag(sign: int, growth: int) -> str:
    if growth > 0:
        return INF_POS if sign > 0 else INF_NEG
    if growth < 0:
        return ZERO_POS if sign > 0 else ZERO_NEG
    return "finite+" if sign > 0 else "finite-"


def _end_sign(tag: str) -> int:
    return -1 if "-" in tag else 1


def _pseudo_ends(p, poly: RealPoly) -> tuple:
    """Behaviour of (1+t^2)^p * poly(t) (times a positive factor) as t -> -inf, +inf."""
    e = 2 * p + poly.degree
    s = _sign(poly.lead)
    return (_tag(s * (-1) ** poly.degree, _sign(e)), _tag(s, _sign(e)))


def _jacobi_ends(p, q, poly: RealPoly) -> tuple:
    """(1-w)^p (1+w)^q poly(w) as w -> -1+ and w -> 1-, with any root of
    poly at an endpoint folded into the exponent."""
    out = []
    for x0, expo in ((-1, q), (1, p)):
        k, c = 0, poly.compose_affine(1, x0)  # poly(w + x0) around the endpoint
        while c.coeffs[k] == 0:
            k += 1
        lead = c.coeffs[k]
        # near w = 1 the local variable 1 - w is positive, w - 1 = -(1 - w)
        sign = _sign(lead) * ((-1) ** k if x0 == 1 else 1)
        out.append(_tag(sign, -_sign(expo + k)))
    return tuple(out)


def _check_m(m) -> int:
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer (got {m})")
    return int(m)


# -- seeds ---------------------------------------------------------------

def _scarf2_seeds(A, B, m) -> list[SeedFunction]:
    fam = Family.SCARF2
    ground = -A * A
    seeds = []
    for kind in (1, 2):
        # E1,2 = -(iB -+ (m + 1/2))^2; complex whenever B != 0
        sgn = -1 if kind == 1 else 1
        E = -(complex(float(sgn * (m + HALF)), float(B))) ** 2
        ex = ((-A / 2 if kind == 1 else (A + 1) / 2), None)
        seeds.append(SeedFunction(
            fam, kind, m, A, B, E, None, ex, False,
            "complex energy: rejected (only meaningful for the PT-symmetric variant)", "none"))
    for kind in (3, 4):
        if kind == 3:
            E = -(A + m + 1) ** 2
            params = RomanovskiParams(2 * B, A + Fraction(3, 2))
            p, q = (A + 1) / 2, B
        else:
            E = -(A - m) ** 2
            params = RomanovskiParams(-2 * B, -A + HALF)
            p, q = -A / 2, -B
        poly = rodrigues_poly(params, m)
        prof = MappedFunction("pseudo", p, q, poly)
        ends = _pseudo_ends(p, poly)
        roots = count_real_roots(poly).count if poly.degree > 0 else 0
        below = E < ground
        reasons = []
        if not below:
            reasons.append("energy not below the ground state" +
                           (" (needs A < m/2)" if kind == 4 else ""))
        if _end_sign(ends[0]) != _end_sign(ends[1]):
            reasons.append("endpoint signs differ (m must be even)")
        if roots:
            reasons.append(f"polynomial part has {roots} real root(s)")
        ok = not reasons
        inverse_norm = ends[0] in (INF_POS, INF_NEG) and ends[1] in (INF_POS, INF_NEG)
        label = "III" if ok and inverse_norm else "none"
        seeds.append(SeedFunction(
            fam, kind, m, A, B, E, poly, (p, q), ok, "; ".join(reasons) or "admissible", label,
            prof, ends, ends, None, below, roots))
    return seeds


def _rm_seeds(A, B, m) -> list[SeedFunction]:
    fam = Family.RM1
    ground = A * A - B * B / (A * A)
    seeds = []
    for kind in (1, 2):
        k = A + m if kind == 1 else A - m - 1
        if k == 0:
            seeds.append(SeedFunction(fam, kind, m, A, B, None, None, (None, None), False,
                                      "A - m - 1 = 0: exponent pole", "none"))
            continue
        E = k * k - B * B / (k * k)
        if kind == 1:
            params = RomanovskiParams(-2 * B / k, -k + 1)
            p, q = -k / 2, -B / k
        else:
            params = RomanovskiParams(2 * B / k, A - m)
            p, q = k / 2, B / k
        poly = rodrigues_poly(params, m)
        # exp(-+B x / k) with x = pi/2 - arctan(cot x)
        prof = MappedFunction("pseudo", p, q, poly, log_const=-float(q) * 0.5 * math.pi)
        zl, zr = _pseudo_ends(p, poly)
        ends = (zr, zl)  # x -> 0 is z -> +inf
        roots = count_real_roots(poly).count if poly.degree > 0 else 0
        below = E < ground
        reasons = []
        if not below:
            reasons.append("energy not below the ground state" +
                           (" (needs A > (m+1)/2)" if kind == 2 else ""))
        if _end_sign(ends[0]) != _end_sign(ends[1]):
            reasons.append("endpoint signs differ (m must be even)")
        if roots:
            reasons.append(f"polynomial part has {roots} real root(s)")
        ok = not reasons
        inverse_norm = all(e in (INF_POS, INF_NEG) for e in ends)
        label = "III" if ok and inverse_norm else "none"
        seeds.append(SeedFunction(
            fam, kind, m, A, B, E, poly, (p, q), ok, "; ".join(reasons) or "admissible", label,
            prof, ends, ends, None, below, roots))
    return seeds


_S1_TABLE = {
    1: lambda pm: (INF_POS, ZERO_POS),
    2: lambda pm: (ZERO_POS if pm > 0 else ZERO_NEG, INF_POS if pm > 0 else INF_NEG),
    3: lambda pm: (INF_POS, INF_POS if pm > 0 else INF_NEG),
}
_S1_TYPES = {1: "I", 2: "II", 3: "III"}


def scarf1_seed_report(A, B, m) -> list[SeedFunction]:
    """The four polynomial-type Scarf I solutions with window verdicts.

    Admissibility follows the parameter windows (kind 3 also needs even m;
    kind 4 is never below the ground state).  Each seed additionally carries
    its computed endpoint behaviour and the number of zeros of the Jacobi
    factor inside (-1, 1); when the Jacobi factor degenerates (vanishes
    identically) those diagnostics are None.
    """
    A, B, m = to_exact(A), to_exact(B), _check_m(m)
    fam = Family.SCARF1
    ground = A * A
    forms = {
        1: ((A - B) / 2, -(B + A - 1) / 2, A - B - HALF, -B - A + HALF, (B - m - HALF) ** 2),
        2: ((B - A + 1) / 2, (B + A) / 2, B - A + HALF, B + A - HALF, (B + m + HALF) ** 2),
        3: ((B - A + 1) / 2, -(B + A - 1) / 2, B - A + HALF, -B - A + HALF, (A - m - 1) ** 2),
        4: ((A - B) / 2, (B + A) / 2, A - B - HALF, B + A - HALF, (A + m) ** 2),
    }
    windows = {
        1: A > m + HALF and 0 < B < A - 1,
        2: A > m + HALF and 0 < B < A - m - HALF,
        3: A > Fraction(m + 1, 2) and 0 < B < A - 1,
        4: False,
    }
    pm = (-1) ** m
    seeds = []
    for kind, (p, q, a, b, E) in forms.items():
        poly = jacobi_poly(a, b, m)
        degenerate = poly.is_zero() or poly.degree < m
        prof = None if poly.is_zero() else MappedFunction("jacobi", p, q, poly)
        computed = None if poly.is_zero() else _jacobi_ends(p, q, poly)
        roots = None if poly.is_zero() else (
            count_real_roots(poly, -1, 1).count if poly.degree > 0 else 0)
        below = E < ground
        reasons = []
        if kind == 4:
            reasons.append("energy always above the ground state")
        elif not windows[kind]:
            reasons.append(f"parameters outside window ({kind})")
        if kind == 3 and m % 2:
            reasons.append("m must be even")
        if degenerate:
            reasons.append("note: Jacobi factor degenerates at these parameters")
        elif roots and kind != 4:
            reasons.append(f"note: Jacobi factor has {roots} zero(s) inside (-1, 1)")
        ok = kind != 4 and windows[kind] and not (kind == 3 and m % 2)
        table = _S1_TABLE[kind](pm) if kind in _S1_TABLE else None
        seeds.append(SeedFunction(
            fam, kind, m, A, B, E, poly, (p, q), ok,
            "; ".join(reasons) or "admissible", _S1_TYPES.get(kind, "none") if ok else "none",
            prof, table, computed, windows[kind], below, roots))
    return seeds


def enumerate_seeds(family, A, B, m) -> list[SeedFunction]:
    """All polynomial-type seeds of the conventional potential V_{A,B}."""
    fam = Family.parse(family)
    m = _check_m(m)
    if fam is Family.SCARF1:
        return scarf1_seed_report(A, B, m)
    spec = PotentialSpec(fam, A, B)  # parameter validity
    if fam is Family.SCARF2:
        return _scarf2_seeds(spec.A, spec.B, m)
    return _rm_seeds(spec.A, spec.B, m)


def superpotential(seed: SeedFunction) -> Callable:
    """W(x) = -(log phi)'(x) from exact derivatives of the seed's profile."""
    if seed.profile is None or not seed.admissible:
        raise DomainError(f"seed kind {seed.kind} is not admissible: {seed.reason}")
    lo, hi = (-1, 1) if seed.family is Family.SCARF1 else (-math.inf, math.inf)
    if seed.polynomial_part.degree > 0 and count_real_roots(seed.polynomial_part, lo, hi).count:
        raise DomainError("seed polynomial has real roots; W would be singular")
    coord = COORDINATES[seed.family]
    prof = seed.profile

    def W(x):
        f, f1, _ = prof.x_derivs(coord, x)
        return -f1 / f

    return W


# -- extensions ----------------------------------------------------------

def denominator_polynomial(family, A, B, m) -> tuple[RealPoly, RomanovskiParams]:
    """g_m and its parameters, with no parity or nodelessness checks."""
    fam = Family.parse(family)
    A, B, m = to_exact(A), to_exact(B), _check_m(m)
    if fam is Family.SCARF2:
        params = RomanovskiParams(2 * B, A + HALF)
    elif fam is Family.RM1:
        if A == m:
            raise DomainError("A = m is a pole of alpha_{-m-1}")
        params = RomanovskiParams(2 * B / (A - m), A - m + 1)
    else:
        raise DomainError("extensions are built for Scarf II and Rosen-Morse I only")
    return rodrigues_poly(params, m), params


@dataclass(frozen=True)
class ExtendedPotential:
    family: Family
    A: Fraction
    B: Fraction
    m: int
    g: RealPoly
    g_params: RomanovskiParams
    seed: SeedFunction
    v_plus_spec: PotentialSpec
    ground_energy: Fraction
    g_aux: RealPoly  # g_{m-1} (Scarf II) or g_{m+1} (Rosen-Morse I), same parameters as g
    _gf: tuple = field(repr=False, compare=False, default=())

    @property
    def domain(self) -> tuple:
        return COORDINATES[self.family].domain

    def _g_log_derivs(self, z):
        g, g1, g2 = (p(z) for p in self._gf)
        return g1 / g, g2 / g

    def rational_part(self, z):
        """V_rat as a function of the mapped variable z."""
        z = np.asarray(z, dtype=float)
        L1, L2 = self._g_log_derivs(z)
        s = 1 + z * z
        if self.family is Family.SCARF2:
            return -2 * z * L1 - 2 * s * (L2 - L1 * L1)
        return -2 * s * (2 * z * L1 + s * (L2 - L1 * L1) - self.m)

    def conventional(self, x):
        return raw_potential(self.family, self.A, self.B, x)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        z = COORDINATES[self.family].t_of_x(x)
        return self.conventional(x) + self.rational_part(z)

    __call__ = potential

    def superpotential(self, x):
        f, f1, _ = self.seed.profile.x_derivs(COORDINATES[self.family], x)
        return -f1 / f


def build_extension(family, A, B, m, seed_kind: int | None = None) -> ExtendedPotential:
    """Type III extension V(-) = V_{A,B} + V_rat.

    Scarf II uses the phi3 seed of V_{A-1,B}; Rosen-Morse I the phi2 seed of
    V_{A+1,B}.  g is certified nodeless by an exact Sturm count, and the
    partner identities are checked on an interior grid.
    """
    fam = Family.parse(family)
    A, B = to_exact(A), to_exact(B)
    if int(m) != m or m < 2 or m % 2:
        raise DomainError(f"m must be even and >= 2 (got m={m}); the construction is restricted to even values")
    m = int(m)
    if fam is Family.SCARF2:
        if seed_kind not in (None, 3):
            raise DomainError("only phi3-based Scarf II extensions are built; phi4 "
                              "(window 0 < A < m/2) is enumerated but not constructed")
        if not A > 1:
            raise DomainError(f"Scarf II extension needs A > 1 (got A={A})")
        vplus = PotentialSpec(fam, A - 1, B)
        seed = next(s for s in _scarf2_seeds(A - 1, B, m) if s.kind == 3)
        ground = -(A + m) ** 2
    elif fam is Family.RM1:
        if seed_kind not in (None, 2):
            raise DomainError("Rosen-Morse I extensions use the phi2 seed only")
        if not A > Fraction(m - 1, 2):
            raise DomainError(f"Rosen-Morse I extension needs A > (m-1)/2 (got A={A}, m={m})")
        if abs(A - m) < 1e-9:
            raise DomainError(f"A = {A} is within 1e-9 of m = {m} (pole of alpha_(-m-1))")
        vplus = PotentialSpec(fam, A + 1, B)
        seed = next(s for s in _rm_seeds(A + 1, B, m) if s.kind == 2)
        ground = (A - m) ** 2 - B * B / (A - m) ** 2
    else:
        raise DomainError("extensions are built for Scarf II and Rosen-Morse I only")
    g, gp = denominator_polynomial(fam, A, B, m)
    roots = count_real_roots(g).count
    if roots:
        raise DomainError(f"g_m has {roots} real root(s); the extension would be singular")
    if not seed.admissible:
        raise DomainError(f"seed is not admissible: {seed.reason}")
    aux = rodrigues_poly(gp, m - 1 if fam is Family.SCARF2 else m + 1)
    gf = g.to_float()
    ext = ExtendedPotential(fam, A, B, m, g, gp, seed, vplus, ground, aux,
                            (gf, gf.derivative(), gf.derivative(2)))
    res = partner_residuals(ext)
    if max(res) > 1e-8:
        raise ArithmeticError(f"partner identities fail: residuals {res}")
    return ext


def _interior_grid(fam: Family, n: int = 201) -> np.ndarray:
    if fam is Family.SCARF2:
        return np.linspace(-8, 8, n)
    return np.linspace(0.05, math.pi - 0.05, n)


def partner_residuals(ext: ExtendedPotential, x=None) -> tuple[float, float]:
    """Scaled max deviations of W^2 - W' + E from V(+) and W^2 + W' + E from V(-).

    With f = phi, W^2 - W' = f''/f and W^2 + W' = 2 (f'/f)^2 - f''/f.
    """
    x = _interior_grid(ext.family) if x is None else np.asarray(x, dtype=float)
    f, f1, f2 = ext.seed.profile.x_derivs(COORDINATES[ext.family], x)
    E = float(ext.seed.energy)
    plus = f2 / f + E
    minus = 2 * (f1 / f) ** 2 - f2 / f + E
    vp = raw_potential(ext.family, ext.v_plus_spec.A, ext.B, x)
    vm = ext.potential(x)
    scale_p = 1 + np.max(np.abs(vp))
    scale_m = 1 + np.max(np.abs(vm))
    return (float(np.max(np.abs(plus - vp)) / scale_p),
            float(np.max(np.abs(minus - vm)) / scale_m))


def extended_nu_max(ext: ExtendedPotential) -> Optional[int]:
    return nu_max(ext.A - 1) if ext.family is Family.SCARF2 else None


def allowed_nus(ext: ExtendedPotential, K: int = 5) -> list[int]:
    top = extended_nu_max(ext)
    rest = range(top + 1) if top is not None else range(K)
    return [-ext.m - 1, *rest]


def _energy(ext: ExtendedPotential, nu: int):
    if nu == -ext.m - 1:
        return ext.ground_energy
    if ext.family is Family.SCARF2:
        return -(ext.A - 1 - nu) ** 2
    k = ext.A + 1 + nu
    return k * k - ext.B ** 2 / (k * k)


def extended_spectrum(ext: ExtendedPotential, K: int = 5) -> list[tuple[int, Fraction]]:
    """Extra ground level plus the conventional ladder (all of it for Scarf II, K rungs otherwise)."""
    return [(nu, _energy(ext, nu)) for nu in allowed_nus(ext, K)]


def _check_nu(ext: ExtendedPotential, nu: int) -> int:
    if int(nu) != nu:
        raise DomainError(f"nu must be an integer (got {nu})")
    nu = int(nu)
    top = extended_nu_max(ext)
    if nu == -ext.m - 1 or (nu >= 0 and (top is None or nu <= top)):
        return nu
    hi = f"0..{top}" if top is not None else "0, 1, 2, ..."
    raise DomainError(f"nu must be {-ext.m - 1} or in {hi} (got {nu})")


def state_params(ext: ExtendedPotential, nu: int) -> RomanovskiParams:
    if ext.family is Family.SCARF2:
        return RomanovskiParams(-2 * ext.B, -ext.A + Fraction(3, 2))
    return RomanovskiParams(-2 * ext.B / (ext.A + 1 + nu), -ext.A - nu)


@dataclass(frozen=True)
class ExtendedState:
    ext: ExtendedPotential
    nu: int
    n: int
    energy: object
    y: RealPoly
    state_params: RomanovskiParams
    profile: MappedFunction
    norm: float = 1.0

    @property
    def family(self) -> Family:
        return self.ext.family

    def __call__(self, x):
        t = COORDINATES[self.ext.family].t_of_x(np.asarray(x, dtype=float))
        return self.profile(t) / self.norm

    def x_derivs(self, x):
        return self.profile.x_derivs(COORDINATES[self.ext.family], x)

    def y_nodes(self) -> int:
        return count_real_roots(self.y).count if self.y.degree > 0 else 0


def _romanovski_or_zero(params: RomanovskiParams, nu: int) -> RealPoly:
    return rodrigues_poly(params, nu) if nu >= 0 else RealPoly.zero(params.exact)


def _y_scarf2(ext: ExtendedPotential, nu: int) -> RealPoly:
    p = state_params(ext, nu)
    a, b, m = p.alpha, p.beta, ext.m
    ex = p.exact
    g, gm1 = ext.g, ext.g_aux
    R, Rm1 = rodrigues_poly(p, nu), _romanovski_or_zero(p, nu - 1)
    d1 = (2 * nu + 2 * b - 2) * (2 * m - 2 * b + 2)
    d2, d3 = nu + b - 1, m - b + 1
    if 0 in (d1, d2, d3):
        raise DomainError(f"vanishing denominator in y for nu={nu}")
    lin = RealPoly([-a * (2 * b - 2) / d1, 1], exact=ex)
    c1 = ((nu + b - 1) ** 2 + a * a / 4) / d2
    c2 = ((m - b + 1) ** 2 + a * a / 4) / d3
    return (lin * g * R).scale(nu - m + 2 * b - 2) + (g * Rm1).scale(c1) - (gm1 * R).scale(c2)


def _y_rm(ext: ExtendedPotential, nu: int) -> RealPoly:
    p = state_params(ext, nu)
    a, b, m = p.alpha, p.beta, ext.m
    bm = -ext.A + m + 1  # beta_{-m-1}
    R, Rm1 = rodrigues_poly(p, nu), _romanovski_or_zero(p, nu - 1)
    d1, d2 = nu + b - 1, m - bm + 2
    if d1 == 0 or d2 == 0:
        raise DomainError(f"vanishing denominator in y for nu={nu}")
    c1 = ((nu + b - 1) ** 2 + a * a / 4) / d1
    c2 = Fraction(m + 1) * (m - 2 * bm + 3) / d2 if p.exact else (m + 1) * (m - 2 * bm + 3) / d2
    return -(ext.g * Rm1).scale(c1) + (ext.g_aux * R).scale(c2)


def y_polynomial(ext: ExtendedPotential, nu: int) -> ExtendedState:
    """y_{m+nu+1} exactly as printed (no rescaling), wrapped with its state data."""
    nu = _check_nu(ext, nu)
    n = ext.m + nu + 1
    p = state_params(ext, nu)
    if nu == -ext.m - 1:
        y = RealPoly.const(1, exact=p.exact)
    elif ext.family is Family.SCARF2:
        y = _y_scarf2(ext, nu)
    else:
        y = _y_rm(ext, nu)
    if y.degree != n:
        raise ArithmeticError(f"y has degree {y.degree}, expected {n}")
    A, B = ext.A, ext.B
    if ext.family is Family.SCARF2:
        prof = MappedFunction("pseudo", -A / 2, -B, y, ext.g)
    else:
        k = A + 1 + nu
        prof = MappedFunction("pseudo", -k / 2, -B / k, y, ext.g, log_const=float(B / k) * 0.5 * math.pi)
    return ExtendedState(ext, nu, n, _energy(ext, nu), y, p, prof)


def extended_state(ext: ExtendedPotential, nu: int) -> ExtendedState:
    """psi(-)_nu = prefactor * y / g; callable in x, unnormalised."""
    return y_polynomial(ext, nu)


def extended_ode_residual(ext: ExtendedPotential, nu: int, z_grid) -> float:
    """Max of |L y| over the grid, scaled by the largest single term of L y."""
    st = y_polynomial(ext, nu)
    z = np.asarray(z_grid, dtype=float)
    y = st.y.to_float() if st.y.exact else st.y
    Y, Y1, Y2 = y(z), y.derivative()(z), y.derivative(2)(z)
    L1, _ = ext._g_log_derivs(z)
    a, b = float(st.state_params.alpha), float(st.state_params.beta)
    s = 1 + z * z
    m = ext.m
    if ext.family is Family.SCARF2:
        drift = 2 * (b - 1) * z + a - 2 * s * L1
        c0 = -(nu + m + 1) * (nu - m + 2 * b - 2) + 0 * z
    else:
        am = float(-2 * ext.B / (ext.A - m))
        bm = float(-ext.A + m + 1)
        drift = 2 * b * z + a - 2 * s * L1
        c0 = (-(nu + 1) * (2 * b + nu) + m * (-2 * bm + m + 1)
              - (2 * (b - bm) * z + a - am) * L1)
    terms = (s * Y2, drift * Y1, c0 * Y)
    res = np.abs(sum(terms))
    scale = float(np.max(sum(np.abs(t) for t in terms)))
    return float(np.max(res) / scale) if scale > 0 else float(np.max(res))


def extended_orthogonality(ext: ExtendedPotential, nu: int, nu2: int,
                           qspec: QuadratureSpec | None = None) -> Overlap:
    """Weighted inner product of y_{m+nu+1} and y_{m+nu2+1} over the real line."""
    s1, s2 = y_polynomial(ext, nu), y_polynomial(ext, nu2)
    g = ext._gf[0]

    def expo(st1, st2):
        b = (float(st1.state_params.beta) + float(st2.state_params.beta)) / 2
        a = (float(st1.state_params.alpha) + float(st2.state_params.alpha)) / 2
        return a, b

    def integral(st1, st2):
        a, b = expo(st1, st2)
        y1, y2 = st1.y.to_float(), st2.y.to_float()

        def f(z):
            w = np.exp((b - 2) * np.log1p(z * z) + a * np.arctan(z))
            return w * y1(z) * y2(z) / g(z) ** 2

        return integrate_real_line(f, qspec)[0]

    value = integral(s1, s2)
    if nu == nu2:
        return Overlap(value, value)
    return Overlap(value, math.sqrt(integral(s1, s1) * integral(s2, s2)))


# -- intertwining --------------------------------------------------------

def _plus_state(ext: ExtendedPotential, nu: int):
    return bound_state(ext.v_plus_spec, nu)


def intertwining_ratio(ext: ExtendedPotential, nu: int, x=None) -> float:
    """Relative spread of (A psi(+)_nu) / psi(-)_nu over a grid, A = d/dx + W."""
    x = _interior_grid(ext.family, 101) if x is None else np.asarray(x, dtype=float)
    plus = _plus_state(ext, nu)
    f, f1, _ = plus.profile.x_derivs(COORDINATES[ext.family], x)
    applied = f1 + ext.superpotential(x) * f
    minus = extended_state(ext, nu)(x)
    keep = np.abs(minus) > 1e-8 * np.max(np.abs(minus))
    r = applied[keep] / minus[keep]
    mid = np.median(r)
    return float(np.max(np.abs(r - mid)) / abs(mid))


def operator_oracle_y(ext: ExtendedPotential, nu: int, z) -> np.ndarray:
    """y recovered from A psi(+)_nu with the prefactor and 1/g divided out
    (up to a constant), written through R_nu, g and their derivatives."""
    z = np.asarray(z, dtype=float)
    p = state_params(ext, nu)
    R = rodrigues_poly(p, nu).to_float()
    g = ext._gf[0]
    wr = R.derivative()(z) * g(z) - R(z) * g.derivative()(z)
    A, B, m = float(ext.A), float(ext.B), ext.m
    s = 1 + z * z
    if ext.family is Family.SCARF2:
        return s * wr - ((2 * A - 1) * z + 2 * B) * R(z) * g(z)
    a, b = float(p.alpha), float(p.beta)
    return -s * wr + ((A - m - b + 1) * z + B / (A - m) - a / 2) * R(z) * g(z)
