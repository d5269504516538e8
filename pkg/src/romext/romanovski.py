"""Hypergeometric-type classification and third-class Romanovski polynomials.

The polynomials R_nu^{(alpha, beta)} solve

    (1 + z^2) R'' + (2 beta z + alpha) R' - nu (nu - 1 + 2 beta) R = 0

and are normalised by the Rodrigues constant 1 / (2^nu nu!).  Everything that
builds a polynomial works in exact rational arithmetic when the parameters are
rational; the complex Jacobi evaluation and the quadratures are float-only
verification paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .polyreal import RealPoly, to_exact

__all__ = [
    "DomainError",
    "HyperCase",
    "RomanovskiParams",
    "RecurrenceCoeffs",
    "Overlap",
    "SIGMA_TAGS",
    "classify_case",
    "lambda_nu",
    "rodrigues_poly",
    "recurrence_coeffs",
    "recurrence_poly",
    "weight",
    "log_weight",
    "jacobi_complex",
    "jacobi_poly",
    "jacobi_bridge_residual",
    "derivative_identity_residual",
    "derivative_identity_poly",
    "ode_operator",
    "orthogonality_integral",
    "leading_coefficient",
    "gen_binom",
]


class DomainError(ValueError):
    """Parameters or indices outside the region where a formula is defined."""


def _scalar(x):
    """Exact inputs (int, Fraction, "p/q" strings) become Fractions; floats stay floats."""
    if isinstance(x, (int, Fraction, str)) and not isinstance(x, bool):
        return to_exact(x)
    return float(x)


def gen_binom(c, k: int):
    """Generalised binomial c (c-1) ... (c-k+1) / k!."""
    out = Fraction(1) if isinstance(c, (int, Fraction)) else 1.0
    for j in range(k):
        out = out * (c - j) / (j + 1)
    return out


# -- classification -----------------------------------------------------

SIGMA_TAGS = ("1", "z", "1-z^2", "z^2-1", "z^2", "z^2+1")

_INTERVALS = {
    "1": (-math.inf, math.inf),
    "z": (0.0, math.inf),
    "1-z^2": (-1.0, 1.0),
    "z^2-1": (1.0, math.inf),
    "z^2": (0.0, math.inf),
    "z^2+1": (-math.inf, math.inf),
}

_SIGMA_POLY = {
    "1": (1,),
    "z": (0, 1),
    "1-z^2": (1, 0, -1),
    "z^2-1": (-1, 0, 1),
    "z^2": (0, 0, 1),
    "z^2+1": (1, 0, 1),
}

_WEIGHTS = {
    "1": "exp(alpha z^2 / 2 + beta z)",
    "z": "z^(beta-1) exp(alpha z)",
    "1-z^2": "(1+z)^(-(alpha-beta)/2-1) (1-z)^(-(alpha+beta)/2-1)",
    "z^2-1": "(z+1)^((alpha-beta)/2-1) (z-1)^((alpha+beta)/2-1)",
    "z^2": "z^(alpha-2) exp(-beta/z)",
    "z^2+1": "(1+z^2)^(alpha/2-1) exp(beta arctan z)",
}


@dataclass(frozen=True)
class HyperCase:
    """One row of the hypergeometric classification, tau(z) = alpha z + beta."""

    sigma: str
    alpha: object
    beta: object
    weight: str
    interval: tuple
    nu_bar: object

    @property
    def sigma_poly(self) -> RealPoly:
        return RealPoly(_SIGMA_POLY[self.sigma])

    @property
    def tau_poly(self) -> RealPoly:
        return RealPoly([self.beta, self.alpha])


def _row_restriction(tag: str, a, b) -> str | None:
    """Return the violated inequality, or None."""
    if tag == "1" and not a < 0:
        return "alpha < 0"
    if tag == "z" and not (a < 0 and b > 0):
        return "alpha < 0 and beta > 0"
    if tag == "1-z^2" and not (a < b < -a):
        return "alpha < beta < -alpha"
    if tag == "z^2-1" and not (-b < a < 0):
        return "-beta < alpha < 0"
    if tag == "z^2" and not (a < 0 and b > 0):
        return "alpha < 0 and beta > 0"
    if tag == "z^2+1" and not a < 0:
        return "alpha < 0"
    return None


def classify_case(sigma_tag: str, alpha, beta=0) -> HyperCase:
    if sigma_tag not in SIGMA_TAGS:
        raise ValueError(f"unknown sigma {sigma_tag!r}; expected one of {SIGMA_TAGS}")
    a, b = _scalar(alpha), _scalar(beta)
    bad = _row_restriction(sigma_tag, a, b)
    if bad:
        raise DomainError(f"sigma = {sigma_tag} requires {bad} (got alpha={a}, beta={b})")
    nu_bar = math.inf if sigma_tag in ("1", "z", "1-z^2") else (1 - a) / 2
    return HyperCase(sigma_tag, a, b, _WEIGHTS[sigma_tag], _INTERVALS[sigma_tag], nu_bar)


def lambda_nu(case: HyperCase, nu: int):
    """Eigenvalue -nu(nu-1) sigma''/2 - nu tau' admitting a degree-nu solution."""
    if nu < 0:
        raise DomainError("nu must be non-negative")
    s2 = case.sigma_poly.derivative(2)
    s2 = s2.coeffs[0] if not s2.is_zero() else 0
    return -Fraction(nu * (nu - 1), 2) * s2 - nu * case.alpha


# -- Romanovski parameters ----------------------------------------------

@dataclass(frozen=True)
class RomanovskiParams:
    """(alpha, beta) of R_nu^{(alpha, beta)}; beta < 0 is the finite family."""

    alpha: object
    beta: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", _scalar(self.alpha))
        object.__setattr__(self, "beta", _scalar(self.beta))

    @property
    def nu_bar(self):
        """Degrees nu < nu_bar are orthogonal and normalisable."""
        return Fraction(1, 2) - self.beta if self.exact else 0.5 - self.beta

    @property
    def finite_family(self) -> bool:
        return self.beta < 0

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction) and isinstance(self.beta, Fraction)

    def as_case(self) -> HyperCase:
        """The Table-row view: sigma = z^2 + 1, tau = (2 beta) z + alpha."""
        return classify_case("z^2+1", 2 * self.beta, self.alpha)

    def tau(self) -> RealPoly:
        return RealPoly([self.alpha, 2 * self.beta], exact=self.exact)

    def eigenvalue(self, nu: int):
        return -nu * (nu - 1 + 2 * self.beta)


def _params(params, beta=None) -> RomanovskiParams:
    if isinstance(params, RomanovskiParams):
        return params
    if beta is None:
        alpha, beta = params
    else:
        alpha = params
    return RomanovskiParams(alpha, beta)


def leading_coefficient(params: RomanovskiParams, nu: int):
    """2^-nu binom(2 nu + 2 beta - 2, nu)."""
    p = _params(params)
    return gen_binom(2 * nu + 2 * p.beta - 2, nu) / 2 ** nu


def rodrigues_poly(params: RomanovskiParams, nu: int) -> RealPoly:
    """R_nu from the Rodrigues formula, differentiating only the polynomial cofactor.

    Writing d^k/dz^k [sigma^nu rho] = P_k sigma^(nu-k) rho and using
    rho'/rho = (2(beta-1) z + alpha) / (1 + z^2) gives

        P_{k+1} = (1 + z^2) P_k' + (2 (nu - k + beta - 1) z + alpha) P_k.
    """
    p = _params(params)
    if nu < 0:
        raise DomainError("nu must be non-negative")
    ex = p.exact
    sigma = RealPoly([1, 0, 1], exact=ex)
    P = RealPoly.const(1, exact=ex)
    for k in range(nu):
        drift = RealPoly([p.alpha, 2 * (nu - k + p.beta - 1)], exact=ex)
        P = sigma * P.derivative() + drift * P
    norm = Fraction(1, 2 ** nu * math.factorial(nu))
    return P.scale(norm if ex else float(norm))


class RecurrenceCoeffs(NamedTuple):
    a_nu: object
    b_nu: object
    g_nu: object


def recurrence_coeffs(params: RomanovskiParams, nu: int) -> RecurrenceCoeffs:
    """Coefficients of z R_nu = a R_{nu+1} + b R_nu + g R_{nu-1}."""
    p = _params(params)
    a, b = p.alpha, p.beta
    d0, d1, d2 = 2 * nu + 2 * b, 2 * nu + 2 * b - 1, 2 * nu + 2 * b - 2
    for name, d in (("2nu+2beta", d0), ("2nu+2beta-1", d1), ("2nu+2beta-2", d2)):
        if d == 0:
            raise DomainError(f"recurrence denominator {name} vanishes at nu={nu}, beta={b}")
    a_nu = 2 * (nu + 1) * (nu + 2 * b - 1) / (d0 * d1)
    b_nu = -a * (2 * b - 2) / (d0 * d2)
    g_nu = -2 * ((nu + b - 1) ** 2 + a * a / 4) / (d1 * d2)
    return RecurrenceCoeffs(a_nu, b_nu, g_nu)


def recurrence_poly(params: RomanovskiParams, nu: int) -> RealPoly:
    """R_nu from R_0 = 1, R_1 = beta z + alpha/2 and the three-term recurrence."""
    p = _params(params)
    if nu < 0:
        raise DomainError("nu must be non-negative")
    ex = p.exact
    prev = RealPoly.const(1, exact=ex)
    if nu == 0:
        return prev
    # R_1 follows from one Rodrigues step.
    cur = RealPoly([p.alpha / 2, p.beta], exact=ex)
    z = RealPoly([0, 1], exact=ex)
    for k in range(1, nu):
        c = recurrence_coeffs(p, k)
        if c.a_nu == 0:
            raise DomainError(f"recurrence cannot be inverted at step nu={k}: a_nu = 0")
        nxt = (z * cur - cur.scale(c.b_nu) - prev.scale(c.g_nu)).scale(1 / c.a_nu)
        prev, cur = cur, nxt
    return cur


def log_weight(params: RomanovskiParams, z):
    p = _params(params)
    z = np.asarray(z, dtype=float)
    return (float(p.beta) - 1.0) * np.log1p(z * z) + float(p.alpha) * np.arctan(z)


def weight(params: RomanovskiParams, z):
    """rho(z) = (1 + z^2)^(beta - 1) exp(alpha arctan z), evaluated in log space."""
    out = np.exp(log_weight(params, z))
    return float(out) if out.ndim == 0 else out


def ode_operator(params: RomanovskiParams, nu: int, poly: RealPoly) -> RealPoly:
    """Apply (1+z^2) d2 + (2 beta z + alpha) d - nu(nu-1+2beta) to ``poly``."""
    p = _params(params)
    ex = poly.exact
    sigma = RealPoly([1, 0, 1], exact=ex)
    tau = RealPoly([p.alpha, 2 * p.beta], exact=ex)
    lam = p.eigenvalue(nu)
    return sigma * poly.derivative(2) + tau * poly.derivative() + poly.scale(lam)


# -- Jacobi bridge ------------------------------------------------------

def jacobi_complex(a: complex, b: complex, n: int, x):
    """P_n^{(a,b)}(x) for complex parameters from the explicit binomial sum

        sum_s binom(n+a, n-s) binom(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s),

    which has no parameter-dependent denominators.
    """
    x = np.asarray(x, dtype=complex)
    u, v = (x - 1) / 2, (x + 1) / 2
    out = np.zeros_like(x)
    for s in range(n + 1):
        out += gen_binom(complex(n + a), n - s) * gen_binom(complex(n + b), s) * u ** s * v ** (n - s)
    return out


def jacobi_poly(a, b, n: int) -> RealPoly:
    """Real Jacobi polynomial P_n^{(a,b)} as coefficients (exact for rational a, b)."""
    a, b = _scalar(a), _scalar(b)
    ex = isinstance(a, Fraction) and isinstance(b, Fraction)
    half = Fraction(1, 2) if ex else 0.5
    u = RealPoly([-half, half], exact=ex)
    v = RealPoly([half, half], exact=ex)
    out = RealPoly.zero(ex)
    for s in range(n + 1):
        c = gen_binom(n + a, n - s) * gen_binom(n + b, s)
        out = out + (u ** s * v ** (n - s)).scale(c)
    return out


def jacobi_bridge_residual(params: RomanovskiParams, nu: int, z_grid: Iterable[float],
                           dps: int | None = None) -> float:
    """max |R_nu(z) - (-i)^nu P_nu^{(beta-1+i alpha/2, beta-1-i alpha/2)}(i z)| on the grid.

    The imaginary part of the Jacobi side counts towards the residual, so a
    non-real bridge shows up as a failure.  In double precision the residual
    is bounded below by rounding on |R_nu|; ``dps`` evaluates both sides with
    mpmath at that many digits instead.
    """
    p = _params(params)
    z = np.asarray(list(z_grid), dtype=float)
    if not z.size:
        return 0.0
    if dps is not None:
        return _bridge_mp(p, nu, z, dps)
    ap = complex(float(p.beta) - 1, float(p.alpha) / 2)
    bp = complex(float(p.beta) - 1, -float(p.alpha) / 2)
    rhs = (-1j) ** nu * jacobi_complex(ap, bp, nu, 1j * z)
    lhs = rodrigues_poly(p, nu)(z)
    return float(np.max(np.abs(lhs - rhs)))


def _bridge_mp(p: RomanovskiParams, nu: int, z: np.ndarray, dps: int) -> float:
    import mpmath

    def mp(x):
        x = to_exact(x)
        return mpmath.mpf(x.numerator) / x.denominator

    with mpmath.workdps(dps):
        ap = mpmath.mpc(mp(p.beta) - 1, mp(p.alpha) / 2)
        bp = mpmath.mpc(mp(p.beta) - 1, -mp(p.alpha) / 2)
        exact = RomanovskiParams(to_exact(p.alpha), to_exact(p.beta))
        coeffs = [mp(c) for c in rodrigues_poly(exact, nu).coeffs]
        worst = mpmath.mpf(0)
        for zf in z:
            zz = mp(float(zf))
            lhs = mpmath.polyval(coeffs[::-1], zz) if coeffs else 0
            x = mpmath.mpc(0, zz)
            u, v = (x - 1) / 2, (x + 1) / 2
            rhs = sum(gen_binom(nu + ap, nu - s) * gen_binom(nu + bp, s) * u ** s * v ** (nu - s)
                      for s in range(nu + 1))
            worst = max(worst, abs(lhs - mpmath.mpc(0, -1) ** nu * rhs))
        return float(worst)


# -- derivative identities ------------------------------------------------

def _pair_product(p: RomanovskiParams, nu: int):
    """(nu+beta-1+i alpha/2)(nu+beta-1-i alpha/2) as a real number."""
    return (nu + p.beta - 1) ** 2 + p.alpha * p.alpha / 4


def derivative_identity_poly(params: RomanovskiParams, nu: int, variant: str) -> RealPoly:
    """(1+z^2) R_nu' minus the right-hand side of the chosen identity."""
    p = _params(params)
    ex = p.exact
    sigma = RealPoly([1, 0, 1], exact=ex)
    R = rodrigues_poly(p, nu)
    lhs = sigma * R.derivative()
    if variant == "forward":
        d = 2 * nu + 2 * p.beta
        if d == 0:
            raise DomainError(f"2nu+2beta vanishes at nu={nu}")
        c = (nu + 2 * p.beta - 1) / d
        lin = RealPoly([p.alpha, d], exact=ex)
        rhs = (-(lin * R) + rodrigues_poly(p, nu + 1).scale(2 * (nu + 1))).scale(c)
    elif variant == "backward":
        if nu < 1:
            raise DomainError("backward identity needs nu >= 1")
        d = 2 * nu + 2 * p.beta - 2
        if d == 0:
            raise DomainError(f"2nu+2beta-2 vanishes at nu={nu}")
        lin = RealPoly([-p.alpha, d], exact=ex)
        rhs = ((lin * R).scale(nu)
               + rodrigues_poly(p, nu - 1).scale(2 * _pair_product(p, nu))).scale(1 / d)
    else:
        raise ValueError(f"variant must be 'forward' or 'backward', not {variant!r}")
    return lhs - rhs


def derivative_identity_residual(params: RomanovskiParams, nu: int, variant: str,
                                 z_grid: Iterable[float]) -> float:
    diff = derivative_identity_poly(params, nu, variant)
    z = np.asarray(list(z_grid), dtype=float)
    if diff.is_zero() or not z.size:
        return 0.0
    return float(np.max(np.abs(diff(z))))


# -- orthogonality --------------------------------------------------------

class Overlap(NamedTuple):
    """An inner product together with sqrt(N_1 N_2) of the two norms."""

    value: float
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale if self.scale else math.inf


def orthogonality_integral(params: RomanovskiParams, nu: int, nu2: int, qspec=None) -> Overlap:
    """Integral of rho R_nu R_nu2 over the real line."""
    from .numerics import QuadratureSpec, integrate_real_line

    p = _params(params)
    if not p.finite_family:
        raise DomainError(f"orthogonality needs beta < 0 (got beta={p.beta})")
    for k in (nu, nu2):
        if not (0 <= k < p.nu_bar):
            raise DomainError(
                f"degree {k} violates nu < 1/2 - beta = {p.nu_bar}; the integral diverges")
    qspec = qspec or QuadratureSpec()
    R1, R2 = rodrigues_poly(p, nu).to_float(), rodrigues_poly(p, nu2).to_float()

    def integrand(pa, pb):
        return lambda z: np.exp(log_weight(p, z)) * pa(z) * pb(z)

    value = integrate_real_line(integrand(R1, R2), qspec)[0]
    if nu == nu2:
        return Overlap(value, value)
    n1 = integrate_real_line(integrand(R1, R1), qspec)[0]
    n2 = integrate_real_line(integrand(R2, R2), qspec)[0]
    return Overlap(value, math.sqrt(n1 * n2))
