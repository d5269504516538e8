"""Dense univariate polynomials over Q (exact) or binary floats, with
Sturm-sequence root counting.

Coefficients are stored constant term first.  A polynomial is either exact
(every coefficient a :class:`fractions.Fraction`) or float; arithmetic between
the two modes is refused rather than silently coerced.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "RealPoly",
    "RootCount",
    "ModeMismatch",
    "poly_arith",
    "poly_eval",
    "poly_derivative",
    "count_real_roots",
    "sturm_sequence",
    "real_roots_float",
    "to_exact",
]

FLOAT_STRIP_RTOL = 1e-14


class ModeMismatch(TypeError):
    """Raised when exact and float polynomials are combined."""


def to_exact(x) -> Fraction:
    """Convert an int/Fraction/str/float to a Fraction.

    Floats go through their shortest repr, so ``to_exact(0.1) == 1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, numbers.Real):
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(repr(xf))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (numbers.Integral, Fraction))


@dataclass(frozen=True, eq=False)
class RealPoly:
    """Immutable univariate polynomial.

    Build with ``RealPoly([c0, c1, ...])``; the mode is exact when every
    coefficient is an int/Fraction unless ``exact=False`` is forced.
    """

    coeffs: tuple
    exact: bool = True
    trimmed: bool = field(default=False, compare=False)

    def __init__(self, coeffs: Iterable = (), exact: bool | None = None):
        cs = list(coeffs)
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in cs)
        trimmed = False
        if exact:
            cs = [to_exact(c) for c in cs]
            while cs and cs[-1] == 0:
                cs.pop()
        else:
            cs = [float(c) for c in cs]
            while cs and cs[-1] == 0.0:
                cs.pop()
            if cs:
                cutoff = FLOAT_STRIP_RTOL * max(abs(c) for c in cs)
                while cs and abs(cs[-1]) < cutoff:
                    cs.pop()
                    trimmed = True
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "exact", bool(exact))
        object.__setattr__(self, "trimmed", trimmed)

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c, exact: bool | None = None) -> "RealPoly":
        return cls([c], exact=exact)

    @classmethod
    def monomial(cls, k: int, c=1, exact: bool | None = None) -> "RealPoly":
        return cls([0] * k + [c], exact=exact)

    @classmethod
    def zero(cls, exact: bool = True) -> "RealPoly":
        return cls([], exact=exact)

    # -- basic properties ---------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self._zero

    @property
    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_float(self) -> "RealPoly":
        return RealPoly([float(c) for c in self.coeffs], exact=False)

    def to_exact(self) -> "RealPoly":
        return RealPoly([to_exact(c) for c in self.coeffs], exact=True)

    def monic(self) -> "RealPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lead if not self.exact else Fraction(1) / self.lead)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "RealPoly") -> None:
        if self.exact != other.exact:
            raise ModeMismatch("cannot mix exact and float polynomials")

    def _coerce(self, other) -> "RealPoly":
        if isinstance(other, RealPoly):
            self._check(other)
            return other
        if self.exact and not _is_exact_scalar(other):
            raise ModeMismatch(f"float scalar {other!r} combined with exact polynomial")
        return RealPoly([other], exact=self.exact)

    def __add__(self, other) -> "RealPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = self._zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return RealPoly([x + y for x, y in zip(a, b)], exact=self.exact)

    __radd__ = __add__

    def __neg__(self) -> "RealPoly":
        return RealPoly([-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other) -> "RealPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RealPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealPoly":
        if not isinstance(other, RealPoly):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return RealPoly.zero(self.exact)
        out = [self._zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RealPoly(out, exact=self.exact)

    def __rmul__(self, other) -> "RealPoly":
        return self.scale(other)

    def __truediv__(self, c) -> "RealPoly":
        if isinstance(c, RealPoly):
            raise TypeError("use divmod() for polynomial division")
        return self.scale(Fraction(1) / to_exact(c) if self.exact else 1.0 / c)

    def __pow__(self, k: int) -> "RealPoly":
        if k < 0:
            raise ValueError("negative power")
        out = RealPoly.const(1, exact=self.exact)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "RealPoly":
        if self.exact:
            if not _is_exact_scalar(c):
                raise ModeMismatch(f"float scalar {c!r} combined with exact polynomial")
            c = to_exact(c)
        else:
            c = float(c)
        return RealPoly([c * a for a in self.coeffs], exact=self.exact)

    def __divmod__(self, other: "RealPoly"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        q = [self._zero] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            q[k] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return RealPoly(q, exact=self.exact), RealPoly(rem[:dq], exact=self.exact)

    def __mod__(self, other: "RealPoly") -> "RealPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "RealPoly") -> "RealPoly":
        return divmod(self, other)[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, RealPoly):
            return self.exact == other.exact and self.coeffs == other.coeffs
        if isinstance(other, numbers.Number):
            return self.coeffs == ((other,) if other != 0 else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.exact, self.coeffs))

    # -- calculus / evaluation ----------------------------------------
    def derivative(self, k: int = 1) -> "RealPoly":
        p = self
        for _ in range(k):
            p = RealPoly([i * c for i, c in enumerate(p.coeffs) if i > 0], exact=p.exact)
        return p

    def __call__(self, x):
        """Horner evaluation; numpy arrays are evaluated elementwise in float."""
        if isinstance(x, np.ndarray):
            cs = [complex(c) if np.iscomplexobj(x) else float(c) for c in self.coeffs]
            out = np.zeros_like(x, dtype=np.result_type(x, float))
            for c in reversed(cs):
                out = out * x + c
            return out
        if self.exact and isinstance(x, (numbers.Integral, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (float(c) if not isinstance(x, complex) else complex(c))
        return acc

    def compose_affine(self, a, b) -> "RealPoly":
        """Return p(a*z + b)."""
        lin = RealPoly([b, a], exact=self.exact)
        out = RealPoly.zero(self.exact)
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def __repr__(self) -> str:
        if self.is_zero():
            return "RealPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*z" if k == 1 else f"{c}*z^{k}")
        tag = "" if self.exact else ", float"
        return f"RealPoly({' + '.join(terms)}{tag})"


def poly_arith(a: RealPoly, b, op: str) -> RealPoly:
    """Functional form of ``+``, ``-``, ``*`` and scalar scaling."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, RealPoly):
            raise TypeError("mul expects two polynomials; use op='scale'")
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def poly_eval(p: RealPoly, x):
    return p(x)


def poly_derivative(p: RealPoly) -> RealPoly:
    return p.derivative()


def poly_gcd(a: RealPoly, b: RealPoly) -> RealPoly:
    """Monic gcd over Q (exact mode only)."""
    if not (a.exact and b.exact):
        raise ModeMismatch("gcd requires exact polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# -- real root counting -------------------------------------------------

@dataclass(frozen=True)
class RootCount:
    interval: tuple
    count: int
    method: str  # "sturm-exact" | "sign-grid-float"


def sturm_sequence(p: RealPoly) -> list[RealPoly]:
    """Sturm chain of the square-free part of ``p``."""
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    g = poly_gcd(p, p.derivative()) if p.degree > 0 else RealPoly.const(1)
    f = p // g if g.degree > 0 else p
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_at(q: RealPoly, x) -> int:
    if x == math.inf:
        return _sign(q.lead)
    if x == -math.inf:
        return _sign(q.lead) * (-1 if q.degree % 2 else 1)
    return _sign(q(x))


def _variations(seq: Sequence[RealPoly], x) -> int:
    signs = [s for s in (_sign_at(q, x) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _endpoint(x):
    if isinstance(x, float) and math.isinf(x):
        return x
    return to_exact(x)


def count_real_roots(p: RealPoly, lo=-math.inf, hi=math.inf, *,
                     grid: int = 2048, max_refine: int = 6) -> RootCount:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi).

    Exact polynomials use a Sturm chain, with infinite endpoints resolved by
    leading-coefficient signs.  Float polynomials fall back to a sign-change
    scan that is refined until the count stabilises; it cannot see roots of
    even multiplicity.
    """
    if p.is_zero():
        raise ValueError("root count of the zero polynomial is undefined")
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if p.exact:
        lo_e, hi_e = _endpoint(lo), _endpoint(hi)
        seq = sturm_sequence(p)
        # V(a) - V(b) counts roots in (a, b]; drop a root sitting on hi.
        n = _variations(seq, lo_e) - _variations(seq, hi_e)
        if not isinstance(hi_e, float) and p(hi_e) == 0:
            n -= 1
        return RootCount((lo, hi), n, "sturm-exact")
    return RootCount((lo, hi), _count_float(p, lo, hi, grid, max_refine), "sign-grid-float")


def _cauchy_bound(p: RealPoly) -> float:
    lead = abs(p.lead)
    return 1.0 + max((abs(c) / lead for c in p.coeffs[:-1]), default=0.0)


def real_roots_float(p: RealPoly, lo=-math.inf, hi=math.inf, *,
                     grid: int = 2048, max_refine: int = 6) -> list[float]:
    """Sign-change roots of ``p`` in (lo, hi), each refined by bisection.

    The scan grid is doubled until the number of brackets stabilises.
    """
    p = p.to_float() if p.exact else p
    if p.degree <= 0:
        return []
    r = _cauchy_bound(p)
    a = max(float(lo), -r)
    b = min(float(hi), r)
    if a >= b:
        return []
    prev_count = -1
    n = grid
    for _ in range(max_refine):
        xs = np.linspace(a, b, n + 1)
        if math.isfinite(lo):
            xs = xs[1:]
        if math.isfinite(hi):
            xs = xs[:-1]
        vals = p(xs)
        keep = vals != 0
        xs, vals = xs[keep], vals[keep]
        idx = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
        if len(idx) == prev_count:
            break
        prev_count = len(idx)
        n *= 2
    roots = []
    for i in idx:
        u, v = xs[i], xs[i + 1]
        fu = vals[i]
        for _ in range(200):
            mid = 0.5 * (u + v)
            if mid in (u, v):
                break
            fm = p(mid)
            if fm == 0:
                u = v = mid
                break
            if (fm > 0) == (fu > 0):
                u, fu = mid, fm
            else:
                v = mid
        roots.append(0.5 * (u + v))
    return roots


def _count_float(p: RealPoly, lo, hi, grid: int, max_refine: int) -> int:
    return len(real_roots_float(p, lo, hi, grid=grid, max_refine=max_refine))
