"""Named invariant checks grouped into suites, run by ``romext verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import potentials as pot
from . import romanovski as rom
from . import susy
from .numerics import eigensolve
from .polyreal import count_real_roots


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str


def _max(vals) -> float:
    return max(float(v) for v in vals)


# -- romanovski ------------------------------------------------------------

_PARAMS = [(2, 4), (-2, -3), (Fraction(1, 3), Fraction(-7, 2)), (5, Fraction(3, 4)), (0, Fraction(-13, 4))]


def _rodrigues_vs_recurrence(tol):
    bad, compared = [], 0
    for a, b in _PARAMS:
        p = rom.RomanovskiParams(a, b)
        for nu in range(7):
            try:
                rec = rom.recurrence_poly(p, nu)
            except rom.DomainError:
                break  # degenerate denominator: every higher degree is undefined too
            compared += 1
            if rom.rodrigues_poly(p, nu) != rec:
                bad.append((a, b, nu))
    return not bad and compared > 20, f"mismatches: {bad[:3]}" if bad else f"{compared} exact equalities"


def _ode(tol):
    bad = []
    for a, b in _PARAMS:
        p = rom.RomanovskiParams(a, b)
        for nu in range(7):
            if not rom.ode_operator(p, nu, rom.rodrigues_poly(p, nu)).is_zero():
                bad.append((a, b, nu))
    return not bad, f"nonzero: {bad[:3]}" if bad else "exact zero polynomial"


def _bridge(tol):
    z = np.linspace(-2, 2, 41)
    r = _max(rom.jacobi_bridge_residual(rom.RomanovskiParams(a, b), nu, z, dps=40)
             for a, b in _PARAMS for nu in range(7))
    return r < 1e-12, f"max residual {r:.2e} (40-digit evaluation)"


def _identities(tol):
    bad = []
    for a, b in _PARAMS:
        p = rom.RomanovskiParams(a, b)
        for nu in range(1, 5):
            for v in ("forward", "backward"):
                try:
                    if not rom.derivative_identity_poly(p, nu, v).is_zero():
                        bad.append((a, b, nu, v))
                except rom.DomainError:
                    pass
    return not bad, f"nonzero: {bad[:3]}" if bad else "exact"


def _gram(tol):
    p = rom.RomanovskiParams(-2, -3)
    off = _max(rom.orthogonality_integral(p, i, j).relative for i in range(4) for j in range(i))
    n0 = rom.orthogonality_integral(p, 0, 0).value
    want = 3.6 / 32 * math.sinh(math.pi)
    ok = off < 1e-10 and abs(n0 - want) < 1e-9 * want
    return ok, f"max off-diagonal {off:.1e}; N0 = {n0:.15g}"


def _worked_poly(tol):
    R = rom.rodrigues_poly(rom.RomanovskiParams(2, 4), 2)
    want = [Fraction(7, 4), Fraction(9, 2), Fraction(45, 4)]
    return list(R.coeffs) == want, str(R)


ROMANOVSKI = {
    "rodrigues-equals-recurrence": _rodrigues_vs_recurrence,
    "ode-annihilation": _ode,
    "jacobi-bridge": _bridge,
    "derivative-identities": _identities,
    "finite-orthogonality": _gram,
    "worked-polynomial": _worked_poly,
}


# -- potentials --------------------------------------------------------------

_SPECS = [pot.PotentialSpec("scarf2", Fraction(7, 2), 1), pot.PotentialSpec("rm1", 2, 1),
          pot.PotentialSpec("scarf1", 4, 1)]


def _grid(spec):
    lo, hi = spec.domain
    if math.isinf(lo):
        return np.linspace(-5, 5, 41)
    return np.linspace(lo + 0.1, hi - 0.1, 41)


def _schrodinger(tol):
    r = _max(pot.schrodinger_residual(s, pot.bound_state(s, nu), _grid(s))
             for s in _SPECS for nu in range(3))
    return r < 1e-6, f"max FD residual {r:.1e}"


def _zform(tol):
    t = np.linspace(-0.9, 0.9, 41)
    r = _max(pot.z_form_residual(s, pot.bound_state(s, nu), t * (1 if s.family is pot.Family.SCARF1 else 4))
             for s in _SPECS for nu in range(3))
    return r < tol, f"max residual {r:.1e}"


def _nodes(tol):
    bad = [(s.family.value, nu) for s in _SPECS for nu in range(3)
           if pot.bound_state(s, nu).nodes() != nu]
    return not bad, f"wrong counts {bad}" if bad else "node count = nu"


def _orthonormal(tol):
    worst = 0.0
    for s in _SPECS:
        st = [pot.bound_state(s, nu, normalize=True) for nu in range(3)]
        for i in range(3):
            for j in range(3):
                worst = max(worst, abs(pot.overlap(st[i], st[j]) - (i == j)))
    return worst < tol, f"max |G - I| {worst:.1e}"


def _spectra(tol):
    s2 = eigensolve(pot.PotentialSpec("scarf2", Fraction(7, 2), 1), (-12, 12), 4, 4000, extrapolate=True)
    s2.compare([e for _, e in pot.spectrum(_SPECS[0])])
    rm = eigensolve(_SPECS[1], (1e-4, math.pi - 1e-4), 3, 4000, extrapolate=True)
    rm.compare([e for _, e in pot.spectrum(_SPECS[1], 3)])
    err = max(s2.abs_errors.max(), rm.abs_errors.max())
    return err < 1e-3, f"max |numeric - closed form| {err:.1e}"


def _maps(tol):
    z = np.linspace(-3, 3, 31)
    a = pot.complexification_map_check("scarf1", _SPECS[0], pot.bound_state(_SPECS[0], 1), z)
    b = pot.complexification_map_check("rm2", _SPECS[1], pot.bound_state(_SPECS[1], 1), z)
    return max(a, b) < tol, f"residuals {a:.1e}, {b:.1e}"


POTENTIALS = {
    "schrodinger-fd": _schrodinger,
    "z-form-exact": _zform,
    "node-counts": _nodes,
    "orthonormality": _orthonormal,
    "eigensolver-spectra": _spectra,
    "complexification-maps": _maps,
}


# -- susy ------------------------------------------------------------------------

def _worked():
    return (susy.build_extension("scarf2", Fraction(7, 2), 1, 2),
            susy.build_extension("rm1", Fraction(5, 2), 1, 2))


def _partner(tol):
    r = _max(max(susy.partner_residuals(e)) for e in _worked())
    return r < tol, f"max residual {r:.1e}"


def _nodeless(tol):
    bad = []
    for m in (2, 4):
        for B in (Fraction(1, 2), 1, 2):
            for A in (Fraction(3, 2), Fraction(5, 2), Fraction(7, 2), Fraction(7, 3)):
                for fam in ("scarf2", "rm1"):
                    if fam == "rm1" and not (A > Fraction(m - 1, 2) and A != m):
                        continue
                    g, _ = susy.denominator_polynomial(fam, A, B, m)
                    if count_real_roots(g).count:
                        bad.append((fam, A, B, m))
    return not bad, f"g with roots: {bad}" if bad else "Sturm count 0 across sweep"


def _ode_ext(tol):
    z = np.linspace(-4, 4, 81)
    r = _max(susy.extended_ode_residual(e, nu, z) for e in _worked() for nu in (-3, 0, 1, 2))
    return r < tol, f"max residual {r:.1e}"


def _ortho_ext(tol):
    s2, rm = _worked()
    idx = susy.allowed_nus(s2)
    r1 = _max(susy.extended_orthogonality(s2, a, b).relative for a in idx for b in idx if a < b)
    r2 = _max(susy.extended_orthogonality(rm, a, b).relative for a, b in ((-3, 0), (0, 1), (0, 2)))
    return max(r1, r2) < tol, f"Scarf II {r1:.1e}; Rosen-Morse I {r2:.1e}"


def _intertwine(tol):
    r = _max(susy.intertwining_ratio(e, nu) for e in _worked() for nu in range(3))
    return r < tol, f"max ratio spread {r:.1e}"


def _spectra_ext(tol):
    worst = 0.0
    for e in _worked():
        want = [float(E) for _, E in susy.extended_spectrum(e, 1)]
        dom = (-12, 12) if e.family is pot.Family.SCARF2 else (1e-4, math.pi - 1e-4)
        rep = eigensolve(e.potential, dom, len(want), 4000, extrapolate=True).compare(want)
        worst = max(worst, rep.abs_errors.max())
    return worst < 1e-3, f"max |numeric - closed form| {worst:.1e}"


def _seeds(tol):
    s2 = {s.kind: s for s in susy.enumerate_seeds("scarf2", Fraction(7, 2), 1, 2)}
    rm = {s.kind: s for s in susy.enumerate_seeds("rm1", Fraction(7, 2), 1, 2)}
    s1 = {s.kind: s for s in susy.scarf1_seed_report(4, 1, 2)}
    ok = (s2[3].admissible and s2[3].type_label == "III" and not s2[4].admissible
          and not s2[1].admissible and rm[2].admissible and not rm[1].admissible
          and [s1[k].type_label for k in (1, 2, 3)] == ["I", "II", "III"] and not s1[4].admissible)
    return ok, "seed verdicts"


SUSY = {
    "partner-identities": _partner,
    "g-nodeless-sweep": _nodeless,
    "extended-ode": _ode_ext,
    "extended-orthogonality": _ortho_ext,
    "intertwining": _intertwine,
    "extended-spectra": _spectra_ext,
    "seed-verdicts": _seeds,
}

SUITES: dict[str, dict[str, Callable]] = {
    "romanovski": ROMANOVSKI,
    "potentials": POTENTIALS,
    "susy": SUSY,
}


def run_suite(name: str, tol: float = 1e-8) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for suite in names:
        for check, fn in SUITES[suite].items():
            try:
                ok, detail = fn(tol)
            except Exception as exc:  # a crashing check is a failed check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(suite, check, bool(ok), detail))
    return out
