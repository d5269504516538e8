import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from romext.polyreal import RealPoly
from romext.potentials import (
    Family,
    PotentialSpec,
    bound_state,
    complexification_map_check,
    level,
    nu_max,
    overlap,
    potential_value,
    schrodinger_residual,
    spectrum,
    z_form_residual,
)
from romext.romanovski import DomainError, RomanovskiParams

F = Fraction
S2 = PotentialSpec("scarf2", F(7, 2), 1)
RM = PotentialSpec("rm1", 2, 1)
S1 = PotentialSpec("scarf1", 4, 1)


def test_family_aliases():
    assert Family.parse("Scarf-II") is Family.SCARF2
    assert Family.parse("rosen_morse_1") is Family.RM1
    with pytest.raises(ValueError):
        Family.parse("morse")


@pytest.mark.parametrize("fam,A,B", [("scarf2", 0, 1), ("rm1", 1, 1), ("scarf1", 3, 2), ("scarf1", 3, 0)])
def test_parameter_validation(fam, A, B):
    with pytest.raises(DomainError):
        PotentialSpec(fam, A, B)


def test_potential_values():
    assert potential_value(S2, 0.0) == pytest.approx(-14.75)
    assert potential_value(RM, math.pi / 2) == pytest.approx(2.0)
    assert potential_value(PotentialSpec("scarf1", 3, 1), 0.0) == pytest.approx(7.0)


def test_potential_outside_domain():
    with pytest.raises(DomainError):
        potential_value(RM, 0.0)
    with pytest.raises(DomainError):
        potential_value(S1, math.pi / 2)


def test_spectra_examples():
    assert [E for _, E in spectrum(S2)] == [F(-49, 4), F(-25, 4), F(-9, 4), F(-1, 4)]
    assert spectrum(RM, 2) == [(0, F(15, 4)), (1, 9 - F(1, 9))]
    assert [E for _, E in spectrum(PotentialSpec("scarf1", 3, 1), 2)] == [9, 16]


def test_nu_max_half_open_convention():
    assert nu_max(F(7, 2)) == 3
    assert nu_max(3) == 2
    assert nu_max(F(1, 2)) == 0


@given(st.fractions(min_value=F(1, 6), max_value=9, max_denominator=6),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=2, max_size=5))
def test_scarf2_level_count_independent_of_B(A, Bs):
    counts = {len(spectrum(PotentialSpec("scarf2", A, B))) for B in Bs}
    assert counts == {nu_max(A) + 1}


@given(st.fractions(min_value=F(3, 2), max_value=8, max_denominator=6),
       st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_levels_increase(A, B):
    for fam in ("scarf2", "rm1"):
        E = [e for _, e in spectrum(PotentialSpec(fam, A, B), 6)]
        assert all(a < b for a, b in zip(E, E[1:]))


def test_bound_state_examples():
    st0 = bound_state(S2, 0)
    x = np.linspace(-3, 3, 7)
    want = np.cosh(x) ** -3.5 * np.exp(-np.arctan(np.sinh(x)))
    assert np.allclose(st0(x), want, rtol=1e-13)
    assert st0.romanovski_part == RealPoly.const(1)
    r0 = bound_state(RM, 0)
    x = np.linspace(0.2, 3.0, 7)
    assert np.allclose(r0(x), np.sin(x) ** 2 * np.exp(x / 2), rtol=1e-13)
    with pytest.raises(DomainError):
        bound_state(S2, 4)


def test_state_parameters():
    assert bound_state(S2, 2).params == RomanovskiParams(-2, -3)
    assert bound_state(RM, 1).params == RomanovskiParams(F(-2, 3), -2)


@pytest.mark.parametrize("spec", [S2, RM, S1, PotentialSpec("rm1", F(5, 2), 1)])
@pytest.mark.parametrize("nu", [0, 1, 2])
def test_schrodinger_residual(spec, nu):
    lo, hi = spec.domain
    x = np.linspace(-5, 5, 200) if math.isinf(lo) else np.linspace(lo + 0.05, hi - 0.05, 200)
    assert schrodinger_residual(spec, bound_state(spec, nu), x) < 1e-6


@pytest.mark.parametrize("spec", [S2, RM, S1])
def test_z_form_residual(spec, nu=2):
    t = np.linspace(-0.95, 0.95, 81) * (1 if spec.family is Family.SCARF1 else 5)
    assert z_form_residual(spec, bound_state(spec, nu), t) < 1e-12


def test_residual_flags_wrong_energy():
    st1 = bound_state(S2, 1)
    wrong = type(st1)(st1.spec, 1, st1.energy + 1, st1.romanovski_part, st1.params, st1.profile)
    assert schrodinger_residual(S2, wrong, np.linspace(-3, 3, 50)) > 1e-2


@pytest.mark.parametrize("spec", [S2, RM, S1])
def test_node_counts(spec):
    for nu in range(3):
        assert bound_state(spec, nu).nodes() == nu


@pytest.mark.parametrize("spec", [S2, RM, S1])
def test_orthonormal_states(spec):
    states = [bound_state(spec, nu, normalize=True) for nu in range(3)]
    G = np.array([[overlap(a, b) for b in states] for a in states])
    assert np.abs(G - np.eye(3)).max() < 1e-8


def test_rm_infinite_relation_set():
    # different nu carry different Romanovski parameters, yet states stay orthogonal
    spec = PotentialSpec("rm1", F(5, 2), F(3, 2))
    s = [bound_state(spec, nu) for nu in range(5)]
    for i in range(5):
        for j in range(i):
            rel = abs(overlap(s[i], s[j])) / math.sqrt(overlap(s[i], s[i]) * overlap(s[j], s[j]))
            assert rel < 1e-8


def test_complexification_maps():
    z = np.linspace(-3, 3, 41)
    for nu in range(3):
        assert complexification_map_check("scarf1", S2, bound_state(S2, nu), z) < 1e-8
        assert complexification_map_check("rm2", RM, bound_state(RM, nu), z) < 1e-8


def test_complexification_map_negative_control():
    z = np.linspace(-3, 3, 41)
    A, B, E = 2.0, 1.0, float(level(RM, 1))
    bad = complexification_map_check("rm2", RM, bound_state(RM, 1), z, images=(A, 1j * B, -E))
    assert bad > 1e-1


def test_complexification_map_family_mismatch():
    with pytest.raises(ValueError):
        complexification_map_check("scarf1", RM, bound_state(RM, 0), [0.0])
