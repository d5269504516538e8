import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from romext.polyreal import RealPoly, count_real_roots
from romext.romanovski import (
    DomainError,
    RomanovskiParams,
    classify_case,
    derivative_identity_poly,
    derivative_identity_residual,
    gen_binom,
    jacobi_complex,
    jacobi_bridge_residual,
    lambda_nu,
    leading_coefficient,
    log_weight,
    ode_operator,
    orthogonality_integral,
    recurrence_coeffs,
    recurrence_poly,
    rodrigues_poly,
    weight,
)

F = Fraction
R24_2 = RealPoly([F(7, 4), F(9, 2), F(45, 4)])

rat = st.fractions(min_value=-6, max_value=6, max_denominator=7)
# beta with odd denominator > 1 keeps 2 nu + 2 beta - k away from zero
odd_beta = st.builds(lambda p, q: F(p, q), st.integers(-40, 40), st.sampled_from([3, 5, 7, 9]))\
    .filter(lambda b: b.denominator > 1)


def params_strategy():
    return st.builds(RomanovskiParams, rat, odd_beta)


# -- classification ------------------------------------------------------------

def test_classify_examples():
    assert classify_case("z^2+1", -2).nu_bar == F(3, 2)
    assert classify_case("1", -2, 0).nu_bar == math.inf
    with pytest.raises(DomainError, match="alpha < 0"):
        classify_case("z^2+1", 1)


def test_classify_unknown_sigma():
    with pytest.raises(ValueError):
        classify_case("z^3", -1)


def test_lambda_examples():
    case = classify_case("z^2+1", F(-6), F(2))  # tau = 2 beta z + alpha with beta = -3, alpha = 2
    for nu in range(5):
        assert lambda_nu(case, nu) == -nu * (nu - 1 + 2 * F(-3))
    assert lambda_nu(case, 0) == 0
    assert lambda_nu(classify_case("1", F(-3), F(1)), 1) == 3


# -- construction -------------------------------------------------------------

def test_rodrigues_examples():
    p = RomanovskiParams(2, 4)
    assert rodrigues_poly(p, 0) == RealPoly.const(1)
    assert rodrigues_poly(p, 1) == RealPoly([1, 4])
    assert rodrigues_poly(p, 2) == R24_2
    assert recurrence_poly(p, 2) == R24_2
    assert R24_2.lead == leading_coefficient(p, 2) == F(45, 4)


def _linear_system_coeffs(p, nu):
    """Solve z R_nu = a R_{nu+1} + b R_nu + c R_{nu-1} by matching coefficients."""
    z = RealPoly([0, 1])
    R = [rodrigues_poly(p, k) for k in (nu - 1, nu, nu + 1)]
    lhs = z * R[1]
    a = lhs.lead / R[2].lead
    rest = lhs - R[2].scale(a)
    b = rest.coeffs[nu] / R[1].lead if rest.degree == nu else F(0)
    rest = rest - R[1].scale(b)
    c = rest.lead / R[0].lead if not rest.is_zero() else F(0)
    assert (rest - R[0].scale(c)).is_zero()
    return a, b, c


def test_recurrence_coeff_examples():
    p = RomanovskiParams(2, 4)
    assert tuple(recurrence_coeffs(p, 1)) == (F(16, 45), F(-3, 20), F(-17, 36))
    assert tuple(recurrence_coeffs(p, 1)) == _linear_system_coeffs(p, 1)
    assert recurrence_coeffs(RomanovskiParams(0, F(-7, 3)), 2).b_nu == 0


def test_recurrence_gamma_alpha_zero_case():
    # The printed formula gives -2 * 9 / ((-5)(-6)) = -3/5 here; the
    # linear-system oracle agrees with the formula.
    p = RomanovskiParams(0, -3)
    g = recurrence_coeffs(p, 1).g_nu
    assert g == _linear_system_coeffs(p, 1)[2] == F(-3, 5)


def test_degenerate_denominators_are_errors():
    with pytest.raises(DomainError):
        recurrence_coeffs(RomanovskiParams(1, -1), 1)  # 2 nu + 2 beta = 0
    with pytest.raises(DomainError):
        recurrence_poly(RomanovskiParams(-2, -3), 4)


def test_negative_degree_rejected():
    with pytest.raises(DomainError):
        rodrigues_poly(RomanovskiParams(1, 1), -1)


@given(params_strategy(), st.integers(0, 8))
def test_rodrigues_equals_recurrence(p, nu):
    assert rodrigues_poly(p, nu) == recurrence_poly(p, nu)


@given(params_strategy(), st.integers(0, 8))
def test_ode_annihilates(p, nu):
    assert ode_operator(p, nu, rodrigues_poly(p, nu)).is_zero()


@given(params_strategy(), st.integers(0, 10))
def test_leading_coefficient(p, nu):
    R = rodrigues_poly(p, nu)
    assert (R.lead if not R.is_zero() else 0) == leading_coefficient(p, nu)


@given(params_strategy(), st.integers(1, 6), st.sampled_from(["forward", "backward"]))
def test_derivative_identities_exact(p, nu, variant):
    assert derivative_identity_poly(p, nu, variant).is_zero()


def test_forward_identity_at_zero():
    assert derivative_identity_residual(RomanovskiParams(3, F(-5, 2)), 0, "forward", [0.0, 1.0]) == 0.0


@given(params_strategy(), st.integers(0, 7))
def test_reflection_symmetry(p, nu):
    # z -> -z together with alpha -> -alpha maps the equation to itself
    q = RomanovskiParams(-p.alpha, p.beta)
    assert rodrigues_poly(q, nu) == rodrigues_poly(p, nu).compose_affine(-1, 0).scale((-1) ** nu)


@given(st.fractions(min_value=-5, max_value=-F(1, 2), max_denominator=4), rat)
def test_zero_count_in_finite_family(beta, alpha):
    p = RomanovskiParams(alpha, beta)
    for nu in range(1, 6):
        if nu < p.nu_bar:
            assert count_real_roots(rodrigues_poly(p, nu)).count == nu


# -- weight ---------------------------------------------------------------------

def test_weight_examples():
    assert weight(RomanovskiParams(F(3), F(-2)), 0.0) == 1.0
    assert math.isclose(weight(RomanovskiParams(0, 0), 1.0), 0.5)
    assert math.isclose(weight(RomanovskiParams(-2, -3), 1.0), 2 ** -4 * math.exp(-math.pi / 2))


@given(params_strategy(), st.floats(-50, 50))
def test_weight_positive(p, z):
    assert weight(p, z) > 0


@given(params_strategy(), st.floats(-20, 20))
def test_pearson_equation(p, z):
    # d/dz (sigma rho) = tau rho, compared through logarithmic derivatives
    h = 1e-5
    lsr = lambda t: math.log1p(t * t) + log_weight(p, t)
    dlog = (lsr(z + h) - lsr(z - h)) / (2 * h)
    tau_over_sigma = (2 * float(p.beta) * z + float(p.alpha)) / (1 + z * z)
    assert math.isclose(dlog, tau_over_sigma, rel_tol=1e-6, abs_tol=1e-7)


@given(st.fractions(min_value=-6, max_value=-F(1, 4), max_denominator=4), rat)
def test_sigma_rho_vanishes_at_infinity(beta, alpha):
    p = RomanovskiParams(alpha, beta)
    # sigma rho ~ |z|^(2 beta) e^(+-alpha pi/2): strictly decaying in log space
    for z in (1e6, -1e6):
        log_sr = lambda t: math.log1p(t * t) + log_weight(p, t)
        assert log_sr(z) < log_sr(z / 1e3)
        assert log_sr(z) <= 2 * float(beta) * math.log(1e6) + abs(float(alpha)) * math.pi / 2 + 1e-9


# -- Jacobi bridge ----------------------------------------------------------------

def test_bridge_examples():
    grid = [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert jacobi_bridge_residual(RomanovskiParams(2, 4), 0, grid) == 0.0
    assert jacobi_bridge_residual(RomanovskiParams(F(7, 3), F(-1, 2)), 1, [0.0]) < 1e-15
    assert jacobi_bridge_residual(RomanovskiParams(2, 4), 2, grid) < 1e-12


@given(params_strategy(), st.integers(0, 6))
def test_bridge_relative_in_float(p, nu):
    z = np.linspace(-2, 2, 21)
    scale = max(1.0, float(np.max(np.abs(rodrigues_poly(p, nu).to_float()(z)))))
    assert jacobi_bridge_residual(p, nu, z) < 1e-12 * scale


def test_bridge_extended_precision():
    z = np.linspace(-2, 2, 9)
    assert jacobi_bridge_residual(RomanovskiParams(2, 4), 6, z, dps=40) < 1e-30


def test_bridge_detects_swapped_parameters():
    # swapping the Jacobi parameters flips the sign of alpha: a real mismatch
    p = RomanovskiParams(3, F(1, 2))
    z = np.array([0.5, 1.5])
    a, b = complex(-0.5, 1.5), complex(-0.5, -1.5)
    R = rodrigues_poly(p, 3)(z)
    good = np.abs(R - (-1j) ** 3 * jacobi_complex(a, b, 3, 1j * z)).max()
    swapped = np.abs(R - (-1j) ** 3 * jacobi_complex(b, a, 3, 1j * z)).max()
    assert good < 1e-12 and swapped > 1e-2


# -- orthogonality ----------------------------------------------------------------

def test_norm_closed_form():
    ov = orthogonality_integral(RomanovskiParams(-2, -3), 0, 0)
    want = 3.6 / 32 * math.sinh(math.pi)
    assert abs(ov.value - want) < 1e-12 * want


def test_norm_against_mpmath():
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda z: (1 + z * z) ** -4 * mpmath.exp(-2 * mpmath.atan(z)), [-mpmath.inf, 0, mpmath.inf])
    assert abs(orthogonality_integral(RomanovskiParams(-2, -3), 0, 0).value - float(ref)) < 1e-12


def test_gram_off_diagonal():
    p = RomanovskiParams(-2, -3)
    for i in range(4):
        for j in range(i):
            assert orthogonality_integral(p, i, j).relative < 1e-10


def test_divergent_degree_is_error():
    with pytest.raises(DomainError, match="1/2 - beta"):
        orthogonality_integral(RomanovskiParams(-2, -3), 0, 4)
    with pytest.raises(DomainError, match="beta < 0"):
        orthogonality_integral(RomanovskiParams(2, 4), 0, 1)


def test_gen_binom():
    assert gen_binom(F(5), 2) == 10
    assert gen_binom(F(-1, 2), 2) == F(3, 8)
    assert gen_binom(F(3), 0) == 1
