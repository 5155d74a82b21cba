import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicpi.errors import UnboundedTailError
from padicpi.padic_core import PadicRational
from padicpi.schwartz import TestFunction
from padicpi.vladimirov import (
    Counterexample,
    SpectralMultiplier,
    apply_spectral,
    counterexample_series,
    counterexample_value,
    dalpha_point_oracle,
    domain_membership_partial,
    membership_tail_bound,
    p_power,
    quadratic_form,
    semigroup_defect,
)
from padicpi.wavelets import WaveletExpansion, WaveletIndex, expand_test_function, wavelet_eval, wavelet_test_function


def test_apply_spectral_examples():
    e = WaveletExpansion(2, {WaveletIndex(1, 1, 0): 1.0})
    assert apply_spectral(SpectralMultiplier(2.0), e).coeffs[WaveletIndex(1, 1, 0)] == 1.0
    e = WaveletExpansion(2, {WaveletIndex(0, 1, 0): 1.0})
    assert apply_spectral(SpectralMultiplier(1.0), e).coeffs[WaveletIndex(0, 1, 0)] == 2.0


def test_apply_spectral_keeps_exact_coefficients_exact():
    e = WaveletExpansion(3, {WaveletIndex(-1, 2, 0): Fraction(1, 5)})
    out = apply_spectral(SpectralMultiplier(2), e)
    assert out.coeffs[WaveletIndex(-1, 2, 0)] == Fraction(81, 5)


def test_unbounded_tail_is_refused():
    e = WaveletExpansion(2, {WaveletIndex(0, 1, 0): 1.0}, l2_tail=0.1, sup_tail=0.1, tail_n_floor=None)
    with pytest.raises(UnboundedTailError, match="multiplier unbounded on tail"):
        apply_spectral(SpectralMultiplier(1.0), e)
    e.tail_n_floor = 2
    out = apply_spectral(SpectralMultiplier(1.0), e)
    assert out.l2_tail == pytest.approx(0.1 * 2.0 ** -1)


def test_multiplier_validation():
    with pytest.raises(ValueError):
        SpectralMultiplier(0.0)
    with pytest.raises(ValueError):
        SpectralMultiplier(1.0, -1.0)


def test_p_power_matches_exact_powers():
    for p in (2, 3, 5):
        for e in range(-60, 61, 7):
            assert p_power(p, e) == float(Fraction(p) ** e)
    assert p_power(2, 0.5) == pytest.approx(math.sqrt(2), rel=1e-16)


def test_point_oracle_examples():
    om = TestFunction.omega(2)
    assert dalpha_point_oracle(om, 1.0, PadicRational(2, 0)) == pytest.approx(2 / 3, rel=1e-14)
    assert dalpha_point_oracle(TestFunction.zero(2), 1.0, PadicRational(2, 5)) == 0
    psi = wavelet_test_function(WaveletIndex(1, 1, 0), 2)
    for x in (0, 1, Fraction(1, 2), Fraction(3, 4), 7):
        xp = PadicRational(2, x)
        assert dalpha_point_oracle(psi, 1.0, xp) == pytest.approx(wavelet_eval(WaveletIndex(1, 1, 0), xp), abs=1e-14)


def test_point_oracle_matches_wavelet_route():
    # D^1 Omega at x = 0 from the expansion: sum_{N>=1} (p-1) p^{-N} p^{1-N}
    for p in (2, 3, 5):
        e = expand_test_function(TestFunction.omega(p), 1, n_max=60)
        d = apply_spectral(SpectralMultiplier(1.0), WaveletExpansion(p, e.coeffs))
        via = sum(complex(c) * wavelet_eval(k, PadicRational(p, 0)) for k, c in d.coeffs.items())
        assert dalpha_point_oracle(TestFunction.omega(p), 1.0, PadicRational(p, 0)) == pytest.approx(via, rel=1e-13)


def test_counterexample_examples():
    assert counterexample_value(2, 2) == pytest.approx(2**-1.5, abs=1e-15)
    assert counterexample_value(2, 1) == pytest.approx(-(2**-0.5), abs=1e-15)
    vals = [counterexample_value(2, n).real for n in range(2, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        counterexample_value(2, 0)


def test_counterexample_series_matches_closed_form():
    for p in (2, 3, 5):
        for n in range(1, 31):
            assert abs(counterexample_series(p, n) - counterexample_value(p, n)) < 1e-12


def test_counterexample_is_square_summable():
    f = Counterexample(2)
    sums = f.norm_partial(-200)
    assert sums[-1] < 1.0 and sums[-1] - sums[-50] < 1e-15
    e = f.expansion(-5)
    assert len(e.coeffs) == 5 and e.coeffs[WaveletIndex(-1, 1, 0)] == pytest.approx(0.5)


def test_membership_dichotomy():
    f = Counterexample(2)
    bounded = domain_membership_partial(f, 0.4, -200)
    assert bounded[-1] - bounded[99] <= membership_tail_bound(2, 0.4, -100)
    growing = domain_membership_partial(f, 0.75, -60)
    assert growing[-1] > 1e3
    assert membership_tail_bound(2, 0.75, -60) == math.inf
    assert domain_membership_partial(WaveletExpansion(2), 1.0, -10) == []


def random_expansion(rng, p):
    coeffs = {}
    for _ in range(rng.randint(1, 6)):
        N = rng.randint(-4, 4)
        idx = WaveletIndex(N, rng.randint(1, p - 1), Fraction(rng.randint(0, p - 1), p))
        coeffs[idx] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return WaveletExpansion(p, coeffs)


@given(st.sampled_from([2, 3, 5]), st.floats(0.1, 3.0), st.floats(0.1, 3.0), st.randoms(use_true_random=False))
def test_semigroup_property(p, a1, a2, rnd):
    assert semigroup_defect(random_expansion(rnd, p), a1, a2) <= 1e-12


@given(st.sampled_from([2, 3]), st.floats(0.1, 3.0), st.randoms(use_true_random=False))
def test_quadratic_form_is_positive(p, a, rnd):
    e = random_expansion(rnd, p)
    q = quadratic_form(SpectralMultiplier(a), e)
    lam_min = min(SpectralMultiplier(a).eigenvalue(k.N, p) for k in e.coeffs)
    assert q >= lam_min * complex(e.norm_squared()).real * (1 - 1e-12)


@given(st.sampled_from([2, 3]), st.sampled_from([0.5, 1.0, 2.0]), st.integers(-2, 2), st.integers(0, 8), st.randoms(use_true_random=False))
def test_wavelets_are_eigenfunctions(p, alpha, N, k, rnd):
    idx = WaveletIndex(N, 1 + k % (p - 1), Fraction(k % p, p))
    psi = wavelet_test_function(idx, p, exact=False)
    lam = SpectralMultiplier(alpha).eigenvalue(N, p)
    for _ in range(5):
        x = PadicRational(p, Fraction(rnd.randint(-50, 50), p ** rnd.randint(0, 4)))
        assert abs(dalpha_point_oracle(psi, alpha, x) - lam * wavelet_eval(idx, x)) <= 1e-9
