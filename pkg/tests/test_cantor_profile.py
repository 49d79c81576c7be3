import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nowhere_smooth import cantor_profile as cp
from nowhere_smooth import radial_profile as rp
from nowhere_smooth.errors import ConfigurationError, InsufficientScales

from oracles import riemann_bracket_cantor, riemann_bracket_cantor_upto

TAU = math.tau
D = 48
R = 32


def G(x):
    return cp.cantor_eval(x).value


def test_config_validation():
    with pytest.raises(ConfigurationError):
        cp.CantorConfig(depth=7)
    with pytest.raises(ConfigurationError):
        cp.CantorConfig(recursion=4)


def test_ternary_expansion():
    e = cp.ternary_expansion(Fraction(1, 4), 6)
    assert e.digits == (0, 2, 0, 2, 0, 2) and not e.exact
    e = cp.ternary_expansion(Fraction(1, 3), 6)
    assert e.digits == (1, 0, 0, 0, 0, 0) and e.exact
    assert cp.ternary_expansion(1, 5).digits == (2,) * 5
    x = Fraction(5, 17)
    assert abs(cp.ternary_expansion(x, 30).value() - x) <= Fraction(1, 3**30)


def test_cantor_special_values():
    assert cp.cantor_eval(0.0) == rp.ProfileValue(0.0, 0.0)
    assert cp.cantor_eval(1.0) == rp.ProfileValue(1.0, 0.0)
    assert G(Fraction(1, 3)) == 0.5
    v = cp.cantor_eval(Fraction(1, 4))
    assert abs(v.value - 1 / 3) <= 2.0**-D
    assert v.error_radius == 2.0**-D
    assert abs(G(0.25) - 1 / 3) <= 2.0**-D


@pytest.mark.parametrize("x,expected", [(Fraction(1, 3), 0.5), (Fraction(2, 3), 0.5), (Fraction(1, 9), 0.25),
                                        (Fraction(2, 9), 0.25), (Fraction(7, 9), 0.75)])
def test_double_expansions_agree(x, expected):
    # 1/3 = 0.1 = 0.0222..., both readings give the same G
    assert G(x) == expected
    digits_alt = (0,) + (2,) * 60 if x == Fraction(1, 3) else None
    if digits_alt:
        assert cp.cantor_from_digits(digits_alt) == pytest.approx(expected, abs=2.0**-59)


def test_cantor_from_digits_matches_eval():
    rng = np.random.default_rng(2)
    for x in rng.uniform(0, 1, 200):
        digits = cp.ternary_expansion(x, D).digits
        assert abs(cp.cantor_from_digits(digits) - G(x)) <= 2.0**-D


def test_vectorised_matches_exact():
    x = np.random.default_rng(4).uniform(0, 1, 2000)
    exact = np.array([G(v) for v in x])
    assert np.max(np.abs(cp.cantor_values(x) - exact)) <= 1e-9


def test_scaled_values():
    assert cp.scaled_eval(0.0).value == 0.0
    assert cp.scaled_eval(TAU).value == 1.0
    assert abs(cp.scaled_eval(math.pi).value - 0.5) <= 2.0**-D
    with pytest.raises(ValueError):
        cp.scaled_eval(7.0)


def test_symmetry_and_self_similarity():
    rng = np.random.default_rng(9)
    for x in rng.uniform(0, 1, 2000):
        fx = Fraction(x)
        assert abs(G(fx) + G(1 - fx) - 1) <= 2 * 2.0**-D
        assert abs(G(fx / 3) - G(fx) / 2) <= 2 * 2.0**-D


def test_plateau():
    u = np.random.default_rng(8).uniform(1 / 3, 2 / 3, 500)
    vals = [G(Fraction(v)) for v in u]
    assert max(vals) - min(vals) <= 2 * 2.0**-D


def test_monotone_pairs():
    rng = np.random.default_rng(10)
    a, b = rng.uniform(0, 1, (2, 10_000))
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    assert np.all(cp.cantor_values(lo) <= cp.cantor_values(hi))


def test_integral_examples():
    assert cp.cantor_integral(0.0) == rp.ProfileValue(0.0, 0.0)
    whole = cp.cantor_integral(1.0)
    assert abs(whole.value - 0.5) <= 3.0**-R
    assert cp.cantor_integral(Fraction(1, 3)).value == 1 / 12
    # 1/4 -> 3/4 -> 1/4 under the two self-similarities: J = (1/6)(1/4 + J), J = 1/20
    q = cp.cantor_integral(Fraction(1, 4))
    assert abs(q.value - 1 / 20) <= q.error_radius + 1e-17


def test_integral_error_radius_bounded():
    for x in np.random.default_rng(12).uniform(0, 1, 200):
        assert cp.cantor_integral(x).error_radius <= 3.0**-R


def test_integral_against_whole_bracket():
    for k in range(8, 13):
        lo, hi = riemann_bracket_cantor(k)
        v = cp.cantor_integral(1.0)
        assert lo - v.error_radius <= v.value <= hi + v.error_radius


@pytest.mark.parametrize("k", [8, 10, 12])
def test_integral_against_partial_brackets(k):
    for x in np.random.default_rng(k).uniform(0, 1, 20):
        lo, hi = riemann_bracket_cantor_upto(x, 3**k)
        v = cp.cantor_integral(x)
        assert lo - v.error_radius - 1e-12 <= v.value <= hi + v.error_radius + 1e-12


def test_integral_vectorised_matches_exact():
    x = np.random.default_rng(13).uniform(0, 1, 500)
    exact = np.array([cp.cantor_integral(v).value for v in x])
    assert np.max(np.abs(cp.cantor_integral_values(x) - exact)) <= 1e-14


def test_stretched_integral():
    top = cp.integral_g(TAU)
    assert abs(top.value - math.pi) <= TAU * 3.0**-R
    x = np.random.default_rng(14).uniform(0, TAU, 10_000)
    assert np.all(TAU * cp.cantor_integral_values(x / TAU) >= x**2 / (4 * math.pi) - 1e-9)


def test_cantor_sum():
    assert cp.cantor_sum_eval(0.0).value == math.pi
    assert abs(cp.cantor_sum_eval(TAU).value - math.pi) <= TAU * 3.0**-R
    x = np.linspace(0, TAU, 10_000)
    assert cp.cantor_sum_values(x).min() >= math.pi - 1e-6


def test_combined(cfg):
    assert cp.combined_eval(0.0, cfg).value == pytest.approx(cfg.L + math.pi, abs=1e-15)
    x = np.random.default_rng(15).uniform(0, TAU, 10_000)
    assert cp.combined_values(x, cfg).min() > math.pi
    C_T = cp.combined_semiconvexity_constant(cfg)
    assert C_T == pytest.approx(rp.semiconvexity_constant(cfg) + 1 / TAU)
    prof = cp.as_radial(cfg)
    assert rp.midpoint_convexity(prof, prof.error_at, C_T, seed=3).passed


def test_combined_slopes_continuous_part(cfg):
    # S_g is C^1, so T inherits exactly the jumps of S
    d = cp.combined_one_sided_slopes(Fraction(1, 2), cfg)
    s = rp.one_sided_derivatives(Fraction(1, 2), cfg)
    assert d.jump == s.jump
    assert d.right.value - d.left.value == pytest.approx(s.right.value - s.left.value, abs=1e-15)


def test_failure_intervals():
    one = cp.curvature_failure_intervals(1).intervals
    assert np.allclose(one, [[0, TAU / 3], [2 * TAU / 3, TAU]])
    two = cp.curvature_failure_intervals(2)
    assert len(two) == 4 and np.allclose(np.diff(two.intervals, axis=1), TAU / 9)
    for d in (5, 12, 30):
        assert len(cp.curvature_failure_intervals(d)) == 2**d
    iv = cp.curvature_failure_intervals(10).intervals
    assert np.all(iv[1:, 0] > iv[:-1, 1])
    with pytest.raises(ValueError):
        cp.curvature_failure_intervals(31)


def test_box_counting():
    dim = cp.box_counting_dimension(cp.curvature_failure_intervals(12), range(4, 13))
    assert abs(dim - math.log(2) / math.log(3)) <= 0.01
    assert abs(cp.box_counting_dimension(np.array([[0.0, TAU]]), range(4, 13)) - 1.0) <= 0.01
    assert abs(cp.box_counting_dimension(np.array([[1.0, 1.0]]), range(4, 13))) <= 0.01
    with pytest.raises(InsufficientScales):
        cp.box_counting_dimension(cp.curvature_failure_intervals(4), [2, 3])


@settings(max_examples=300, deadline=None)
@given(st.fractions(0, 1, max_denominator=10**6))
def test_symmetry_property(x):
    assert abs(G(x) + G(1 - x) - 1) <= 2 * 2.0**-D


@settings(max_examples=300, deadline=None)
@given(st.fractions(0, 1, max_denominator=10**6))
def test_integral_symmetry_property(x):
    # point symmetry of G about (1/2, 1/2)
    a, b = cp.cantor_integral(x), cp.cantor_integral(1 - x)
    assert abs(a.value - (x - Fraction(1, 2) + Fraction(b.value))) <= a.error_radius + b.error_radius + 1e-15
