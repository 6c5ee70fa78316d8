"""
Tests for multiplicative and additive characters.
"""

import sys
import os
import cmath
import math

# Set UTF-8 encoding for Windows console
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding='utf-8')

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from frobtrace.characters import (
    AdditiveChar,
    MultCharacter,
    add_char_eval,
    count_zeros_by_indicator,
    indicator_sum,
    mult_char_eval,
    orthogonality_sum,
    quadratic_character,
    root_of_unity,
    theta_expansion_check,
)
from frobtrace.errors import ZeroArgument
from frobtrace.field import build_field, random_element
from tests.runner import exit_with, run_tests


def test_character_values():
    """T^m(g^k) = omega^(mk) and T^m(0) = 0."""
    print("Testing multiplicative character values...")

    ctx = build_field(13, 1)
    g = ctx.generator
    assert mult_char_eval(ctx, 5, ctx.zero) == 0j, "T^m(0) is exactly zero"
    assert abs(mult_char_eval(ctx, 1, g) - root_of_unity(1, 12)) < 1e-12, "T(g) = omega"
    assert abs(mult_char_eval(ctx, 6, -ctx.one) - 1) < 1e-12, "T^6(-1) = 1 since -1 = g^6"
    assert abs(mult_char_eval(ctx, 1, -ctx.one) + 1) < 1e-12, "T(-1) = omega^6 = -1"
    for x in list(ctx.elements())[1:]:
        assert abs(mult_char_eval(ctx, 0, x) - 1) < 1e-12, "trivial character is 1 on F_q*"
    assert mult_char_eval(ctx, 13, g) == mult_char_eval(ctx, 1, g), "exponents reduce mod q - 1"

    print("✓ Character value tests passed")


def test_multiplicativity():
    """T^m(xy) = T^m(x) T^m(y) on random pairs."""
    print("\nTesting multiplicativity...")

    rng = np.random.default_rng(5)
    for p, e in ((13, 1), (5, 2)):
        ctx = build_field(p, e)
        for _ in range(250):
            m = int(rng.integers(0, ctx.q - 1))
            x = random_element(ctx, rng)
            y = random_element(ctx, rng)
            lhs = mult_char_eval(ctx, m, x * y)
            rhs = mult_char_eval(ctx, m, x) * mult_char_eval(ctx, m, y)
            assert abs(lhs - rhs) < 1e-9, "T^m should be multiplicative"

    print("✓ Multiplicativity tests passed")


def test_additive_character():
    """theta(0) = 1, theta(x + y) = theta(x) theta(y), sum over F_q is zero."""
    print("\nTesting additive character...")

    ctx = build_field(13, 1)
    theta = AdditiveChar(ctx)
    assert theta(ctx.zero) == 1, "theta(0) = 1"
    assert abs(theta(ctx.one) - cmath.exp(2j * math.pi / 13)) < 1e-12, "theta(1) = zeta_13"
    assert abs(theta.values().sum()) < 1e-9, "theta sums to zero over F_q"

    rng = np.random.default_rng(9)
    ctx25 = build_field(5, 2)
    for _ in range(250):
        x = random_element(ctx25, rng)
        y = random_element(ctx25, rng)
        lhs = add_char_eval(ctx25, x + y)
        rhs = add_char_eval(ctx25, x) * add_char_eval(ctx25, y)
        assert abs(lhs - rhs) < 1e-9, "theta should be additive"

    print("✓ Additive character tests passed")


def test_orthogonality():
    """sum over F_q* of T^m is q - 1 for m = 0 and 0 otherwise."""
    print("\nTesting orthogonality...")

    for p, e in ((13, 1), (5, 2)):
        ctx = build_field(p, e)
        n = ctx.q - 1
        for m in range(n):
            expected = n if m == 0 else 0
            assert abs(orthogonality_sum(ctx, m) - expected) < 1e-9, f"orthogonality failed for m = {m}"

    print("✓ Orthogonality tests passed")


def test_character_group():
    """Products, powers, conjugates and orders of T^m."""
    print("\nTesting character group structure...")

    ctx = build_field(13, 1)
    chi = MultCharacter(ctx, 4)
    psi = MultCharacter(ctx, 10)
    assert (chi * psi).m == 2, "T^4 T^10 = T^2"
    assert (chi ** 3).is_trivial, "T^12 is trivial"
    assert chi.conjugate().m == 8, "conjugate of T^4 is T^8"
    assert chi.order == 3, "T^4 has order 3"
    assert quadratic_character(ctx).order == 2, "eta has order 2"
    assert MultCharacter(ctx, -1).m == 11, "exponent stored reduced"

    print("✓ Character group tests passed")


def test_indicator_sum():
    """sum_z theta(z v) = q [v = 0]."""
    print("\nTesting indicator sums...")

    for p, e in ((13, 1), (5, 2)):
        ctx = build_field(p, e)
        for v in ctx.elements():
            expected = ctx.q if v.index == 0 else 0
            assert abs(indicator_sum(ctx, v) - expected) < 1e-9, f"indicator sum failed at {v!r}"

    print("✓ Indicator sum tests passed")


def test_count_zeros_by_indicator():
    """Affine points of y^2 = x^3 + x + 1 over F_13 counted through theta."""
    print("\nTesting zero counting via the indicator identity...")

    ctx = build_field(13, 1)
    idx = ctx.indices()
    xs = np.repeat(idx, ctx.q)
    ys = np.tile(idx, ctx.q)
    rhs = ctx.add_idx(ctx.add_idx(ctx.pow_idx(xs, 3), xs), 1)
    values = ctx.sub_idx(rhs, ctx.mul_idx(ys, ys))
    count = count_zeros_by_indicator(ctx, values)
    assert abs(count - 17) < 1e-6, f"expected 17 affine points, got {count}"

    print("✓ Zero counting tests passed")


def test_theta_expansion():
    """theta(alpha) = (1/(q-1)) sum_m G_-m T^m(alpha) on every nonzero alpha."""
    print("\nTesting theta expansion...")

    for p, e in ((13, 1), (5, 2), (37, 1)):
        ctx = build_field(p, e)
        for alpha in list(ctx.elements())[1:]:
            check = theta_expansion_check(ctx, alpha)
            assert check.passed(ctx.q), f"expansion off by {check.max_deviation} at {alpha!r}"

    ctx = build_field(13, 1)
    with pytest.raises(ZeroArgument):
        theta_expansion_check(ctx, ctx.zero)

    print("✓ Theta expansion tests passed")


def main():
    """Run all character tests."""
    return run_tests("CHARACTER TEST SUITE", [
        test_character_values,
        test_multiplicativity,
        test_additive_character,
        test_orthogonality,
        test_character_group,
        test_indicator_sum,
        test_count_zeros_by_indicator,
        test_theta_expansion,
    ])


if __name__ == "__main__":
    exit_with(main())
