"""Unit tests for the exact/float scalar and polynomial toolbox."""

from fractions import Fraction

import pytest

from bibennett.algebra import (
    DegenerateResultantError,
    DegreeBoundError,
    Poly,
    Quadratic2,
    fit_rational,
    function_identity_zero,
    interpolate_polynomial,
    is_exact,
    mat_identity,
    mat_max_abs_diff,
    mat_mul,
    nullspace_dimension,
    nullspace_vector,
    parse_scalar,
    poly_identity_zero,
    resultant_tau_bar,
    solve_linear,
    sqrt_scalar,
    sylvester_resultant,
    v_cross,
    v_dot,
    v_norm_sq,
)

F = Fraction


def test_parse_scalar_exact_and_float():
    assert parse_scalar("2/3", True) == F(2, 3)
    assert is_exact(parse_scalar("2/3", True))
    assert parse_scalar("2/3", False) == pytest.approx(2 / 3)
    assert parse_scalar(5, True) == F(5)
    assert parse_scalar(0.5, True) == F(1, 2)


def test_sqrt_scalar_exact_square():
    assert sqrt_scalar(F(4, 9)) == F(2, 3)
    assert is_exact(sqrt_scalar(F(4, 9)))
    assert sqrt_scalar(F(2)) == pytest.approx(2 ** 0.5)
    with pytest.raises(ValueError):
        sqrt_scalar(F(-1))


def test_vector_helpers_exact():
    a = (F(1), F(2), F(3))
    b = (F(4), F(5), F(6))
    assert v_dot(a, b) == 32
    assert v_cross(a, b) == (F(-3), F(6), F(-3))
    assert v_norm_sq(a) == 14


def test_mat_mul_identity():
    m = ((1, 2, 0, 0), (0, 1, 0, 0), (0, 0, 1, 5), (0, 0, 0, 1))
    assert mat_mul(m, mat_identity()) == m
    assert mat_max_abs_diff(m, m) == 0


def test_solve_linear_exact():
    rows = [[F(2), F(1)], [F(1), F(3)]]
    rhs = [F(5), F(10)]
    x = solve_linear(rows, rhs)
    assert x == [F(1), F(3)]


def test_nullspace():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)]]
    assert nullspace_dimension(rows, 3) == 2
    vec = nullspace_vector(rows, 3)
    assert any(v != 0 for v in vec)
    assert sum(r * v for r, v in zip(rows[0], vec)) == 0


def test_interpolate_polynomial_exact():
    def fun(x):
        return 3 * x * x - x + F(1, 2)

    coeffs = interpolate_polynomial(fun, 2, [F(0), F(1), F(2)], [F(3), F(5)])
    assert coeffs == [F(1, 2), F(-1), F(3)]


def test_interpolate_degree_violation():
    # extra points beyond degree+1 act as verification points
    with pytest.raises(DegreeBoundError):
        interpolate_polynomial(lambda x: x ** 3, 2,
                               [F(0), F(1), F(2), F(3)])


def test_fit_rational_recovers_ratio():
    def fun(x):
        return (1 + x * x) / (2 - x)

    num, den = fit_rational(fun, 2, 1,
                            [F(1), F(3), F(4), F(5), F(6)], [F(7), F(9)])
    # normalized representative of the same ratio
    for x in (F(10), F(1, 3)):
        lhs = sum(c * x ** i for i, c in enumerate(num))
        rhs = fun(x) * sum(c * x ** i for i, c in enumerate(den))
        assert lhs == rhs


def test_fit_rational_degree_violation():
    with pytest.raises(DegreeBoundError):
        fit_rational(lambda x: x ** 4, 2, 0,
                     [F(1), F(2), F(3), F(5)], [F(7), F(9)])


def test_poly_arithmetic_and_identity():
    names = ("x", "y")
    x = Poly.variable(names, "x")
    y = Poly.variable(names, "y")
    p = (x + y) * (x - y) - x * x + y * y
    assert p.is_zero()
    q = x * x + Poly.constant(names, 2) * x * y
    assert q.degree("x") == 2
    assert q(x=F(1), y=F(2)) == 5
    assert poly_identity_zero(p, {"x": 2, "y": 2})


def test_poly_coefficients_by_variable():
    names = ("x", "y")
    x = Poly.variable(names, "x")
    y = Poly.variable(names, "y")
    q = x * x * y + x + Poly.constant(names, 3)
    coeffs = q.coefficients("x")
    assert len(coeffs) == 3
    assert coeffs[0](y=F(5)) == 3
    assert coeffs[1](y=F(5)) == 1
    assert coeffs[2](y=F(5)) == 5


def test_function_identity_zero():
    assert function_identity_zero(
        lambda x, y: (x + y) ** 2 - x * x - 2 * x * y - y * y,
        ("x", "y"), {"x": 2, "y": 2},
    )
    assert not function_identity_zero(
        lambda x, y: x - y, ("x", "y"), {"x": 1, "y": 1}
    )


def test_sylvester_resultant_common_root():
    # (x-2)(x-3) and (x-2)(x+1) share x=2
    p = [6, -5, 1]
    q = [-2, -1, 1]
    assert sylvester_resultant([F(c) for c in p], [F(c) for c in q]) == 0
    # disjoint roots give nonzero
    r = [2, -3, 1]  # (x-1)(x-2)
    s = [12, -7, 1]  # (x-3)(x-4)
    assert sylvester_resultant([F(c) for c in r], [F(c) for c in s]) != 0


def test_resultant_tau_bar_degenerate():
    # both forms lacking the leading companion-degree term is degenerate
    coeffs = ((F(1), F(0), F(0)), (F(0), F(2), F(0)), (F(1), F(0), F(0)))
    q = Quadratic2(coeffs)
    with pytest.raises(DegenerateResultantError):
        resultant_tau_bar(q, q)


def test_resultant_tau_bar_generic():
    a = Quadratic2(((F(1), F(0), F(1)), (F(0), F(1), F(0)),
                    (F(2), F(0), F(1))))
    b = Quadratic2(((F(2), F(1), F(1)), (F(1), F(0), F(0)),
                    (F(1), F(0), F(2))))
    res = resultant_tau_bar(a, b)
    assert res.degree("tau") <= 8
    assert not res.is_zero()
