import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffinc.poly import BivariatePolynomial, MultiPoly, poly1_der, poly1_eval

coeff = st.floats(-5, 5, allow_nan=False)
exponent = st.integers(0, 4)


def polys():
    return st.dictionaries(st.tuples(exponent, exponent), coeff, max_size=6).map(
        BivariatePolynomial)


@given(polys(), polys(), st.floats(-2, 2), st.floats(-2, 2))
def test_ring_operations_match_pointwise(p, q, x, y):
    assert math.isclose((p + q)(x, y), p(x, y) + q(x, y), rel_tol=1e-9, abs_tol=1e-7)
    assert math.isclose((p * q)(x, y), p(x, y) * q(x, y), rel_tol=1e-9, abs_tol=1e-6)


@given(polys(), st.floats(-2, 2), st.floats(-2, 2),
       st.floats(-2, 2), st.floats(-2, 2), st.floats(-1, 1), st.floats(-1, 1))
@settings(max_examples=60)
def test_linear_substitution_matches_direct_evaluation(p, a1, a2, a3, a4, x, y):
    q = p.substitute_linear(a1, a2, a3, a4)
    direct = p(a1 * x + a2 * y, a3 * x + a4 * y)
    assert math.isclose(q(x, y), direct, rel_tol=1e-8, abs_tol=1e-6)


@given(polys())
def test_substitution_never_raises_degree(p):
    q = p.substitute_linear(0.5, -1.5, 2.0, 0.25)
    assert q.degree <= p.degree


def test_zero_polynomial_has_degree_zero():
    assert BivariatePolynomial().degree == 0
    assert BivariatePolynomial({(2, 1): 0.0}).degree == 0


def test_degree_is_total_degree():
    p = BivariatePolynomial({(1, 0): 2.0, (2, 3): -1.0})
    assert p.degree == 5


def test_partial_derivatives():
    p = BivariatePolynomial({(2, 1): 3.0, (0, 1): 1.0})  # 3x^2y + y
    assert p.partial("x") == BivariatePolynomial({(1, 1): 6.0})
    assert p.partial("y") == BivariatePolynomial({(2, 0): 3.0, (0, 0): 1.0})


def test_json_roundtrip():
    p = BivariatePolynomial({(1, 2): -0.5, (0, 0): 3.0})
    assert BivariatePolynomial.from_json(p.to_json()) == p


def test_vectorized_evaluation():
    p = BivariatePolynomial({(1, 1): 1.0})
    xs = np.array([1.0, 2.0])
    np.testing.assert_allclose(p(xs, xs), xs * xs)


def test_multipoly_eval_and_degree():
    g = MultiPoly(3, {(1, 5, 0): 1.0, (0, 0, 1): -1.0})  # x*y^5 - z1
    assert g.degree == 6
    assert g(2.0, 1.0, 3.0) == 2.0 - 3.0


def test_multipoly_lift_keeps_values():
    g = MultiPoly(3, {(1, 0, 2): 2.0})
    assert g.lift(5)(2.0, 0.0, 3.0, 9.0, 9.0) == g(2.0, 0.0, 3.0)


def test_univariate_helpers():
    coeffs = (3.0, -5.0, 1.0)  # 3 - 5x + x^2
    assert poly1_eval(coeffs, 2.0) == 3 - 10 + 4
    np.testing.assert_allclose(poly1_der(coeffs), [-5.0, 2.0])
