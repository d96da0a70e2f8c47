import numpy as np
import pytest

from yanglee.errors import DomainError
from yanglee.numerics import ComplexPolynomial, roots_of_polynomial


def test_quadratic_roots():
    roots = roots_of_polynomial(ComplexPolynomial([1, 0, 1]), tol=1e-12)
    assert np.allclose(sorted(roots, key=lambda z: z.imag), [-1j, 1j], atol=1e-12)


def test_multiplet_polynomial_l2():
    # exponents M(L-M) for L=2 are {0, 1, 0}: polynomial z + 2
    roots = roots_of_polynomial(ComplexPolynomial([2, 1]), tol=1e-12)
    assert np.allclose(roots, [-2.0])


def test_multiplet_polynomial_l4_residuals():
    p = ComplexPolynomial([2, 0, 0, 2, 1])  # z^4 + 2 z^3 + 2
    roots = roots_of_polynomial(p, tol=1e-10)
    assert roots.size == 4
    assert np.max(np.abs(p(roots))) <= 1e-10


def test_residual_contract_scales_with_coefficients():
    rng = np.random.default_rng(3)
    coeffs = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    p = ComplexPolynomial(coeffs)
    roots = roots_of_polynomial(p, tol=1e-10)
    assert np.max(np.abs(p(roots))) <= 1e-10 * np.max(np.abs(coeffs))


def test_vieta_sum_on_random_polynomials():
    rng = np.random.default_rng(11)
    for _ in range(25):
        deg = int(rng.integers(2, 13))
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        c[-1] += 2.0  # keep the leading coefficient well away from zero
        p = ComplexPolynomial(c)
        roots = roots_of_polynomial(p, tol=1e-9)
        assert abs(roots.sum() - (-c[-2] / c[-1])) < 1e-8


def test_repeated_roots_with_multiplicity():
    # (z - 1)^3 = z^3 - 3 z^2 + 3 z - 1
    roots = roots_of_polynomial(ComplexPolynomial([-1, 3, -3, 1]), tol=1e-6)
    assert roots.size == 3
    assert np.allclose(roots, 1.0, atol=1e-4)


def test_deterministic():
    p = ComplexPolynomial([2, 0, 0, 0, 0, 2, 0, 0, 2, 1])
    a = roots_of_polynomial(p)
    b = roots_of_polynomial(p)
    assert np.array_equal(a, b)


def test_degree_zero_rejected():
    with pytest.raises(DomainError):
        roots_of_polynomial(ComplexPolynomial([3.0]))


def test_trailing_zeros_stripped():
    p = ComplexPolynomial([1, 2, 0, 0])
    assert p.degree == 1
