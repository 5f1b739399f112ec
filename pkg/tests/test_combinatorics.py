import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hartogs.combinatorics import (
    CompositionSpec,
    IntPolynomial,
    bounded_compositions,
    count_f,
    count_h,
    g_polynomial,
    g_polynomial_n2_closed,
    n2_literal_coefficients,
    numerator_total,
)
from hartogs.domain import DomainParams


def brute(total, parts, cap):
    return sum(1 for j in itertools.product(range(cap), repeat=parts) if sum(j) == total)


@pytest.mark.parametrize("parts,cap", [(1, 3), (2, 4), (3, 3), (4, 2), (5, 3)])
def test_bounded_compositions_brute_force(parts, cap):
    for total in range(-1, parts * cap + 1):
        assert bounded_compositions(CompositionSpec(total, parts, cap)) == brute(total, parts, cap)


def test_composition_spec_validated():
    with pytest.raises(ValueError):
        CompositionSpec(3, 0, 2)


@pytest.mark.parametrize("k,expected", [(2, [1, 2, 1]), (3, [1, 2, 3, 2, 1])])
def test_count_f_small(k, expected):
    assert [count_f(l, k) for l in range(2 * k - 1)] == expected


def test_count_h_examples():
    assert [count_h(l, 2) for l in range(4)] == [1, 3, 3, 1]
    assert count_h(3, 3) == 7
    assert count_h(0, 5) == 1


@pytest.mark.parametrize("k", range(1, 21))
def test_piecewise_branches_agree(k):
    # the closed branches of count_h meet the generic composition count at the seams
    for l in (k - 1, 2 * k - 2):
        assert count_h(l, k) == bounded_compositions(CompositionSpec(l, 3, k))
    assert count_f(k - 1, k) == k


@pytest.mark.parametrize("k", range(1, 11))
def test_generating_functions(k):
    ones = IntPolynomial([1] * k)
    assert IntPolynomial([count_f(l, k) for l in range(2 * k)]) == ones**2
    assert IntPolynomial([count_h(l, k) for l in range(3 * k)]) == ones**3


def test_intpolynomial_algebra():
    p = IntPolynomial([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert p(3) == 7
    assert p * 3 == IntPolynomial([3, 6])
    assert p + IntPolynomial([0, 0, 5]) == IntPolynomial([1, 2, 5])
    assert IntPolynomial([]).is_zero
    assert hash(p) == hash(IntPolynomial([1, 2]))


def test_intpolynomial_rejects_negative():
    with pytest.raises(ValueError):
        IntPolynomial([1, -1])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_k1_reduces_to_single_constant(n):
    params = DomainParams(n, 1)
    for l in range(n + 2):
        expected = IntPolynomial([1]) if l == 1 else IntPolynomial([])
        assert g_polynomial(l, params) == expected


def test_g_examples():
    assert g_polynomial(0, DomainParams(1, 2)) == IntPolynomial([0, 0, 1])
    assert g_polynomial(3, DomainParams(2, 2)) == IntPolynomial([])


def test_g_out_of_range():
    with pytest.raises(ValueError):
        g_polynomial(4, DomainParams(2, 2))


@pytest.mark.parametrize("n,k", [(1, 2), (2, 3), (3, 2), (2, 4)])
def test_numerator_total_counts_contributing_tuples(n, k):
    # tuples whose total is one of the admissible S values
    totals = {(n - l + 2) * k - (n + 1) for l in range(n + 2)}
    expected = sum(1 for j in itertools.product(range(k), repeat=n + 3) if sum(j) in totals)
    assert numerator_total(DomainParams(n, k)) == expected


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("l", range(4))
def test_n2_closed_forms_are_twice_g(k, l):
    assert g_polynomial_n2_closed(l, k) == g_polynomial(l, DomainParams(2, k)) * 2


def test_n2_k1_value():
    assert g_polynomial_n2_closed(1, 1) == IntPolynomial([2])
    assert all(g_polynomial_n2_closed(l, 1).is_zero for l in (0, 2, 3))


def test_n2_literal_form_is_not_a_count():
    # golden verdict: taken verbatim, the (m-1) factor gives -4 at m = 0 for k = 3
    literal = n2_literal_coefficients(2, 3)
    corrected = list(g_polynomial_n2_closed(2, 3).coeffs)
    assert literal[0] == -4
    assert corrected[0] == 4
    # the two differ only in the low block, by (m+2)^2 * 2
    diff = [c - x for c, x in zip(corrected, literal)]
    assert diff == [2 * (m + 2) ** 2 if m <= 1 else 0 for m in range(len(diff))]


@given(st.integers(1, 6), st.integers(1, 3))
def test_g_coefficients_nonnegative_and_bounded(k, n):
    params = DomainParams(n, k)
    assert numerator_total(params) <= k ** (n + 3)
    for l in range(n + 2):
        assert all(c >= 0 for c in g_polynomial(l, params).coeffs)
