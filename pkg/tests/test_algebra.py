import random
from fractions import Fraction as F

import pytest

from src.hgspec.algebra import (
    HyperElement,
    ProductCache,
    format_coefficient,
    involution,
    mul,
    mul_basis,
    mul_basis_closed,
    mul_basis_recursive,
    norm_l1,
)
from src.hgspec.errors import ArgumentOrderError, DegreeError, ParameterDomainError
from src.hgspec.params import Param


def test_product_two_three_quarter():
    prod = mul_basis(2, 3, "1/4")
    assert prod == HyperElement({1: F(1, 12), 3: F(1, 6), 5: F(3, 4)})


def test_product_with_unit_is_identity():
    assert mul_basis(0, 9, "1/3") == HyperElement.basis(9)


def test_product_one_one_half():
    assert mul_basis(1, 1, "1/2") == HyperElement({0: F(1, 2), 2: F(1, 2)})


def test_r_zero_is_the_semigroup():
    assert mul_basis_recursive(3, 4, 0) == HyperElement.basis(7)


@pytest.mark.oracle
@pytest.mark.parametrize("r", [F(1, 6), F(1, 4), F(1, 3), F(1, 2)])
def test_recursive_matches_closed_form(r):
    for n in range(1, 41):
        for m in range(1, n + 1):
            assert mul_basis_recursive(m, n, r) == mul_basis_closed(m, n, r), (m, n, r)


@pytest.mark.parametrize("r", [F(1, 6), F(1, 2)])
def test_recursive_matches_closed_form_low_degrees(r):
    for n in range(1, 13):
        for m in range(1, n + 1):
            assert mul_basis_recursive(m, n, r) == mul_basis_closed(m, n, r), (m, n, r)


def _random_triples(seed, count=20, top=12):
    rng = random.Random(seed)
    return [tuple(rng.randint(0, top) for _ in range(3)) for _ in range(count)]


@pytest.mark.parametrize("r", [F(1, 5), F(1, 2), F(3, 4)])
@pytest.mark.parametrize("a,b,c", _random_triples(7))
def test_product_is_associative(r, a, b, c):
    ha, hb, hc = HyperElement.basis(a), HyperElement.basis(b), HyperElement.basis(c)
    assert mul(mul(ha, hb, r), hc, r) == mul(ha, mul(hb, hc, r), r)


def _random_element(rng, top=6):
    return HyperElement({k: F(rng.randint(-9, 9), rng.randint(1, 5)) for k in rng.sample(range(top + 1), 3)})


@pytest.mark.parametrize("r", [F(0), F(1, 7), F(1, 4), F(1, 2)])
def test_l1_norm_is_submultiplicative(r):
    rng = random.Random(11)
    for _ in range(20):
        x, y = _random_element(rng), _random_element(rng)
        assert norm_l1(mul(x, y, r)) <= norm_l1(x) * norm_l1(y)


@pytest.mark.parametrize("r", [F(0), F(1, 10), F(1, 4), F(1, 2)])
def test_hypergroup_products_are_probability_vectors(r):
    for m in range(6):
        for n in range(6):
            prod = mul_basis(m, n, r)
            assert all(c >= 0 for _, c in prod)
            assert sum(c for _, c in prod) == 1
            assert prod.degrees[0] >= abs(m - n)
            assert prod.degrees[-1] == m + n


def test_product_is_commutative():
    r = F(2, 7)
    assert mul_basis_recursive(5, 2, r) == mul_basis_recursive(2, 5, r)


def test_float_r_uses_float_arithmetic():
    prod = mul_basis_recursive(2, 3, 0.25)
    assert prod[1] == pytest.approx(1 / 12, abs=1e-15)
    assert prod[3] == pytest.approx(1 / 6, abs=1e-15)
    assert prod[5] == pytest.approx(3 / 4, abs=1e-15)


def test_r_outside_hypergroup_range_still_multiplies():
    # negative coefficients are allowed there; the sum is still 1
    prod = mul_basis(2, 2, F(3, 4))
    assert sum(c for _, c in prod) == 1
    assert any(c < 0 for _, c in prod)


def test_bilinear_product():
    r = F(1, 4)
    a = HyperElement({0: F(1), 1: F(1)})
    b = HyperElement.basis(1)
    assert mul(a, b, r) == HyperElement({0: r, 1: F(1), 2: 1 - r})


def test_norm_and_involution():
    a = HyperElement({0: 1 + 2j, 3: -1j})
    assert norm_l1(a) == pytest.approx(abs(1 + 2j) + 1)
    assert involution(a) == HyperElement({0: 1 - 2j, 3: 1j})


def test_zero_coefficients_are_dropped():
    assert HyperElement({2: F(0), 4: F(1)}).degrees == [4]
    assert HyperElement.zero().is_zero


def test_degree_errors():
    with pytest.raises(DegreeError):
        mul_basis(-1, 2, "1/4")
    with pytest.raises(DegreeError):
        mul_basis(1.5, 2, "1/4")
    with pytest.raises(ArgumentOrderError):
        mul_basis_closed(3, 2, "1/4")
    with pytest.raises(ParameterDomainError):
        mul_basis_closed(1, 2, 0)


def test_r_equal_one_is_rejected():
    with pytest.raises(ParameterDomainError):
        Param.parse("1")
    with pytest.raises(ParameterDomainError):
        Param.parse("abc")


def test_cache_counts_hits(session):
    cache = ProductCache(maxsize=4)
    first = mul_basis(3, 4, "1/4", cache=cache, session=session)
    again = mul_basis(4, 3, "1/4", cache=cache, session=session)
    assert first == again
    assert session.counters.get("algebra.cache_misses") == 1
    assert session.counters.get("algebra.cache_hits") == 1


def test_cache_is_bounded():
    cache = ProductCache(maxsize=2)
    for n in range(5):
        mul_basis(1, n, "1/4", cache=cache)
    assert len(cache) == 2


def test_cache_distinguishes_exact_and_float_r():
    cache = ProductCache(maxsize=8)
    exact = mul_basis(1, 1, F(1, 4), cache=cache)
    approx = mul_basis(1, 1, 0.25, cache=cache)
    assert isinstance(exact[0], F)
    assert isinstance(approx[0], float)


def test_format_coefficient():
    assert format_coefficient(F(3, 4)) == "3/4"
    assert format_coefficient(2) == "2"
    assert format_coefficient(0.5) == "0.5"
