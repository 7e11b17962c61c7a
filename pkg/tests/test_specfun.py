import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraclyap.exceptions import DomainError
from fraclyap.specfun import falling_power, gamma, is_gamma_pole, ln_gamma


@pytest.mark.parametrize("x", [1.0, 2.0])
def test_ln_gamma_unit_values(x):
    assert ln_gamma(x) == 0.0


def test_ln_gamma_half_integer():
    # Gamma(3.5) = 15 sqrt(pi) / 8
    assert ln_gamma(3.5) == pytest.approx(math.log(15 * math.sqrt(math.pi) / 8), rel=1e-12)
    assert ln_gamma(3.5) == pytest.approx(1.200973602, abs=1e-9)


@pytest.mark.parametrize("x", [0.5, 1.5, 7.25, 31.0, 120.5, 200.0])
def test_ln_gamma_against_product_recurrence(x):
    # log Gamma(x) = log Gamma(x - n) + sum log(x - j), with x - n in (0, 1]
    n = math.ceil(x) - 1
    base = x - n
    expected = math.log(math.gamma(base)) + sum(math.log(x - j) for j in range(1, n + 1))
    assert ln_gamma(x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_ln_gamma_domain(x):
    with pytest.raises(DomainError):
        ln_gamma(x)
    with pytest.raises(DomainError):
        gamma(x)


def test_falling_power_examples():
    assert falling_power(5, 2) == pytest.approx(20.0, rel=1e-14)
    assert falling_power(3.7, 0) == pytest.approx(1.0, rel=1e-15)
    assert falling_power(1.5, 2.5) == 0.0


def test_falling_power_half_step():
    gamma_6_5 = 5.5 * 4.5 * 3.5 * 2.5 * 1.5 * 0.5 * math.sqrt(math.pi)
    assert falling_power(5.5, 0.5) == pytest.approx(gamma_6_5 / 120.0, rel=1e-13)


def test_falling_power_negative_denominator_sign():
    # Gamma(-0.5) = -2 sqrt(pi)
    expected = math.gamma(1.0) / (-2.0 * math.sqrt(math.pi))
    assert falling_power(0.0, 1.5) == pytest.approx(expected, rel=1e-13)


def test_falling_power_domain():
    with pytest.raises(DomainError):
        falling_power(-1.0, 0.5)
    with pytest.raises(DomainError):
        falling_power(-3.2, 0.5)


def test_pole_detection():
    assert is_gamma_pole(0.0)
    assert is_gamma_pole(-3.0 + 1e-14)
    assert not is_gamma_pole(1.0)
    assert not is_gamma_pole(-0.5)


@given(st.floats(min_value=1e-3, max_value=50.0))
def test_first_power_is_identity(x):
    assert falling_power(x, 1.0) == pytest.approx(x, rel=1e-12)


@given(st.floats(min_value=0.0, max_value=40.0), st.floats(min_value=-3.0, max_value=4.0))
def test_recurrence(x, y):
    lhs = x - y + 1.0
    if is_gamma_pole(lhs) or is_gamma_pole(lhs + 1.0) or abs(lhs - round(lhs)) < 1e-6:
        return
    left = falling_power(x, y)
    right = lhs * falling_power(x, y - 1.0)
    assert left == pytest.approx(right, rel=1e-10, abs=1e-300)


@given(st.floats(min_value=-0.99, max_value=60.0), st.floats(min_value=-5.0, max_value=5.0))
def test_positive_when_both_arguments_positive(x, y):
    if x - y + 1.0 > 0.0:
        assert falling_power(x, y) > 0.0
