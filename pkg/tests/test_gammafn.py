import cmath
import math

import pytest
import scipy.special

from peocalc.errors import DomainError, GammaPoleError
from peocalc.gammafn import (
    beta,
    exact_factorial_ratio,
    gamma,
    is_gamma_pole,
    log_gamma_real,
    recip_gamma,
)


def rel_err(got, want):
    if want == 0:
        return abs(got)
    return abs(got - want) / abs(want)


def test_factorials_to_20():
    for n in range(21):
        assert rel_err(gamma(n + 1), math.factorial(n)) <= 1e-13


def test_half_integer_values():
    assert rel_err(gamma(0.5), math.sqrt(math.pi)) <= 1e-14
    assert rel_err(gamma(1.5), 0.5 * math.sqrt(math.pi)) <= 1e-14
    assert rel_err(gamma(-0.5), -2.0 * math.sqrt(math.pi)) <= 1e-13


def test_against_stdlib_gamma_on_grid():
    # 12 significant digits documented on [-170, 170]; math.gamma is the
    # independent real-axis oracle.
    xs = [x / 7.0 for x in range(-1150, 1150)]
    for x in xs:
        if is_gamma_pole(x) or abs(x) > 170.0:
            continue
        if x < 0 and abs(x - round(x)) < 1e-6:
            continue  # oracle itself loses digits hugging a pole
        assert rel_err(gamma(x), math.gamma(x)) <= 1e-12, x


def test_large_arguments_against_lgamma():
    for x in [101.25, 144.9, 169.5, 170.0]:
        assert rel_err(math.log(gamma(x)), math.lgamma(x)) <= 1e-13
        assert rel_err(log_gamma_real(x), math.lgamma(x)) <= 1e-13


def test_pole_behaviour():
    for z in [0, -1, -2, -37, 0.0, -5.0]:
        assert is_gamma_pole(z)
        with pytest.raises(GammaPoleError):
            gamma(z)
        assert recip_gamma(z) == 0.0
    assert recip_gamma(complex(-3.0, 0.0)) == 0j


def test_recip_gamma_matches_reciprocal():
    for x in [0.1, 0.5, 1.0, 3.7, 25.0, 170.0, -0.5, -2.5, -17.3]:
        assert rel_err(recip_gamma(x), 1.0 / math.gamma(x)) <= 1e-12


def test_recip_gamma_underflows_to_zero_smoothly():
    assert recip_gamma(400.0) == 0.0


def test_complex_against_scipy():
    pts = [1 + 1j, 0.5 - 2.3j, -1.5 + 0.25j, 3.25 + 4j, -4.2 - 1.7j]
    for z in pts:
        assert abs(gamma(z) - scipy.special.gamma(z)) <= 1e-12 * abs(
            scipy.special.gamma(z)
        )
        want = 1.0 / scipy.special.gamma(z)
        assert abs(recip_gamma(z) - want) <= 1e-12 * max(1.0, abs(want))


def test_complex_functional_equation_and_conjugation():
    for z in [0.75 + 2j, -2.25 + 0.5j, 5.0 + 0.125j]:
        assert abs(gamma(z + 1) - z * gamma(z)) <= 1e-12 * abs(gamma(z + 1))
        assert abs(gamma(z.conjugate()) - gamma(z).conjugate()) <= 1e-13 * abs(
            gamma(z)
        )


def test_abs_gamma_one_plus_i_identity():
    # |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    val = gamma(1 + 1j)
    assert rel_err(abs(val) ** 2, math.pi / math.sinh(math.pi)) <= 1e-12


def test_beta_values():
    assert beta(2.0, 1.0) == pytest.approx(0.5, rel=1e-14)
    assert rel_err(beta(0.5, 0.5), math.pi) <= 1e-13
    # B(x, y) = B(y, x)
    assert beta(3.2, 1.7) == pytest.approx(beta(1.7, 3.2), rel=1e-14)


def test_beta_against_quadrature():
    # midpoint rule on a smooth case, plenty for 1e-9
    x, y = 3.0, 4.0
    n = 20000
    acc = 0.0
    for k in range(n):
        s = (k + 0.5) / n
        acc += s ** (x - 1) * (1 - s) ** (y - 1)
    acc /= n
    assert rel_err(beta(x, y), acc) <= 1e-9


def test_beta_domain():
    with pytest.raises(DomainError):
        beta(-1.0, 2.0)
    with pytest.raises(DomainError):
        beta(1.0, 0.0)


def test_exact_factorial_ratio():
    assert exact_factorial_ratio(10, 7) == 10 * 9 * 8
    assert exact_factorial_ratio(3, 6) == pytest.approx(1.0 / (4 * 5 * 6))
    assert exact_factorial_ratio(5, 5) == 1
