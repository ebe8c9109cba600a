import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from mpmath import mpf

from ellsym2.precision import (
    DomainError,
    PrecisionContext,
    _pi_gauss,
    _pi_machin,
    bernoulli,
    compensated_sum,
    const_pi,
    dirichlet_beta,
    dirichlet_beta_hurwitz,
    hurwitz_zeta,
    zeta_int,
)

P20 = PrecisionContext(20)
P30 = PrecisionContext(30)


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(14)
    with pytest.raises(ValueError):
        PrecisionContext(20, guard_digits=5)
    assert P20.working_digits == 30
    assert P20.tol == mpf(10) ** -20


def test_working_never_lowers_precision():
    with mpmath.workdps(60):
        with P20.working():
            assert mpmath.mp.dps == 60


def test_pi_fifteen_digits():
    assert mpmath.nstr(const_pi(PrecisionContext(15)), 15) == "3.14159265358979"


def test_pi_two_formulas_agree():
    assert abs(_pi_machin(40) - _pi_gauss(40)) < mpf(10) ** -38
    assert abs(const_pi(P30) - mpmath.pi) < mpf(10) ** -30


def test_pi_ratio_is_one():
    with P20.working():
        p = const_pi(P20)
        assert p / p == 1


@pytest.mark.parametrize("m", [2, 3, 4, 5, 7, 10])
def test_zeta_against_mpmath(m):
    assert abs(zeta_int(m, P30) - mpmath.zeta(m)) < mpf(10) ** -29


def test_zeta_closed_forms():
    assert abs(zeta_int(2, P30) - mpmath.pi ** 2 / 6) < mpf(10) ** -29
    assert abs(zeta_int(4, P30) - mpmath.pi ** 4 / 90) < mpf(10) ** -29
    assert mpmath.nstr(zeta_int(3, PrecisionContext(16)), 16) == "1.202056903159594"


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta_int(1)
    with pytest.raises(DomainError):
        hurwitz_zeta(1, 0.5)


@given(st.integers(min_value=2, max_value=40))
def test_zeta_between_one_and_zeta2(m):
    z = zeta_int(m)
    assert 1 < z <= zeta_int(2)
    if m > 2:
        assert z < zeta_int(2)


def test_beta_values():
    assert abs(dirichlet_beta(1, P30) - mpmath.pi / 4) < mpf(10) ** -29
    assert abs(dirichlet_beta(2, P30) - mpmath.catalan) < mpf(10) ** -29
    assert abs(dirichlet_beta(3, P30) - mpmath.pi ** 3 / 32) < mpf(10) ** -29
    with pytest.raises(DomainError):
        dirichlet_beta(0)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_beta_two_routes(m):
    assert abs(dirichlet_beta(m, P20) - dirichlet_beta_hurwitz(m, P20)) <= mpf(10) ** -20


def test_hurwitz_against_mpmath():
    assert abs(hurwitz_zeta(3, mpf(1) / 4, P30) - mpmath.zeta(3, mpf(1) / 4)) < mpf(10) ** -27


def test_bernoulli_against_sympy():
    import sympy
    for n in range(0, 30):
        b = bernoulli(n)
        ref = sympy.bernoulli(n)
        if n == 1:
            ref = sympy.Rational(-1, 2)
        assert b == Fraction(int(ref.p), int(ref.q))


# -- compensated summation -------------------------------------------------------

def test_sum_cancels():
    assert compensated_sum([1.0, -1.0]) == 0
    assert compensated_sum([1e16, 1.0, -1e16]) == 1.0


def test_many_small_mpf_terms():
    # 10^5 copies of 10^-5 (the 10^9-term version is out of desk-scale reach)
    with P20.working():
        t = mpf(10) ** -5
        s = compensated_sum([t] * 100000)
        assert abs(s - 1) < mpf(10) ** -20


def test_many_small_float_terms():
    n = 10 ** 7
    x = np.full(n, 1e-7)
    exact = math.fsum(x)
    assert compensated_sum(x) == exact


def test_deterministic_for_fixed_partition():
    rng = random.Random(7)
    vals = np.array([rng.uniform(-1, 1) * 10 ** rng.randint(-8, 8) for _ in range(20000)])
    a = compensated_sum(vals, block=512)
    b = compensated_sum(vals.copy(), block=512)
    assert a.hex() == b.hex()


@given(st.lists(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False), max_size=300),
       st.sampled_from([1, 7, 64, 4096]))
def test_close_to_exact_sum(xs, block):
    exact = math.fsum(xs)
    got = compensated_sum(np.array(xs, dtype=float), block=block)
    scale = math.fsum(abs(x) for x in xs) or 1.0
    assert abs(got - exact) <= 4 * 2.0 ** -52 * scale


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), max_size=200))
def test_list_and_array_paths_agree(xs):
    a = compensated_sum(list(xs), block=64)
    b = compensated_sum(np.array(xs, dtype=float), block=64)
    assert abs(a - b) <= 1e-9 * (1 + math.fsum(abs(x) for x in xs))
