from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mpc, mpf

from ellsym2.lattice import (
    LatticeSumSpec,
    LatticeValue,
    chi4_lattice_check,
    ek_sum,
    evaluate,
    partial_sums,
    shell_values,
    verify_e1_e2,
)
from ellsym2.precision import DomainError, PrecisionContext

P20 = PrecisionContext(20)

MASK_FN = {
    "all": lambda m, n: 1,
    "m_even": lambda m, n: int(m % 2 == 0),
    "n_even": lambda m, n: int(n % 2 == 0),
    "both_even": lambda m, n: int(m % 2 == 0 and n % 2 == 0),
    "m_odd": lambda m, n: int(m % 2 == 1),
    "sign_m": lambda m, n: (-1) ** (m % 2),
    "sign_n": lambda m, n: (-1) ** (n % 2),
    "sign_diff": lambda m, n: (-1) ** (m % 2) - (-1) ** (n % 2),
    "m_odd_n_even": lambda m, n: int(m % 2 == 1 and n % 2 == 0),
    "m_even_n_odd": lambda m, n: int(m % 2 == 0 and n % 2 == 1),
}
WEIGHT_FN = {
    "1": lambda m, n: 1, "m2": lambda m, n: m * m, "n2": lambda m, n: n * n,
    "m2-n2": lambda m, n: m * m - n * n, "m2-4n2": lambda m, n: m * m - 4 * n * n,
}


def brute(weight, mask, c, s, R):
    tot = mpf(0)
    for m in range(-R, R + 1):
        for n in range(-R, R + 1):
            if m == 0 and n == 0:
                continue
            tot += mpf(MASK_FN[mask](m, n) * WEIGHT_FN[weight](m, n)) / mpf(m * m + c * n * n) ** s
    return tot


@pytest.mark.parametrize("weight", list(WEIGHT_FN))
@pytest.mark.parametrize("mask", list(MASK_FN))
def test_engine_matches_brute_force(weight, mask):
    spec = LatticeSumSpec(weight, mask, 1 if mask != "n_even" else 4, 3, 12)
    got = evaluate(spec, P20).value
    assert abs(got - brute(weight, mask, spec.form_c, 3, 12)) < mpf(10) ** -13


def test_full_sum_two_squares():
    v = evaluate(LatticeSumSpec("1", "all", 1, 2, 2000), P20)
    expect = 2 * mpmath.pi ** 2 / 3 * mpmath.catalan
    assert abs(v.value - expect) <= v.tail_bound
    assert abs(v.value - expect) < mpf(10) ** -5
    # the same number through the factorization 4 zeta(2) beta(2)
    assert abs(expect - 4 * mpmath.zeta(2) * mpmath.catalan) < mpf(10) ** -40


def test_antisymmetric_sums_vanish_exactly():
    for spec in (LatticeSumSpec("m2-n2", "all", 1, 3, 500), LatticeSumSpec("1", "sign_diff", 1, 2, 500)):
        assert all(v == 0 for v in partial_sums(spec, P20))


def test_divergent_specs_rejected():
    with pytest.raises(DomainError):
        LatticeSumSpec("1", "all", 1, 1, 10)
    with pytest.raises(DomainError):
        LatticeSumSpec("m2", "all", 1, 2, 10)
    with pytest.raises(DomainError):
        LatticeSumSpec("1", "bogus", 1, 2, 10)
    with pytest.raises(DomainError):
        LatticeSumSpec("1", "all", 3, 2, 10)


def test_m_even_is_seven_sixteenths():
    full = evaluate(LatticeSumSpec("1", "all", 1, 2, 2000), P20)
    even = evaluate(LatticeSumSpec("1", "m_even", 1, 2, 2000), P20)
    assert abs(even.value - mpf(7) / 16 * full.value) <= even.tail_bound + full.tail_bound


@given(st.sampled_from([("1", "all", 1, 2), ("m2", "m_odd", 1, 3), ("m2-4n2", "n_even", 1, 3),
                        ("n2", "m_even", 4, 3), ("1", "both_even", 4, 2.5)]),
       st.integers(min_value=20, max_value=200), st.integers(min_value=1, max_value=400))
def test_tail_bound_valid(case, r1, extra):
    w, mask, c, s = case
    big = LatticeSumSpec(w, mask, c, s, r1 + extra)
    ps = partial_sums(big, P20)
    assert abs(ps[-1] - ps[r1 - 1]) <= LatticeSumSpec(w, mask, c, s, r1).tail_bound()


def test_e1_e2_and_radius_doubling():
    for r in verify_e1_e2(2000, P20):
        assert r.passed and mpf(r.abs_err) < mpf(10) ** -5
    for name in ("E1", "E2"):
        e1 = {r.check_id: mpf(r.abs_err) for r in verify_e1_e2(500, P20)}[name]
        e2 = {r.check_id: mpf(r.abs_err) for r in verify_e1_e2(1000, P20)}[name]
        assert e2 <= e1


@pytest.mark.parametrize("t", [2, 3])
def test_chi4_representations(t):
    reps = chi4_lattice_check(t, 2000, P20)
    beta = mpmath.catalan if t == 2 else mpmath.pi ** 3 / 32
    for r in reps:
        assert r.passed
        assert abs(mpf(r.lhs) - beta) < mpf(10) ** -5


def test_chi4_rejects_small_t():
    with pytest.raises(DomainError):
        chi4_lattice_check(1, 10)


def test_lattice_value_algebra():
    a = LatticeValue(mpf(1), mpf("0.1"), 5)
    b = LatticeValue(mpf(2), None, 7)
    assert (a + a).tail_bound == mpf("0.2")
    assert (a + b).tail_bound is None and (a + b).radius == 7
    assert sum([a, a]).value == 2
    assert (-a).value == -1 and (-a).tail_bound == mpf("0.1")
    assert (3 * a).tail_bound == 3 * mpf("0.1")


def ek_brute(tau, a, b, e, xi, eta, R):
    tot = mpc(0)
    for m in range(-R, R + 1):
        for n in range(-R, R + 1):
            if m == 0 and n == 0:
                continue
            z = m * tau + n
            ph = mpmath.expjpi(2 * (n * mpf(xi.numerator) / xi.denominator
                                    - m * mpf(eta.numerator) / eta.denominator))
            tot += ph * mpf(m) ** e / (z ** a * mpmath.conj(z) ** b)
    return tot


@pytest.mark.parametrize("a,b,e", [(2, 2, 0), (1, 3, 0), (3, 3, 2)])
@pytest.mark.parametrize("xi,eta", [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(1, 4)),
                                    (Fraction(1, 2), Fraction(1, 4)), (Fraction(1, 3), Fraction(5, 6))])
def test_ek_sum_matches_brute_force(a, b, e, xi, eta):
    tau = mpc("0.25", "1.1")
    got = ek_sum(tau, a, b, e, xi, eta, 8, prec=P20).value
    assert abs(got - ek_brute(tau, a, b, e, xi, eta, 8)) < mpf(10) ** -12


def test_ek_sum_needs_rationals():
    with pytest.raises(DomainError):
        ek_sum(mpc(0, 1), 2, 2, 0, mpf("0.1"), 0, 10)


def test_ek_tail_bound_presence():
    assert ek_sum(mpc(0, 1), 1, 1, 0, Fraction(0), Fraction(1, 4), 10).tail_bound is None
    assert ek_sum(mpc(0, 1), 2, 1, 0, Fraction(0), Fraction(1, 4), 10).tail_bound is not None
    assert ek_sum(mpc(0, 1), 2, 2, 0, Fraction(0), Fraction(1, 4), 10).tail_bound is not None


def test_shell_values_length():
    assert len(shell_values(LatticeSumSpec("1", "all", 1, 2, 30))) == 31
