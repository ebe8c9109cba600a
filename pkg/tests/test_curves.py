import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from mpmath import mpc, mpf

from ellsym2.curves import (
    ETA4,
    ETA6,
    CurveModel,
    RationalPoint,
    ap_count,
    ap_naive,
    ap_table,
    congruent_points,
    elliptic_log,
    j_from_tau,
    multiples_divisor,
    period_lattice,
    reduce_basis,
    sym2_l_value_direct,
    verify_zagier37,
    weierstrass_p,
    weierstrass_p_prime,
)
from ellsym2.elliptic import TorsionPoint, reg3_det
from ellsym2.hecke import l_sym2
from ellsym2.precision import DomainError, PrecisionContext

P20 = PrecisionContext(20)
E37 = CurveModel.conductor37()
NEG_DISC = CurveModel(a4=1, a6=1, label="x3+x+1")

# a point of infinite order on each test curve
GENERATORS = {
    "E5": (CurveModel.congruent(5), (Fraction(-4), Fraction(6))),
    "E6": (CurveModel.congruent(6), (Fraction(-3), Fraction(9))),
    "37a": (E37, (Fraction(0), Fraction(0))),
    "x3+x+1": (NEG_DISC, (Fraction(0), Fraction(1))),
}


def mod1_close(a, b, tol):
    d = a - b
    return abs(d - mpmath.nint(d)) < tol


def as_mpf(v):
    return mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v


def test_model_invariants():
    E2 = CurveModel.congruent(2)
    assert E2.j_invariant == 1728 and E2.discriminant == 64 * 4 ** 3
    assert E37.discriminant == 37 and E37.bad_primes == (37,)
    assert E37.reduction_type(37) == "multiplicative"
    assert E2.reduction_type(2) == "additive" and E2.reduction_type(3) == "good"
    assert NEG_DISC.j_invariant == Fraction(6912, 31)
    with pytest.raises(DomainError):
        CurveModel(a4=0, a6=0)
    with pytest.raises(DomainError):
        CurveModel.congruent(0)


def test_group_law():
    E, g = GENERATORS["37a"]
    assert E.multiple(2, g) == (Fraction(1), Fraction(0))
    assert E.add(g, E.negate(g)) is None
    assert E.add(E.add(g, g), g) == E.add(g, E.add(g, g))
    for k in range(1, 8):
        x, y = E.multiple(k, g)
        assert E.contains(x, y)
    with pytest.raises(DomainError):
        RationalPoint(E, Fraction(1), Fraction(2))


@pytest.mark.parametrize("d", [1, 2, 3, 7])
def test_tau_is_i(d):
    pd = period_lattice(CurveModel.congruent(d), P20)
    assert abs(pd.tau - mpc(0, 1)) < mpf(10) ** -20


def test_real_period_of_e1():
    pd = period_lattice(CurveModel.congruent(1), P20)
    # y^2 = x^3 - x: real period Gamma(1/4)^2 / (2 sqrt(2 pi))
    expect = mpmath.gamma(mpf(1) / 4) ** 2 / (2 * mpmath.sqrt(2 * mpmath.pi))
    assert abs(pd.real_period - expect) < mpf(10) ** -20


@pytest.mark.parametrize("curve", [E37, NEG_DISC, CurveModel.congruent(3)])
def test_j_round_trip(curve):
    pd = period_lattice(curve, P20)
    assert pd.tau.imag > 0 and abs(pd.tau.real) <= mpf(1) / 2 + mpf(10) ** -20 and abs(pd.tau) >= 1 - mpf(10) ** -20
    j = curve.j_invariant
    jv = mpf(j.numerator) / j.denominator
    assert abs(j_from_tau(pd.tau) - jv) < mpf(10) ** -10 * max(1, abs(jv))
    assert abs(1728 * mpmath.kleinj(pd.tau) - jv) < mpf(10) ** -10 * max(1, abs(jv))


@pytest.mark.parametrize("curve", [E37, NEG_DISC])
def test_reduction_stable_under_translation(curve):
    pd = period_lattice(curve, P20)
    for w1, w2 in ((pd.omega1, pd.omega2 + pd.omega1), (pd.omega2, -pd.omega1),
                   (pd.omega1, pd.omega2 - 3 * pd.omega1)):
        a, b = reduce_basis(w1, w2)
        assert abs(b / a - pd.tau) < mpf(10) ** -20


@pytest.mark.parametrize("name", list(GENERATORS))
def test_weierstrass_differential_equation(name):
    curve, _ = GENERATORS[name]
    pd = period_lattice(curve, P20)
    u = mpc("0.137", "0.051") * pd.omega1 + mpc("0.21", 0) * pd.omega2
    p = weierstrass_p(u, pd)
    dp = weierstrass_p_prime(u, pd)
    b2 = as_mpf(curve.b2)
    e1, e2, e3 = pd.roots
    shifted = [e + b2 / 12 for e in (e1, e2, e3)]
    rhs = 4 * (p - shifted[0]) * (p - shifted[1]) * (p - shifted[2])
    assert abs(dp * dp - rhs) < mpf(10) ** -18 * abs(rhs)


@pytest.mark.parametrize("d", [1, 2, 5])
def test_elliptic_log_of_torsion(d):
    pts = congruent_points(d)
    E = CurveModel.congruent(d)
    assert elliptic_log(E, pts["P"], prec=P20) == TorsionPoint(Fraction(1, 2), Fraction(0))
    assert elliptic_log(E, pts["Q"], prec=P20) == TorsionPoint(Fraction(0), Fraction(1, 4))
    assert elliptic_log(E, None) == TorsionPoint(Fraction(0), Fraction(0))


def test_elliptic_log_37_multiples():
    pd = period_lattice(E37, P20)
    g = GENERATORS["37a"][1]
    u1 = elliptic_log(E37, g, pd, P20)
    for k in range(2, 5):
        uk = elliptic_log(E37, E37.multiple(k, g), pd, P20)
        assert mod1_close(as_mpf(uk.xi), k * as_mpf(u1.xi), mpf(10) ** -10)
        assert mod1_close(as_mpf(uk.eta), k * as_mpf(u1.eta), mpf(10) ** -10)


@given(st.sampled_from(list(GENERATORS)), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=10)
def test_elliptic_log_homomorphism(name, j, k):
    curve, g = GENERATORS[name]
    pd = period_lattice(curve, P20)
    a, b = curve.multiple(j, g), curve.multiple(k, g)
    ua, ub = elliptic_log(curve, a, pd, P20), elliptic_log(curve, b, pd, P20)
    us = elliptic_log(curve, curve.add(a, b), pd, P20)
    assert mod1_close(as_mpf(us.xi), as_mpf(ua.xi) + as_mpf(ub.xi), mpf(10) ** -10)
    assert mod1_close(as_mpf(us.eta), as_mpf(ua.eta) + as_mpf(ub.eta), mpf(10) ** -10)


def test_ap_small_values():
    assert ap_count(E37, 2) == -2
    assert ap_count(E37, 3) == -3
    with pytest.raises(DomainError):
        ap_count(E37, 37)
    with pytest.raises(DomainError):
        ap_count(E37, 15)


def test_ap_two_routes_agree():
    for p in sympy.primerange(2, 1000):
        if p == 37:
            continue
        assert ap_count(E37, p) == ap_naive(E37, p)


def test_hasse_bound_and_cm_vanishing():
    for curve in (E37, CurveModel.congruent(2)):
        table = ap_table(curve, 10000)
        assert all(abs(a) <= 2 * math.sqrt(p) for p, a in table.items())
    e2 = ap_table(CurveModel.congruent(2), 10000)
    assert all(a == 0 for p, a in e2.items() if p % 4 == 3)


def test_ap_cache(tmp_path):
    t1 = ap_table(E37, 3000, tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    assert files[0].read_text().startswith("# curve=")
    assert ap_table(E37, 1000, tmp_path) == {p: a for p, a in t1.items() if p <= 1000}
    assert ap_table(E37, 3000, tmp_path) == t1


@pytest.mark.slow
def test_sym2_direct_matches_hecke_route():
    v = sym2_l_value_direct(CurveModel.congruent(2), 3, 100000, P20)
    assert abs(v.value - l_sym2(3, P20)) < mpf(10) ** -3


def test_sym2_drift_monitor():
    a = sym2_l_value_direct(E37, 3, 10000, P20)
    b = sym2_l_value_direct(E37, 3, 20000, P20)
    assert a.value > 0 and b.value > 0
    assert abs(b.value - a.value) < a.drift


def test_conductor37_small_bound():
    rep = verify_zagier37(20000, P20)
    assert rep.passed and rep.params["conjectural"] is True
    assert abs(mpf(rep.lhs) - 1) < mpf(10) ** -3


def test_conductor37_determinant_symmetries():
    pd = period_lattice(E37, P20)
    g = GENERATORS["37a"][1]
    eta4 = multiples_divisor(E37, g, ETA4, pd, P20)
    eta6 = multiples_divisor(E37, g, ETA6, pd, P20)
    ctx = pd.context
    assert eta4.degree == 0 and eta6.degree == 0
    assert reg3_det(ctx, eta4, eta4, P20) == 0
    base = reg3_det(ctx, eta4, eta6, P20)
    assert abs(reg3_det(ctx, -eta4, eta6, P20) + base) < mpf(10) ** -18 * abs(base)
