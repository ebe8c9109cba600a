from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mpc, mpf

from ellsym2.polylog import bernoulli_b3, bloch_wigner, j3_weight, j_weight, li, sv_trilog
from ellsym2.precision import DomainError, PrecisionContext

P20 = PrecisionContext(20)
TOL = mpf(10) ** -20
I = mpc(0, 1)


def ref_li(m, z):
    with mpmath.workdps(45):
        return mpmath.polylog(m, mpc(z))


def ref_sv3(z):
    with mpmath.workdps(45):
        z = mpc(z)
        a = mpmath.log(abs(z))
        v = mpmath.polylog(3, z) - a * mpmath.polylog(2, z) - a * a / 3 * mpmath.log(1 - z)
        return v.real


def ref_d(z):
    with mpmath.workdps(45):
        z = mpc(z)
        return mpmath.polylog(2, z).imag + mpmath.log(abs(z)) * mpmath.arg(1 - z)


def test_li3_at_one_and_minus_one():
    assert abs(li(3, 1, P20) - mpmath.zeta(3)) < TOL
    assert abs(li(3, -1, P20) + mpf(3) / 4 * mpmath.zeta(3)) < TOL


def test_li2_at_i():
    expect = mpc(-mpmath.pi ** 2 / 48, mpmath.catalan)
    assert abs(li(2, I, P20) - expect) < TOL


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("zs", [("-1", "0"), ("0", "1"), ("0", "-1"), ("0.3", "0.4"), ("0.95", "0.1"),
                                ("-0.6", "0.79"), ("0.899", "0"), ("0.6", "0.8")])
def test_li_against_mpmath(m, zs):
    z = mpc(*zs)
    assert abs(li(m, z, P20) - ref_li(m, z)) < TOL


def test_li_domain():
    with pytest.raises(DomainError):
        li(3, mpc("1.01", 0))
    with pytest.raises(DomainError):
        li(4, mpc("0.5", 0))
    with pytest.raises(DomainError):
        li(1, 1)
    # the boundary itself is allowed
    li(3, mpc(mpmath.cos(1), mpmath.sin(1)), P20)


def test_sv_trilog_values():
    assert abs(sv_trilog(1, P20) - mpmath.zeta(3)) < TOL
    assert abs(sv_trilog(I, P20) + mpf(3) / 32 * mpmath.zeta(3)) < TOL
    z = mpc("0.3", "0.4")
    assert abs(sv_trilog(z, P20) - sv_trilog(1 / z, P20)) < TOL
    assert abs(sv_trilog(z, P20) - ref_sv3(z)) < TOL


def test_sv_trilog_rejects_zero():
    with pytest.raises(DomainError):
        sv_trilog(0)


def test_bloch_wigner_values():
    assert bloch_wigner(mpf("0.4"), P20) == 0
    assert abs(bloch_wigner(I, P20) - mpmath.catalan) < TOL
    z = mpc("0.2", "-0.7")
    assert abs(bloch_wigner(z, P20) - ref_d(z)) < TOL


def test_weights():
    assert j3_weight(1) == 0
    assert j3_weight(-1) == 0
    assert j_weight(1) == 0
    x = mpmath.exp(-mpmath.pi)
    expect = -mpmath.pi * mpmath.log(1 - x)
    assert abs(j_weight(x, P20) - expect) < TOL


def test_b3_exact():
    for x in (Fraction(0), Fraction(1), Fraction(1, 2)):
        assert bernoulli_b3(x) == 0
    assert bernoulli_b3(Fraction(1, 4)) == Fraction(3, 64)


points = st.builds(
    lambda r, t: mpc(mpmath.rect(r, t)),
    st.floats(min_value=0.05, max_value=1.0),
    st.floats(min_value=-3.1, max_value=3.1),
).filter(lambda z: abs(1 - z) > 1e-3)


@given(points)
def test_conjugation_symmetry(z):
    zc = mpmath.conj(z)
    assert abs(sv_trilog(zc, P20) - sv_trilog(z, P20)) < TOL
    assert abs(bloch_wigner(zc, P20) + bloch_wigner(z, P20)) < TOL


@given(points)
def test_inversion(z):
    assert abs(sv_trilog(z, P20) - sv_trilog(1 / z, P20)) < TOL
    assert abs(bloch_wigner(z, P20) + bloch_wigner(1 / z, P20)) < TOL


@given(points)
def test_sv_trilog_matches_independent_series(z):
    assert abs(sv_trilog(z, P20) - ref_sv3(z)) < TOL


@given(st.floats(min_value=0.05, max_value=6.2))
def test_boundary_continuity(theta):
    on = sv_trilog(mpmath.expjpi(mpf(theta) / mpmath.pi), P20)
    inside = sv_trilog(mpmath.rect(1 - mpf(10) ** -12, theta), P20)
    assert abs(on - inside) < mpf(10) ** -10
