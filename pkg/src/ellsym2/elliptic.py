"""Elliptic trilogarithm pair, elliptic dilogarithm and J^E.

Points of C/(Z + Z tau) are written u = xi*tau + eta and mapped to
x = exp(2 pi i u) in C^x / q^Z.  Each function has a q-series route (sums of
one-variable functions over the orbit q^n x) and, for the trilogarithm pair,
a lattice-sum route used as an independent low-precision oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

import mpmath
from mpmath import mpc, mpf

from .lattice import LatticeValue, ek_sum
from .polylog import _bloch_wigner, _j3_weight, _j_weight, _sv_trilog, bernoulli_b3
from .precision import DEFAULT, PrecisionContext, _pi_machin

MAX_DENOMINATOR = 10 ** 6

Coordinate = Union[Fraction, mpf]


def _to_mpf(v) -> mpf:
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    return mpf(v)


def _reduce_mod1(v) -> Coordinate:
    if isinstance(v, (int, Fraction)):
        f = Fraction(v)
        if f.denominator > MAX_DENOMINATOR:
            raise ValueError(f"denominator {f.denominator} exceeds {MAX_DENOMINATOR}")
        return f - (f.numerator // f.denominator)
    v = mpf(v)
    return v - mpmath.floor(v)


@dataclass(frozen=True)
class TorsionPoint:
    """u = xi*tau + eta with (xi, eta) taken mod 1.

    Coordinates are exact Fractions for torsion points; real (mpf) coordinates
    are accepted for non-torsion points and go through the q-series routes only.
    """

    xi: Coordinate
    eta: Coordinate

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", _reduce_mod1(self.xi))
        object.__setattr__(self, "eta", _reduce_mod1(self.eta))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.xi, Fraction) and isinstance(self.eta, Fraction)

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.xi + other.xi, self.eta + other.eta)

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint(-self.xi, -self.eta)

    def __rmul__(self, k: int) -> "TorsionPoint":
        return TorsionPoint(k * self.xi, k * self.eta)

    def __repr__(self) -> str:
        return f"TorsionPoint({self.xi}, {self.eta})"


O = TorsionPoint(Fraction(0), Fraction(0))
P = TorsionPoint(Fraction(1, 2), Fraction(0))
Q = TorsionPoint(Fraction(0), Fraction(1, 4))
P_PLUS_Q = P + Q
TWO_Q = 2 * Q
P_PLUS_TWO_Q = TorsionPoint(Fraction(1, 2), Fraction(1, 2))
CANONICAL_POINTS = {"O": O, "P": P, "Q": Q, "P+Q": P_PLUS_Q, "2Q": TWO_Q, "P+2Q": P_PLUS_TWO_Q}


class Divisor:
    """Formal integer combination of points, normalized (no repeats, no zeros)."""

    def __init__(self, terms: Iterable[tuple[int, TorsionPoint]] = ()):
        acc: dict[TorsionPoint, int] = {}
        for mult, pt in terms:
            acc[pt] = acc.get(pt, 0) + int(mult)
        self.terms: tuple[tuple[int, TorsionPoint], ...] = tuple(
            (m, pt) for pt, m in acc.items() if m != 0)

    @property
    def degree(self) -> int:
        return sum(m for m, _ in self.terms)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.terms + other.terms)

    def __neg__(self) -> "Divisor":
        return Divisor((-m, pt) for m, pt in self.terms)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor((k * m, pt) for m, pt in self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and dict((p, m) for m, p in self.terms) == \
            dict((p, m) for m, p in other.terms)

    def __hash__(self) -> int:
        return hash(frozenset((p, m) for m, p in self.terms))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return "Divisor(" + " + ".join(f"{m}({p.xi},{p.eta})" for m, p in self.terms) + ")"


def point_divisor(pt: TorsionPoint) -> Divisor:
    return Divisor([(1, pt)])


# divisors of the main determinant identity
XI1 = Divisor([(1, Q), (1, P_PLUS_Q), (-2, O)])
XI2 = Divisor([(1, TWO_Q), (-1, P)])


@dataclass(frozen=True)
class CurveContext:
    """The lattice Z + Z tau; tau in the upper half plane."""

    tau: mpc

    def __post_init__(self) -> None:
        tau = mpc(self.tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def square(cls) -> "CurveContext":
        return cls(mpc(0, 1))

    @property
    def im_tau(self) -> mpf:
        return self.tau.imag

    def q(self) -> mpc:
        """e^{2 pi i tau}, real when tau is purely imaginary."""
        pi = _pi_machin(mpmath.mp.dps)
        if self.tau.real == 0:
            return mpc(mpmath.exp(-2 * pi * self.tau.imag))
        return mpmath.exp(2j * pi * self.tau)

    def x_of(self, pt: TorsionPoint) -> mpc:
        """exp(2 pi i (xi tau + eta)); exact units for quarter-turn angles."""
        pi = _pi_machin(mpmath.mp.dps)
        modulus = mpf(1) if pt.xi == 0 else mpmath.exp(-2 * pi * _to_mpf(pt.xi) * self.im_tau)
        if self.tau.real == 0:
            theta = pt.eta
        else:
            theta = _to_mpf(pt.xi) * self.tau.real + _to_mpf(pt.eta)
        if isinstance(theta, Fraction) and (4 * theta).denominator == 1:
            unit = (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))[int(4 * theta) % 4]
        else:
            unit = mpmath.expjpi(2 * _to_mpf(theta))
        return modulus * unit


# -- q-series cores (current mpmath precision) -------------------------------

def _tail_small(bound: mpf, eps: mpf) -> bool:
    return bound < eps


def _trilog_bound(az: mpf) -> mpf:
    # |L3(z)| <= 2|z|(1 + L + L^2/3) for |z| <= 1/2
    if az > mpf(1) / 2:
        return mpf("inf")
    L = -mpmath.log(az)
    return 2 * az * (1 + L + L * L / 3)


def _l31_from_x(x: mpc, q: mpc, digits: int) -> mpf:
    eps = mpf(10) ** (-digits - 2)
    total = _sv_trilog(x, digits)
    qn = mpc(1)
    n = 0
    while True:
        n += 1
        qn *= q
        a, b = qn * x, qn / x
        total += _sv_trilog(a, digits) + _sv_trilog(b, digits)
        if _trilog_bound(abs(a)) + _trilog_bound(abs(b)) < eps and n > 1:
            return total
        if n > 100000:
            raise ArithmeticError("q-series did not converge")


def _j3_bound(az: mpf) -> mpf:
    if az > mpf(1) / 2:
        return mpf("inf")
    L = -mpmath.log(az)
    return 2 * az * L * L


def _l32_from_x(x: mpc, q: mpc, digits: int) -> mpf:
    eps = mpf(10) ** (-digits - 2)
    lx = mpmath.log(abs(x))
    lq = mpmath.log(abs(q))
    total = _j3_weight(x) + lx * lx * (lq - lx) ** 2 / (4 * lq)
    qn = mpc(1)
    n = 0
    while True:
        n += 1
        qn *= q
        a, b = qn * x, qn / x
        total += _j3_weight(a) + _j3_weight(b)
        if _j3_bound(abs(a)) + _j3_bound(abs(b)) < eps and n > 1:
            return total
        if n > 100000:
            raise ArithmeticError("q-series did not converge")


def _dilog_bound(az: mpf) -> mpf:
    if az > mpf(1) / 2:
        return mpf("inf")
    return 2 * az * (1 - mpmath.log(az))


def _de_from_x(x: mpc, q: mpc, digits: int) -> mpf:
    eps = mpf(10) ** (-digits - 2)
    total = _bloch_wigner(x, digits)
    qn = mpc(1)
    n = 0
    while True:
        n += 1
        qn *= q
        a, b = qn * x, qn / x
        # L2(q^-n x) = -L2(q^n / x)
        total += _bloch_wigner(a, digits) - _bloch_wigner(b, digits)
        if _dilog_bound(abs(a)) + _dilog_bound(abs(b)) < eps and n > 1:
            return total
        if n > 100000:
            raise ArithmeticError("q-series did not converge")


def _je_from_x(x: mpc, q: mpc, digits: int) -> mpf:
    eps = mpf(10) ** (-digits - 2)
    lx = mpmath.log(abs(x))
    lq = mpmath.log(abs(q))
    total = _j_weight(x) + lq * lq / 3 * bernoulli_b3(lx / lq)
    qn = mpc(1)
    n = 0
    while True:
        n += 1
        qn *= q
        a, b = qn * x, qn / x
        total += _j_weight(a) - _j_weight(b)
        if _dilog_bound(abs(a)) + _dilog_bound(abs(b)) < eps and n > 1:
            return total
        if n > 100000:
            raise ArithmeticError("q-series did not converge")


def _qseries(core: Callable) -> Callable:
    def fn(curve: CurveContext, pt: TorsionPoint, prec: PrecisionContext = DEFAULT) -> mpf:
        with prec.working():
            val = core(curve.x_of(pt), curve.q(), prec.working_digits)
        return prec.round(val)
    fn.__name__ = core.__name__
    return fn


l31_qseries = _qseries(_l31_from_x)
l31_qseries.__name__ = "l31_qseries"
l31_qseries.__doc__ = "Elliptic trilogarithm: sum over n in Z of the single-valued trilog at q^n x."

l32_qseries = _qseries(_l32_from_x)
l32_qseries.__name__ = "l32_qseries"
l32_qseries.__doc__ = ("Companion function: sum_{n>=0} J3(q^n x) + sum_{n>=1} J3(q^n/x) "
                       "+ log^2|x| log^2|q/x| / (4 log|q|).")

d_e = _qseries(_de_from_x)
d_e.__name__ = "d_e"
d_e.__doc__ = "Elliptic dilogarithm: sum over n in Z of the Bloch-Wigner function at q^n x."

j_e = _qseries(_je_from_x)
j_e.__name__ = "j_e"
j_e.__doc__ = ("sum_{n>=0} J(q^n x) - sum_{n>=1} J(q^n/x) "
               "+ log^2|q| B3(log|x|/log|q|) / 3.")


# -- lattice routes -------------------------------------------------------------

def _real(lv: LatticeValue) -> LatticeValue:
    return LatticeValue(mpmath.re(lv.value), lv.tail_bound, lv.radius)


def l31_lattice(curve: CurveContext, pt: TorsionPoint, radius: int = 2000,
                prec: PrecisionContext = DEFAULT) -> LatticeValue:
    """4 Im(tau)^5/(3 pi) Re sum' e^{2 pi i (n xi - m eta)} m^2 / |m tau + n|^6."""
    with prec.working():
        pi = prec.pi
        s = ek_sum(curve.tau, 3, 3, 2, pt.xi, pt.eta, radius, prec=prec)
        return (4 * curve.im_tau ** 5 / (3 * pi)) * _real(s)


def l32_lattice(curve: CurveContext, pt: TorsionPoint, radius: int = 2000,
                prec: PrecisionContext = DEFAULT) -> LatticeValue:
    """Im(tau)^3/pi [S' e/|.|^4 + 2 Re S' e (m tau+n)^2/|.|^6] + log^3|q|/120."""
    with prec.working():
        pi = prec.pi
        s1 = _real(ek_sum(curve.tau, 2, 2, 0, pt.xi, pt.eta, radius, prec=prec))
        s2 = _real(ek_sum(curve.tau, 1, 3, 0, pt.xi, pt.eta, radius, prec=prec))
        log_q = -2 * pi * curve.im_tau
        body = (curve.im_tau ** 3 / pi) * (s1 + 2 * s2)
        return LatticeValue(body.value + log_q ** 3 / 120, body.tail_bound, radius)


# -- divisors ---------------------------------------------------------------------

def eval_divisor(fn: Callable, div: Divisor, curve: CurveContext, *args, **kwargs):
    """Extend ``fn(curve, point, ...)`` linearly to a divisor."""
    total = 0
    prec = kwargs.get("prec", DEFAULT)
    with prec.working():
        for mult, pt in div:
            total = total + mult * fn(curve, pt, *args, **kwargs)
    if total == 0 and not len(div):
        return mpf(0)
    return total


def reg3_det(curve: CurveContext, div1: Divisor, div2: Divisor,
             prec: PrecisionContext = DEFAULT) -> mpf:
    """L31(div1) L32(div2) - L31(div2) L32(div1), through the q-series."""
    with prec.working():
        a1 = eval_divisor(l31_qseries, div1, curve, prec=prec)
        b1 = eval_divisor(l32_qseries, div1, curve, prec=prec)
        a2 = eval_divisor(l31_qseries, div2, curve, prec=prec)
        b2 = eval_divisor(l32_qseries, div2, curve, prec=prec)
        val = a1 * b2 - a2 * b1
    return prec.round(val)
