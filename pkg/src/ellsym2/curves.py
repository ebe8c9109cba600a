"""Periods, elliptic logarithms, point counts and L(Sym^2 E, 3) for concrete curves."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Union

import mpmath
import numpy as np
import sympy
from mpmath import mpc, mpf

from . import kernels
from .elliptic import CurveContext, Divisor, TorsionPoint, eval_divisor, l31_qseries, l32_qseries
from .precision import DEFAULT, DomainError, PrecisionContext
from .report import VerificationReport, stopwatch

Coord = Union[Fraction, sympy.Expr]


# -- curve models --------------------------------------------------------------

@dataclass(frozen=True)
class CurveModel:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)
    label: str = ""

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.discriminant == 0:
            raise DomainError("singular model: discriminant is zero")

    @classmethod
    def congruent(cls, d: int) -> "CurveModel":
        """E_d: y^2 = x^3 - d^2 x."""
        if d < 1:
            raise DomainError("d must be a positive integer")
        return cls(a4=Fraction(-d * d), label=f"E_{d}")

    @classmethod
    def conductor37(cls) -> "CurveModel":
        """y^2 - y = x^3 - x."""
        return cls(a3=Fraction(-1), a4=Fraction(-1), label="37a")

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> Fraction:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> Fraction:
        return self.b2 ** 2 - 24 * self.b4

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4 ** 3 / self.discriminant

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    @cached_property
    def bad_primes(self) -> tuple[int, ...]:
        disc = self.discriminant
        if disc.denominator != 1:
            raise DomainError("bad primes need an integral model")
        return tuple(sorted(sympy.factorint(abs(disc.numerator))))

    def reduction_type(self, p: int) -> str:
        """'good', 'multiplicative' or 'additive' (the model is assumed minimal at p)."""
        if p not in self.bad_primes:
            return "good"
        c4 = self.c4
        return "additive" if c4.numerator % p == 0 else "multiplicative"

    def cache_key(self) -> str:
        return "_".join(str(a) for a in self.ainvs).replace("/", "o").replace("-", "m")

    # group law on exact points; None is the point at infinity
    def negate(self, pt):
        if pt is None:
            return None
        x, y = pt
        return (x, -y - self.a1 * x - self.a3)

    def add(self, p1, p2):
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = p1
        x2, y2 = p2
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def multiple(self, k: int, pt):
        if k < 0:
            return self.multiple(-k, self.negate(pt))
        acc = None
        for _ in range(k):
            acc = self.add(acc, pt)
        return acc

    def contains(self, x, y) -> bool:
        a1, a2, a3, a4, a6 = self.ainvs
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6
        X, Y = sympy.sympify(x), sympy.sympify(y)
        A = [sympy.Rational(a.numerator, a.denominator) for a in self.ainvs]
        expr = Y ** 2 + A[0] * X * Y + A[2] * Y - (X ** 3 + A[1] * X ** 2 + A[3] * X + A[4])
        return sympy.simplify(sympy.expand(expr)) == 0


@dataclass(frozen=True)
class RationalPoint:
    """Affine point with exact coordinates (rationals or algebraic surds); None-free."""

    curve: CurveModel
    x: Coord
    y: Coord

    def __post_init__(self) -> None:
        if not self.curve.contains(self.x, self.y):
            raise DomainError(f"({self.x}, {self.y}) is not on {self.curve.label or 'the curve'}")

    def numeric(self, digits: int) -> tuple[mpc, mpc]:
        return _to_mpc(self.x, digits), _to_mpc(self.y, digits)


def _to_mpc(v, digits: int) -> mpc:
    if isinstance(v, Fraction):
        return mpc(mpf(v.numerator) / v.denominator)
    e = sympy.sympify(v).evalf(digits + 5)
    re_, im_ = e.as_real_imag()
    return mpc(mpf(str(sympy.Float(re_, digits + 5))), mpf(str(sympy.Float(im_, digits + 5))))


def congruent_points(d: int) -> dict[str, RationalPoint]:
    """The points P = [d, 0] and the surd point Q of order 4 on E_d."""
    E = CurveModel.congruent(d)
    s2 = sympy.sqrt(2)
    qx = -d * (1 + s2)
    qy = sympy.sqrt(-(6 + 4 * s2) * d ** 3)
    return {"P": RationalPoint(E, Fraction(d), Fraction(0)), "Q": RationalPoint(E, qx, qy)}


# -- periods ---------------------------------------------------------------------

def _right_sqrt(z: mpc) -> mpc:
    r = mpmath.sqrt(z)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def complex_agm(a: mpc, b: mpc, max_iter: int = 200) -> mpc:
    """AGM with the 'right' square root at each step (|a_n - b_n| < |a_n + b_n|)."""
    a, b = mpc(a), mpc(b)
    eps = mpf(2) ** (-mpmath.mp.prec + 4)
    for _ in range(max_iter):
        if abs(a - b) <= eps * abs(a):
            return a
        g = mpmath.sqrt(a * b)
        m = (a + b) / 2
        if abs(m - g) > abs(m + g):
            g = -g
        a, b = m, g
    raise ArithmeticError(f"complex AGM did not converge: a={a}, b={b}")


@dataclass(frozen=True)
class PeriodData:
    omega1: mpc  # basis with tau = omega2 / omega1 in the fundamental domain
    omega2: mpc
    tau: mpc
    real_period: mpf
    roots: tuple[mpc, mpc, mpc]
    b2: Fraction = Fraction(0)

    @property
    def context(self) -> CurveContext:
        return CurveContext(self.tau)


def _cubic_roots(curve: CurveModel) -> list[mpc]:
    # roots of 4x^3 + b2 x^2 + 2 b4 x + b6 (x-coordinates of the 2-torsion)
    coeffs = [4, curve.b2, 2 * curve.b4, curve.b6]
    coeffs = [mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpf(c) for c in coeffs]
    return [mpc(r) for r in mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * mpmath.mp.prec)]


def reduce_basis(w1: mpc, w2: mpc, tie_tol=None) -> tuple[mpc, mpc]:
    """Move tau = w2/w1 into |Re tau| <= 1/2, |tau| >= 1.

    On the unit circle (within ``tie_tol``) the representative with
    Re(tau) <= 0 is kept; for Re(tau) >= 0 the inverse of S is applied once,
    which also fixes the basis choice at tau = i.
    """
    tol = tie_tol if tie_tol is not None else mpf(10) ** (-(mpmath.mp.dps // 2))
    if (w2 / w1).imag < 0:
        w2 = -w2
    for _ in range(1000):
        tau = w2 / w1
        k = int(mpmath.floor(tau.real + mpf(1) / 2))
        if k:
            w2 = w2 - k * w1
            tau = w2 / w1
        if abs(tau) < 1 - tol:
            w1, w2 = w2, -w1
            continue
        if abs(tau) <= 1 + tol and tau.real >= -tol:
            w1, w2 = -w2, w1
        return w1, w2
    raise ArithmeticError("lattice reduction did not terminate")


def period_lattice(curve: CurveModel, prec: PrecisionContext = DEFAULT) -> PeriodData:
    """Periods of dx / (2y + a1 x + a3) via the complex AGM."""
    with prec.working():
        roots = _cubic_roots(curve)
        if curve.discriminant > 0:
            e1, e2, e3 = sorted((r.real for r in roots), reverse=True)
            wr = mpc(prec.pi / complex_agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2)))
            wi = mpc(0, 1) * prec.pi / complex_agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
            roots = (mpc(e1), mpc(e2), mpc(e3))
            real_period = wr.real
        else:
            # one real root e1 and a conjugate pair e2, e3 = conj(e2)
            real = min(roots, key=lambda r: abs(r.imag))
            others = [r for r in roots if r is not real]
            e1 = mpc(real.real)
            e2, e3 = sorted(others, key=lambda r: -r.imag)
            a = _right_sqrt(e1 - e3)
            b = _right_sqrt(e1 - e2)
            w_a = prec.pi / complex_agm(a, b)
            w_b = prec.pi / complex_agm(_right_sqrt(e3 - e1), _right_sqrt(e3 - e2))
            wr, wi = w_a, w_b
            roots = (e1, e2, e3)
            real_period = _real_period(w_a, w_b)
        w1, w2 = reduce_basis(wr, wi)
        return PeriodData(w1, w2, w2 / w1, real_period, tuple(roots), curve.b2)


def _real_period(w_a: mpc, w_b: mpc) -> mpf:
    # smallest positive real lattice vector among small combinations
    best = None
    for m in range(-2, 3):
        for n in range(-2, 3):
            v = m * w_a + n * w_b
            if (m or n) and abs(v.imag) <= abs(v) * mpf(10) ** (-(mpmath.mp.dps // 2)) and v.real > 0:
                if best is None or v.real < best:
                    best = v.real
    if best is None:
        raise ArithmeticError("no real period found")
    return best


# -- Weierstrass functions from q-series ------------------------------------------

def _wp_terms(u: mpc, periods: PeriodData):
    w = periods.omega1
    q = mpmath.exp(2j * mpmath.pi * periods.tau)
    x = mpmath.exp(2j * mpmath.pi * u / w)
    c = (2j * mpmath.pi / w)
    return q, x, c


def weierstrass_p(u, periods: PeriodData) -> mpc:
    """Weierstrass p(u) for the lattice omega1 (Z + Z tau), via its q-expansion."""
    q, x, c = _wp_terms(mpc(u), periods)
    eps = mpf(2) ** (-mpmath.mp.prec)
    total = mpf(1) / 12 + x / (1 - x) ** 2
    qn = mpc(1)
    for n in range(1, 10000):
        qn *= q
        t = qn * x / (1 - qn * x) ** 2 + qn / x / (1 - qn / x) ** 2 - 2 * qn / (1 - qn) ** 2
        total += t
        if abs(t) < eps * abs(total) and abs(qn / x) < mpf(1) / 2:
            break
    return c * c * total


def weierstrass_p_prime(u, periods: PeriodData) -> mpc:
    q, x, c = _wp_terms(mpc(u), periods)
    eps = mpf(2) ** (-mpmath.mp.prec)

    def g(w):
        return w * (1 + w) / (1 - w) ** 3

    total = g(x)
    qn = mpc(1)
    for n in range(1, 10000):
        qn *= q
        t = g(qn * x) - g(qn / x)
        total += t
        if abs(t) < eps * abs(total) and abs(qn / x) < mpf(1) / 2:
            break
    return c ** 3 * total


def x_from_u(u, periods: PeriodData) -> mpc:
    """Model x-coordinate of the point with elliptic logarithm u."""
    b2 = periods.b2
    return weierstrass_p(u, periods) - mpf(b2.numerator) / b2.denominator / 12


def j_from_tau(tau) -> mpc:
    """j(tau) = E4^3 / Delta through q-expansions."""
    q = mpmath.exp(2j * mpmath.pi * mpc(tau))
    eps = mpf(2) ** (-mpmath.mp.prec)
    e4 = mpc(1)
    prod = mpc(1)
    qn = mpc(1)
    for n in range(1, 100000):
        qn *= q
        if abs(qn) < eps:
            break
        e4 += 240 * sympy.divisor_sigma(n, 3) * qn
        prod *= (1 - qn) ** 24
    return e4 ** 3 / (q * prod)


# -- elliptic logarithm -----------------------------------------------------------

def _coordinates(u: mpc, periods: PeriodData) -> tuple[mpf, mpf]:
    z = u / periods.omega1
    tau = periods.tau
    xi = z.imag / tau.imag
    eta = z.real - xi * tau.real
    return xi - mpmath.floor(xi), eta - mpmath.floor(eta)


def _snap(v: mpf, max_den: int = 48, tol=mpf("1e-8")):
    f = Fraction(str(mpmath.nstr(v, 30))).limit_denominator(max_den)
    if abs(mpf(f.numerator) / f.denominator - v) < tol:
        return f
    if abs(v - 1) < tol:
        return Fraction(0)
    return v


def elliptic_log(curve: CurveModel, pt, periods: PeriodData | None = None,
                 prec: PrecisionContext = DEFAULT) -> TorsionPoint:
    """(xi, eta) with u = (xi tau + eta) omega1 mapping to ``pt``; the point at infinity gives (0, 0).

    ``pt`` is a RationalPoint, an exact (x, y) pair or None.  Coordinates within
    1e-8 of a rational with denominator <= 48 are returned exactly.
    """
    if pt is None:
        return TorsionPoint(Fraction(0), Fraction(0))
    if isinstance(pt, RationalPoint):
        x_ex, y_ex = pt.x, pt.y
    else:
        x_ex, y_ex = pt
        if not curve.contains(x_ex, y_ex):
            raise DomainError("point is not on the curve")
    periods = periods or period_lattice(curve, prec)
    with prec.working():
        x = _to_mpc(x_ex, prec.working_digits)
        y = _to_mpc(y_ex, prec.working_digits)
        a1, a3 = (mpf(a.numerator) / a.denominator for a in (curve.a1, curve.a3))
        dy = 2 * y + a1 * x + a3
        e1, e2, e3 = periods.roots
        u = mpmath.elliprf(x - e1, x - e2, x - e3)
        check = abs(x) + 1
        tol = mpf(10) ** (-(prec.working_digits // 2)) * check
        if abs(x_from_u(u, periods) - x) > tol:
            raise ArithmeticError(f"elliptic log round trip failed at x = {x}")
        dp = weierstrass_p_prime(u, periods)
        if abs(dp - dy) > abs(dp + dy):
            u = -u
        if abs(weierstrass_p_prime(u, periods) - dy) > tol * (abs(dy) + 1):
            raise ArithmeticError(f"elliptic log sign check failed at x = {x}")
        xi, eta = _coordinates(u, periods)
        return TorsionPoint(_snap(xi), _snap(eta))


# -- point counts -------------------------------------------------------------------

def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def ap_naive(curve: CurveModel, p: int) -> int:
    """p + 1 - #E(F_p) by enumerating all (x, y) pairs."""
    a = [int(c.numerator * pow(c.denominator, -1, p)) % p for c in curve.ainvs]
    a1, a2, a3, a4, a6 = a
    count = 1
    ys = np.arange(p, dtype=np.int64)
    for x in range(p):
        lhs = (ys * ys + a1 * x * ys + a3 * ys) % p
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        count += int(np.count_nonzero(lhs == rhs))
    return p + 1 - count


def _check_good(curve: CurveModel, p: int) -> None:
    if not curve.is_integral():
        raise DomainError("point counting needs an integral model")
    if p in curve.bad_primes:
        raise DomainError(f"p = {p} is a prime of bad reduction")


def ap_count(curve: CurveModel, p: int) -> int:
    """a_p by direct enumeration (character sums over x for odd p)."""
    if not sympy.isprime(p):
        raise DomainError(f"{p} is not prime")
    _check_good(curve, p)
    if p == 2:
        return ap_naive(curve, 2)
    return int(kernels.ap_batch(int(curve.b2), int(curve.b4), int(curve.b6), [p])[0])


def _cache_path(curve: CurveModel, cache_dir) -> Path | None:
    d = cache_dir or os.environ.get("ELLSYM2_CACHE")
    if not d:
        return None
    return Path(d) / f"ap_{curve.cache_key()}.txt"


def _read_cache(path: Path) -> tuple[int, dict[int, int]]:
    bound = 0
    table: dict[int, int] = {}
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("bound="):
                    bound = int(tok[6:])
            continue
        if line.strip():
            p, a = line.split()
            table[int(p)] = int(a)
    return bound, table


def ap_table(curve: CurveModel, prime_bound: int, cache_dir=None) -> dict[int, int]:
    """a_p for all good primes p <= prime_bound, cached as 'p a_p' lines when a cache dir is set."""
    path = _cache_path(curve, cache_dir)
    if path is not None and path.exists():
        bound, table = _read_cache(path)
        if bound >= prime_bound:
            return {p: a for p, a in table.items() if p <= prime_bound}
    primes = [int(p) for p in _primes_upto(prime_bound) if int(p) not in curve.bad_primes]
    table = {}
    if primes and primes[0] == 2:
        table[2] = ap_naive(curve, 2)
        primes = primes[1:]
    vals = kernels.ap_batch(int(curve.b2), int(curve.b4), int(curve.b6), np.array(primes, dtype=np.int64))
    table.update({p: int(a) for p, a in zip(primes, vals)})
    table = dict(sorted(table.items()))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"# curve={list(map(str, curve.ainvs))} bound={prime_bound}"]
        lines += [f"{p} {a}" for p, a in table.items()]
        path.write_text("\n".join(lines) + "\n")
    return table


# -- symmetric square -----------------------------------------------------------------

@dataclass(frozen=True)
class Sym2Value:
    value: mpf
    drift: mpf  # |L(B) - L(B/10)|
    prime_bound: int


def sym2_l_value_direct(curve: CurveModel, s: int = 3, prime_bound: int = 100000,
                        prec: PrecisionContext = DEFAULT, cache_dir=None) -> Sym2Value:
    """Euler product for L(Sym^2 E, s) over p <= prime_bound.

    Good p: (1 - (a_p^2 - p) p^-s ... ) written as
    (1 - (a_p^2 - 2p) T + p^2 T^2)(1 - p T), T = p^-s.  Multiplicative p: (1 - p^-s).
    Additive p: factor 1.
    """
    if s != 3:
        raise DomainError("sym2_l_value_direct is implemented at s = 3")
    table = ap_table(curve, prime_bound, cache_dir)
    checkpoint = max(2, prime_bound // 10)
    with prec.working():
        log_total = mpf(0)
        log_checkpoint = None
        primes = sorted(set(table) | {p for p in curve.bad_primes if p <= prime_bound})
        for p in primes:
            if log_checkpoint is None and p > checkpoint:
                log_checkpoint = log_total
            T = mpf(p) ** (-s)
            kind = curve.reduction_type(p)
            if kind == "good":
                a = table[p]
                local = (1 - (a * a - 2 * p) * T + p * p * T * T) * (1 - p * T)
            elif kind == "multiplicative":
                local = 1 - T
            else:
                continue
            log_total -= mpmath.log(local)
        if log_checkpoint is None:
            log_checkpoint = log_total
        val = mpmath.exp(log_total)
        drift = abs(val - mpmath.exp(log_checkpoint))
    return Sym2Value(prec.round(val), drift, prime_bound)


# -- the conductor-37 identity ---------------------------------------------------------

ETA4 = {4: 3, 3: -13, 2: 18, 1: -3, 0: -5}
ETA6 = {6: 2, 3: -45, 2: 60, 1: 93, 0: -110}


def multiples_divisor(curve: CurveModel, base, mults: dict[int, int], periods: PeriodData,
                      prec: PrecisionContext = DEFAULT) -> Divisor:
    """sum c_k (kP) as a divisor on C / (Z + Z tau)."""
    terms = []
    for k, c in mults.items():
        pt = curve.multiple(k, base) if k else None
        terms.append((c, elliptic_log(curve, pt, periods, prec)))
    return Divisor(terms)


def verify_zagier37(prime_bound: int = 100000, prec: PrecisionContext = DEFAULT,
                    cache_dir=None, tol=mpf("1e-3")) -> VerificationReport:
    """Reg3(eta4, eta6) against -(37^3/4) Im(tau)^2 L(Sym^2 E, 3); conjectural identity."""
    E = CurveModel.conductor37()
    with stopwatch() as ms:
        periods = period_lattice(E, prec)
        ctx = periods.context
        base = (Fraction(0), Fraction(0))
        eta4 = multiples_divisor(E, base, ETA4, periods, prec)
        eta6 = multiples_divisor(E, base, ETA6, periods, prec)
        with prec.working():
            a4 = eval_divisor(l31_qseries, eta4, ctx, prec=prec)
            b4 = eval_divisor(l32_qseries, eta4, ctx, prec=prec)
            a6 = eval_divisor(l31_qseries, eta6, ctx, prec=prec)
            b6 = eval_divisor(l32_qseries, eta6, ctx, prec=prec)
            reg = a4 * b6 - a6 * b4
            lsym = sym2_l_value_direct(E, 3, prime_bound, prec, cache_dir)
            rhs = -mpf(37) ** 3 / 4 * ctx.im_tau ** 2 * lsym.value
            ratio = reg / rhs
        elapsed = ms()
    return VerificationReport.compare(
        "zagier37", ratio, 1, tol, digits=prec.digits,
        params={"conjectural": True, "reg3": mpmath.nstr(reg, 15), "rhs": mpmath.nstr(rhs, 15),
                "tau": mpmath.nstr(ctx.tau, 15), "prime_bound": prime_bound,
                "l_sym2": mpmath.nstr(lsym.value, 15), "drift": mpmath.nstr(lsym.drift, 3)},
        runtime_ms=elapsed)
