"""Precision contract, cached constants and deterministic summation.

All arbitrary-precision values are :class:`mpmath.mpf` / :class:`mpmath.mpc`.
Work happens at ``digits + guard_digits`` decimal digits; public results are
rounded back to ``digits``.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf

RealAP = mpf
ComplexAP = mpmath.mpc

BITS_PER_DIGIT = math.log2(10)


class DomainError(ValueError):
    """Argument outside the domain of a function."""


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 20
    guard_digits: int = 10

    def __post_init__(self) -> None:
        if self.digits < 15:
            raise ValueError(f"digits must be >= 15, got {self.digits}")
        if self.guard_digits < 10:
            raise ValueError(f"guard_digits must be >= 10, got {self.guard_digits}")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard_digits

    @property
    def tol(self) -> mpf:
        return mpf(10) ** (-self.digits)

    def working(self) -> contextlib.AbstractContextManager:
        """Raise mpmath's precision to the working precision (never lower it)."""
        return mp.workdps(max(self.working_digits, mp.dps))

    def round(self, x):
        """Round a value to ``digits`` significant decimal digits."""
        bits = int(math.ceil(self.digits * BITS_PER_DIGIT)) + 4
        with mp.workprec(bits):
            return +x

    @property
    def pi(self) -> mpf:
        return _pi_machin(self.working_digits)


DEFAULT = PrecisionContext()


# -- pi ---------------------------------------------------------------------

def _arctan_inv(x: int, one: int) -> int:
    """arctan(1/x) * one in fixed point."""
    total = term = one // x
    x2 = x * x
    k = 1
    sign = -1
    while term:
        term //= x2
        total += sign * (term // (2 * k + 1))
        sign = -sign
        k += 1
    return total


@lru_cache(maxsize=None)
def _pi_machin(digits: int) -> mpf:
    # pi/4 = 4 arctan(1/5) - arctan(1/239)
    guard = 20
    one = 10 ** (digits + guard)
    val = 4 * (4 * _arctan_inv(5, one) - _arctan_inv(239, one))
    with mp.workdps(digits + 5):
        return mpf(val) / one


@lru_cache(maxsize=None)
def _pi_gauss(digits: int) -> mpf:
    # pi/4 = 12 arctan(1/18) + 8 arctan(1/57) - 5 arctan(1/239)
    guard = 20
    one = 10 ** (digits + guard)
    val = 4 * (12 * _arctan_inv(18, one) + 8 * _arctan_inv(57, one) - 5 * _arctan_inv(239, one))
    with mp.workdps(digits + 5):
        return mpf(val) / one


def const_pi(prec: PrecisionContext = DEFAULT) -> mpf:
    return prec.round(_pi_machin(prec.working_digits))


# -- Bernoulli numbers --------------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        # sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
        acc = Fraction(0)
        c = 1
        for k in range(m):
            acc += c * _BERNOULLI[k]
            c = c * (m + 1 - k) // (k + 1)
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


# -- zeta and beta ----------------------------------------------------------

def _hurwitz_em(s: int, a: mpf, eps: mpf, n_direct: int) -> mpf:
    """zeta(s, a) for integer s >= 2 via Euler-Maclaurin at cutoff N = n_direct."""
    N = n_direct
    total = mpf(0)
    for k in range(N):
        total += (k + a) ** (-s)
    x = N + a
    total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
    # sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    rising = mpf(s)  # s(s+1)...(s+2j-2) for j = 1
    fact = mpf(2)
    xpow = x ** (-s - 1)
    j = 1
    while True:
        b = bernoulli(2 * j)
        term = mpf(b.numerator) / b.denominator / fact * rising * xpow
        total += term
        if abs(term) < eps:
            break
        if j > 4 * N:
            raise ArithmeticError("Euler-Maclaurin tail did not converge")
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        xpow /= x * x
        j += 1
    return total


@lru_cache(maxsize=None)
def _zeta_cached(m: int, digits: int) -> mpf:
    with mp.workdps(digits + 5):
        eps = mpf(10) ** (-digits - 3)
        return _hurwitz_em(m, mpf(1), eps, n_direct=max(12, digits // 2 + 5))


def zeta_int(m: int, prec: PrecisionContext = DEFAULT) -> mpf:
    if m < 2:
        raise DomainError(f"zeta_int needs m >= 2, got {m}")
    return prec.round(_zeta_cached(m, prec.working_digits))


def hurwitz_zeta(m: int, a, prec: PrecisionContext = DEFAULT) -> mpf:
    """zeta(m, a) = sum_{k>=0} (k + a)^-m for integer m >= 2 and a > 0."""
    if m < 2:
        raise DomainError(f"hurwitz_zeta needs m >= 2, got {m}")
    with prec.working():
        eps = mpf(10) ** (-prec.working_digits)
        val = _hurwitz_em(m, mpf(a), eps, n_direct=max(12, prec.working_digits // 2 + 5))
    return prec.round(val)


def _cvz_alternating(terms, n: int) -> mpf:
    """Cohen-Villegas-Zagier acceleration of sum_{k>=0} (-1)^k a_k."""
    d = (3 + mpmath.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mpf(-1)
    c = -d
    s = mpf(0)
    for k in range(n):
        c = b - c
        s += c * terms(k)
        b = b * (k + n) * (k - n) / ((k + mpf(1) / 2) * (k + 1))
    return s / d


@lru_cache(maxsize=None)
def _beta_cached(m: int, digits: int) -> mpf:
    with mp.workdps(digits + 10):
        n = int(digits * 1.31) + 10
        return _cvz_alternating(lambda k: mpf(2 * k + 1) ** (-m), n)


def dirichlet_beta(m: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """beta(m) = sum_{k>=0} (-1)^k / (2k+1)^m."""
    if m < 1:
        raise DomainError(f"dirichlet_beta needs m >= 1, got {m}")
    return prec.round(_beta_cached(m, prec.working_digits))


def dirichlet_beta_hurwitz(m: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """Second route: beta(m) = 4^-m (zeta(m, 1/4) - zeta(m, 3/4)), m >= 2."""
    with prec.working():
        val = (hurwitz_zeta(m, mpf(1) / 4, prec) - hurwitz_zeta(m, mpf(3) / 4, prec)) / mpf(4) ** m
    return prec.round(val)


# -- compensated summation --------------------------------------------------

def _neumaier(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


def compensated_sum(terms: Iterable | Sequence, block: int = 4096):
    """Neumaier sum over fixed-size contiguous blocks, blocks merged in order.

    Works for floats, numpy arrays (compiled fast path) and mpf values.  The
    result depends only on the sequence order and ``block``.
    """
    try:
        import numpy as np
        if isinstance(terms, np.ndarray) and terms.dtype.kind == "f":
            from . import kernels
            return kernels.neumaier_blocks(terms, block)
    except ImportError:  # pragma: no cover
        pass
    total = comp = 0
    s = c = 0
    count = 0
    for x in terms:
        s, c = _neumaier(s, c, x)
        count += 1
        if count == block:
            total, comp = _neumaier(total, comp, s)
            total, comp = _neumaier(total, comp, c)
            s = c = 0
            count = 0
    if count:
        total, comp = _neumaier(total, comp, s)
        total, comp = _neumaier(total, comp, c)
    return total + comp
