"""Li_1, Li_2, Li_3 on the closed unit disk and their single-valued combinations.

Evaluation routes for ``Li_m(z)``:

* exact closed forms at ``z in {1, -1, i, -i}``;
* the defining power series for ``|z| < 0.9``;
* for ``0.9 <= |z| <= 1`` the expansion in ``w = log z`` about ``z = 1``,
  which converges for ``|w| < 2 pi``.
"""
from __future__ import annotations

import mpmath
from mpmath import mpc, mpf

from .precision import (
    DEFAULT,
    DomainError,
    PrecisionContext,
    _beta_cached,
    _zeta_cached,
    bernoulli,
)

INTERIOR_RADIUS = mpf("0.9")
_I = mpc(0, 1)


def _zeta_at(k: int, digits: int) -> mpf:
    """zeta(k) for any integer k != 1 (negative values through Bernoulli numbers)."""
    if k >= 2:
        return _zeta_cached(k, digits)
    if k == 0:
        return mpf(-1) / 2
    n = -k
    b = bernoulli(n + 1)
    return -mpf(b.numerator) / b.denominator / (n + 1)


def _closed_form(m: int, z: mpc, digits: int):
    # z is exactly one of 1, -1, i, -i
    log2 = mpmath.log(2)
    if z == 1:
        return mpc(_zeta_cached(m, digits))
    alt = -log2 if m == 1 else -(1 - mpf(2) ** (1 - m)) * _zeta_cached(m, digits)  # Li_m(-1)
    if z == -1:
        return mpc(alt)
    re_part = alt / mpf(2) ** m
    im_part = _beta_cached(m, digits)
    return mpc(re_part, im_part if z.imag > 0 else -im_part)


def _li_series(m: int, z: mpc, eps: mpf) -> mpc:
    az = abs(z)
    total = mpc(0)
    zn = mpc(1)
    n = 1
    while True:
        zn *= z
        term = zn / mpf(n) ** m
        total += term
        # geometric tail after this term
        if abs(term) * az / (1 - az) < eps:
            return total
        n += 1


def _li_log_expansion(m: int, z: mpc, digits: int, eps: mpf) -> mpc:
    """Li_m(z) = sum_{k != m-1} zeta(m-k) w^k/k! + w^(m-1)/(m-1)! (H_{m-1} - log(-w))."""
    w = mpmath.log(z)
    aw = abs(w)
    harmonic = sum((mpf(1) / j for j in range(1, m)), mpf(0))
    total = mpc(0)
    wk = mpc(1)
    fact = mpf(1)
    k = 0
    small = 0
    while True:
        if k == m - 1:
            total += wk / fact * (harmonic - mpmath.log(-w))
        else:
            zk = _zeta_at(m - k, digits)
            term = zk * wk / fact
            total += term
            if k > m and zk != 0:
                # |zeta(-n)| w^n/n! ~ 2 (|w| / 2pi)^(n+1); stop after two small terms
                if abs(term) < eps:
                    small += 1
                    if small >= 2:
                        return total
                else:
                    small = 0
        k += 1
        wk *= w
        fact *= k
        if k > 20 * digits + 200:
            raise ArithmeticError(f"log expansion of Li_{m} did not converge at |w|={aw}")


def _li(m: int, z: mpc, digits: int) -> mpc:
    """Li_m(z) at the current mpmath precision; |z| <= 1 assumed."""
    eps = mpf(10) ** (-digits)
    if m == 1:
        return -mpmath.log(1 - z)
    if z in (1, -1, _I, -_I):
        return _closed_form(m, z, digits)
    if abs(z) < INTERIOR_RADIUS:
        return _li_series(m, z, eps)
    return _li_log_expansion(m, z, digits, eps)


def li(m: int, z, prec: PrecisionContext = DEFAULT) -> mpc:
    """Classical polylogarithm Li_m(z) for m in {1, 2, 3} and |z| <= 1."""
    if m not in (1, 2, 3):
        raise DomainError(f"li supports m in {{1, 2, 3}}, got {m}")
    with prec.working():
        z = mpc(z)
        if abs(z) > 1 + prec.tol:
            raise DomainError(f"|z| = {abs(z)} > 1")
        if m == 1 and z == 1:
            raise DomainError("Li_1 diverges at z = 1")
        val = _li(m, z, prec.working_digits)
    return prec.round(val)


def _sv_trilog(z: mpc, digits: int) -> mpf:
    if abs(z) > 1:
        z = 1 / z
    if z == 1:
        return _zeta_cached(3, digits)
    a = mpmath.log(abs(z))
    if a == 0:
        return _li(3, z, digits).real
    val = _li(3, z, digits) - a * _li(2, z, digits) + a * a / 3 * _li(1, z, digits)
    return val.real


def sv_trilog(z, prec: PrecisionContext = DEFAULT) -> mpf:
    """Single-valued trilogarithm Re(Li3 - log|z| Li2 + log^2|z| Li1 / 3).

    Arguments outside the unit disk use the inversion symmetry
    ``sv_trilog(z) == sv_trilog(1/z)``.
    """
    with prec.working():
        z = mpc(z)
        if z == 0:
            raise DomainError("sv_trilog undefined at 0")
        val = _sv_trilog(z, prec.working_digits)
    return prec.round(val)


def _bloch_wigner(z: mpc, digits: int) -> mpf:
    if z == 0 or z == 1:
        return mpf(0)
    if abs(z) > 1:
        return -_bloch_wigner(1 / z, digits)
    if z.imag == 0 and z.real < 1:
        return mpf(0)
    a = mpmath.log(abs(z))
    return _li(2, z, digits).imag + a * mpmath.arg(1 - z)


def bloch_wigner(z, prec: PrecisionContext = DEFAULT) -> mpf:
    """Bloch-Wigner dilogarithm Im(Li2(z)) + log|z| arg(1 - z); 0 at z in {0, 1}."""
    with prec.working():
        val = _bloch_wigner(mpc(z), prec.working_digits)
    return prec.round(val)


def _log_abs(z) -> mpf:
    return mpmath.log(abs(z))


def _j_weight(z: mpc) -> mpf:
    a = _log_abs(z)
    if a == 0:
        return mpf(0)
    return a * _log_abs(1 - z)


def _j3_weight(z: mpc) -> mpf:
    a = _log_abs(z)
    if a == 0:
        return mpf(0)
    return a * a * _log_abs(1 - z)


def j_weight(z, prec: PrecisionContext = DEFAULT) -> mpf:
    """log|z| log|1 - z|, defined as 0 wherever log|z| vanishes."""
    with prec.working():
        val = _j_weight(mpc(z))
    return prec.round(val)


def j3_weight(z, prec: PrecisionContext = DEFAULT) -> mpf:
    """log^2|z| log|1 - z|, defined as 0 wherever log|z| vanishes."""
    with prec.working():
        val = _j3_weight(mpc(z))
    return prec.round(val)


def bernoulli_b3(x):
    """Third Bernoulli polynomial x^3 - 3x^2/2 + x/2 (exact for Fractions)."""
    return x ** 3 - 3 * x ** 2 / 2 + x / 2
