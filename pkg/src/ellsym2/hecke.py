"""Hecke character on Z[i], the forms f (weight 2) and g (weight 3), and their L-values."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .lattice import LatticeSumSpec, LatticeValue, evaluate
from .precision import DEFAULT, DomainError, PrecisionContext, _pi_machin, dirichlet_beta

LEVEL_G = 16
WEIGHT_G = 3
SQRT_LEVEL_G = 4
SPLIT_POINTS = (mpf(1), mpf(5) / 4)


class FunctionalEquationError(ArithmeticError):
    """The root number could not be determined consistently."""


def chi4(n: int) -> int:
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


@dataclass(frozen=True)
class GaussianIdealRep:
    """Generator m + n i of an ideal prime to 2, normalized to m > 0 odd, n even."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m <= 0 or self.m % 2 == 0:
            raise DomainError(f"m must be odd and positive, got {self.m}")
        if self.n % 2:
            raise DomainError(f"n must be even, got {self.n}")

    @property
    def norm(self) -> int:
        return self.m * self.m + self.n * self.n


def phi_value(rep: GaussianIdealRep) -> tuple[int, int]:
    """chi_-4(m) (m + n i), as an exact (real, imag) pair."""
    c = chi4(rep.m)
    return c * rep.m, c * rep.n


def _gauss_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


@dataclass(frozen=True)
class QExpansion:
    coeffs: tuple[int, ...]  # a_1 .. a_N
    weight: int
    level: int
    name: str = ""

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> int:
        if k < 1 or k > self.N:
            raise IndexError(k)
        return self.coeffs[k - 1]

    def to_text(self) -> str:
        lines = [f"# form={self.name} weight={self.weight} level={self.level} N={self.N}"]
        lines += [f"{k} {a}" for k, a in enumerate(self.coeffs, 1)]
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "QExpansion":
        header = None
        coeffs: dict[int, int] = {}
        for line in io.StringIO(text):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                header = dict(tok.split("=", 1) for tok in line[1:].split())
                continue
            k, a = line.split()
            coeffs[int(k)] = int(a)
        if header is None:
            raise ValueError("missing header line")
        N = int(header["N"])
        if sorted(coeffs) != list(range(1, N + 1)):
            raise ValueError("coefficient table must list k = 1..N exactly once")
        return cls(tuple(coeffs[k] for k in range(1, N + 1)), int(header["weight"]),
                   int(header["level"]), header.get("form", ""))

    @classmethod
    def read(cls, path) -> "QExpansion":
        return cls.from_text(Path(path).read_text())


def _accumulate(N: int, weight_fn, m_values) -> np.ndarray:
    acc = np.zeros(N + 1, dtype=np.int64)
    nmax = math.isqrt(N // 4) + 1
    n = np.arange(-nmax, nmax + 1, dtype=np.int64)
    for m in m_values:
        k = m * m + 4 * n * n
        ok = (k >= 1) & (k <= N)
        np.add.at(acc, k[ok], weight_fn(m, n[ok]))
    return acc


@lru_cache(maxsize=8)
def _f_coeffs(N: int) -> tuple[int, ...]:
    mmax = math.isqrt(N)
    acc = _accumulate(N, lambda m, n: np.full(n.shape, chi4(m) * m, dtype=np.int64),
                      range(1, mmax + 1, 2))
    return tuple(int(a) for a in acc[1:])


@lru_cache(maxsize=8)
def _g_coeffs(N: int) -> tuple[int, ...]:
    mmax = math.isqrt(N)
    acc = _accumulate(N, lambda m, n: m * m - 4 * n * n, range(-mmax, mmax + 1))
    if np.any(acc % 2):
        raise ArithmeticError("odd representation sum for g")
    return tuple(int(a) for a in acc[1:] // 2)


def f_qexp(N: int) -> QExpansion:
    """f = sum over m odd > 0, n in Z of chi_-4(m) m q^{m^2 + 4 n^2}."""
    if N < 1:
        raise DomainError("N must be positive")
    return QExpansion(_f_coeffs(N), 2, 64, "f")


def g_qexp(N: int) -> QExpansion:
    """a_k = 1/2 sum over (m, n) in Z^2 with m^2 + 4 n^2 = k of (m^2 - 4 n^2)."""
    if N < 1:
        raise DomainError("N must be positive")
    return QExpansion(_g_coeffs(N), WEIGHT_G, LEVEL_G, "g")


def ideal_reps(N: int):
    """All GaussianIdealRep with norm <= N."""
    for m in range(1, math.isqrt(N) + 1, 2):
        nmax = math.isqrt(N - m * m)
        for n in range(-(nmax - nmax % 2), nmax + 1, 2):
            yield GaussianIdealRep(m, n)


def _ideal_sum(N: int, power: int) -> list[int]:
    acc = [(0, 0)] * (N + 1)
    for rep in ideal_reps(N):
        v = phi_value(rep)
        w = v
        for _ in range(power - 1):
            w = _gauss_mul(w, v)
        k = rep.norm
        acc[k] = (acc[k][0] + w[0], acc[k][1] + w[1])
    if any(im for _, im in acc):
        raise ArithmeticError("imaginary parts did not cancel")
    return [re for re, _ in acc[1:]]


def f_qexp_ideal(N: int) -> QExpansion:
    """Second route for f: sum of phi over ideals prime to 2, by norm."""
    return QExpansion(tuple(_ideal_sum(N, 1)), 2, 64, "f")


def g_qexp_ideal(N: int) -> QExpansion:
    """Second route for g: sum of phi^2 over ideals prime to 2, by norm.

    phi^2 has conductor (2); the prime above 2 contributes nothing because the
    coefficients of g vanish at even k.
    """
    return QExpansion(tuple(_ideal_sum(N, 2)), WEIGHT_G, LEVEL_G, "g")


# -- L-values -----------------------------------------------------------------

def l_chi4(t: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """L(chi_-4, t) = beta(t)."""
    if t < 1:
        raise DomainError(f"l_chi4 needs t >= 1, got {t}")
    return dirichlet_beta(t, prec)


def _upper_gamma(s: int, x: mpf) -> mpf:
    """Gamma(s, x) for integer s >= 0."""
    if s == 0:
        # no finite elementary form; exponential integral
        return mpmath.e1(x)
    if s < 0:
        raise DomainError("negative order")
    term = mpf(1)
    total = mpf(1)
    for k in range(1, s):
        term = term * x / k
        total += term
    return math.factorial(s - 1) * mpmath.exp(-x) * total


def _lambda_g(s: int, eps: int, split: mpf, coeffs: Sequence[int], digits: int) -> mpf:
    """Smoothed completed L-function of g at the split point ``split``."""
    pi = _pi_machin(digits)
    c = 2 * pi / SQRT_LEVEL_G
    total = mpf(0)
    for n, a in enumerate(coeffs, 1):
        if a == 0:
            continue
        x = c * n
        total += a * (x ** (-s) * _upper_gamma(s, x * split)
                      + eps * x ** (s - WEIGHT_G) * _upper_gamma(WEIGHT_G - s, x / split))
    return total


def _terms_needed(digits: int) -> int:
    # both incomplete gammas decay like exp(-2 pi n min(A, 1/A) / 4)
    amin = min(min(a, 1 / a) for a in SPLIT_POINTS)
    x_needed = (digits + 5) * math.log(10) + 10
    return int(math.ceil(x_needed * SQRT_LEVEL_G / (2 * math.pi * float(amin)))) + 5


@dataclass(frozen=True)
class LgResult:
    value: mpf
    root_number: int
    consistency: mpf  # |Lambda(A1) - Lambda(A2)| for the selected sign
    terms: int
    derived: bool = True  # the root number is derived numerically, not taken from a source


@lru_cache(maxsize=32)
def _lg_cached(s: int, digits: int) -> LgResult:
    with mpmath.workdps(digits + 5):
        n_terms = _terms_needed(digits)
        coeffs = _g_coeffs(n_terms)
        spread = {}
        vals = {}
        for eps in (1, -1):
            v = [_lambda_g(s, eps, a, coeffs, digits) for a in SPLIT_POINTS]
            spread[eps] = abs(v[0] - v[1])
            vals[eps] = v[0]
        thresh = mpf(10) ** (-(digits // 2))
        good = [e for e in (1, -1) if spread[e] <= thresh * max(1, abs(vals[e]))]
        if len(good) != 1:
            raise FunctionalEquationError(
                f"root number undetermined at s={s}: spreads {spread[1]}, {spread[-1]}")
        eps = good[0]
        pi = _pi_machin(digits)
        value = vals[eps] * (2 * pi / SQRT_LEVEL_G) ** s / mpmath.factorial(s - 1)
        return LgResult(value, eps, spread[eps], n_terms)


def l_g_details(s: int, prec: PrecisionContext = DEFAULT) -> LgResult:
    if s not in (2, 3):
        raise DomainError(f"l_g supports s in {{2, 3}}, got {s}")
    r = _lg_cached(s, prec.working_digits)
    return LgResult(prec.round(r.value), r.root_number, r.consistency, r.terms, r.derived)


def l_g(s: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """L(g, s) via the incomplete-gamma smoothed functional equation."""
    return l_g_details(s, prec).value


def l_sym2(s: int = 3, prec: PrecisionContext = DEFAULT) -> mpf:
    """L(Sym^2 E, s) = L(g, s) L(chi_-4, s - 1) for the congruent number curves."""
    if s != 3:
        raise DomainError(f"l_sym2 is implemented at s = 3 only, got {s}")
    with prec.working():
        val = l_g(3, prec) * l_chi4(2, prec)
    return prec.round(val)


def l_g_dirichlet(s: int, N: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """Truncated Dirichlet series sum_{k <= N} a_k k^-s (slow oracle)."""
    coeffs = _g_coeffs(N)
    with prec.working():
        total = mpf(0)
        for k, a in enumerate(coeffs, 1):
            if a:
                total += mpf(a) / mpf(k) ** s
    return prec.round(total)


LG_LATTICE_FORMS = {
    # name: (weight, mask, form_c, multiplier)
    "m2-4n2": ("m2-4n2", "all", 4, Fraction(1, 2)),
    "n_even": ("m2-n2", "n_even", 1, Fraction(1, 2)),
    "m_odd_n_even": ("m2-n2", "m_odd_n_even", 1, Fraction(1, 2)),
}


def l_g_lattice(form: str, s: int = 3, radius: int = 2000,
                prec: PrecisionContext = DEFAULT) -> LatticeValue:
    """L(g, s) from one of its lattice-sum representations."""
    weight, mask, c, mult = LG_LATTICE_FORMS[form]
    with prec.working():
        v = evaluate(LatticeSumSpec(weight=weight, mask=mask, form_c=c, s=s, radius=radius), prec)
        return (mpf(mult.numerator) / mult.denominator) * v


# -- functional equation --------------------------------------------------------

@dataclass(frozen=True)
class FEFactor:
    """kappa(C) = coeff * C_root^{...} / pi^4, kept exact when C is a square.

    ``rational`` is kappa(C) * pi^4 as a Fraction when C is a perfect square,
    otherwise None and only ``value`` is meaningful.
    """

    C: int
    rational: Fraction | None
    value: mpf


def fe_conversion_factor(C: int, prec: PrecisionContext = DEFAULT) -> FEFactor:
    """kappa(C) with L''(Sym^2, 0) = kappa(C) L(Sym^2, 3) = C^{3/2} / (8 pi^4) L(Sym^2, 3).

    Lambda(s) = C^{s/2} pi^{-s/2} Gamma(s/2) (2 pi)^{-s} Gamma(s) L(s) and
    Lambda(0) = Lambda(3).  Near s = 0, Gamma(s/2) Gamma(s) ~ 2/s^2, so the
    double zero of L gives Lambda(0) = L''(0); at s = 3 the gamma factors give
    C^{3/2} pi^{-3/2} (sqrt(pi)/2) (2 pi)^{-3} 2 = C^{3/2} / (8 pi^4).
    """
    if C < 1:
        raise DomainError("C must be a positive integer")
    r = math.isqrt(C)
    rational = Fraction(C * r, 8) if r * r == C else None
    with prec.working():
        val = mpf(C) ** (mpf(3) / 2) / (8 * prec.pi ** 4)
    return FEFactor(C, rational, prec.round(val))


def fe_conversion_oracle(C: int, prec: PrecisionContext = DEFAULT) -> mpf:
    """kappa(C) from the gamma factors directly: ratio of the completed-L prefactors.

    Uses the limit of s^2 * Gamma(s/2) Gamma(s) / 2 at s -> 0 (which is 1)
    numerically, independent of the closed form above.
    """
    wd = prec.working_digits
    with mpmath.workdps(3 * wd):
        pi = _pi_machin(3 * wd)

        def prefactor(s):
            return mpf(C) ** (s / 2) * pi ** (-s / 2) * mpmath.gamma(s / 2) * (2 * pi) ** (-s) * mpmath.gamma(s)

        # s^2 Gamma(s/2) Gamma(s) / 2 = 1 + O(s); a step of 10^-wd leaves O(10^-wd)
        h = mpf(10) ** (-wd - 2)
        near_zero = prefactor(h) * h * h / 2
        val = prefactor(mpf(3)) / near_zero
    return prec.round(val)
