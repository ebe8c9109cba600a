"""Restricted Epstein-type lattice sums over expanding squares.

Sums run over shells ``max(|m|, |n|) = k`` for ``k = 1..radius``.  The hot
loop lives in :mod:`ellsym2.kernels`; this module converts per-shell double
sums to mpf in shell order and attaches an analytic tail bound.

Tail bounds come from comparing shell ``k`` (exactly ``8k`` points, each term
at most ``A k^-p``) with ``int_R^oo 8 A x^(1-p) dx``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, sqrt

import mpmath
import numpy as np
from mpmath import mpc, mpf

from . import kernels
from .precision import DEFAULT, DomainError, PrecisionContext, dirichlet_beta, zeta_int
from .report import VerificationReport, stopwatch

WEIGHTS = {"1": (0, 0), "m2": (1, 2), "n2": (2, 2), "m2-n2": (3, 2), "m2-4n2": (4, 2)}
MASKS = {
    "all": 0,
    "m_even": 1,
    "n_even": 2,
    "both_even": 3,
    "m_odd": 4,
    "sign_m": 5,
    "sign_n": 6,
    "sign_diff": 7,
    "m_odd_n_even": 8,
    "m_even_n_odd": 9,
}


@dataclass(frozen=True)
class LatticeValue:
    """A truncated lattice sum and a bound on the omitted tail (None if unknown)."""

    value: mpf | mpc
    tail_bound: mpf | None
    radius: int = 0

    def __add__(self, other: "LatticeValue") -> "LatticeValue":
        if isinstance(other, (int, float)) and other == 0:
            return self
        bound = None if self.tail_bound is None or other.tail_bound is None \
            else self.tail_bound + other.tail_bound
        return LatticeValue(self.value + other.value, bound, max(self.radius, other.radius))

    __radd__ = __add__

    def __rmul__(self, c) -> "LatticeValue":
        bound = None if self.tail_bound is None else abs(c) * self.tail_bound
        return LatticeValue(c * self.value, bound, self.radius)

    __mul__ = __rmul__

    def __neg__(self) -> "LatticeValue":
        return (-1) * self


@dataclass(frozen=True)
class LatticeSumSpec:
    weight: str = "1"
    mask: str = "all"
    form_c: int = 1
    s: float = 2.0
    radius: int = 2000

    def __post_init__(self) -> None:
        if self.weight not in WEIGHTS:
            raise DomainError(f"unknown weight {self.weight!r}")
        if self.mask not in MASKS:
            raise DomainError(f"unknown mask {self.mask!r}")
        if self.form_c not in (1, 4):
            raise DomainError(f"form_c must be 1 or 4, got {self.form_c}")
        if self.radius < 1:
            raise DomainError("radius must be positive")
        if 2 * self.s - self.degree <= 2:
            raise DomainError(f"divergent lattice sum: 2s - deg = {2 * self.s - self.degree} <= 2")

    @property
    def degree(self) -> int:
        return WEIGHTS[self.weight][1]

    def tail_bound(self, radius: int | None = None) -> mpf:
        R = self.radius if radius is None else radius
        amp = 4 if (self.weight == "m2-4n2" and self.form_c == 1) else 1
        if self.mask == "sign_diff":
            amp *= 2
        p = 2 * mpf(self.s) - self.degree
        return 8 * amp * mpf(R) ** (2 - p) / (p - 2)


def _collect(sums: np.ndarray, comps: np.ndarray) -> list[mpf]:
    # per-shell mpf values, shell order
    return [mpf(float(s)) + mpf(float(c)) for s, c in zip(sums, comps)]


def shell_values(spec: LatticeSumSpec) -> list[mpf]:
    w = WEIGHTS[spec.weight][0]
    sums, comps = kernels.epstein_shells(w, MASKS[spec.mask], spec.form_c, spec.s, spec.radius)
    return _collect(sums, comps)


def evaluate(spec: LatticeSumSpec, prec: PrecisionContext = DEFAULT) -> LatticeValue:
    """Sum' mask * weight / (m^2 + c n^2)^s over the square of the given radius."""
    with prec.working():
        total = mpf(0)
        for v in shell_values(spec):
            total += v
        return LatticeValue(total, spec.tail_bound(), spec.radius)


def partial_sums(spec: LatticeSumSpec, prec: PrecisionContext = DEFAULT) -> list[mpf]:
    """Cumulative values at every radius 0..spec.radius."""
    out = []
    with prec.working():
        total = mpf(0)
        for v in shell_values(spec):
            total += v
            out.append(total)
    return out


# -- phased sums over the lattice Z tau + Z --------------------------------

def _phase_numerators(xi, eta) -> tuple[int, int, int]:
    xi, eta = Fraction(xi), Fraction(eta)
    den = xi.denominator * eta.denominator // gcd(xi.denominator, eta.denominator)
    return den, int(xi * den) % den, int(eta * den) % den


def _lambda_min(tau: complex) -> float:
    # smallest eigenvalue of the form |m tau + n|^2 = |tau|^2 m^2 + 2 Re(tau) m n + n^2
    tr = abs(tau) ** 2 + 1
    det = tau.imag ** 2
    return (tr - sqrt(max(tr * tr - 4 * det, 0.0))) / 2


def ek_shell_values(tau, a: int, b: int, e: int, xi, eta, radius: int,
                    mask: str = "all") -> list[mpc]:
    """Per-shell complex values of the phased sum, shell order 1..radius."""
    try:
        den, xa, eb = _phase_numerators(xi, eta)
    except (TypeError, ValueError):
        raise DomainError("lattice routes need rational (xi, eta)") from None
    tau_c = complex(tau)
    sr, cr, si, ci = kernels.ek_shells(tau_c.real, tau_c.imag, a, b, e, den, xa, eb, radius,
                                       MASKS[mask])
    return [mpc(r, i) for r, i in zip(_collect(sr, cr), _collect(si, ci))]


def ek_tail_bound(tau, a: int, b: int, e: int, radius: int, mask: str = "all") -> mpf | None:
    p = a + b - e
    if p <= 2:
        return None
    lam = mpf(_lambda_min(complex(tau)))
    bound = 8 * lam ** (-mpf(a + b) / 2) * mpf(radius) ** (2 - p) / (p - 2)
    return 2 * bound if mask == "sign_diff" else bound


def ek_sum(tau, a: int, b: int, e: int, xi, eta, radius: int, mask: str = "all",
           prec: PrecisionContext = DEFAULT) -> LatticeValue:
    """Sum' e^{2 pi i (n xi - m eta)} m^e / ((m tau + n)^a (m conj(tau) + n)^b).

    ``xi`` and ``eta`` must be exact rationals.  The tail bound is ``None``
    when ``a + b - e <= 2`` (not absolutely convergent).
    """
    with prec.working():
        shells = ek_shell_values(tau, a, b, e, xi, eta, radius, mask)
        val = mpc(0)
        for v in shells:
            val += v
        bound = ek_tail_bound(tau, a, b, e, radius, mask)
    return LatticeValue(val, bound, radius)


# -- identity checks ----------------------------------------------------------

def _spec(weight, mask, s, radius, c=1):
    return LatticeSumSpec(weight=weight, mask=mask, form_c=c, s=s, radius=radius)


def verify_e1_e2(radius: int = 2000, prec: PrecisionContext = DEFAULT) -> list[VerificationReport]:
    """The two parity-split rearrangements used for the (Q)+(P+Q) identity.

    E1: S'_{m,n even} 1/r^4 + S'_{m even} 1/r^4 = 1/2 S' 1/r^4 = S' m^2/r^6
    E2: S'_{m,n even} 1/r^4 + S'_{m even} n^2/r^6 = S'_{m odd} m^2/r^6
    """
    reports = []
    with prec.working(), stopwatch() as ms:
        both = evaluate(_spec("1", "both_even", 2, radius), prec)
        meven = evaluate(_spec("1", "m_even", 2, radius), prec)
        full = evaluate(_spec("1", "all", 2, radius), prec)
        m2 = evaluate(_spec("m2", "all", 3, radius), prec)
        lhs1 = both + meven
        half = mpf(1) / 2 * full
        tol1 = lhs1.tail_bound + m2.tail_bound + half.tail_bound
        reports.append(VerificationReport.compare(
            "E1", lhs1.value, m2.value, tol1, digits=prec.digits,
            params={"radius": radius, "middle": mpmath.nstr(half.value, 15)}, runtime_ms=ms()))
    with prec.working(), stopwatch() as ms:
        n2 = evaluate(_spec("n2", "m_even", 3, radius), prec)
        m2odd = evaluate(_spec("m2", "m_odd", 3, radius), prec)
        lhs2 = both + n2
        tol2 = lhs2.tail_bound + m2odd.tail_bound
        reports.append(VerificationReport.compare(
            "E2", lhs2.value, m2odd.value, tol2, digits=prec.digits,
            params={"radius": radius}, runtime_ms=ms()))
    return reports


def chi4_lattice_check(t: int, radius: int = 2000, prec: PrecisionContext = DEFAULT) -> list[VerificationReport]:
    """Both lattice representations of L(chi_-4, t) against dirichlet_beta(t)."""
    if t < 2:
        raise DomainError(f"chi4_lattice_check needs t >= 2, got {t}")
    reports = []
    with prec.working():
        beta = dirichlet_beta(t, prec)
        zt = zeta_int(t, prec)
        with stopwatch() as ms:
            s1 = evaluate(_spec("1", "all", t, radius), prec)
            v1 = 1 / (4 * zt) * s1
            reports.append(VerificationReport.compare(
                f"chi4-lattice/t={t}/m2+n2", v1.value, beta, v1.tail_bound, digits=prec.digits,
                params={"radius": radius, "t": t}, runtime_ms=ms()))
        with stopwatch() as ms:
            s2 = evaluate(_spec("1", "all", t, radius, c=4), prec)
            factor = 1 / (2 * (1 - mpf(2) ** (-t) + mpf(2) ** (1 - 2 * t)) * zt)
            v2 = factor * s2
            reports.append(VerificationReport.compare(
                f"chi4-lattice/t={t}/m2+4n2", v2.value, beta, v2.tail_bound, digits=prec.digits,
                params={"radius": radius, "t": t}, runtime_ms=ms()))
    return reports
