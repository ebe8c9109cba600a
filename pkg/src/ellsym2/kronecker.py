"""Eisenstein-Kronecker series K_{a,b}, the regulator R^E and the determinant relation."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .elliptic import CurveContext, Divisor, TorsionPoint, d_e, j_e, reg3_det
from .lattice import ek_shell_values, ek_tail_bound
from .precision import DEFAULT, DomainError, PrecisionContext
from .report import VerificationReport, stopwatch

CONDITIONAL_TOL = mpf("1e-3")


@dataclass(frozen=True)
class EKSeriesSpec:
    a: int
    b: int
    tau: mpc
    point: TorsionPoint
    radius: int = 1000

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise DomainError("a and b must be positive")
        if self.a + self.b < 3:
            raise DomainError(f"K_{{{self.a},{self.b}}} unsupported: a + b < 3")
        if self.radius < 2:
            raise DomainError("radius must be at least 2")
        object.__setattr__(self, "tau", mpc(self.tau))

    @property
    def conditional(self) -> bool:
        return self.a + self.b == 3


@dataclass(frozen=True)
class KValue:
    """Truncated K_{a,b}.

    ``tail_bound`` bounds the omitted shells by absolute values; it exists
    whenever ``a + b >= 3``.  ``cauchy_diff`` is the change from radius R/2
    to R.  ``conditional`` tags the ``a + b == 3`` case, which is only
    checked at the reduced tolerance.
    """

    value: mpc
    tail_bound: mpf | None
    cauchy_diff: mpf
    conditional: bool
    radius: int

    @property
    def note(self) -> str:
        return "conditionally convergent - symmetric truncation" if self.conditional else ""

    def __add__(self, other: "KValue") -> "KValue":
        if isinstance(other, int) and other == 0:
            return self
        bound = None if self.tail_bound is None or other.tail_bound is None \
            else self.tail_bound + other.tail_bound
        return KValue(self.value + other.value, bound, self.cauchy_diff + other.cauchy_diff,
                      self.conditional or other.conditional, max(self.radius, other.radius))

    __radd__ = __add__

    def __rmul__(self, c) -> "KValue":
        bound = None if self.tail_bound is None else abs(c) * self.tail_bound
        return KValue(c * self.value, bound, abs(c) * self.cauchy_diff, self.conditional, self.radius)


def k_ab(spec: EKSeriesSpec, prec: PrecisionContext = DEFAULT) -> KValue:
    """Sum' e^{2 pi i (n xi - m eta)} / ((m tau + n)^a (m conj(tau) + n)^b) over squares."""
    pt = spec.point
    with prec.working():
        shells = ek_shell_values(spec.tau, spec.a, spec.b, 0, pt.xi, pt.eta, spec.radius)
        half = spec.radius // 2
        inner = mpc(0)
        for v in shells[:half]:
            inner += v
        outer = mpc(0)
        for v in shells[half:]:
            outer += v
        bound = ek_tail_bound(spec.tau, spec.a, spec.b, 0, spec.radius)
        return KValue(inner + outer, bound, abs(outer), spec.conditional, spec.radius)


def k_divisor(a: int, b: int, curve: CurveContext, div: Divisor, radius: int = 1000,
              prec: PrecisionContext = DEFAULT) -> KValue:
    """Linear extension sum n_P K_{a,b}(tau; u_P), one pass per point."""
    total = KValue(mpc(0), mpf(0), mpf(0), a + b == 3, radius)
    for mult, pt in div:
        total = total + mult * k_ab(EKSeriesSpec(a, b, curve.tau, pt, radius), prec)
    return total


def r_e_value(curve: CurveContext, pt: TorsionPoint, radius: int = 1000,
              prec: PrecisionContext = DEFAULT) -> KValue:
    with prec.working():
        k = k_ab(EKSeriesSpec(2, 1, curve.tau, pt, radius), prec)
        return (curve.im_tau ** 2 / prec.pi) * k


def r_e(curve: CurveContext, pt: TorsionPoint, radius: int = 1000,
        prec: PrecisionContext = DEFAULT) -> mpc:
    """R^E = Im(tau)^2 / pi * K_{2,1}(tau; u), symmetric square truncation."""
    return r_e_value(curve, pt, radius, prec).value


def regulator_parts_check(curve: CurveContext, points: dict[str, TorsionPoint],
                          radius: int = 1000, tol=CONDITIONAL_TOL,
                          prec: PrecisionContext = DEFAULT) -> list[VerificationReport]:
    """Re(R^E) against D^E and Im(R^E) against J^E at each named point."""
    reports = []
    for name, pt in points.items():
        with stopwatch() as ms:
            r = r_e_value(curve, pt, radius, prec)
            de = d_e(curve, pt, prec)
            je = j_e(curve, pt, prec)
            elapsed = ms()
        params = {"radius": radius, "cauchy_diff": mpmath.nstr(r.cauchy_diff, 3), "note": r.note}
        reports.append(VerificationReport.compare(
            f"regulator/re/{name}", mpmath.re(r.value), de, tol, digits=prec.digits,
            params=params, runtime_ms=elapsed))
        reports.append(VerificationReport.compare(
            f"regulator/im/{name}", mpmath.im(r.value), je, tol, digits=prec.digits,
            params=params, runtime_ms=elapsed))
    return reports


def k_determinant(curve: CurveContext, div1: Divisor, div2: Divisor, radius: int = 1000,
                  prec: PrecisionContext = DEFAULT) -> tuple[mpf, mpf]:
    """-(2 Im(tau)^6 / pi^2) det[[Re K13(div1), K22(div1)], [Re K13(div2), K22(div2)]].

    Returns (value, propagated tail bound).
    """
    with prec.working():
        k13 = [k_divisor(1, 3, curve, d, radius, prec) for d in (div1, div2)]
        k22 = [k_divisor(2, 2, curve, d, radius, prec) for d in (div1, div2)]
        a1, a2 = (mpmath.re(k.value) for k in k13)
        b1, b2 = (mpmath.re(k.value) for k in k22)
        scale = -2 * curve.im_tau ** 6 / prec.pi ** 2
        det = scale * (a1 * b2 - a2 * b1)
        t13 = [k.tail_bound for k in k13]
        t22 = [k.tail_bound for k in k22]
        err = abs(scale) * (t13[0] * abs(b2) + t22[1] * abs(a1) + t13[1] * abs(b1) + t22[0] * abs(a2)
                            + t13[0] * t22[1] + t13[1] * t22[0])
        return det, err


def k_det_relation_check(curve: CurveContext, div1: Divisor, div2: Divisor, radius: int = 1000,
                         rel_tol=mpf("1e-4"), prec: PrecisionContext = DEFAULT) -> VerificationReport:
    """Compare the trilogarithm determinant with the K-matrix determinant."""
    for name, d in (("div1", div1), ("div2", div2)):
        if d.degree != 0:
            raise DomainError(f"{name} has degree {d.degree}; the relation needs degree 0")
    with stopwatch() as ms:
        lhs = reg3_det(curve, div1, div2, prec)
        rhs, _ = k_determinant(curve, div1, div2, radius, prec)
        elapsed = ms()
    with prec.working():
        ratio = lhs / rhs if rhs != 0 else (mpf(1) if lhs == 0 else mpf("inf"))
        tol = rel_tol * abs(lhs)
    params = {"radius": radius, "ratio": mpmath.nstr(ratio, 12), "rel_tol": str(rel_tol)}
    return VerificationReport.compare("k-det-relation", lhs, rhs, tol, digits=prec.digits,
                                      params=params, runtime_ms=elapsed)
