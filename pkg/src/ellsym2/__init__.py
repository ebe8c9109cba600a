"""Elliptic trilogarithms and L(Sym^2 E, 3) for the congruent number curves."""
from .kernels import BACKEND
from .precision import DEFAULT, DomainError, PrecisionContext, dirichlet_beta, zeta_int
from .polylog import bloch_wigner, li, sv_trilog
from .elliptic import (
    CurveContext,
    Divisor,
    TorsionPoint,
    d_e,
    eval_divisor,
    j_e,
    l31_lattice,
    l31_qseries,
    l32_lattice,
    l32_qseries,
    reg3_det,
)
from .hecke import g_qexp, f_qexp, l_chi4, l_g, l_sym2
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CurveContext",
    "DEFAULT",
    "Divisor",
    "DomainError",
    "PrecisionContext",
    "TorsionPoint",
    "VerificationReport",
    "bloch_wigner",
    "d_e",
    "dirichlet_beta",
    "eval_divisor",
    "f_qexp",
    "g_qexp",
    "j_e",
    "l31_lattice",
    "l31_qseries",
    "l32_lattice",
    "l32_qseries",
    "l_chi4",
    "l_g",
    "l_sym2",
    "li",
    "reg3_det",
    "sv_trilog",
    "zeta_int",
]
