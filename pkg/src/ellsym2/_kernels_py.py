"""Numpy implementations of the lattice kernels.

Same signatures and shell/orbit traversal as the compiled module.  Shell sums
are reduced with ``math.fsum`` (correctly rounded), so results agree with the
compiled kernels to rounding but are not bit-identical to them.
"""
from __future__ import annotations

import math

import numpy as np

W_ONE, W_M2, W_N2, W_M2_MINUS_N2, W_M2_MINUS_4N2 = range(5)


def _mask(code: int, m: np.ndarray, n: np.ndarray) -> np.ndarray:
    me = (m % 2) == 0
    ne = (n % 2) == 0
    sm = np.where(me, 1.0, -1.0)
    sn = np.where(ne, 1.0, -1.0)
    table = {
        0: lambda: np.ones(m.shape),
        1: lambda: me.astype(float),
        2: lambda: ne.astype(float),
        3: lambda: (me & ne).astype(float),
        4: lambda: (~me).astype(float),
        5: lambda: sm,
        6: lambda: sn,
        7: lambda: sm - sn,
        8: lambda: (~me & ne).astype(float),
        9: lambda: (me & ~ne).astype(float),
    }
    return table[code]()


def _orbits(k: int):
    """Orbit images of shell ``k`` as 8 (m, n) arrays, pair-ordered.

    Column layout per representative j: (k,j),(j,k) | (-k,j),(j,-k) |
    (k,-j),(-j,k) | (-k,-j),(-j,-k).  The j == 0 and j == k orbits have only
    four distinct points; their duplicate slots are zeroed by ``weights``.
    """
    j = np.arange(0, k + 1, dtype=np.int64)
    kk = np.full_like(j, k)
    ms = [kk, j, -kk, j, kk, -j, -kk, -j]
    ns = [j, kk, j, -kk, -j, kk, -j, -kk]
    return j, ms, ns


def _reduce_orbits(vals: list[np.ndarray], j: np.ndarray, k: int) -> np.ndarray:
    # vals: 8 arrays of term values in the _orbits layout
    v = list(vals)
    per = ((v[0] + v[1]) + (v[2] + v[3])) + ((v[4] + v[5]) + (v[6] + v[7]))
    # j == 0: points (k,0),(0,k),(-k,0),(0,-k)
    per[0] = (v[0][0] + v[1][0]) + (v[2][0] + v[3][0])
    if k > 0:
        # j == k: (k,k),(-k,-k),(-k,k),(k,-k)
        per[k] = (v[0][k] + v[6][k]) + (v[2][k] + v[3][k])
    return per


def epstein_shells(weight, mask, c, s, radius, threads=0):
    sums = np.zeros(radius + 1)
    comps = np.zeros(radius + 1)
    s_int = int(s) if (float(s) == int(s) and s >= 1) else 0
    for k in range(1, radius + 1):
        j, ms, ns = _orbits(k)
        vals = []
        for m, n in zip(ms, ns):
            mm = (m * m).astype(float)
            nn = (n * n).astype(float)
            w = [np.ones(m.shape), mm, nn, mm - nn, mm - 4.0 * nn][weight]
            q = mm + c * nn
            den = q ** s_int if s_int else q ** s
            vals.append(_mask(mask, m, n) * w / den)
        sums[k] = math.fsum(_reduce_orbits(vals, j, k))
    return sums, comps


def _phase_table(den: int):
    j = np.arange(den)
    ct = np.cos(2 * np.pi * j / den)
    st = np.sin(2 * np.pi * j / den)
    exact = (4 * j) % den == 0
    quarter = (4 * j[exact]) // den
    ct[exact] = np.array([1.0, 0.0, -1.0, 0.0])[quarter]
    st[exact] = np.array([0.0, 1.0, 0.0, -1.0])[quarter]
    return ct, st


def ek_shells(tau_re, tau_im, a, b, e, den, xa, eb, radius, mask=0, threads=0):
    sr = np.zeros(radius + 1)
    si = np.zeros(radius + 1)
    ct, st = _phase_table(den)
    phase = ct + 1j * st
    tau = complex(tau_re, tau_im)
    for k in range(1, radius + 1):
        j, ms, ns = _orbits(k)
        vals = []
        for m, n in zip(ms, ns):
            z = m * tau + n
            term = _mask(mask, m, n) * (m.astype(float) ** e)
            term = term * np.conj(z) ** a * z ** b / (np.abs(z) ** 2) ** (a + b)
            idx = (n * xa - m * eb) % den
            vals.append(term * phase[idx])
        per = _reduce_orbits(vals, j, k)
        sr[k] = math.fsum(per.real)
        si[k] = math.fsum(per.imag)
    return sr, np.zeros(radius + 1), si, np.zeros(radius + 1)


def ap_batch(b2, b4, b6, primes, threads=0):
    out = np.zeros(len(primes), dtype=np.int64)
    for i, p in enumerate(np.asarray(primes, dtype=np.int64)):
        p = int(p)
        x = np.arange(p, dtype=np.int64)
        v = ((((4 * x + b2) % p) * x % p + 2 * b4) % p * x + b6) % p
        is_sq = np.zeros(p, dtype=bool)
        is_sq[(x[1:] * x[1:]) % p] = True
        chi = np.where(v == 0, 0, np.where(is_sq[v], 1, -1))
        out[i] = -int(chi.sum())
    return out


def neumaier_blocks(values, block):
    values = np.asarray(values, dtype=float)
    total = 0.0
    comp = 0.0

    def add(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    for start in range(0, len(values), block):
        s = c = 0.0
        for x in values[start:start + block].tolist():
            s, c = add(s, c, x)
        total, comp = add(total, comp, s)
        total, comp = add(total, comp, c)
    return total + comp
