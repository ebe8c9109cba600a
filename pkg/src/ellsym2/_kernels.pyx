# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled lattice-sum and point-counting kernels.

Every kernel returns per-shell results; shell ``k`` holds the points with
``max(|m|, |n|) == k``.  A shell is always reduced by one thread in a fixed
order, so the output does not depend on the thread count.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs, pow, M_PI, cos, sin
from libc.stdlib cimport malloc, free

cnp.import_array()

# weight codes (Epstein kernel)
DEF W_ONE = 0
DEF W_M2 = 1
DEF W_N2 = 2
DEF W_M2_MINUS_N2 = 3
DEF W_M2_MINUS_4N2 = 4

# mask codes (shared)
DEF K_ALL = 0
DEF K_M_EVEN = 1
DEF K_N_EVEN = 2
DEF K_BOTH_EVEN = 3
DEF K_M_ODD = 4
DEF K_SIGN_M = 5
DEF K_SIGN_N = 6
DEF K_SIGN_DIFF = 7
DEF K_M_ODD_N_EVEN = 8
DEF K_M_EVEN_N_ODD = 9


cdef inline double _mask(int code, long m, long n) noexcept nogil:
    cdef int me = (m & 1) == 0
    cdef int ne = (n & 1) == 0
    if code == K_ALL:
        return 1.0
    if code == K_M_EVEN:
        return 1.0 if me else 0.0
    if code == K_N_EVEN:
        return 1.0 if ne else 0.0
    if code == K_BOTH_EVEN:
        return 1.0 if (me and ne) else 0.0
    if code == K_M_ODD:
        return 0.0 if me else 1.0
    if code == K_SIGN_M:
        return 1.0 if me else -1.0
    if code == K_SIGN_N:
        return 1.0 if ne else -1.0
    if code == K_SIGN_DIFF:
        return (1.0 if me else -1.0) - (1.0 if ne else -1.0)
    if code == K_M_ODD_N_EVEN:
        return 1.0 if ((not me) and ne) else 0.0
    if code == K_M_EVEN_N_ODD:
        return 1.0 if (me and (not ne)) else 0.0
    return 0.0


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


# ---------------------------------------------------------------- Epstein

cdef inline double _ep_term(int weight, int mask, double c, double s, int s_int,
                            long m, long n) noexcept nogil:
    cdef double mm = <double>(m * m)
    cdef double nn = <double>(n * n)
    cdef double w, q, den
    cdef int i
    cdef double f = _mask(mask, m, n)
    if f == 0.0:
        return 0.0
    if weight == W_ONE:
        w = 1.0
    elif weight == W_M2:
        w = mm
    elif weight == W_N2:
        w = nn
    elif weight == W_M2_MINUS_N2:
        w = mm - nn
    else:
        w = mm - 4.0 * nn
    q = mm + c * nn
    if s_int > 0:
        den = q
        for i in range(s_int - 1):
            den = den * q
    else:
        den = pow(q, s)
    return f * w / den


cdef void _ep_shell(int weight, int mask, double c, double s, int s_int, long k,
                    double* out_s, double* out_c) noexcept nogil:
    cdef double acc = 0.0, comp = 0.0, v
    cdef long j
    for j in range(0, k + 1):
        if j == 0:
            v = ((_ep_term(weight, mask, c, s, s_int, k, 0)
                  + _ep_term(weight, mask, c, s, s_int, 0, k))
                 + (_ep_term(weight, mask, c, s, s_int, -k, 0)
                    + _ep_term(weight, mask, c, s, s_int, 0, -k)))
        elif j == k:
            v = ((_ep_term(weight, mask, c, s, s_int, k, k)
                  + _ep_term(weight, mask, c, s, s_int, -k, -k))
                 + (_ep_term(weight, mask, c, s, s_int, -k, k)
                    + _ep_term(weight, mask, c, s, s_int, k, -k)))
        else:
            v = (((_ep_term(weight, mask, c, s, s_int, k, j)
                   + _ep_term(weight, mask, c, s, s_int, j, k))
                  + (_ep_term(weight, mask, c, s, s_int, -k, j)
                     + _ep_term(weight, mask, c, s, s_int, j, -k)))
                 + ((_ep_term(weight, mask, c, s, s_int, k, -j)
                     + _ep_term(weight, mask, c, s, s_int, -j, k))
                    + (_ep_term(weight, mask, c, s, s_int, -k, -j)
                       + _ep_term(weight, mask, c, s, s_int, -j, -k))))
        _neumaier(&acc, &comp, v)
    out_s[0] = acc
    out_c[0] = comp


def epstein_shells(int weight, int mask, double c, double s, long radius, int threads=0):
    """Per-shell sums of ``mask * weight / (m^2 + c n^2)^s`` for shells 1..radius.

    Returns ``(sums, comps)``; index 0 (the excluded origin) is zero.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.zeros(radius + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] comps = np.zeros(radius + 1)
    cdef double* ps = &sums[0]
    cdef double* pc = &comps[0]
    cdef long k
    cdef int s_int = <int>s if (s == <int>s and s >= 1) else 0
    cdef int nt = threads if threads > 0 else 1
    if threads <= 0:
        import os
        nt = os.cpu_count() or 1
    for k in prange(1, radius + 1, nogil=True, schedule="dynamic", chunksize=8,
                    num_threads=nt):
        _ep_shell(weight, mask, c, s, s_int, k, ps + k, pc + k)
    return sums, comps


# ------------------------------------------------------ Eisenstein-Kronecker

cdef struct EKParams:
    double tr
    double ti
    int a
    int b
    int e
    long den
    long xa
    long eb
    int mask
    double* ct
    double* st


cdef inline void _ek_term(EKParams* p, long m, long n, double* re, double* im) noexcept nogil:
    # phase(m,n) * m^e / ((m tau + n)^a (m conj(tau) + n)^b)
    cdef double f = _mask(p.mask, m, n)
    cdef double zr, zi, r2, wr, wi, t, den, me_
    cdef long idx
    cdef int i
    if f == 0.0:
        re[0] = 0.0
        im[0] = 0.0
        return
    zr = m * p.tr + n
    zi = m * p.ti
    r2 = zr * zr + zi * zi
    # conj(z)^a * z^b / |z|^(2(a+b))
    wr = 1.0
    wi = 0.0
    for i in range(p.a):
        t = wr * zr + wi * zi
        wi = wi * zr - wr * zi
        wr = t
    for i in range(p.b):
        t = wr * zr - wi * zi
        wi = wi * zr + wr * zi
        wr = t
    den = r2
    for i in range(p.a + p.b - 1):
        den = den * r2
    me_ = 1.0
    for i in range(p.e):
        me_ = me_ * m
    f = f * me_ / den
    idx = (n * p.xa - m * p.eb) % p.den
    if idx < 0:
        idx += p.den
    re[0] = f * (wr * p.ct[idx] - wi * p.st[idx])
    im[0] = f * (wr * p.st[idx] + wi * p.ct[idx])


cdef inline void _ek_pair(EKParams* p, long m1, long n1, long m2, long n2,
                          double* re, double* im) noexcept nogil:
    cdef double r1, i1, r2, i2
    _ek_term(p, m1, n1, &r1, &i1)
    _ek_term(p, m2, n2, &r2, &i2)
    re[0] = r1 + r2
    im[0] = i1 + i2


cdef void _ek_shell(EKParams* p, long k, double* sr, double* cr,
                    double* si, double* ci) noexcept nogil:
    cdef double ar = 0.0, acr = 0.0, ai = 0.0, aci = 0.0
    cdef double r1, i1, r2, i2, r3, i3, r4, i4
    cdef long j
    for j in range(0, k + 1):
        if j == 0:
            _ek_pair(p, k, 0, 0, k, &r1, &i1)
            _ek_pair(p, -k, 0, 0, -k, &r2, &i2)
            _neumaier(&ar, &acr, r1 + r2)
            _neumaier(&ai, &aci, i1 + i2)
        elif j == k:
            _ek_pair(p, k, k, -k, -k, &r1, &i1)
            _ek_pair(p, -k, k, k, -k, &r2, &i2)
            _neumaier(&ar, &acr, r1 + r2)
            _neumaier(&ai, &aci, i1 + i2)
        else:
            _ek_pair(p, k, j, j, k, &r1, &i1)
            _ek_pair(p, -k, j, j, -k, &r2, &i2)
            _ek_pair(p, k, -j, -j, k, &r3, &i3)
            _ek_pair(p, -k, -j, -j, -k, &r4, &i4)
            _neumaier(&ar, &acr, (r1 + r2) + (r3 + r4))
            _neumaier(&ai, &aci, (i1 + i2) + (i3 + i4))
    sr[0] = ar
    cr[0] = acr
    si[0] = ai
    ci[0] = aci


def ek_shells(double tau_re, double tau_im, int a, int b, int e,
              long den, long xa, long eb, long radius, int mask=0, int threads=0):
    """Per-shell sums of ``phase * m^e / ((m tau + n)^a (m conj(tau) + n)^b)``.

    The phase is ``exp(2 pi i (n xa - m eb) / den)`` for integer numerators;
    it is read from a table so denominators 1, 2, 4 give exact roots of unity.
    Returns ``(re_sums, re_comps, im_sums, im_comps)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sr = np.zeros(radius + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cr = np.zeros(radius + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] si = np.zeros(radius + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ci = np.zeros(radius + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ct, st
    ct, st = _phase_table(den)
    cdef EKParams p
    p.tr = tau_re
    p.ti = tau_im
    p.a = a
    p.b = b
    p.e = e
    p.den = den
    p.xa = xa
    p.eb = eb
    p.mask = mask
    p.ct = &ct[0]
    p.st = &st[0]
    cdef double* psr = &sr[0]
    cdef double* pcr = &cr[0]
    cdef double* psi = &si[0]
    cdef double* pci = &ci[0]
    cdef long k
    cdef int nt = threads
    if threads <= 0:
        import os
        nt = os.cpu_count() or 1
    for k in prange(1, radius + 1, nogil=True, schedule="dynamic", chunksize=8,
                    num_threads=nt):
        _ek_shell(&p, k, psr + k, pcr + k, psi + k, pci + k)
    return sr, cr, si, ci


def _phase_table(long den):
    ct = np.empty(den)
    st = np.empty(den)
    cdef long j
    for j in range(den):
        # exact values at multiples of a quarter turn
        if (4 * j) % den == 0:
            quarter = (4 * j) // den
            ct[j] = (1.0, 0.0, -1.0, 0.0)[quarter]
            st[j] = (0.0, 1.0, 0.0, -1.0)[quarter]
        else:
            ct[j] = cos(2.0 * M_PI * j / den)
            st[j] = sin(2.0 * M_PI * j / den)
    return ct, st


# ------------------------------------------------------------ point counts

cdef long _charsum(long b2, long b4, long b6, long p) noexcept nogil:
    # -sum_x legendre(4x^3 + b2 x^2 + 2 b4 x + b6 | p), p odd
    cdef char* sq = <char*>malloc(p)
    cdef long x, v, total = 0
    if sq == NULL:
        return 0x7FFFFFFF
    for x in range(p):
        sq[x] = 0
    for x in range(1, p):
        sq[(x * x) % p] = 1
    for x in range(p):
        v = ((((4 * x + b2) % p) * x % p + 2 * b4) % p * x + b6) % p
        if v < 0:
            v += p
        if v != 0:
            total += 1 if sq[v] else -1
    free(sq)
    return -total


def ap_batch(long b2, long b4, long b6, cnp.ndarray[cnp.int64_t, ndim=1] primes,
             int threads=0):
    """a_p = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6) for each odd prime."""
    cdef long n = primes.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(n, dtype=np.int64)
    cdef long[:] pv = primes
    cdef long[:] ov = out
    cdef long i
    cdef int nt = threads
    if threads <= 0:
        import os
        nt = os.cpu_count() or 1
    for i in prange(n, nogil=True, schedule="dynamic", num_threads=nt):
        ov[i] = _charsum(b2 % pv[i], b4 % pv[i], b6 % pv[i], pv[i])
    return out


# ------------------------------------------------------- compensated sums

def neumaier_blocks(cnp.ndarray[cnp.float64_t, ndim=1] values, long block):
    """Neumaier sum inside fixed contiguous blocks, then across blocks in order."""
    cdef long n = values.shape[0]
    cdef long start, i, stop
    cdef double s, c, total = 0.0, tcomp = 0.0
    cdef double* v = &values[0] if n > 0 else NULL
    start = 0
    while start < n:
        stop = start + block if start + block < n else n
        s = 0.0
        c = 0.0
        for i in range(start, stop):
            _neumaier(&s, &c, v[i])
        _neumaier(&total, &tcomp, s)
        _neumaier(&total, &tcomp, c)
        start = stop
    return total + tcomp
