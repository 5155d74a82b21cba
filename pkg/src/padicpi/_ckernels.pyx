# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, hypot, fabs
from libc.stdlib cimport malloc, calloc, free

cnp.import_array()


cdef inline long long _ipow(long long b, int e):
    cdef long long r = 1
    while e > 0:
        r *= b
        e -= 1
    return r


def gram_exact_window(int p, int n_lo, int n_hi, int R):
    cdef int top = R + 1 - n_lo
    cdef long long P = _ipow(p, top)
    cdef long long block = P // p
    cdef long long cutoff = (p - 1) * block
    cdef int *acc = <int *> calloc(P, sizeof(int))
    cdef long long *touched = <long long *> malloc(p * p * sizeof(long long))
    cdef long long *ts = <long long *> malloc(p * sizeof(long long))
    cdef long long *ph2 = <long long *> malloc(p * sizeof(long long))
    if acc == NULL or touched == NULL or ts == NULL or ph2 == NULL:
        free(acc); free(touched); free(ts); free(ph2)
        raise MemoryError()
    cdef long long n_indices = 0, n_entries = 0, bad = 0
    cdef int N1, N2, j1, j2, s, t, ntouch, i
    cdef long long span2, mod2, sc2, mod1, sc1, k2, d, r, k
    cdef bint good, same
    try:
        for N2 in range(n_lo, n_hi + 1):
            span2 = _ipow(p, R - N2)
            mod2 = _ipow(p, R + 1 - N2)
            sc2 = P // mod2
            for k2 in range(span2):
                for s in range(p):
                    ts[s] = k2 + s * span2
                for j2 in range(1, p):
                    n_indices += 1
                    for s in range(p):
                        ph2[s] = ((j2 * ts[s]) % mod2) * sc2
                    for N1 in range(N2, n_hi + 1):
                        mod1 = _ipow(p, R + 1 - N1)
                        sc1 = P // mod1
                        for j1 in range(1, p):
                            if N1 == N2 and j1 < j2:
                                continue
                            ntouch = 0
                            for s in range(p):
                                d = (((j1 * ts[s]) % mod1) * sc1 - ph2[s]) % P
                                if d < 0:
                                    d += P
                                if d < cutoff:
                                    acc[d] += 1
                                    touched[ntouch] = d
                                    ntouch += 1
                                else:
                                    r = d - cutoff
                                    for t in range(p - 1):
                                        k = r + t * block
                                        acc[k] -= 1
                                        touched[ntouch] = k
                                        ntouch += 1
                            same = N1 == N2 and j1 == j2
                            good = True
                            for i in range(ntouch):
                                k = touched[i]
                                if same and k == 0:
                                    if acc[k] != p:
                                        good = False
                                elif acc[k] != 0:
                                    good = False
                            if same and ntouch == 0:
                                good = False
                            for i in range(ntouch):
                                acc[touched[i]] = 0
                            n_entries += 1
                            if not good:
                                bad += 1
    finally:
        free(acc); free(touched); free(ts); free(ph2)
    return int(n_indices), int(n_entries), int(bad)


def gram_float_window(int p, int n_lo, int n_hi, int R):
    cdef int L = n_lo - 1
    cdef long long cells = _ipow(p, R - L)
    cdef int top = R + 1 - n_lo
    cdef long long P = _ipow(p, top)
    cdef double[::1] rc = np.cos(2 * np.pi * np.arange(P) / P)
    cdef double[::1] rs = np.sin(2 * np.pi * np.arange(P) / P)
    cdef double cell = pow(p, L)
    cdef double[::1] accr
    cdef double[::1] acci
    cdef long long n_indices = 0, n_entries = 0
    cdef double worst = 0.0, amp, target, dv
    cdef int N1, N2, j1, j2
    cdef long long span2, mod1, mod2, sc1, sc2, t, d, k, step
    for N2 in range(n_lo, n_hi + 1):
        n_indices += (p - 1) * _ipow(p, R - N2)
    for N2 in range(n_lo, n_hi + 1):
        span2 = _ipow(p, R - N2)
        mod2 = _ipow(p, R + 1 - N2)
        sc2 = P // mod2
        accr = np.zeros(span2)
        acci = np.zeros(span2)
        for N1 in range(N2, n_hi + 1):
            mod1 = _ipow(p, R + 1 - N1)
            sc1 = P // mod1
            amp = pow(p, -(N1 + N2) / 2.0) * cell
            for j1 in range(1, p):
                for j2 in range(1, p):
                    if N1 == N2 and j1 < j2:
                        continue
                    accr[:] = 0.0
                    acci[:] = 0.0
                    # phase difference is t * step mod P; walk it incrementally
                    step = (j1 * sc1 - j2 * sc2) % P
                    if step < 0:
                        step += P
                    d = 0
                    k = 0
                    for t in range(cells):
                        accr[k] += rc[d]
                        acci[k] += rs[d]
                        d += step
                        if d >= P:
                            d -= P
                        k += 1
                        if k == span2:
                            k = 0
                    target = 1.0 if (N1 == N2 and j1 == j2) else 0.0
                    for k in range(span2):
                        dv = hypot(accr[k] * amp - target, acci[k] * amp)
                        if dv > worst:
                            worst = dv
                    n_entries += span2
    return int(n_indices), int(n_entries), worst


cdef inline double _green_term(int p, double alpha, int N):
    cdef double e = alpha * (1 - N)
    if e > 0:
        return pow(p, -N - e) / (1.0 + pow(p, -e))
    return pow(p, -N) / (pow(p, e) + 1.0)


def green_level_sum(int p, double alpha, int n_lo, int n_hi):
    """Neumaier-compensated sum of ``p^{-N} / (p^{alpha(1-N)} + 1)``."""
    cdef double s = 0.0, c = 0.0, term, tt
    cdef int N
    # smallest terms first
    cdef double lo_mag = _green_term(p, alpha, n_lo)
    cdef double hi_mag = _green_term(p, alpha, n_hi)
    cdef int step = 1 if hi_mag >= lo_mag else -1
    cdef int start = n_lo if step == 1 else n_hi
    cdef int count = n_hi - n_lo + 1
    cdef int i
    N = start
    for i in range(count):
        term = _green_term(p, alpha, N)
        tt = s + term
        if fabs(s) >= fabs(term):
            c += (s - tt) + term
        else:
            c += (term - tt) + s
        s = tt
        N += step
    return s + c
